#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>

// Maximal-length Fibonacci LFSR for pseudo-random basis selection.
// Fixed ITU polynomials: x^7 + x^6 + 1 and x^9 + x^5 + 1.

namespace tbq::sim {

class PrbsGenerator {
 public:
  PrbsGenerator(int order, std::uint16_t state) : order_(order), state_(state) {
    if (order != 7 && order != 9)
      throw std::invalid_argument("PrbsGenerator: order must be 7 or 9");
    if (state == 0 || state >= (1u << order))
      throw std::invalid_argument("PrbsGenerator: state must be nonzero and fit the register");
    tap_ = order == 7 ? 6 : 5;
  }

  int order() const { return order_; }
  std::uint16_t state() const { return state_; }

  /// Output bit of the current step; advances the register.
  int next() {
    const int out = (state_ >> (order_ - 1)) & 1;
    const int fb = out ^ ((state_ >> (tap_ - 1)) & 1);
    state_ = static_cast<std::uint16_t>(((state_ << 1) | fb) & ((1u << order_) - 1));
    return out;
  }

  /// Jump the register forward by `steps` via GF(2) matrix exponentiation.
  void advance(std::uint64_t steps) {
    if (steps < 64) {
      for (std::uint64_t i = 0; i < steps; ++i) next();
      return;
    }
    auto m = step_matrix();
    auto acc = identity();
    while (steps) {
      if (steps & 1) acc = multiply(m, acc);
      m = multiply(m, m);
      steps >>= 1;
    }
    state_ = apply(acc, state_);
  }

  /// Output bit `steps` cycles ahead of the given seed state, without
  /// mutating this generator.
  static int bit_at(int order, std::uint16_t seed_state, std::uint64_t step) {
    PrbsGenerator g(order, seed_state);
    g.advance(step);
    return (g.state_ >> (order - 1)) & 1;
  }

 private:
  using Gf2Matrix = std::array<std::uint16_t, 9>;  // row i = mask of input bits

  Gf2Matrix step_matrix() const {
    Gf2Matrix m{};
    m[0] = static_cast<std::uint16_t>((1u << (order_ - 1)) | (1u << (tap_ - 1)));
    for (int i = 1; i < order_; ++i) m[i] = static_cast<std::uint16_t>(1u << (i - 1));
    return m;
  }

  Gf2Matrix identity() const {
    Gf2Matrix m{};
    for (int i = 0; i < order_; ++i) m[i] = static_cast<std::uint16_t>(1u << i);
    return m;
  }

  Gf2Matrix multiply(const Gf2Matrix& a, const Gf2Matrix& b) const {
    Gf2Matrix c{};
    for (int i = 0; i < order_; ++i) {
      std::uint16_t row = 0;
      for (int j = 0; j < order_; ++j)
        if ((a[i] >> j) & 1) row ^= b[j];
      c[i] = row;
    }
    return c;
  }

  std::uint16_t apply(const Gf2Matrix& m, std::uint16_t s) const {
    std::uint16_t out = 0;
    for (int i = 0; i < order_; ++i)
      out |= static_cast<std::uint16_t>((__builtin_popcount(m[i] & s) & 1) << i);
    return out;
  }

  int order_;
  int tap_;
  std::uint16_t state_;
};

}  // namespace tbq::sim
