#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "tbq/core.hpp"
#include "tbq/sim.hpp"

// BBM92 pipeline over simulated streams: per-cycle sifting with basis
// matching, Z-window optimization, and secret-key lengths under the
// asymptotic limit and two finite-size parameter-estimation bounds
// (Serfling-style additive correction, Chernoff-style KL-tail inversion).

namespace tbq::qkd {

inline double binary_entropy(double p) { return binary_entropy_bits(p); }

struct SecurityParams {
  double eps_sec = 1e-10;
  double eps_cor = 1e-10;
  double f_ec = 1.16;

  void validate() const {
    if (eps_sec <= 0.0 || eps_sec >= 1.0 || eps_cor <= 0.0 || eps_cor >= 1.0)
      throw std::invalid_argument("SecurityParams: eps values must be in (0,1)");
    if (f_ec < 1.0)
      throw std::invalid_argument("SecurityParams: f_ec must be >= 1");
  }
};

struct SiftedBlock {
  std::uint64_t n_key = 0;
  std::uint64_t n_test = 0;
  std::uint64_t e_key = 0;
  std::uint64_t e_test = 0;
  std::string key_basis;
  std::string test_basis;
  double acquisition_duration_s = 0.0;
  // diagnostics
  std::uint64_t matched_rounds = 0;
  std::uint64_t unmatched_rounds = 0;
  std::uint64_t discarded_multi = 0;
  double sifting_factor = 0.0;

  double qber_key() const {
    return n_key ? static_cast<double>(e_key) / static_cast<double>(n_key) : 0.0;
  }
  double qber_test() const {
    return n_test ? static_cast<double>(e_test) / static_cast<double>(n_test) : 0.0;
  }
  void validate() const {
    if (e_key > n_key || e_test > n_test)
      throw std::invalid_argument("SiftedBlock: error counts exceed totals");
  }
};

struct SiftParams {
  std::uint8_t key_arm = 1;  // arm id whose matched rounds feed the key
  std::array<bool, 2> flip_b{false, false};  // deterministic B-side flip per arm
  std::int64_t z_window_half_ps = 0;  // 0: plain midpoint threshold
  std::int64_t x_window_half_ps = 0;  // 0: half the bin separation
};

/// Round-by-round sifting: keeps cycles with exactly one in-window click per
/// side and matching bases; Z bits from the arrival slot, interferometric
/// bits from the detector port.
SiftedBlock sift(const sim::SimResult& run, const SiftParams& params);

struct KeyLengthResult {
  double bits = 0.0;
  bool aborted = false;  // PE bound reached 1/2; no key extractable
};

/// Finite-key length with the Serfling-style additive phase-error bound
/// nu = sqrt((n_key+n_test)(n_test+1)/(n_key n_test^2) ln(2/eps_sec)).
KeyLengthResult serfling_key_length(const SiftedBlock& block, const SecurityParams& params);

/// Finite-key length with the Chernoff-style bound: the phase-error rate is
/// the smallest q with exp(-n_test D(q_test||q)) <= eps_sec, D the binary
/// KL divergence; solved by bisection to 1e-10.
KeyLengthResult chernoff_key_length(const SiftedBlock& block, const SecurityParams& params);

/// Upper confidence bound on the test-basis error rate used by the Chernoff
/// key length (exposed for diagnostics and ordering checks).
double chernoff_upper_qber(double q_test, std::uint64_t n_test, double eps_sec);

/// Asymptotic secret bits per second: sifted_rate * (1 - h(Qt) - f h(Qk)),
/// floored at zero. q is the sifting factor, reported for context.
double asymptotic_rate(double q, double sifted_rate_hz, double qber_key,
                       double qber_test, double f_ec);

struct WindowScan {
  std::int64_t best_half_width_ps = 0;
  double best_proxy = 0.0;
  std::vector<std::int64_t> half_widths_ps;
  std::vector<double> proxy;       // n_key (1 - f h(Q_Z)), per candidate
  std::vector<double> qber;        // key-basis QBER per candidate
  std::vector<std::uint64_t> kept; // sifted key rounds per candidate
};

/// Grid search over symmetric Z-window half-widths maximizing
/// n_key (1 - f_ec h(Q_Z)) on a calibration run.
WindowScan optimize_z_window(const sim::SimResult& run, const SiftParams& base,
                             const std::vector<std::int64_t>& half_widths_ps,
                             double f_ec);

struct KeyRateReport {
  double qber_key = 0.0;
  double qber_test = 0.0;
  double sifted_rate_hz = 0.0;      // all matched rounds
  double sifted_key_rate_hz = 0.0;  // key-basis rounds only
  double sifting_factor = 0.0;
  std::uint64_t block_size = 0;
  double key_length_serfling = 0.0;
  double key_length_chernoff = 0.0;
  double skr_asymptotic = 0.0;
  double skr_serfling = 0.0;
  double skr_chernoff = 0.0;
  bool abort_serfling = false;
  bool abort_chernoff = false;
};

/// Projects the measured sifted statistics onto a block of the given size
/// and evaluates all three analyses.
KeyRateReport key_rate_report(const SiftedBlock& measured, std::uint64_t block_size,
                              const SecurityParams& params);

struct SweepPoint {
  double loss_db = 0.0;
  double duration_s = 0.0;
};

struct SweepRow {
  double loss_db = 0.0;
  double fiber_km_equiv = 0.0;
  KeyRateReport report;
};

/// Runs the plan template at each added Bob-side loss, sifts, and evaluates
/// key rates. Seeds derive per point; fiber equivalence uses 0.2 dB/km.
std::vector<SweepRow> skr_vs_loss_sweep(const sim::ExperimentPlan& base,
                                        const SiftParams& sift_params,
                                        const std::vector<SweepPoint>& points,
                                        std::uint64_t block_size,
                                        const SecurityParams& params);

}  // namespace tbq::qkd
