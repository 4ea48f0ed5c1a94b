#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "tbq/core.hpp"
#include "test_util.hpp"

using namespace tbq;
using tbq::testutil::random_density;

namespace {
const double kRoot2Inv = 1.0 / std::sqrt(2.0);
}

TEST_CASE("make_timebin_qubit maps preparations to amplitudes") {
  auto plus = make_timebin_qubit({kRoot2Inv, kRoot2Inv, 0.0});
  CHECK(std::abs(plus(0) - cxd(kRoot2Inv, 0)) < 1e-12);
  CHECK(std::abs(plus(1) - cxd(kRoot2Inv, 0)) < 1e-12);

  auto pole = make_timebin_qubit({1.0, 0.0, 2.3});
  CHECK(std::abs(pole(0) - cxd(1, 0)) < 1e-12);
  CHECK(std::abs(pole(1)) < 1e-12);

  auto tilted = make_timebin_qubit({0.6, 0.8, M_PI / 2});
  CHECK(std::abs(tilted(0) - cxd(0.6, 0)) < 1e-12);
  CHECK(std::abs(tilted(1) - cxd(0.0, 0.8)) < 1e-12);

  CHECK_THROWS_AS(make_timebin_qubit({0.5, 0.5, 0.0}), std::invalid_argument);
  CHECK_THROWS_AS(make_timebin_qubit({-0.6, 0.8, 0.0}), std::invalid_argument);
}

TEST_CASE("bell_phi_plus amplitudes and norm") {
  auto phi = bell_phi_plus();
  CHECK(std::abs(phi(0) - cxd(kRoot2Inv, 0)) < 1e-12);
  CHECK(std::abs(phi(1)) < 1e-12);
  CHECK(std::abs(phi(2)) < 1e-12);
  CHECK(std::abs(phi(3) - cxd(kRoot2Inv, 0)) < 1e-12);
  CHECK(phi.norm() == doctest::Approx(1.0).epsilon(1e-12));
  Mat4 rho = projector(phi);
  CHECK(fidelity_to_phi_plus(rho) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("interferometric projector structure") {
  Mat2 p0 = interferometric_projector(0.0, Port::plus);
  Ket2 plus;
  plus << kRoot2Inv, kRoot2Inv;
  CHECK((p0 - projector(plus)).cwiseAbs().maxCoeff() < 1e-12);

  // theta = pi/2 on the plus port projects onto |R> = (|0> + i|1>)/sqrt(2)
  Mat2 pr = interferometric_projector(M_PI / 2, Port::plus);
  Ket2 r;
  r << kRoot2Inv, cxd(0, kRoot2Inv);
  CHECK((pr - projector(r)).cwiseAbs().maxCoeff() < 1e-12);

  // rank-1 projector: idempotent
  CHECK((pr * pr - pr).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("POVM completeness over random phases") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-M_PI, M_PI);
  for (int i = 0; i < 100; ++i) {
    const double th = u(rng);
    Mat2 sum_p = interferometric_projector(th, Port::plus) +
                 interferometric_projector(th, Port::minus);
    Mat2 sum_pi = mode1_povm(th, Port::plus) + mode1_povm(th, Port::minus);
    CHECK((sum_p - Mat2::Identity()).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((sum_pi - Mat2::Identity()).cwiseAbs().maxCoeff() < 1e-12);
    validate_effect(interferometric_projector(th, Port::plus));
    validate_effect(mode1_povm(th, Port::minus));
    CHECK(mode1_povm(th, Port::plus).trace().real() == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("mode-1 POVM on |+>") {
  Ket2 plus;
  plus << kRoot2Inv, kRoot2Inv;
  const double p = born_probability(projector(plus), mode1_povm(0.0, Port::plus));
  CHECK(p == doctest::Approx(0.75).epsilon(1e-12));
}

TEST_CASE("born probability basics") {
  Mat4 rho = projector(bell_phi_plus());
  CHECK(born_probability(rho, Mat4::Identity()) == doctest::Approx(1.0).epsilon(1e-10));

  Mat2 quarter = 0.25 * Mat2::Identity();
  CHECK(born_probability(quarter, interferometric_projector(1.2, Port::plus)) ==
        doctest::Approx(0.25).epsilon(1e-12));

  Eigen::MatrixXcd rho2 = Eigen::MatrixXcd::Identity(2, 2) * 0.5;
  Eigen::MatrixXcd eff4 = Eigen::MatrixXcd::Identity(4, 4);
  CHECK_THROWS_AS(born_probability(rho2, eff4), std::invalid_argument);
}

TEST_CASE("coincidence curve matches tensor-product Born rule") {
  Mat4 rho = projector(bell_phi_plus());

  CHECK(coincidence_rate_curve(0, 0, Port::plus, Port::plus) == doctest::Approx(1.0));
  CHECK(coincidence_rate_curve(M_PI, 0, Port::plus, Port::plus) ==
        doctest::Approx(0.0).epsilon(1e-12));
  CHECK(coincidence_rate_curve(0, 0, Port::plus, Port::minus) ==
        doctest::Approx(0.0).epsilon(1e-12));

  // Eq-level agreement on a 32-point grid once the Born value is normalized
  // to unit peak (the tensor-product trace peaks at 1/2).
  const double theta_b = 0.37;
  for (int i = 0; i < 32; ++i) {
    const double theta_a = -M_PI + 2 * M_PI * i / 32.0;
    for (Port pa : {Port::plus, Port::minus})
      for (Port pb : {Port::plus, Port::minus}) {
        Mat4 joint = Mat4::Zero();
        const Mat2 ea = interferometric_projector(theta_a, pa);
        const Mat2 eb = interferometric_projector(theta_b, pb);
        for (int r = 0; r < 4; ++r)
          for (int c = 0; c < 4; ++c)
            joint(r, c) = ea(r / 2, c / 2) * eb(r % 2, c % 2);
        const double born = born_probability(rho, joint);
        CHECK(std::abs(2.0 * born - coincidence_rate_curve(theta_a, theta_b, pa, pb)) <
              1e-12);
      }
  }

  // direct check of the stated pre-normalization value at matched ports
  Mat4 joint = Mat4::Zero();
  const Mat2 ea = interferometric_projector(0.9, Port::plus);
  const Mat2 eb = interferometric_projector(-0.2, Port::plus);
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c) joint(r, c) = ea(r / 2, c / 2) * eb(r % 2, c % 2);
  CHECK(born_probability(rho, joint) ==
        doctest::Approx((1 + std::cos(0.7)) / 4).epsilon(1e-12));
}

TEST_CASE("born probabilities over a complete effect set sum to 1") {
  std::mt19937_64 rng(22);
  std::uniform_real_distribution<double> u(-M_PI, M_PI);
  for (int i = 0; i < 50; ++i) {
    Eigen::MatrixXcd rho = random_density(2, rng);
    const double th = u(rng);
    const double total = born_probability(rho, mode1_povm(th, Port::plus)) +
                         born_probability(rho, mode1_povm(th, Port::minus));
    CHECK(total == doctest::Approx(1.0).epsilon(1e-10));
  }
}

TEST_CASE("partial trace") {
  Mat4 rho = projector(bell_phi_plus());
  Mat2 ra = partial_trace(rho, Subsystem::A);
  CHECK((ra - 0.5 * Mat2::Identity()).cwiseAbs().maxCoeff() < 1e-12);

  // |0><0| (x) |1><1| traced over A leaves |1><1|
  Mat4 prod = Mat4::Zero();
  prod(1, 1) = 1.0;
  Mat2 rb = partial_trace(prod, Subsystem::B);
  CHECK(std::abs(rb(1, 1) - cxd(1, 0)) < 1e-12);
  CHECK(std::abs(rb(0, 0)) < 1e-12);

  std::mt19937_64 rng(33);
  for (int i = 0; i < 100; ++i) {
    Mat4 r = random_density(4, rng);
    CHECK(partial_trace(r, Subsystem::A).trace().real() ==
          doctest::Approx(1.0).epsilon(1e-10));
    CHECK(partial_trace(r, Subsystem::B).trace().real() ==
          doctest::Approx(1.0).epsilon(1e-10));
  }
}

TEST_CASE("entanglement metrics on reference states") {
  auto m_bell = entanglement_metrics(projector(bell_phi_plus()));
  CHECK(m_bell.purity == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(m_bell.fidelity_to_phi_plus == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(m_bell.entanglement_of_formation == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(m_bell.entropy_a == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(m_bell.entropy_b == doctest::Approx(1.0).epsilon(1e-6));

  auto m_mixed = entanglement_metrics(0.25 * Mat4::Identity());
  CHECK(m_mixed.purity == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(m_mixed.entanglement_of_formation == doctest::Approx(0.0));
  CHECK(m_mixed.entropy_a == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(m_mixed.entropy_b == doctest::Approx(1.0).epsilon(1e-10));

  // separable product state has zero entanglement of formation
  Mat4 prod = Mat4::Zero();
  prod(2, 2) = 1.0;  // |1>|0>
  auto m_prod = entanglement_metrics(prod);
  CHECK(m_prod.entanglement_of_formation == doctest::Approx(0.0));
}

TEST_CASE("Werner state concurrence agrees with spin-flip oracle") {
  const Mat4 w = tbq::testutil::werner_state(0.9);
  const double oracle = tbq::testutil::concurrence_oracle(w);
  CHECK(oracle == doctest::Approx((3 * 0.9 - 1) / 2).epsilon(1e-9));  // 0.85
  CHECK(concurrence(w) == doctest::Approx(oracle).epsilon(1e-9));

  std::mt19937_64 rng(44);
  for (int i = 0; i < 25; ++i) {
    Mat4 r = random_density(4, rng);
    CHECK(concurrence(r) ==
          doctest::Approx(tbq::testutil::concurrence_oracle(r)).epsilon(1e-7));
  }
}

TEST_CASE("entropy bounds and metric ranges on random states") {
  std::mt19937_64 rng(55);
  for (int i = 0; i < 50; ++i) {
    Mat4 r = random_density(4, rng);
    auto m = entanglement_metrics(r);
    CHECK(m.purity >= 0.0);
    CHECK(m.purity <= 1.0 + 1e-12);
    CHECK(m.fidelity_to_phi_plus >= -1e-12);
    CHECK(m.fidelity_to_phi_plus <= 1.0 + 1e-12);
    CHECK(m.entropy_a >= -1e-12);
    CHECK(m.entropy_a <= 1.0 + 1e-10);
    CHECK(entropy_bits(r) <= 2.0 + 1e-10);
    CHECK(entropy_bits(r) >= -1e-12);
  }
}

TEST_CASE("validation rejects malformed inputs") {
  Mat4 bad = projector(bell_phi_plus());
  bad(0, 3) += cxd(0.2, 0.0);  // breaks Hermiticity
  CHECK_THROWS_AS(validate_density(bad), std::invalid_argument);

  Mat4 neg = 1.2 * projector(bell_phi_plus()) - 0.05 * Mat4::Identity();
  CHECK_THROWS_AS(validate_density(neg), std::invalid_argument);
  CHECK_THROWS_AS(entanglement_metrics(neg), std::invalid_argument);

  Mat2 over = 1.5 * Mat2::Identity();
  CHECK_THROWS_AS(validate_effect(over), std::invalid_argument);
}

TEST_CASE("binary entropy") {
  CHECK(binary_entropy_bits(0.5) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(binary_entropy_bits(0.0) == doctest::Approx(0.0));
  CHECK(binary_entropy_bits(1.0) == doctest::Approx(0.0));
  CHECK(binary_entropy_bits(0.0376) == doctest::Approx(0.2312).epsilon(5e-4));
}
