#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "tbq/tomography.hpp"
#include "test_util.hpp"

using namespace tbq;
using namespace tbq::tomo;

namespace {

double trace_distance(const Mat4& a, const Mat4& b) {
  Eigen::SelfAdjointEigenSolver<Mat4> es(a - b, Eigen::EigenvaluesOnly);
  return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

std::array<std::array<double, 4>, 9> born_table(const Mat4& rho) {
  std::array<std::array<double, 4>, 9> p{};
  const auto effects = measurement_set();
  for (int s = 0; s < 9; ++s)
    for (int o = 0; o < 4; ++o) p[s][o] = std::max(0.0, (effects[s][o] * rho).trace().real());
  return p;
}

TomographyData exact_counts(const Mat4& rho, std::uint64_t per_setting) {
  TomographyData d;
  const auto p = born_table(rho);
  for (int s = 0; s < 9; ++s)
    for (int o = 0; o < 4; ++o)
      d.counts[s][o] = static_cast<std::uint64_t>(std::llround(p[s][o] * per_setting));
  return d;
}

TomographyData multinomial_counts(const Mat4& rho, std::uint64_t per_setting,
                                  std::mt19937_64& rng) {
  TomographyData d;
  const auto p = born_table(rho);
  for (int s = 0; s < 9; ++s) {
    std::discrete_distribution<int> dist(p[s].begin(), p[s].end());
    for (std::uint64_t i = 0; i < per_setting; ++i) d.counts[s][dist(rng)]++;
  }
  return d;
}

}  // namespace

TEST_CASE("measurement set structure") {
  const auto effects = measurement_set();

  // setting (X,X), outcome (plus,plus) projects onto |++>
  Ket4 pp;
  pp << 0.5, 0.5, 0.5, 0.5;
  CHECK((effects[0][0] - projector(pp)).cwiseAbs().maxCoeff() < 1e-12);

  for (int s = 0; s < 9; ++s) {
    Mat4 sum = Mat4::Zero();
    for (int o = 0; o < 4; ++o) {
      sum += effects[s][o];
      validate_effect(effects[s][o]);
    }
    CHECK((sum - Mat4::Identity()).cwiseAbs().maxCoeff() < 1e-12);
  }

  // (Z,Z) outcomes are computational projectors
  Mat4 z00 = Mat4::Zero();
  z00(0, 0) = 1.0;
  CHECK((effects[8][0] - z00).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("setting counts from a simulated reverse-mode run") {
  sim::ExperimentPlan plan;
  plan.pump.pulse_fwhm_ps = 0.01;
  plan.stats.mu = 0.02;
  for (auto& d : plan.detectors) {
    d.efficiency = 1.0;
    d.dark_counts_per_s = 0.0;
    d.jitter_fwhm_ps = 0.0;
    d.dead_time_ns = 0.0;
    d.max_rate_hz = 1e12;
  }
  plan.a.receiver = receiver_for_basis(Basis::Z, plan.a.receiver);
  plan.b.receiver = receiver_for_basis(Basis::Z, plan.b.receiver);
  plan.duration_s = 2e-4;
  auto run = sim::run_simulation(plan);

  const auto counts = counts_from_run(run, {Basis::Z, Basis::Z});
  const std::uint64_t total = counts[0] + counts[1] + counts[2] + counts[3];
  CHECK(total > 1000);
  // |Phi+> is perfectly correlated in Z; only the multi-pair floor leaks
  CHECK(static_cast<double>(counts[0] + counts[3]) > 0.98 * static_cast<double>(total));
  CHECK(std::abs(static_cast<double>(counts[0]) - static_cast<double>(counts[3])) <
        5 * std::sqrt(static_cast<double>(total)));
}

TEST_CASE("linear inversion recovers states from exact statistics") {
  const Mat4 bell = projector(bell_phi_plus());
  auto rho = linear_inversion(exact_counts(bell, 400'000'000));
  CHECK(trace_distance(rho, bell) < 1e-7);

  const Mat4 mixed = 0.25 * Mat4::Identity();
  auto rho_mixed = linear_inversion(exact_counts(mixed, 400'000'000));
  CHECK(trace_distance(rho_mixed, mixed) < 1e-7);

  TomographyData empty;
  CHECK_THROWS_AS(linear_inversion(empty), std::invalid_argument);
}

TEST_CASE("linear inversion under Poisson noise stays close") {
  std::mt19937_64 rng(71);
  const Mat4 bell = projector(bell_phi_plus());
  auto rho = linear_inversion(multinomial_counts(bell, 100'000, rng));
  CHECK(trace_distance(rho, bell) <= 0.02);
}

TEST_CASE("factorization parametrization round trip") {
  std::mt19937_64 rng(73);
  for (int i = 0; i < 20; ++i) {
    Mat4 rho = tbq::testutil::random_density(4, rng);
    const TParams p = params_from_density(rho);
    CHECK(trace_distance(density_from_params(p), rho) < 1e-9);
  }
}

TEST_CASE("mle gradient matches central finite differences") {
  std::mt19937_64 rng(79);
  for (int trial = 0; trial < 10; ++trial) {
    Mat4 rho = tbq::testutil::random_density(4, rng);
    TomographyData data = multinomial_counts(tbq::testutil::random_density(4, rng),
                                             10'000, rng);
    const TParams p = params_from_density(rho);
    const TParams g = mle_gradient(data, p);

    TParams g_fd;
    const double h = 1e-6;
    for (int k = 0; k < 16; ++k) {
      TParams lo = p, hi = p;
      lo(k) -= h;
      hi(k) += h;
      g_fd(k) = (mle_objective(data, hi) - mle_objective(data, lo)) / (2 * h);
    }
    CHECK((g - g_fd).norm() / g.norm() < 1e-6);
  }
}

TEST_CASE("mle reconstructs noiseless and noisy reference states") {
  const Mat4 bell = projector(bell_phi_plus());
  MleInfo info;
  auto rho = mle_reconstruct(exact_counts(bell, 1'000'000), &info);
  CHECK(info.converged);
  CHECK(fidelity_to_phi_plus(rho) >= 0.9999);
  validate_density(rho);

  std::mt19937_64 rng(83);
  const Mat4 werner = tbq::testutil::werner_state(0.9);
  auto rho_w = mle_reconstruct(multinomial_counts(werner, 100'000, rng));
  const double c_oracle = tbq::testutil::concurrence_oracle(werner);
  CHECK(std::abs(concurrence(rho_w) - c_oracle) <= 0.02);
}

TEST_CASE("mle output is physical and beats the projected initializer") {
  std::mt19937_64 rng(89);
  for (int i = 0; i < 5; ++i) {
    const Mat4 truth = tbq::testutil::random_density(4, rng);
    TomographyData data = multinomial_counts(truth, 20'000, rng);

    Mat4 lin = linear_inversion(data);
    Eigen::SelfAdjointEigenSolver<Mat4> es(lin);
    Eigen::Vector4d lam = es.eigenvalues().cwiseMax(0.0);
    Mat4 projected = es.eigenvectors() * lam.asDiagonal() * es.eigenvectors().adjoint();
    projected /= projected.trace().real();

    MleInfo info;
    auto rho = mle_reconstruct(data, &info);
    validate_density(rho);
    CHECK(log_likelihood(data, rho) >= log_likelihood(data, projected) - 1e-9);
  }
}

TEST_CASE("mle error carries the best iterate") {
  std::mt19937_64 rng(97);
  TomographyData data =
      multinomial_counts(tbq::testutil::random_density(4, rng), 10'000, rng);
  MleOptions opts;
  opts.max_iterations = 2;
  try {
    mle_reconstruct(data, nullptr, opts);
    FAIL("expected MleNotConverged");
  } catch (const MleNotConverged& e) {
    validate_density(e.best_iterate);
    CHECK(e.info.iterations == 2);
    CHECK_FALSE(e.info.converged);
  }
}

TEST_CASE("reconstruction error shrinks like the square root of the counts") {
  std::mt19937_64 rng(101);
  const Mat4 truth = tbq::testutil::werner_state(0.85);
  std::vector<double> log_n, log_d;
  for (double n : {1e3, 1e4, 1e5, 1e6}) {
    double mean_d = 0.0;
    const int reps = 3;
    for (int r = 0; r < reps; ++r) {
      auto rho = mle_reconstruct(
          multinomial_counts(truth, static_cast<std::uint64_t>(n), rng));
      mean_d += trace_distance(rho, truth) / reps;
    }
    log_n.push_back(std::log(n));
    log_d.push_back(std::log(mean_d));
  }
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double m = static_cast<double>(log_n.size());
  for (std::size_t i = 0; i < log_n.size(); ++i) {
    sx += log_n[i];
    sy += log_d[i];
    sxx += log_n[i] * log_n[i];
    sxy += log_n[i] * log_d[i];
  }
  const double slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
  CHECK(slope < -0.35);
  CHECK(slope > -0.65);
}
