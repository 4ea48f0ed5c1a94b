#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "tbq/analysis.hpp"
#include "tbq/sim.hpp"

using namespace tbq;
using namespace tbq::analysis;

namespace {

sim::ExperimentPlan clean_plan() {
  sim::ExperimentPlan plan;
  plan.pump.pulse_fwhm_ps = 0.01;
  plan.stats.mu = 0.05;
  for (auto& d : plan.detectors) {
    d.efficiency = 1.0;
    d.dark_counts_per_s = 0.0;
    d.jitter_fwhm_ps = 0.0;
    d.dead_time_ns = 0.0;
    d.max_rate_hz = 1e12;
  }
  plan.duration_s = 2e-4;
  plan.seed = 9;
  return plan;
}

}  // namespace

TEST_CASE("coincidence counting basics") {
  std::vector<std::int64_t> a;
  for (int i = 0; i < 100; ++i) a.push_back(1000 * i);

  auto self = count_coincidences(a, a, 1, 0);
  CHECK(self.total_pairs == a.size());

  std::vector<std::int64_t> b;
  for (auto t : a) b.push_back(t + 500);  // 10x the 50 ps window away
  CHECK(count_coincidences(a, b, 50, 0).total_pairs == 0);
  CHECK(count_coincidences(a, b, 50, 500).total_pairs == a.size());

  std::vector<std::int64_t> unsorted = {5, 1};
  CHECK_THROWS_AS(count_coincidences(unsorted, a, 10, 0), std::invalid_argument);
}

TEST_CASE("coincidence counting is symmetric and bounded by singles") {
  std::mt19937_64 rng(17);
  std::uniform_int_distribution<std::int64_t> u(0, 1'000'000);
  std::vector<std::int64_t> a, b;
  for (int i = 0; i < 3000; ++i) a.push_back(u(rng));
  for (int i = 0; i < 2500; ++i) b.push_back(u(rng));
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());

  const auto ab = count_coincidences(a, b, 200, 37);
  const auto ba = count_coincidences(b, a, 200, -37);
  CHECK(ab.total_pairs == ba.total_pairs);

  std::uint64_t binned = 0;
  for (auto c : ab.counts) binned += c;
  CHECK(binned == ab.total_pairs);
  CHECK(ab.total_pairs <= std::min(ab.singles_a, ab.singles_b));
}

TEST_CASE("simulated overlap run: matched-port coincidences dominate per the fringe") {
  auto plan = clean_plan();
  auto res = sim::run_simulation(plan);
  const auto same = count_coincidences(res.streams[0], res.streams[2], 300, 0);
  const auto cross = count_coincidences(res.streams[0], res.streams[3], 300, 0);
  // theta_a + theta_b = 0: cross-port true rate is the fringe minimum (0),
  // leaving only the multi-pair floor of order mu/2
  CHECK(same.total_pairs > 1000);
  const double floor = static_cast<double>(cross.total_pairs) /
                       static_cast<double>(same.total_pairs + cross.total_pairs);
  CHECK(floor < 0.03);
}

TEST_CASE("jti localizes projective outcomes") {
  const std::vector<std::int64_t> edges = {-50, 50, 150, 250};

  // overlap mode run: everything lands in the central/central cell
  auto plan = clean_plan();
  for (auto& d : plan.detectors) d.jitter_fwhm_ps = 50.0;
  auto res = sim::run_simulation(plan);
  auto map = jti(res.streams[0], res.streams[2], res.clock_period_ps, edges);
  CHECK(map.total > 1000);
  CHECK(static_cast<double>(map.counts[1][1]) > 0.95 * static_cast<double>(map.total));

  // reverse mode: mass only on the (early,early) and (late,late) diagonal,
  // 200 ps apart
  auto plan_z = clean_plan();
  plan_z.a.receiver.mode = device::SwitchMode::Reverse;
  plan_z.b.receiver.mode = device::SwitchMode::Reverse;
  auto res_z = sim::run_simulation(plan_z);
  auto map_z = jti(res_z.streams[0], res_z.streams[2], res_z.clock_period_ps, edges);
  CHECK(map_z.total > 500);
  // diagonal (early,early)/(late,late) up to the multi-pair floor
  CHECK(static_cast<double>(map_z.counts[0][0] + map_z.counts[2][2]) >
        0.97 * static_cast<double>(map_z.total));
  CHECK(map_z.counts[0][0] > 0);
  CHECK(map_z.counts[2][2] > 0);
  CHECK(map_z.counts[1][1] == 0);  // nothing interferes in reverse mode

  CHECK_THROWS_AS(jti(res.streams[0], res.streams[2], res.clock_period_ps, {-50, -50, 100}),
                  std::invalid_argument);
}

TEST_CASE("jti of uniform background is flat") {
  std::mt19937_64 rng(23);
  std::uniform_int_distribution<std::int64_t> rel(-50, 249);
  std::vector<std::int64_t> a, b;
  const int cycles = 20000;
  for (int c = 0; c < cycles; ++c) {
    a.push_back(1000LL * c + rel(rng));
    b.push_back(1000LL * c + rel(rng));
  }
  auto map = jti(a, b, 1000, {-50, 50, 150, 250});
  const double expected = static_cast<double>(map.total) / 9.0;
  double chi2 = 0.0;
  for (const auto& row : map.counts)
    for (auto c : row) chi2 += (c - expected) * (c - expected) / expected;
  CHECK(chi2 < 20.09);  // chi-square 0.99 quantile, 8 dof
}

TEST_CASE("fringe fit recovers noiseless parameters") {
  std::vector<std::pair<double, double>> pts;
  for (int i = 0; i < 24; ++i) {
    const double th = -M_PI + 2 * M_PI * i / 24.0;
    pts.emplace_back(th, 1000.0 * (1 + std::cos(th)) / 2);
  }
  auto fit = fit_fringe(pts);
  CHECK(fit.visibility == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(fit.phase == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(fit.amplitude == doctest::Approx(500.0).epsilon(1e-9));
  CHECK(fit.offset == doctest::Approx(500.0).epsilon(1e-9));
  CHECK(fit.sigma_visibility > 0.0);
}

TEST_CASE("fringe fit is unbiased over Poisson ensembles") {
  std::mt19937_64 rng(31);
  const double v_true = 0.9, c0 = 2000.0;
  double sum_v = 0.0;
  const int n_rep = 200;
  for (int rep = 0; rep < n_rep; ++rep) {
    std::vector<std::pair<double, double>> pts;
    for (int i = 0; i < 24; ++i) {
      const double th = -M_PI + 2 * M_PI * i / 24.0 + 0.13;
      const double mean = c0 * (1 + v_true * std::cos(th + 0.4));
      std::poisson_distribution<long> pd(mean);
      pts.emplace_back(th, static_cast<double>(pd(rng)));
    }
    sum_v += fit_fringe(pts).visibility;
  }
  CHECK(std::abs(sum_v / n_rep - v_true) < 0.005);
}

TEST_CASE("fringe fit input validation") {
  std::vector<std::pair<double, double>> few = {{0, 1}, {1, 2}, {2, 1}, {3, 2}};
  CHECK_THROWS_AS(fit_fringe(few), std::invalid_argument);

  std::vector<std::pair<double, double>> narrow;
  for (int i = 0; i < 8; ++i) narrow.emplace_back(0.1 * i, 100.0);
  CHECK_THROWS_AS(fit_fringe(narrow), std::invalid_argument);
}

TEST_CASE("scaled fringe fit recovers the power-to-phase slope") {
  const double p_pi = 23.5;  // mW
  const double kappa_true = M_PI / p_pi;
  std::vector<std::pair<double, double>> pts;
  for (int i = 0; i < 30; ++i) {
    const double p = 2.0 * i;  // 0..58 mW, > one full period
    pts.emplace_back(p, 800.0 * (1 + 0.93 * std::cos(kappa_true * p + 0.7)) + 50.0);
  }
  auto fit = fit_fringe_scaled(pts, 20.0);  // deliberately off hint
  CHECK(fit.kappa == doctest::Approx(kappa_true).epsilon(0.01));
  CHECK(fit.visibility ==
        doctest::Approx(0.93 * 800.0 / (800.0 + 50.0)).epsilon(0.01));
}

TEST_CASE("chsh at the stated settings") {
  const double a_set[2] = {M_PI / 4, -M_PI / 4};
  const double b_set[2] = {0.0, M_PI / 2};
  auto counts_at = [&](double v, double scale) {
    std::array<SettingCounts, 4> settings{};
    int k = 0;
    for (double ta : a_set)
      for (double tb : b_set) {
        const double c = v * std::cos(ta + tb);
        settings[k].n = {static_cast<std::uint64_t>(std::llround(scale * (1 + c) / 4)),
                         static_cast<std::uint64_t>(std::llround(scale * (1 - c) / 4)),
                         static_cast<std::uint64_t>(std::llround(scale * (1 - c) / 4)),
                         static_cast<std::uint64_t>(std::llround(scale * (1 + c) / 4))};
        ++k;
      }
    return settings;
  };

  auto ideal = chsh_s(counts_at(1.0, 4e6));
  CHECK(ideal.s == doctest::Approx(2 * std::sqrt(2.0)).epsilon(1e-6));

  auto degraded = chsh_s(counts_at(0.935, 4e6));
  CHECK(degraded.s == doctest::Approx(2 * std::sqrt(2.0) * 0.935).epsilon(1e-6));

  // correlators are count-scale invariant
  auto small = chsh_s(counts_at(0.935, 4e4));
  CHECK(small.s == doctest::Approx(degraded.s).epsilon(1e-4));

  std::array<SettingCounts, 4> zero{};
  CHECK_THROWS_AS(chsh_s(zero), std::invalid_argument);
}

TEST_CASE("quantum information density") {
  CHECK(info_density(2, 2, 200e-12, 200e9) == doctest::Approx(0.1).epsilon(1e-12));
  CHECK(info_density_binned(2, 2, 100.0, 100.0) == doctest::Approx(0.1).epsilon(1e-12));
  CHECK(info_density_binned(2, 1, 100.0, 100.0) == doctest::Approx(0.05).epsilon(1e-12));
  CHECK(info_density_binned(2, 2, 200.0, 100.0) == doctest::Approx(0.05).epsilon(1e-12));
  CHECK_THROWS_AS(info_density(1, 1, 1.0, 1.0), std::invalid_argument);
}
