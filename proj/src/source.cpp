#include "tbq/source.hpp"

#include <algorithm>
#include <cmath>

namespace tbq::source {

Ket4 prepared_state(const TimeBinPreparation& prep) {
  prep.validate();
  Ket4 k = Ket4::Zero();
  k(0) = cxd(prep.alpha, 0.0);
  k(3) = prep.beta * std::exp(cxd(0.0, prep.theta_s));
  return k;
}

int sample_pairs(const PairStatistics& stats, std::mt19937_64& rng) {
  stats.validate();
  if (stats.mu == 0.0) return 0;
  std::poisson_distribution<int> d(stats.mu);
  return d(rng);
}

namespace {

// Mirror-symmetric greedy nearest-partner pairing of two sorted streams,
// with b shifted by -delay. Each tag pairs at most once.
std::uint64_t paired_count(const std::vector<std::int64_t>& a,
                           const std::vector<std::int64_t>& b,
                           std::int64_t window, std::int64_t delay) {
  std::uint64_t n = 0;
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    const std::int64_t d = (b[j] - delay) - a[i];
    if (d < -window) {
      ++j;
      continue;
    }
    if (d > window) {
      ++i;
      continue;
    }
    if (d >= 0 && i + 1 < a.size() && std::llabs((b[j] - delay) - a[i + 1]) < d) {
      ++i;
      continue;
    }
    if (d < 0 && j + 1 < b.size() && std::llabs((b[j + 1] - delay) - a[i]) < -d) {
      ++j;
      continue;
    }
    ++n;
    ++i;
    ++j;
  }
  return n;
}

}  // namespace

CarEstimate car_estimate(const std::vector<std::int64_t>& a,
                         const std::vector<std::int64_t>& b,
                         std::int64_t window_ps, std::int64_t clock_period_ps) {
  if (window_ps <= 0 || clock_period_ps <= 0)
    throw std::invalid_argument("car_estimate: window and clock period must be > 0");
  if (!std::is_sorted(a.begin(), a.end()) || !std::is_sorted(b.begin(), b.end()))
    throw std::invalid_argument("car_estimate: streams must be sorted");
  CarEstimate est;
  est.signal_coincidences = paired_count(a, b, window_ps, 0);
  est.accidental_coincidences = paired_count(a, b, window_ps, clock_period_ps);
  if (est.accidental_coincidences == 0) {
    est.car = static_cast<double>(est.signal_coincidences);
    est.lower_bound_only = true;
  } else {
    est.car = static_cast<double>(est.signal_coincidences) /
              static_cast<double>(est.accidental_coincidences);
  }
  return est;
}

}  // namespace tbq::source
