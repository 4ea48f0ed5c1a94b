#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "tbq/core.hpp"

// Tailored-pump SFWM source: the prepared biphoton state and per-pulse
// pair-generation statistics. Multi-pair emissions are independent copies
// of the prepared state and turn into accidental coincidences downstream.

namespace tbq::source {

struct PumpConfig {
  double rep_rate_hz = 1e9;
  double bin_separation_ps = 100.0;
  TimeBinPreparation prep{1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0), 0.0};
  double pulse_fwhm_ps = 9.2;

  void validate() const {
    if (rep_rate_hz <= 0.0) throw std::invalid_argument("PumpConfig: rep_rate_hz must be > 0");
    if (bin_separation_ps <= 0.0)
      throw std::invalid_argument("PumpConfig: bin_separation_ps must be > 0");
    if (2.0 * bin_separation_ps >= 1e12 / rep_rate_hz)
      throw std::invalid_argument("PumpConfig: bin pattern does not fit in the clock period");
    if (pulse_fwhm_ps >= bin_separation_ps)
      throw std::invalid_argument("PumpConfig: pulse_fwhm_ps must be < bin_separation_ps");
    prep.validate();
  }
};

struct PairStatistics {
  double mu = 0.01;  // mean pairs per clock cycle

  void validate() const {
    if (mu < 0.0 || mu >= 0.5)
      throw std::invalid_argument("PairStatistics: mu must be in [0, 0.5)");
  }
};

/// alpha|00> + beta e^{i theta_S}|11>.
Ket4 prepared_state(const TimeBinPreparation& prep);

/// Poisson pair count for one clock cycle.
int sample_pairs(const PairStatistics& stats, std::mt19937_64& rng);

struct CarEstimate {
  double car = 0.0;
  std::uint64_t signal_coincidences = 0;
  std::uint64_t accidental_coincidences = 0;
  bool lower_bound_only = false;  // no accidentals observed; car is a floor
};

/// Coincidence-to-accidental ratio: coincidences of (a, b) within
/// +-window_ps against the same count with b delayed by one clock period.
CarEstimate car_estimate(const std::vector<std::int64_t>& a,
                         const std::vector<std::int64_t>& b,
                         std::int64_t window_ps, std::int64_t clock_period_ps);

}  // namespace tbq::source
