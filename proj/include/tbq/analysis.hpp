#pragma once

#include <array>
#include <cstdint>
#include <utility>
#include <vector>

// Stream-level figures of merit: coincidence histograms, joint temporal
// intensity maps, sinusoidal fringe fits with visibility, and the CHSH
// S-parameter with Poisson error propagation.

namespace tbq::analysis {

struct CoincidenceHistogram {
  std::pair<int, int> pair{0, 0};  // channel indices
  std::int64_t bin_width_ps = 1;
  std::int64_t window_ps = 0;
  std::int64_t delay_ps = 0;
  std::vector<std::uint64_t> counts;  // relative delay binned over [-window, window)
  std::uint64_t total_pairs = 0;
  std::uint64_t singles_a = 0;
  std::uint64_t singles_b = 0;
};

/// Greedy nearest-partner coincidence count: a tag pairs with at most one
/// partner with |(t_b - delay) - t_a| <= window. Streams must be sorted.
CoincidenceHistogram count_coincidences(const std::vector<std::int64_t>& a,
                                        const std::vector<std::int64_t>& b,
                                        std::int64_t window_ps, std::int64_t delay_ps,
                                        std::int64_t bin_width_ps = 10);

struct JtiMap {
  std::vector<std::int64_t> slot_edges;         // n+1 edges for n slots
  std::vector<std::vector<std::uint64_t>> counts;  // [slot_a][slot_b]
  std::uint64_t total = 0;
};

/// Bins per-cycle coincidences by the (slot_a, slot_b) arrival windows.
/// Slot edges are cycle-relative picoseconds (centered modulo), strictly
/// increasing; clicks outside the edges are dropped.
JtiMap jti(const std::vector<std::int64_t>& a, const std::vector<std::int64_t>& b,
           std::int64_t clock_period_ps, const std::vector<std::int64_t>& slot_edges);

struct FringeFit {
  double amplitude = 0.0;
  double sigma_amplitude = 0.0;
  double offset = 0.0;
  double sigma_offset = 0.0;
  double phase = 0.0;
  double sigma_phase = 0.0;
  double visibility = 0.0;       // amplitude / offset, clamped to [0, 1]
  double sigma_visibility = 0.0;
  double kappa = 1.0;            // abscissa-to-phase scale (1 when fitting phase)
};

/// Weighted least squares of a*cos(theta + phi) + c with Poisson weights.
/// Points are (theta_radians, count); needs >= 5 points spanning more than
/// half a period.
FringeFit fit_fringe(const std::vector<std::pair<double, double>>& points);

/// Same model against a linear phase proxy (heater power): fits
/// a*cos(kappa*x + phi) + c, scanning kappa around pi/p_pi_hint.
FringeFit fit_fringe_scaled(const std::vector<std::pair<double, double>>& points,
                            double p_pi_hint);

struct SettingCounts {
  // detector-pair coincidence counts [A0B0, A0B1, A1B0, A1B1]
  std::array<std::uint64_t, 4> n{};
};

struct ChshResult {
  double s = 0.0;
  double sigma_s = 0.0;
  std::array<double, 4> correlators{};
  std::array<double, 4> sigma_correlators{};
};

/// S = E11 - E12 + E21 + E22 over settings ordered
/// (a1,b1), (a1,b2), (a2,b1), (a2,b2); the |Phi+> maximum +2*sqrt(2) is
/// reached at a = {pi/4, -pi/4}, b = {0, pi/2}.
ChshResult chsh_s(const std::array<SettingCounts, 4>& settings);

/// d^N / (delta_t * delta_nu), dimensionless.
double info_density(int d, int n, double delta_t_s, double delta_nu_hz);

/// Convenience with the doubled time/bandwidth convention:
/// delta_t = 2 * bin separation, delta_nu = 2 * channel bandwidth.
double info_density_binned(int d, int n, double bin_separation_ps,
                           double channel_bandwidth_ghz);

}  // namespace tbq::analysis
