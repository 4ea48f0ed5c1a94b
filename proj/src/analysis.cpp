#include "tbq/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <Eigen/Dense>

namespace tbq::analysis {

namespace {

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

}  // namespace

CoincidenceHistogram count_coincidences(const std::vector<std::int64_t>& a,
                                        const std::vector<std::int64_t>& b,
                                        std::int64_t window_ps, std::int64_t delay_ps,
                                        std::int64_t bin_width_ps) {
  if (window_ps <= 0 || bin_width_ps <= 0)
    throw std::invalid_argument("count_coincidences: window and bin width must be > 0");
  if (!std::is_sorted(a.begin(), a.end()) || !std::is_sorted(b.begin(), b.end()))
    throw std::invalid_argument("count_coincidences: streams must be sorted");

  CoincidenceHistogram h;
  h.bin_width_ps = bin_width_ps;
  h.window_ps = window_ps;
  h.delay_ps = delay_ps;
  h.singles_a = a.size();
  h.singles_b = b.size();
  const std::size_t n_bins = static_cast<std::size_t>((2 * window_ps) / bin_width_ps) + 1;
  h.counts.assign(n_bins, 0);

  // Mirror-symmetric greedy: inside the window, the earlier tag checks
  // whether its successor is a strictly better partner for the later tag;
  // if so the earlier tag goes unpaired (all later partners are farther).
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    const std::int64_t d = (b[j] - delay_ps) - a[i];
    if (d < -window_ps) {
      ++j;
      continue;
    }
    if (d > window_ps) {
      ++i;
      continue;
    }
    if (d >= 0 && i + 1 < a.size() &&
        std::llabs((b[j] - delay_ps) - a[i + 1]) < d) {
      ++i;
      continue;
    }
    if (d < 0 && j + 1 < b.size() &&
        std::llabs((b[j + 1] - delay_ps) - a[i]) < -d) {
      ++j;
      continue;
    }
    const auto bin = static_cast<std::size_t>((d + window_ps) / bin_width_ps);
    h.counts[std::min(bin, n_bins - 1)]++;
    h.total_pairs++;
    ++i;
    ++j;
  }
  return h;
}

JtiMap jti(const std::vector<std::int64_t>& a, const std::vector<std::int64_t>& b,
           std::int64_t clock_period_ps, const std::vector<std::int64_t>& slot_edges) {
  if (clock_period_ps <= 0) throw std::invalid_argument("jti: clock period must be > 0");
  if (slot_edges.size() < 2 ||
      !std::is_sorted(slot_edges.begin(), slot_edges.end()) ||
      std::adjacent_find(slot_edges.begin(), slot_edges.end()) != slot_edges.end())
    throw std::invalid_argument("jti: slot edges must be strictly increasing");
  if (!std::is_sorted(a.begin(), a.end()) || !std::is_sorted(b.begin(), b.end()))
    throw std::invalid_argument("jti: streams must be sorted");

  const std::size_t n_slots = slot_edges.size() - 1;
  JtiMap map;
  map.slot_edges = slot_edges;
  map.counts.assign(n_slots, std::vector<std::uint64_t>(n_slots, 0));

  const std::int64_t half = clock_period_ps / 2;
  auto cycle_of = [&](std::int64_t t) { return floor_div(t + half, clock_period_ps); };
  auto slot_of = [&](std::int64_t t) -> int {
    const std::int64_t rel = t - cycle_of(t) * clock_period_ps;
    const auto it = std::upper_bound(slot_edges.begin(), slot_edges.end(), rel);
    if (it == slot_edges.begin() || it == slot_edges.end()) return -1;
    return static_cast<int>(it - slot_edges.begin()) - 1;
  };

  // first click of each stream per cycle
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    const std::int64_t ca = cycle_of(a[i]);
    const std::int64_t cb = cycle_of(b[j]);
    if (ca < cb) {
      ++i;
    } else if (cb < ca) {
      ++j;
    } else {
      const int sa = slot_of(a[i]);
      const int sb = slot_of(b[j]);
      if (sa >= 0 && sb >= 0) {
        map.counts[static_cast<std::size_t>(sa)][static_cast<std::size_t>(sb)]++;
        map.total++;
      }
      while (i < a.size() && cycle_of(a[i]) == ca) ++i;
      while (j < b.size() && cycle_of(b[j]) == cb) ++j;
    }
  }
  return map;
}

namespace {

FringeFit linear_sinusoid_fit(const std::vector<std::pair<double, double>>& points,
                              double kappa, bool with_errors) {
  Eigen::Matrix3d m = Eigen::Matrix3d::Zero();
  Eigen::Vector3d v = Eigen::Vector3d::Zero();
  for (const auto& [x, y] : points) {
    const double th = kappa * x;
    const Eigen::Vector3d row(std::cos(th), std::sin(th), 1.0);
    const double w = 1.0 / std::max(y, 1.0);  // Poisson weight
    m += w * row * row.transpose();
    v += w * y * row;
  }
  const Eigen::Vector3d sol = m.ldlt().solve(v);
  const double a_cos = sol(0), a_sin = sol(1), c = sol(2);
  const double amp = std::hypot(a_cos, a_sin);

  FringeFit fit;
  fit.kappa = kappa;
  fit.amplitude = amp;
  fit.offset = c;
  fit.phase = std::atan2(-a_sin, a_cos);
  fit.visibility = c > 0.0 ? amp / c : 0.0;

  if (with_errors) {
    const Eigen::Matrix3d cov = m.inverse();
    Eigen::Vector3d ga(a_cos / amp, a_sin / amp, 0.0);
    Eigen::Vector3d gp(a_sin / (amp * amp), -a_cos / (amp * amp), 0.0);
    Eigen::Vector3d gc(0.0, 0.0, 1.0);
    Eigen::Vector3d gv(a_cos / (amp * c), a_sin / (amp * c), -amp / (c * c));
    fit.sigma_amplitude = std::sqrt(std::max(0.0, double(ga.transpose() * cov * ga)));
    fit.sigma_phase = std::sqrt(std::max(0.0, double(gp.transpose() * cov * gp)));
    fit.sigma_offset = std::sqrt(std::max(0.0, double(gc.transpose() * cov * gc)));
    fit.sigma_visibility = std::sqrt(std::max(0.0, double(gv.transpose() * cov * gv)));
  }
  fit.visibility = std::clamp(fit.visibility, 0.0, 1.0);
  return fit;
}

double weighted_sse(const std::vector<std::pair<double, double>>& points,
                    const FringeFit& fit) {
  double sse = 0.0;
  for (const auto& [x, y] : points) {
    const double model = fit.amplitude * std::cos(fit.kappa * x + fit.phase) + fit.offset;
    sse += (y - model) * (y - model) / std::max(y, 1.0);
  }
  return sse;
}

void validate_points(const std::vector<std::pair<double, double>>& points,
                     double min_span) {
  if (points.size() < 5)
    throw std::invalid_argument("fit_fringe: need at least 5 points");
  double lo = points.front().first, hi = points.front().first;
  for (const auto& [x, y] : points) {
    lo = std::min(lo, x);
    hi = std::max(hi, x);
    if (y < 0.0) throw std::invalid_argument("fit_fringe: counts must be >= 0");
  }
  if (hi - lo <= min_span)
    throw std::invalid_argument("fit_fringe: points must span more than half a period");
}

}  // namespace

FringeFit fit_fringe(const std::vector<std::pair<double, double>>& points) {
  validate_points(points, M_PI);
  return linear_sinusoid_fit(points, 1.0, true);
}

FringeFit fit_fringe_scaled(const std::vector<std::pair<double, double>>& points,
                            double p_pi_hint) {
  if (p_pi_hint <= 0.0)
    throw std::invalid_argument("fit_fringe_scaled: p_pi hint must be > 0");
  const double kappa0 = M_PI / p_pi_hint;
  validate_points(points, M_PI / (2.0 * kappa0));

  double best_kappa = kappa0;
  double best_sse = std::numeric_limits<double>::infinity();
  auto consider = [&](double kappa) {
    const FringeFit f = linear_sinusoid_fit(points, kappa, false);
    const double sse = weighted_sse(points, f);
    if (sse < best_sse) {
      best_sse = sse;
      best_kappa = kappa;
    }
  };
  for (int i = 0; i <= 300; ++i) consider(kappa0 * (0.5 + 1.5 * i / 300.0));
  const double step = kappa0 * 1.5 / 300.0;
  for (int i = -20; i <= 20; ++i) consider(best_kappa + step * i / 20.0);

  return linear_sinusoid_fit(points, best_kappa, true);
}

ChshResult chsh_s(const std::array<SettingCounts, 4>& settings) {
  ChshResult r;
  double var = 0.0;
  for (int k = 0; k < 4; ++k) {
    const auto& n = settings[k].n;
    const double same = static_cast<double>(n[0] + n[3]);
    const double cross = static_cast<double>(n[1] + n[2]);
    const double tot = same + cross;
    if (tot == 0.0) throw std::invalid_argument("chsh_s: setting has zero total counts");
    r.correlators[k] = (same - cross) / tot;
    r.sigma_correlators[k] = std::sqrt(4.0 * same * cross / (tot * tot * tot));
    var += r.sigma_correlators[k] * r.sigma_correlators[k];
  }
  r.s = r.correlators[0] - r.correlators[1] + r.correlators[2] + r.correlators[3];
  r.sigma_s = std::sqrt(var);
  return r;
}

double info_density(int d, int n, double delta_t_s, double delta_nu_hz) {
  if (d < 2 || n < 1 || delta_t_s <= 0.0 || delta_nu_hz <= 0.0)
    throw std::invalid_argument("info_density: inputs must be positive (d >= 2)");
  return std::pow(static_cast<double>(d), n) / (delta_t_s * delta_nu_hz);
}

double info_density_binned(int d, int n, double bin_separation_ps,
                           double channel_bandwidth_ghz) {
  return info_density(d, n, 2.0 * bin_separation_ps * 1e-12,
                      2.0 * channel_bandwidth_ghz * 1e9);
}

}  // namespace tbq::analysis
