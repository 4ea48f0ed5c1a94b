#include "tbq/qkd.hpp"

#include <algorithm>
#include <cmath>

#include "tbq/rng.hpp"

namespace tbq::qkd {

namespace {

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

const char* arm_name(sim::PolicyKind kind, std::uint8_t arm) {
  switch (kind) {
    case sim::PolicyKind::FixedPhase:
      return "X";
    case sim::PolicyKind::PassiveSplit:
      return arm == sim::kArmDirect ? "Z" : "X";
    case sim::PolicyKind::ActivePrbs:
      return arm == 0 ? "X" : "Y";
  }
  return "?";
}

struct SideClick {
  std::int64_t cycle;
  std::uint8_t det;
  std::int64_t rel;
};

std::vector<SideClick> side_clicks(const sim::SimResult& run, int side) {
  const std::int64_t period = run.clock_period_ps;
  std::vector<SideClick> out;
  out.reserve(run.streams[side * 2].size() + run.streams[side * 2 + 1].size());
  for (int det = 0; det < 2; ++det) {
    for (const std::int64_t t : run.streams[side * 2 + det]) {
      const std::int64_t cycle = floor_div(t + period / 2, period);
      out.push_back({cycle, static_cast<std::uint8_t>(det), t - cycle * period});
    }
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const SideClick& a, const SideClick& b) { return a.cycle < b.cycle; });
  return out;
}

// Bit of a click under the given basis arm; -1 when the click misses its
// acceptance window.
int click_bit(const SideClick& c, bool direct_z, std::int64_t t_bin,
              std::int64_t z_half, std::int64_t x_half) {
  if (direct_z) {
    if (z_half <= 0) {  // midpoint threshold over the two-bin span
      if (c.rel < -t_bin / 2 || c.rel >= t_bin + t_bin / 2) return -1;
      return c.rel >= t_bin / 2 ? 1 : 0;
    }
    if (std::llabs(c.rel) <= z_half) return 0;
    if (std::llabs(c.rel - t_bin) <= z_half) return 1;
    return -1;
  }
  const std::int64_t half = x_half > 0 ? x_half : t_bin / 2;
  if (std::llabs(c.rel - t_bin) > half) return -1;
  return c.det;
}

}  // namespace

SiftedBlock sift(const sim::SimResult& run, const SiftParams& params) {
  const std::int64_t t_bin = run.bin_separation_ps;
  const auto a = side_clicks(run, 0);
  const auto b = side_clicks(run, 1);
  const sim::PolicyKind kind = run.basis.policy().kind;

  SiftedBlock block;
  block.acquisition_duration_s = run.duration_s;
  block.key_basis = arm_name(kind, params.key_arm);
  block.test_basis = arm_name(kind, params.key_arm ^ 1);

  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i].cycle < b[j].cycle) {
      ++i;
      continue;
    }
    if (b[j].cycle < a[i].cycle) {
      ++j;
      continue;
    }
    const std::int64_t cycle = a[i].cycle;
    std::size_t i2 = i, j2 = j;
    while (i2 < a.size() && a[i2].cycle == cycle) ++i2;
    while (j2 < b.size() && b[j2].cycle == cycle) ++j2;

    if (i2 - i != 1 || j2 - j != 1) {
      block.discarded_multi++;
      i = i2;
      j = j2;
      continue;
    }

    const auto ucycle = static_cast<std::uint64_t>(cycle);
    const std::uint8_t arm_a = run.basis.arm(0, ucycle);
    const std::uint8_t arm_b = run.basis.arm(1, ucycle);
    if (arm_a != arm_b) {
      block.unmatched_rounds++;
      i = i2;
      j = j2;
      continue;
    }

    const bool direct_z =
        kind == sim::PolicyKind::PassiveSplit && arm_a == sim::kArmDirect;
    int bit_a = click_bit(a[i], direct_z, t_bin, params.z_window_half_ps,
                          params.x_window_half_ps);
    int bit_b = click_bit(b[j], direct_z, t_bin, params.z_window_half_ps,
                          params.x_window_half_ps);
    i = i2;
    j = j2;
    if (bit_a < 0 || bit_b < 0) continue;
    if (params.flip_b[arm_a]) bit_b ^= 1;

    block.matched_rounds++;
    const bool err = bit_a != bit_b;
    if (arm_a == params.key_arm) {
      block.n_key++;
      block.e_key += err;
    } else {
      block.n_test++;
      block.e_test += err;
    }
  }

  const std::uint64_t classified = block.matched_rounds + block.unmatched_rounds;
  block.sifting_factor =
      classified ? static_cast<double>(block.matched_rounds) / classified : 0.0;
  block.validate();
  return block;
}

namespace {

double key_length_from_bound(double n_key, double q_key, double q_upper,
                             const SecurityParams& params, bool* aborted) {
  *aborted = q_upper >= 0.5;
  const double q_u = std::min(0.5, q_upper);
  const double leak_pe = n_key * (1.0 - binary_entropy(q_u));
  const double leak_ec = params.f_ec * n_key * binary_entropy(q_key);
  const double leak_eps =
      std::log2(2.0 / (params.eps_sec * params.eps_sec * params.eps_cor));
  const double l = std::floor(leak_pe - leak_ec - leak_eps);
  if (l <= 0.0) {
    if (q_upper >= 0.5) *aborted = true;
    return 0.0;
  }
  return l;
}

}  // namespace

KeyLengthResult serfling_key_length(const SiftedBlock& block, const SecurityParams& params) {
  params.validate();
  block.validate();
  if (block.n_key == 0 || block.n_test == 0)
    throw std::invalid_argument("serfling_key_length: need key and test counts");
  const double nk = static_cast<double>(block.n_key);
  const double nt = static_cast<double>(block.n_test);
  const double nu =
      std::sqrt((nk + nt) * (nt + 1.0) / (nk * nt * nt) * std::log(2.0 / params.eps_sec));
  KeyLengthResult r;
  r.bits = key_length_from_bound(nk, block.qber_key(), block.qber_test() + nu, params,
                                 &r.aborted);
  return r;
}

double chernoff_upper_qber(double q_test, std::uint64_t n_test, double eps_sec) {
  if (n_test == 0) throw std::invalid_argument("chernoff_upper_qber: n_test must be > 0");
  const double target = std::log(1.0 / eps_sec) / static_cast<double>(n_test);
  auto kl = [&](double q) {
    double d = 0.0;
    if (q_test > 0.0) d += q_test * std::log(q_test / q);
    if (q_test < 1.0) d += (1.0 - q_test) * std::log((1.0 - q_test) / (1.0 - q));
    return d;
  };
  if (q_test >= 0.5) return 0.5;
  if (kl(0.5) < target) return 0.5;  // even q = 1/2 is not excluded
  double lo = q_test, hi = 0.5;
  while (hi - lo > 1e-10) {
    const double mid = 0.5 * (lo + hi);
    (kl(mid) >= target ? hi : lo) = mid;
  }
  return hi;
}

KeyLengthResult chernoff_key_length(const SiftedBlock& block, const SecurityParams& params) {
  params.validate();
  block.validate();
  if (block.n_key == 0 || block.n_test == 0)
    throw std::invalid_argument("chernoff_key_length: need key and test counts");
  const double q_u = chernoff_upper_qber(block.qber_test(), block.n_test, params.eps_sec);
  KeyLengthResult r;
  r.bits = key_length_from_bound(static_cast<double>(block.n_key), block.qber_key(), q_u,
                                 params, &r.aborted);
  return r;
}

double asymptotic_rate(double q, double sifted_rate_hz, double qber_key,
                       double qber_test, double f_ec) {
  if (q <= 0.0 || q > 1.0)
    throw std::invalid_argument("asymptotic_rate: sifting factor must be in (0,1]");
  if (sifted_rate_hz < 0.0)
    throw std::invalid_argument("asymptotic_rate: rate must be >= 0");
  const double r =
      1.0 - binary_entropy(qber_test) - f_ec * binary_entropy(qber_key);
  return sifted_rate_hz * std::max(0.0, r);
}

WindowScan optimize_z_window(const sim::SimResult& run, const SiftParams& base,
                             const std::vector<std::int64_t>& half_widths_ps,
                             double f_ec) {
  if (half_widths_ps.empty())
    throw std::invalid_argument("optimize_z_window: no candidate widths");
  bool any = false;
  for (const auto& s : run.streams) any = any || !s.empty();
  if (!any) throw std::invalid_argument("optimize_z_window: empty calibration sample");

  WindowScan scan;
  scan.best_proxy = -std::numeric_limits<double>::infinity();
  for (const std::int64_t w : half_widths_ps) {
    SiftParams p = base;
    p.z_window_half_ps = w;
    const SiftedBlock block = sift(run, p);
    const double proxy =
        static_cast<double>(block.n_key) * (1.0 - f_ec * binary_entropy(block.qber_key()));
    scan.half_widths_ps.push_back(w);
    scan.proxy.push_back(proxy);
    scan.qber.push_back(block.qber_key());
    scan.kept.push_back(block.n_key);
    if (proxy >= scan.best_proxy) {  // ties go to the wider window
      scan.best_proxy = proxy;
      scan.best_half_width_ps = w;
    }
  }
  return scan;
}

KeyRateReport key_rate_report(const SiftedBlock& measured, std::uint64_t block_size,
                              const SecurityParams& params) {
  params.validate();
  measured.validate();
  if (measured.n_key == 0 || measured.n_test == 0 ||
      measured.acquisition_duration_s <= 0.0)
    throw std::invalid_argument("key_rate_report: empty sifted block");

  KeyRateReport rep;
  rep.qber_key = measured.qber_key();
  rep.qber_test = measured.qber_test();
  rep.sifting_factor = measured.sifting_factor;
  rep.block_size = block_size;
  const double total = static_cast<double>(measured.n_key + measured.n_test);
  rep.sifted_rate_hz = total / measured.acquisition_duration_s;
  rep.sifted_key_rate_hz =
      static_cast<double>(measured.n_key) / measured.acquisition_duration_s;

  // project the measured composition and error rates onto the target block
  SiftedBlock proj = measured;
  const double key_frac = static_cast<double>(measured.n_key) / total;
  proj.n_key = std::max<std::uint64_t>(
      1, static_cast<std::uint64_t>(std::llround(key_frac * block_size)));
  proj.n_test = std::max<std::uint64_t>(1, block_size - proj.n_key);
  proj.e_key = static_cast<std::uint64_t>(std::llround(rep.qber_key * proj.n_key));
  proj.e_test = static_cast<std::uint64_t>(std::llround(rep.qber_test * proj.n_test));

  const auto serf = serfling_key_length(proj, params);
  const auto cher = chernoff_key_length(proj, params);
  rep.key_length_serfling = serf.bits;
  rep.key_length_chernoff = cher.bits;
  rep.abort_serfling = serf.aborted;
  rep.abort_chernoff = cher.aborted;

  const double blocks_per_s = rep.sifted_rate_hz / static_cast<double>(block_size);
  rep.skr_serfling = serf.bits * blocks_per_s;
  rep.skr_chernoff = cher.bits * blocks_per_s;
  rep.skr_asymptotic = asymptotic_rate(std::max(1e-12, measured.sifting_factor),
                                       rep.sifted_key_rate_hz, rep.qber_key,
                                       rep.qber_test, params.f_ec);
  return rep;
}

std::vector<SweepRow> skr_vs_loss_sweep(const sim::ExperimentPlan& base,
                                        const SiftParams& sift_params,
                                        const std::vector<SweepPoint>& points,
                                        std::uint64_t block_size,
                                        const SecurityParams& params) {
  std::vector<SweepRow> rows;
  rows.reserve(points.size());
  for (std::size_t k = 0; k < points.size(); ++k) {
    sim::ExperimentPlan plan = base;
    plan.b.channel.loss_db += points[k].loss_db;
    plan.duration_s = points[k].duration_s;
    plan.seed = rng::derive(base.seed, 0x53EEful, k);
    plan.record_truth = false;

    const sim::SimResult run = sim::run_simulation(plan);
    const SiftedBlock block = sift(run, sift_params);

    SweepRow row;
    row.loss_db = points[k].loss_db;
    row.fiber_km_equiv = points[k].loss_db / 0.2;
    row.report = key_rate_report(block, block_size, params);
    rows.push_back(row);
  }
  return rows;
}

}  // namespace tbq::qkd
