#include "tbq/sim.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <numeric>
#include <optional>
#include <sstream>
#include <thread>

#include "tbq/rng.hpp"

namespace tbq::sim {

namespace {

constexpr std::uint64_t kTagBlock = 0xB10C;
constexpr std::uint64_t kTagDark = 0xDA4C;
constexpr std::uint64_t kTagBasis = 0xBA51;

constexpr double kFwhmToSigma = 2.0 * 1.4142135623730951 * 0.8325546111576977;  // 2 sqrt(2 ln 2)

double db_transmission(double db) { return std::pow(10.0, -db / 10.0); }

}  // namespace

double dispersion_broadened_width(double pulse_fwhm_ps, const ChannelModel& channel) {
  channel.validate();
  if (pulse_fwhm_ps <= 0.0)
    throw std::invalid_argument("dispersion_broadened_width: pulse width must be > 0");
  const double x = 4.0 * std::log(2.0) * channel.beta2_ps2_per_km * channel.fiber_km /
                   (pulse_fwhm_ps * pulse_fwhm_ps);
  return pulse_fwhm_ps * std::sqrt(1.0 + x * x);
}

double basis_phase(int bit, const device::ReceiverConfig& receiver) {
  if (bit != 0 && bit != 1) throw std::invalid_argument("basis_phase: bit must be 0 or 1");
  if (std::abs(std::remainder(receiver.theta_tps - M_PI / 4, 2.0 * M_PI)) > 1e-9)
    throw std::invalid_argument("basis_phase: receiver must be biased at theta_TPS = pi/4");
  return (bit ? 1.0 : -1.0) * receiver.v_pi / 4.0;
}

void ExperimentPlan::validate() const {
  pump.validate();
  stats.validate();
  for (const SideConfig* s : {&a, &b}) {
    s->channel.validate();
    s->receiver.validate();
    if (s->device_arm_loss_db < 0.0 || s->direct_arm_loss_db < 0.0)
      throw std::invalid_argument("ExperimentPlan: arm losses must be >= 0");
    if (std::abs(s->receiver.bin_separation_ps - pump.bin_separation_ps) > 1e-9)
      throw std::invalid_argument(
          "ExperimentPlan: receiver and pump bin separations must agree");
  }
  for (const auto& d : detectors) d.validate();
  if (duration_s <= 0.0) throw std::invalid_argument("ExperimentPlan: duration must be > 0");
  if (policy.kind == PolicyKind::PassiveSplit && (policy.p_z < 0.0 || policy.p_z > 1.0))
    throw std::invalid_argument("ExperimentPlan: p_z must be in [0,1]");
  if (policy.kind == PolicyKind::ActivePrbs)
    for (int s = 0; s < 2; ++s)
      PrbsGenerator(policy.prbs_order[s], policy.prbs_seed[s]);  // validates
}

std::int64_t ExperimentPlan::clock_period_ps() const {
  return std::llround(1e12 / pump.rep_rate_hz);
}

std::uint64_t ExperimentPlan::cycles() const {
  return static_cast<std::uint64_t>(std::llround(duration_s * pump.rep_rate_hz));
}

std::uint8_t BasisLog::arm(int side, std::uint64_t cycle) const {
  switch (policy_.kind) {
    case PolicyKind::FixedPhase:
      return kArmDevice;
    case PolicyKind::PassiveSplit:
      return rng::uniform_at(seed_, kTagBasis, static_cast<std::uint64_t>(side), cycle) <
                     policy_.p_z
                 ? kArmDirect
                 : kArmDevice;
    case PolicyKind::ActivePrbs:
      return static_cast<std::uint8_t>(
          PrbsGenerator::bit_at(policy_.prbs_order[side], policy_.prbs_seed[side], cycle));
  }
  return kArmDevice;
}

unsigned worker_count() {
  unsigned n = std::thread::hardware_concurrency();
  if (n == 0) n = 1;
  n = std::min(n, 8u);
  if (const char* env = std::getenv("TBQ_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v >= 1) n = static_cast<unsigned>(std::min<long>(v, 64));
  }
  return n;
}

namespace {

struct Outcome {
  Mat2 effect;
  int channel = 0;
  std::int64_t offset_ps = 0;
  std::uint8_t bit = 0;
};

struct Arm {
  std::vector<Outcome> outcomes;
  double transmission = 1.0;        // channel + arm + insertion, before detector
  std::vector<double> marginal_cum;  // cumulative Born weights of the side marginal
};

struct JointTable {
  std::vector<double> cum;
  std::vector<std::pair<std::uint8_t, std::uint8_t>> pairs;
};

Mat4 tensor(const Mat2& x, const Mat2& y) {
  Mat4 out;
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c) out(r, c) = x(r / 2, c / 2) * y(r % 2, c % 2);
  return out;
}

std::vector<Outcome> device_outcomes(const device::ReceiverConfig& cfg, int side) {
  const int base = side * 2;
  const auto t = static_cast<std::int64_t>(std::llround(cfg.bin_separation_ps));
  std::vector<Outcome> out;
  for (const auto& e : device::receiver_effects(cfg)) {
    Outcome o;
    o.effect = e.effect;
    o.channel = base + (e.port == Port::plus ? 0 : 1);
    o.offset_ps = e.time_offset_ps;
    switch (cfg.mode) {
      case device::SwitchMode::Overlap:
        o.bit = e.port == Port::plus ? 0 : 1;
        break;
      case device::SwitchMode::Reverse:
        o.bit = e.time_offset_ps == 0 ? 0 : 1;
        break;
      case device::SwitchMode::Superpose:
        // central peak carries the interferometric bit; outer peaks carry
        // the bin label
        if (e.time_offset_ps == t)
          o.bit = e.port == Port::plus ? 0 : 1;
        else
          o.bit = e.time_offset_ps == 0 ? 0 : 1;
        break;
    }
    out.push_back(std::move(o));
  }
  return out;
}

std::vector<Outcome> direct_outcomes(double bin_separation_ps, int side) {
  const int base = side * 2;
  const auto t = static_cast<std::int64_t>(std::llround(bin_separation_ps));
  Mat2 early = Mat2::Zero();
  early(0, 0) = 1.0;
  Mat2 late = Mat2::Zero();
  late(1, 1) = 1.0;
  return {{early, base, 0, 0}, {late, base, t, 1}};
}

struct EngineTables {
  Mat4 rho;
  std::array<std::vector<Arm>, 2> arms;                       // [side][arm]
  std::array<std::array<JointTable, 2>, 2> joint;             // [arm_a][arm_b]
  std::array<double, kNumChannels> det_efficiency{};
  std::array<double, kNumChannels> sigma_ps{};                // jitter + wavepacket spread
  std::array<std::int64_t, kNumChannels> dead_ps{};
};

EngineTables build_tables(const ExperimentPlan& plan) {
  EngineTables t;
  t.rho = projector(source::prepared_state(plan.pump.prep));

  for (int side = 0; side < 2; ++side) {
    const SideConfig& sc = side == 0 ? plan.a : plan.b;
    const double dev_tx =
        db_transmission(sc.channel.loss_db + sc.device_arm_loss_db + sc.receiver.insertion_loss_db);
    const double dir_tx = db_transmission(sc.channel.loss_db + sc.direct_arm_loss_db);

    std::vector<Arm>& arms = t.arms[side];
    switch (plan.policy.kind) {
      case PolicyKind::FixedPhase:
        arms.push_back({device_outcomes(sc.receiver, side), dev_tx, {}});
        break;
      case PolicyKind::PassiveSplit:
        arms.push_back({device_outcomes(sc.receiver, side), dev_tx, {}});
        arms.push_back({direct_outcomes(plan.pump.bin_separation_ps, side), dir_tx, {}});
        break;
      case PolicyKind::ActivePrbs: {
        for (int bit = 0; bit < 2; ++bit) {
          device::ReceiverConfig cfg = sc.receiver;
          cfg.mode = device::SwitchMode::Overlap;
          cfg.drive_voltage = basis_phase(bit, sc.receiver);
          arms.push_back({device_outcomes(cfg, side), dev_tx, {}});
        }
        break;
      }
    }

    const Mat2 reduced =
        partial_trace(t.rho, side == 0 ? Subsystem::A : Subsystem::B);
    for (Arm& arm : arms) {
      double cum = 0.0;
      for (const Outcome& o : arm.outcomes) {
        cum += born_probability(reduced, o.effect);
        arm.marginal_cum.push_back(cum);
      }
      if (std::abs(cum - 1.0) > 1e-9)
        throw std::runtime_error("simulation arm effects are not complete");
    }
  }

  for (std::size_t ia = 0; ia < t.arms[0].size(); ++ia)
    for (std::size_t ib = 0; ib < t.arms[1].size(); ++ib) {
      JointTable& jt = t.joint[ia][ib];
      double cum = 0.0;
      const auto& oa = t.arms[0][ia].outcomes;
      const auto& ob = t.arms[1][ib].outcomes;
      for (std::size_t i = 0; i < oa.size(); ++i)
        for (std::size_t j = 0; j < ob.size(); ++j) {
          cum += born_probability(t.rho, tensor(oa[i].effect, ob[j].effect));
          jt.cum.push_back(cum);
          jt.pairs.emplace_back(static_cast<std::uint8_t>(i), static_cast<std::uint8_t>(j));
        }
      if (std::abs(cum - 1.0) > 1e-9)
        throw std::runtime_error("joint effect set is not complete");
    }

  for (int ch = 0; ch < kNumChannels; ++ch) {
    const SideConfig& sc = ch < 2 ? plan.a : plan.b;
    const DetectorModel& det = plan.detectors[ch];
    t.det_efficiency[ch] = det.efficiency;
    const double sigma_det = det.jitter_fwhm_ps / kFwhmToSigma;
    const double sigma_wp =
        dispersion_broadened_width(plan.pump.pulse_fwhm_ps, sc.channel) / kFwhmToSigma;
    t.sigma_ps[ch] = std::sqrt(sigma_det * sigma_det + sigma_wp * sigma_wp);
    t.dead_ps[ch] = std::llround(det.dead_time_ns * 1000.0);
  }
  return t;
}

int sample_cum(const std::vector<double>& cum, double u) {
  const double target = u * cum.back();
  const auto it = std::upper_bound(cum.begin(), cum.end(), target);
  return static_cast<int>(std::min<std::ptrdiff_t>(it - cum.begin(),
                                                   static_cast<std::ptrdiff_t>(cum.size()) - 1));
}

int truncated_poisson_ge1(double mu, double exp_neg_mu, double u) {
  const double target = u * (1.0 - exp_neg_mu);
  double pk = exp_neg_mu * mu;
  double cum = pk;
  int k = 1;
  while (cum < target && k < 100) {
    ++k;
    pk *= mu / k;
    cum += pk;
  }
  return k;
}

struct BlockOutput {
  std::array<std::vector<std::int64_t>, kNumChannels> clicks;
  std::array<std::vector<ClickTruth>, kNumChannels> truth;
  std::uint64_t pairs = 0;
};

// Incremental per-side basis lookup for the emission loop; cycles are
// queried in nondecreasing order within a block.
class ArmCursor {
 public:
  ArmCursor(const ExperimentPlan& plan, int side)
      : policy_(plan.policy), side_(side), seed_(plan.seed) {
    if (policy_.kind == PolicyKind::ActivePrbs)
      prbs_.emplace(policy_.prbs_order[side], policy_.prbs_seed[side]);
  }

  std::uint8_t arm_at(std::uint64_t cycle) {
    switch (policy_.kind) {
      case PolicyKind::FixedPhase:
        return kArmDevice;
      case PolicyKind::PassiveSplit:
        return rng::uniform_at(seed_, kTagBasis, static_cast<std::uint64_t>(side_), cycle) <
                       policy_.p_z
                   ? kArmDirect
                   : kArmDevice;
      case PolicyKind::ActivePrbs:
        prbs_->advance(cycle - pos_);
        pos_ = cycle;
        return static_cast<std::uint8_t>((prbs_->state() >> (prbs_->order() - 1)) & 1);
    }
    return kArmDevice;
  }

 private:
  BasisPolicy policy_;
  int side_;
  std::uint64_t seed_;
  std::uint64_t pos_ = 0;
  std::optional<PrbsGenerator> prbs_;
};

BlockOutput run_block(const ExperimentPlan& plan, const EngineTables& tables,
                      std::uint64_t block_index, std::uint64_t c0, std::uint64_t c1) {
  BlockOutput out;
  const std::int64_t period = plan.clock_period_ps();
  const double mu = plan.stats.mu;

  auto rng = rng::stream(plan.seed, kTagBlock, block_index);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  std::normal_distribution<double> gauss(0.0, 1.0);

  auto emit_click = [&](const Outcome& o, std::uint64_t cycle, std::uint32_t serial,
                        std::uint8_t arm) {
    const double jitter = gauss(rng) * tables.sigma_ps[o.channel];
    const std::int64_t ts =
        static_cast<std::int64_t>(cycle) * period + o.offset_ps + std::llround(jitter);
    out.clicks[o.channel].push_back(ts);
    if (plan.record_truth)
      out.truth[o.channel].push_back({cycle, serial, arm, o.bit});
  };

  if (mu > 0.0) {
    ArmCursor cursor_a(plan, 0), cursor_b(plan, 1);
    const double exp_neg_mu = std::exp(-mu);
    const double p_emit = 1.0 - exp_neg_mu;
    const double log1m = std::log(1.0 - p_emit);
    std::uint64_t cycle = c0;
    while (true) {
      const double u = 1.0 - uni(rng);  // (0, 1]
      const auto gap = static_cast<std::uint64_t>(std::log(u) / log1m);
      if (gap > c1 - cycle) break;
      cycle += gap;
      if (cycle >= c1) break;

      const int k = truncated_poisson_ge1(mu, exp_neg_mu, uni(rng));
      const std::uint8_t arm_a = cursor_a.arm_at(cycle);
      const std::uint8_t arm_b = cursor_b.arm_at(cycle);
      const Arm& aa = tables.arms[0][arm_a];
      const Arm& ab = tables.arms[1][arm_b];
      const JointTable& jt = tables.joint[arm_a][arm_b];

      for (int pair = 0; pair < k; ++pair) {
        ++out.pairs;
        const auto serial = static_cast<std::uint32_t>(pair + 1);
        const bool live_a = uni(rng) < aa.transmission;
        const bool live_b = uni(rng) < ab.transmission;
        if (!live_a && !live_b) continue;
        if (live_a && live_b) {
          const auto [i, j] = jt.pairs[sample_cum(jt.cum, uni(rng))];
          const Outcome& oa = aa.outcomes[i];
          const Outcome& ob = ab.outcomes[j];
          if (uni(rng) < tables.det_efficiency[oa.channel]) emit_click(oa, cycle, serial, arm_a);
          if (uni(rng) < tables.det_efficiency[ob.channel]) emit_click(ob, cycle, serial, arm_b);
        } else if (live_a) {
          const Outcome& oa = aa.outcomes[sample_cum(aa.marginal_cum, uni(rng))];
          if (uni(rng) < tables.det_efficiency[oa.channel]) emit_click(oa, cycle, serial, arm_a);
        } else {
          const Outcome& ob = ab.outcomes[sample_cum(ab.marginal_cum, uni(rng))];
          if (uni(rng) < tables.det_efficiency[ob.channel]) emit_click(ob, cycle, serial, arm_b);
        }
      }
      ++cycle;
      if (cycle >= c1) break;
    }
  }

  // dark counts, Poisson per detector over the block window
  const std::int64_t t0 = static_cast<std::int64_t>(c0) * period;
  const std::int64_t t1 = static_cast<std::int64_t>(c1) * period;
  const double window_s = static_cast<double>(t1 - t0) * 1e-12;
  BasisLog basis(plan.policy, plan.seed);
  for (int ch = 0; ch < kNumChannels; ++ch) {
    const double rate = plan.detectors[ch].dark_counts_per_s;
    if (rate <= 0.0) continue;
    auto dark_rng = rng::stream(plan.seed, kTagDark, static_cast<std::uint64_t>(ch), block_index);
    std::poisson_distribution<int> pd(rate * window_s);
    std::uniform_real_distribution<double> uni01(0.0, 1.0);
    const int n = pd(dark_rng);
    for (int i = 0; i < n; ++i) {
      const auto ts =
          t0 + static_cast<std::int64_t>(uni01(dark_rng) * static_cast<double>(t1 - t0));
      out.clicks[ch].push_back(ts);
      if (plan.record_truth) {
        const auto cycle = static_cast<std::uint64_t>(ts / period);
        out.truth[ch].push_back({cycle, 0, basis.arm(ch < 2 ? 0 : 1, cycle), 0});
      }
    }
  }
  return out;
}

}  // namespace

SimResult run_simulation(const ExperimentPlan& plan) {
  plan.validate();
  const EngineTables tables = build_tables(plan);

  SimResult res;
  res.cycles = plan.cycles();
  res.clock_period_ps = plan.clock_period_ps();
  res.bin_separation_ps = std::llround(plan.pump.bin_separation_ps);
  res.duration_s = plan.duration_s;
  res.basis = BasisLog(plan.policy, plan.seed);

  const std::uint64_t n_blocks = (res.cycles + kBlockCycles - 1) / kBlockCycles;
  std::vector<BlockOutput> blocks(n_blocks);

  const unsigned workers =
      std::max(1u, std::min<unsigned>(worker_count(), static_cast<unsigned>(n_blocks)));
  std::atomic<std::uint64_t> next{0};
  auto work = [&]() {
    while (true) {
      const std::uint64_t b = next.fetch_add(1);
      if (b >= n_blocks) break;
      const std::uint64_t c0 = b * kBlockCycles;
      const std::uint64_t c1 = std::min<std::uint64_t>(res.cycles, c0 + kBlockCycles);
      blocks[b] = run_block(plan, tables, b, c0, c1);
    }
  };
  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (unsigned i = 0; i < workers; ++i) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }

  for (int ch = 0; ch < kNumChannels; ++ch) {
    std::size_t total = 0;
    for (const auto& b : blocks) total += b.clicks[ch].size();
    std::vector<std::int64_t> merged;
    std::vector<ClickTruth> merged_truth;
    merged.reserve(total);
    if (plan.record_truth) merged_truth.reserve(total);
    for (const auto& b : blocks) {
      merged.insert(merged.end(), b.clicks[ch].begin(), b.clicks[ch].end());
      if (plan.record_truth)
        merged_truth.insert(merged_truth.end(), b.truth[ch].begin(), b.truth[ch].end());
    }

    std::vector<std::uint32_t> order(merged.size());
    std::iota(order.begin(), order.end(), 0u);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::uint32_t x, std::uint32_t y) { return merged[x] < merged[y]; });

    res.clicks_raw[ch] = merged.size();
    auto& stream = res.streams[ch];
    auto& truth = res.truth[ch];
    stream.reserve(merged.size());
    std::int64_t last_kept = std::numeric_limits<std::int64_t>::min() / 2;
    for (const std::uint32_t idx : order) {
      const std::int64_t t = merged[idx];
      if (t - last_kept < tables.dead_ps[ch] && !stream.empty()) continue;
      stream.push_back(t);
      if (plan.record_truth) truth.push_back(merged_truth[idx]);
      last_kept = t;
    }
    res.clicks_kept[ch] = stream.size();
    res.click_rate_hz[ch] = static_cast<double>(stream.size()) / plan.duration_s;
    res.saturated[ch] = res.click_rate_hz[ch] > plan.detectors[ch].max_rate_hz;
    res.saturation_warning = res.saturation_warning || res.saturated[ch];
  }
  for (const auto& b : blocks) res.pairs_emitted += b.pairs;
  return res;
}

void write_timetags(std::ostream& os, const SimResult& result, std::uint64_t seed) {
  os << "# timetag v1 seed=" << seed << "\n";
  for (int ch = 0; ch < kNumChannels; ++ch)
    for (const std::int64_t t : result.streams[ch])
      os << channel_name(ch) << '\t' << t << '\n';
}

void write_timetags_file(const std::string& path, const SimResult& result,
                         std::uint64_t seed) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open " + path + " for writing");
  write_timetags(os, result, seed);
}

TimetagFile read_timetags_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open " + path);
  TimetagFile out;
  std::string header;
  std::getline(is, header);
  const std::string prefix = "# timetag v1 seed=";
  if (header.rfind(prefix, 0) != 0)
    throw std::runtime_error("bad timetag header in " + path);
  out.seed = std::strtoull(header.c_str() + prefix.size(), nullptr, 10);
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos) throw std::runtime_error("bad timetag record: " + line);
    const std::string ch = line.substr(0, tab);
    int idx = -1;
    for (int c = 0; c < kNumChannels; ++c)
      if (ch == channel_name(c)) idx = c;
    if (idx < 0) throw std::runtime_error("unknown channel: " + ch);
    out.streams[idx].push_back(std::strtoll(line.c_str() + tab + 1, nullptr, 10));
  }
  for (const auto& s : out.streams)
    if (!std::is_sorted(s.begin(), s.end()))
      throw std::runtime_error("timetag stream not monotone in " + path);
  return out;
}

}  // namespace tbq::sim
