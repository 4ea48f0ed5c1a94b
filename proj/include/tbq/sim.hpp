#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "tbq/core.hpp"
#include "tbq/device.hpp"
#include "tbq/prbs.hpp"
#include "tbq/source.hpp"

// Monte Carlo engine: source emission -> channel loss/dispersion -> receiver
// routing -> detector response, producing per-detector time-tag streams.
// Channels are indexed A0=0, A1=1, B0=2, B1=3. The cycle range is split into
// fixed-size blocks with independently derived random substreams, so results
// are bit-identical for a given (plan, seed) regardless of worker count.

namespace tbq::sim {

inline constexpr int kNumChannels = 4;
inline constexpr std::uint64_t kBlockCycles = 1u << 20;

struct ChannelModel {
  double loss_db = 0.0;
  double fiber_km = 0.0;
  double beta2_ps2_per_km = -21.7;

  void validate() const {
    if (loss_db < 0.0) throw std::invalid_argument("ChannelModel: loss_db must be >= 0");
    if (fiber_km < 0.0) throw std::invalid_argument("ChannelModel: fiber_km must be >= 0");
  }
};

struct DetectorModel {
  double efficiency = 0.8;
  double dark_counts_per_s = 100.0;
  double jitter_fwhm_ps = 50.0;
  double dead_time_ns = 25.0;
  double max_rate_hz = 1.5e6;

  void validate() const {
    if (efficiency < 0.0 || efficiency > 1.0)
      throw std::invalid_argument("DetectorModel: efficiency must be in [0,1]");
    if (dark_counts_per_s < 0.0 || jitter_fwhm_ps < 0.0 || dead_time_ns < 0.0 ||
        max_rate_hz < 0.0)
      throw std::invalid_argument("DetectorModel: parameters must be >= 0");
  }
};

/// Gaussian-pulse FWHM after group-velocity dispersion over the channel.
double dispersion_broadened_width(double pulse_fwhm_ps, const ChannelModel& channel);

/// Drive voltage that toggles the total phase between 0 (bit 0, X) and
/// pi/2 (bit 1, Y); requires the receiver biased at theta_TPS = pi/4.
double basis_phase(int bit, const device::ReceiverConfig& receiver);

enum class PolicyKind { FixedPhase, PassiveSplit, ActivePrbs };

struct BasisPolicy {
  PolicyKind kind = PolicyKind::FixedPhase;
  // PassiveSplit
  double p_z = 0.5;
  // ActivePrbs
  std::array<int, 2> prbs_order{7, 9};
  std::array<std::uint16_t, 2> prbs_seed{0x5a, 0x1f3};
};

struct SideConfig {
  ChannelModel channel;
  device::ReceiverConfig receiver;
  double device_arm_loss_db = 0.0;  // path loss on the receiver arm, excluding
                                    // channel loss and device insertion loss
  double direct_arm_loss_db = 0.0;  // direct-detection (Z) arm, passive only
};

struct ExperimentPlan {
  source::PumpConfig pump;
  source::PairStatistics stats;
  SideConfig a, b;
  std::array<DetectorModel, kNumChannels> detectors{};
  BasisPolicy policy;
  double duration_s = 0.01;
  std::uint64_t seed = 1;
  bool record_truth = true;

  void validate() const;
  std::int64_t clock_period_ps() const;
  std::uint64_t cycles() const;
};

// Arm labels recorded in truth/basis logs. For PassiveSplit, 0 = device (X)
// and 1 = direct time-of-arrival (Z); for ActivePrbs, 0 = X and 1 = Y.
inline constexpr std::uint8_t kArmDevice = 0;
inline constexpr std::uint8_t kArmDirect = 1;

/// Recomputable per-cycle basis assignment shared by the engine and the
/// sifter: PassiveSplit draws counter-hashed Bernoulli(p_z) per (side, cycle),
/// ActivePrbs evaluates the side's PRBS at the cycle index.
class BasisLog {
 public:
  BasisLog() = default;
  BasisLog(const BasisPolicy& policy, std::uint64_t seed) : policy_(policy), seed_(seed) {}

  std::uint8_t arm(int side, std::uint64_t cycle) const;
  const BasisPolicy& policy() const { return policy_; }

 private:
  BasisPolicy policy_;
  std::uint64_t seed_ = 0;
};

struct ClickTruth {
  std::uint64_t cycle = 0;
  std::uint32_t pair_serial = 0;  // 1-based pair index within its cycle; 0 = dark count
  std::uint8_t arm = 0;
  std::uint8_t outcome_bit = 0;
};

struct SimResult {
  std::array<std::vector<std::int64_t>, kNumChannels> streams;  // ps, sorted, dead-time filtered
  std::array<std::vector<ClickTruth>, kNumChannels> truth;      // parallel to streams
  BasisLog basis;
  std::uint64_t cycles = 0;
  std::int64_t clock_period_ps = 0;
  std::int64_t bin_separation_ps = 0;
  double duration_s = 0.0;
  std::uint64_t pairs_emitted = 0;
  std::array<std::uint64_t, kNumChannels> clicks_raw{};
  std::array<std::uint64_t, kNumChannels> clicks_kept{};
  std::array<double, kNumChannels> click_rate_hz{};
  std::array<bool, kNumChannels> saturated{};
  bool saturation_warning = false;
};

SimResult run_simulation(const ExperimentPlan& plan);

/// Worker cap: TBQ_THREADS env var if set, else hardware concurrency (max 8).
unsigned worker_count();

// Time-tag stream file: header "# timetag v1 seed=<u64>", then one
// "channel<TAB>timestamp_ps" record per line, monotone per channel.
void write_timetags(std::ostream& os, const SimResult& result, std::uint64_t seed);
void write_timetags_file(const std::string& path, const SimResult& result,
                         std::uint64_t seed);

struct TimetagFile {
  std::array<std::vector<std::int64_t>, kNumChannels> streams;
  std::uint64_t seed = 0;
};

TimetagFile read_timetags_file(const std::string& path);

inline const char* channel_name(int ch) {
  static const char* names[kNumChannels] = {"A0", "A1", "B0", "B1"};
  return names[ch];
}

}  // namespace tbq::sim
