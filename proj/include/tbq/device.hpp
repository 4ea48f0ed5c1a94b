#pragma once

#include <cstdint>
#include <vector>

#include "tbq/core.hpp"

// Model of one TFLN receiver: an operating mode plus phase/nonideality
// settings induce a set of detection effects with output arrival-time
// offsets. Offsets are picoseconds relative to the clock-aligned arrival of
// the early bin; the unbalanced-MZI delay T adds per pass through the long
// arm.

namespace tbq::device {

enum class SwitchMode {
  Superpose,  // mode 1: MZM at quadrature, three-peak pattern
  Overlap,    // mode 2: fast switch overlaps the bins, single peak
  Reverse,    // mode 3: inverted switch, computational basis, 2T split
};

struct ReceiverConfig {
  SwitchMode mode = SwitchMode::Overlap;
  double theta_tps = 0.0;          // static thermal phase, radians
  double v_pi = 3.37;              // volts for a pi phase shift
  double drive_voltage = 0.0;      // instantaneous EO drive, volts
  double insertion_loss_db = 0.0;
  double device_visibility = 1.0;  // scalar coherence retention in [0,1]
  double bin_separation_ps = 100.0;

  void validate() const {
    if (bin_separation_ps <= 0.0)
      throw std::invalid_argument("ReceiverConfig: bin_separation_ps must be > 0");
    if (device_visibility < 0.0 || device_visibility > 1.0)
      throw std::invalid_argument("ReceiverConfig: device_visibility must be in [0,1]");
    if (v_pi <= 0.0) throw std::invalid_argument("ReceiverConfig: v_pi must be > 0");
    if (insertion_loss_db < 0.0)
      throw std::invalid_argument("ReceiverConfig: insertion_loss_db must be >= 0");
  }
};

struct EffectWithTiming {
  Mat2 effect;
  Port port = Port::plus;
  std::int64_t time_offset_ps = 0;
};

/// Total interferometer phase theta_TPS + pi * V / V_pi, wrapped to (-pi, pi].
double theta_total(const ReceiverConfig& config);

/// Scales the off-diagonal (coherence) entries of an effect by v_dev.
Mat2 apply_device_visibility(const Eigen::Ref<const Mat2>& effect, double v_dev);

/// Per-receiver coherence factor that yields a given joint two-receiver
/// fringe visibility when both receivers are equally degraded.
double per_receiver_visibility(double joint_visibility);

/// Full outcome set of one receiver; effects sum to the identity.
std::vector<EffectWithTiming> receiver_effects(const ReceiverConfig& config);

}  // namespace tbq::device
