#include "tbq/device.hpp"

#include <cmath>

namespace tbq::device {

double theta_total(const ReceiverConfig& config) {
  config.validate();
  double theta = config.theta_tps + M_PI * config.drive_voltage / config.v_pi;
  theta = std::remainder(theta, 2.0 * M_PI);  // (-pi, pi], remainder gives [-pi, pi]
  if (theta <= -M_PI) theta = M_PI;
  return theta;
}

Mat2 apply_device_visibility(const Eigen::Ref<const Mat2>& effect, double v_dev) {
  if (v_dev < 0.0 || v_dev > 1.0)
    throw std::invalid_argument("apply_device_visibility: v_dev must be in [0,1]");
  Mat2 out = effect;
  out(0, 1) *= v_dev;
  out(1, 0) *= v_dev;
  return out;
}

double per_receiver_visibility(double joint_visibility) {
  if (joint_visibility < 0.0 || joint_visibility > 1.0)
    throw std::invalid_argument("per_receiver_visibility: joint visibility must be in [0,1]");
  return std::sqrt(joint_visibility);
}

std::vector<EffectWithTiming> receiver_effects(const ReceiverConfig& config) {
  config.validate();
  const double theta = theta_total(config);
  const auto t = static_cast<std::int64_t>(std::llround(config.bin_separation_ps));
  const double v = config.device_visibility;

  Mat2 early = Mat2::Zero();
  early(0, 0) = 1.0;
  Mat2 late = Mat2::Zero();
  late(1, 1) = 1.0;

  std::vector<EffectWithTiming> out;
  switch (config.mode) {
    case SwitchMode::Superpose:
      // 1/4 I + 1/2 P decomposition by arrival peak: non-interfering early
      // (short-short) and late (long-long) paths flank the interfering
      // central peak.
      for (Port p : {Port::plus, Port::minus}) {
        out.push_back({apply_device_visibility(0.5 * interferometric_projector(theta, p), v), p, t});
        out.push_back({0.25 * early, p, 0});
        out.push_back({0.25 * late, p, 2 * t});
      }
      break;
    case SwitchMode::Overlap:
      for (Port p : {Port::plus, Port::minus})
        out.push_back({apply_device_visibility(interferometric_projector(theta, p), v), p, t});
      break;
    case SwitchMode::Reverse:
      // early bin exits via the short path, late bin via the long path;
      // output separation doubles to 2T
      for (Port p : {Port::plus, Port::minus}) {
        out.push_back({0.5 * early, p, 0});
        out.push_back({0.5 * late, p, 2 * t});
      }
      break;
  }
  return out;
}

}  // namespace tbq::device
