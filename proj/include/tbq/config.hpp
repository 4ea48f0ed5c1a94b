#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "tbq/qkd.hpp"
#include "tbq/sim.hpp"

// Strict JSON run configurations: unknown keys are errors so simulated
// "experiments" stay auditable. Every command document carries a "plan"
// object (except bounds_compare, which is purely analytic).

namespace tbq::config {

using nlohmann::json;

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Throws ConfigError when obj holds a key outside `allowed`.
void check_keys(const json& obj, const std::vector<std::string>& allowed,
                const std::string& context);

json load_json_file(const std::string& path);

sim::ExperimentPlan plan_from_json(const json& j);

struct FringeScan {
  int side = 0;  // receiver whose phase is scanned
  int points = 24;
  double theta_min = -M_PI;
  double theta_max = M_PI;
  double fixed_theta_other = 0.0;
  std::uint64_t cycles_per_point = 2'000'000;
  bool heater_abscissa = false;  // emit heater power instead of phase
  double p_pi_mw = 23.5;
  std::int64_t coincidence_window_ps = 300;
};

struct ChshConfig {
  std::uint64_t cycles_per_setting = 20'000'000;
  std::int64_t coincidence_window_ps = 300;
};

struct TomoConfig {
  std::uint64_t cycles_per_setting = 20'000'000;
};

struct QkdConfig {
  std::uint64_t block_size = 1'000'000;
  qkd::SecurityParams security;
  bool optimize_window = false;
  std::int64_t z_window_half_ps = 0;
  std::int64_t x_window_half_ps = 0;
  std::int64_t window_min_ps = 10;
  std::int64_t window_max_ps = 50;
  std::int64_t window_step_ps = 2;
};

struct SweepConfig {
  std::vector<qkd::SweepPoint> points;
  std::uint64_t block_size = 90'000;
  qkd::SecurityParams security;
  std::int64_t z_window_half_ps = 0;
  std::int64_t x_window_half_ps = 0;
};

struct BoundsConfig {
  std::vector<std::uint64_t> block_sizes;
  double qber_key = 0.0402;
  double qber_test = 0.061;
  double key_fraction = 0.5;
  double sifted_rate_hz = 2500.0;
  qkd::SecurityParams security;
};

FringeScan fringe_from_json(const json& j);
ChshConfig chsh_from_json(const json& j);
TomoConfig tomo_from_json(const json& j);
QkdConfig qkd_from_json(const json& j);
SweepConfig sweep_from_json(const json& j);
BoundsConfig bounds_from_json(const json& j);

}  // namespace tbq::config
