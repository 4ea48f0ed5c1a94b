#include "tbq/config.hpp"

#include <fstream>

namespace tbq::config {

namespace {

double num(const json& obj, const std::string& key, double fallback) {
  if (!obj.contains(key)) return fallback;
  if (!obj[key].is_number()) throw ConfigError("field '" + key + "' must be a number");
  return obj[key].get<double>();
}

std::uint64_t unum(const json& obj, const std::string& key, std::uint64_t fallback) {
  if (!obj.contains(key)) return fallback;
  if (!obj[key].is_number()) throw ConfigError("field '" + key + "' must be a number");
  const double v = obj[key].get<double>();
  if (v < 0) throw ConfigError("field '" + key + "' must be nonnegative");
  return static_cast<std::uint64_t>(std::llround(v));
}

std::string str(const json& obj, const std::string& key, const std::string& fallback) {
  if (!obj.contains(key)) return fallback;
  if (!obj[key].is_string()) throw ConfigError("field '" + key + "' must be a string");
  return obj[key].get<std::string>();
}

bool flag(const json& obj, const std::string& key, bool fallback) {
  if (!obj.contains(key)) return fallback;
  if (!obj[key].is_boolean()) throw ConfigError("field '" + key + "' must be a boolean");
  return obj[key].get<bool>();
}

device::SwitchMode mode_from_string(const std::string& s) {
  if (s == "superpose") return device::SwitchMode::Superpose;
  if (s == "overlap") return device::SwitchMode::Overlap;
  if (s == "reverse") return device::SwitchMode::Reverse;
  throw ConfigError("receiver mode must be superpose|overlap|reverse, got '" + s + "'");
}

sim::ChannelModel channel_from_json(const json& j, const std::string& ctx) {
  check_keys(j, {"loss_db", "fiber_km", "beta2_ps2_per_km"}, ctx);
  sim::ChannelModel c;
  c.loss_db = num(j, "loss_db", 0.0);
  c.fiber_km = num(j, "fiber_km", 0.0);
  c.beta2_ps2_per_km = num(j, "beta2_ps2_per_km", -21.7);
  return c;
}

device::ReceiverConfig receiver_from_json(const json& j, double bin_separation_ps,
                                          const std::string& ctx) {
  check_keys(j,
             {"mode", "theta_tps", "v_pi", "drive_voltage", "insertion_loss_db",
              "device_visibility"},
             ctx);
  device::ReceiverConfig r;
  r.mode = mode_from_string(str(j, "mode", "overlap"));
  r.theta_tps = num(j, "theta_tps", 0.0);
  r.v_pi = num(j, "v_pi", 3.37);
  r.drive_voltage = num(j, "drive_voltage", 0.0);
  r.insertion_loss_db = num(j, "insertion_loss_db", 0.0);
  r.device_visibility = num(j, "device_visibility", 1.0);
  r.bin_separation_ps = bin_separation_ps;
  return r;
}

sim::SideConfig side_from_json(const json& j, double bin_separation_ps,
                               const std::string& ctx) {
  check_keys(j, {"channel", "receiver", "device_arm_loss_db", "direct_arm_loss_db"}, ctx);
  sim::SideConfig s;
  if (j.contains("channel")) s.channel = channel_from_json(j["channel"], ctx + ".channel");
  if (j.contains("receiver"))
    s.receiver = receiver_from_json(j["receiver"], bin_separation_ps, ctx + ".receiver");
  else
    s.receiver.bin_separation_ps = bin_separation_ps;
  s.device_arm_loss_db = num(j, "device_arm_loss_db", 0.0);
  s.direct_arm_loss_db = num(j, "direct_arm_loss_db", 0.0);
  return s;
}

sim::DetectorModel detector_from_json(const json& j, const std::string& ctx) {
  check_keys(j,
             {"efficiency", "dark_counts_per_s", "jitter_fwhm_ps", "dead_time_ns",
              "max_rate_hz"},
             ctx);
  sim::DetectorModel d;
  d.efficiency = num(j, "efficiency", 0.8);
  d.dark_counts_per_s = num(j, "dark_counts_per_s", 100.0);
  d.jitter_fwhm_ps = num(j, "jitter_fwhm_ps", 50.0);
  d.dead_time_ns = num(j, "dead_time_ns", 25.0);
  d.max_rate_hz = num(j, "max_rate_hz", 1.5e6);
  return d;
}

qkd::SecurityParams security_from_json(const json& j, const std::string& ctx) {
  check_keys(j, {"eps_sec", "eps_cor", "f_ec"}, ctx);
  qkd::SecurityParams p;
  p.eps_sec = num(j, "eps_sec", 1e-10);
  p.eps_cor = num(j, "eps_cor", 1e-10);
  p.f_ec = num(j, "f_ec", 1.16);
  p.validate();
  return p;
}

}  // namespace

void check_keys(const json& obj, const std::vector<std::string>& allowed,
                const std::string& context) {
  if (!obj.is_object()) throw ConfigError(context + " must be a JSON object");
  for (const auto& [key, value] : obj.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
      throw ConfigError("unknown key '" + key + "' in " + context);
  }
}

json load_json_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot open config file: " + path);
  json j;
  try {
    is >> j;
  } catch (const std::exception& e) {
    throw ConfigError("config parse error in " + path + ": " + e.what());
  }
  return j;
}

sim::ExperimentPlan plan_from_json(const json& j) {
  check_keys(j,
             {"clock_rate_hz", "bin_separation_ps", "pulse_fwhm_ps", "state", "mu",
              "side_a", "side_b", "detectors", "basis_policy", "duration_s", "seed",
              "record_truth"},
             "plan");
  sim::ExperimentPlan plan;
  plan.pump.rep_rate_hz = num(j, "clock_rate_hz", 1e9);
  plan.pump.bin_separation_ps = num(j, "bin_separation_ps", 100.0);
  plan.pump.pulse_fwhm_ps = num(j, "pulse_fwhm_ps", 9.2);
  if (j.contains("state")) {
    check_keys(j["state"], {"alpha", "beta", "theta_s"}, "plan.state");
    plan.pump.prep.alpha = num(j["state"], "alpha", 1.0 / std::sqrt(2.0));
    plan.pump.prep.beta = num(j["state"], "beta", 1.0 / std::sqrt(2.0));
    plan.pump.prep.theta_s = num(j["state"], "theta_s", 0.0);
  }
  plan.stats.mu = num(j, "mu", 0.01);

  const double bin = plan.pump.bin_separation_ps;
  if (j.contains("side_a")) plan.a = side_from_json(j["side_a"], bin, "plan.side_a");
  else plan.a.receiver.bin_separation_ps = bin;
  if (j.contains("side_b")) plan.b = side_from_json(j["side_b"], bin, "plan.side_b");
  else plan.b.receiver.bin_separation_ps = bin;

  if (j.contains("detectors")) {
    const json& d = j["detectors"];
    if (d.is_array()) {
      if (d.size() != 4) throw ConfigError("plan.detectors array must have 4 entries");
      for (int i = 0; i < 4; ++i)
        plan.detectors[i] = detector_from_json(d[i], "plan.detectors[" + std::to_string(i) + "]");
    } else {
      const auto one = detector_from_json(d, "plan.detectors");
      plan.detectors.fill(one);
    }
  }

  if (j.contains("basis_policy")) {
    const json& p = j["basis_policy"];
    check_keys(p,
               {"kind", "p_z", "prbs_order_a", "prbs_order_b", "prbs_seed_a",
                "prbs_seed_b"},
               "plan.basis_policy");
    const std::string kind = str(p, "kind", "fixed");
    if (kind == "fixed") {
      plan.policy.kind = sim::PolicyKind::FixedPhase;
    } else if (kind == "passive") {
      plan.policy.kind = sim::PolicyKind::PassiveSplit;
      plan.policy.p_z = num(p, "p_z", 0.5);
    } else if (kind == "active") {
      plan.policy.kind = sim::PolicyKind::ActivePrbs;
      plan.policy.prbs_order[0] = static_cast<int>(unum(p, "prbs_order_a", 7));
      plan.policy.prbs_order[1] = static_cast<int>(unum(p, "prbs_order_b", 9));
      plan.policy.prbs_seed[0] =
          static_cast<std::uint16_t>(unum(p, "prbs_seed_a", 0x5a));
      plan.policy.prbs_seed[1] =
          static_cast<std::uint16_t>(unum(p, "prbs_seed_b", 0x1f3));
    } else {
      throw ConfigError("basis_policy.kind must be fixed|passive|active");
    }
  }

  plan.duration_s = num(j, "duration_s", 0.01);
  plan.seed = unum(j, "seed", 1);
  plan.record_truth = flag(j, "record_truth", false);
  try {
    plan.validate();
  } catch (const std::exception& e) {
    throw ConfigError(std::string("invalid plan: ") + e.what());
  }
  return plan;
}

FringeScan fringe_from_json(const json& j) {
  check_keys(j,
             {"side", "points", "theta_min", "theta_max", "fixed_theta_other",
              "cycles_per_point", "abscissa", "p_pi_mw", "coincidence_window_ps"},
             "fringe");
  FringeScan f;
  const std::string side = str(j, "side", "a");
  if (side != "a" && side != "b") throw ConfigError("fringe.side must be 'a' or 'b'");
  f.side = side == "a" ? 0 : 1;
  f.points = static_cast<int>(unum(j, "points", 24));
  if (f.points < 5) throw ConfigError("fringe.points must be >= 5");
  f.theta_min = num(j, "theta_min", -M_PI);
  f.theta_max = num(j, "theta_max", M_PI);
  f.fixed_theta_other = num(j, "fixed_theta_other", 0.0);
  f.cycles_per_point = unum(j, "cycles_per_point", 2'000'000);
  const std::string abscissa = str(j, "abscissa", "phase");
  if (abscissa == "heater_power") f.heater_abscissa = true;
  else if (abscissa != "phase")
    throw ConfigError("fringe.abscissa must be phase|heater_power");
  f.p_pi_mw = num(j, "p_pi_mw", 23.5);
  f.coincidence_window_ps = static_cast<std::int64_t>(unum(j, "coincidence_window_ps", 300));
  if (f.coincidence_window_ps <= 0)
    throw ConfigError("fringe.coincidence_window_ps must be > 0");
  return f;
}

ChshConfig chsh_from_json(const json& j) {
  check_keys(j, {"cycles_per_setting", "coincidence_window_ps"}, "chsh");
  ChshConfig c;
  c.cycles_per_setting = unum(j, "cycles_per_setting", 20'000'000);
  c.coincidence_window_ps = static_cast<std::int64_t>(unum(j, "coincidence_window_ps", 300));
  if (c.coincidence_window_ps <= 0)
    throw ConfigError("chsh.coincidence_window_ps must be > 0");
  return c;
}

TomoConfig tomo_from_json(const json& j) {
  check_keys(j, {"cycles_per_setting"}, "tomo");
  TomoConfig t;
  t.cycles_per_setting = unum(j, "cycles_per_setting", 20'000'000);
  return t;
}

QkdConfig qkd_from_json(const json& j) {
  check_keys(j,
             {"block_size", "security", "optimize_window", "z_window_half_ps",
              "x_window_half_ps", "window_min_ps", "window_max_ps", "window_step_ps"},
             "qkd");
  QkdConfig q;
  q.block_size = unum(j, "block_size", 1'000'000);
  if (j.contains("security")) q.security = security_from_json(j["security"], "qkd.security");
  q.optimize_window = flag(j, "optimize_window", false);
  q.z_window_half_ps = static_cast<std::int64_t>(unum(j, "z_window_half_ps", 0));
  q.x_window_half_ps = static_cast<std::int64_t>(unum(j, "x_window_half_ps", 0));
  q.window_min_ps = static_cast<std::int64_t>(unum(j, "window_min_ps", 10));
  q.window_max_ps = static_cast<std::int64_t>(unum(j, "window_max_ps", 50));
  q.window_step_ps = static_cast<std::int64_t>(unum(j, "window_step_ps", 2));
  if (q.window_step_ps <= 0 || q.window_max_ps < q.window_min_ps)
    throw ConfigError("qkd window grid is malformed");
  return q;
}

SweepConfig sweep_from_json(const json& j) {
  check_keys(j, {"points", "block_size", "security", "z_window_half_ps", "x_window_half_ps"},
             "sweep");
  SweepConfig s;
  if (!j.contains("points") || !j["points"].is_array() || j["points"].empty())
    throw ConfigError("sweep.points must be a nonempty array");
  for (const auto& p : j["points"]) {
    check_keys(p, {"loss_db", "duration_s"}, "sweep.points[]");
    qkd::SweepPoint pt;
    pt.loss_db = num(p, "loss_db", 0.0);
    pt.duration_s = num(p, "duration_s", 0.1);
    if (pt.loss_db < 0 || pt.duration_s <= 0)
      throw ConfigError("sweep point needs loss_db >= 0 and duration_s > 0");
    s.points.push_back(pt);
  }
  s.block_size = unum(j, "block_size", 90'000);
  if (j.contains("security"))
    s.security = security_from_json(j["security"], "sweep.security");
  s.z_window_half_ps = static_cast<std::int64_t>(unum(j, "z_window_half_ps", 0));
  s.x_window_half_ps = static_cast<std::int64_t>(unum(j, "x_window_half_ps", 0));
  return s;
}

BoundsConfig bounds_from_json(const json& j) {
  check_keys(j,
             {"block_sizes", "qber_key", "qber_test", "key_fraction", "sifted_rate_hz",
              "security"},
             "bounds");
  BoundsConfig b;
  if (!j.contains("block_sizes") || !j["block_sizes"].is_array() || j["block_sizes"].empty())
    throw ConfigError("bounds.block_sizes must be a nonempty array");
  for (const auto& v : j["block_sizes"]) {
    if (!v.is_number()) throw ConfigError("bounds.block_sizes entries must be numbers");
    b.block_sizes.push_back(static_cast<std::uint64_t>(v.get<double>()));
  }
  b.qber_key = num(j, "qber_key", 0.0402);
  b.qber_test = num(j, "qber_test", 0.061);
  b.key_fraction = num(j, "key_fraction", 0.5);
  if (b.key_fraction <= 0.0 || b.key_fraction >= 1.0)
    throw ConfigError("bounds.key_fraction must be in (0,1)");
  b.sifted_rate_hz = num(j, "sifted_rate_hz", 2500.0);
  if (j.contains("security"))
    b.security = security_from_json(j["security"], "bounds.security");
  return b;
}

}  // namespace tbq::config
