#include "tbq/commands.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include "tbq/analysis.hpp"
#include "tbq/config.hpp"
#include "tbq/csv.hpp"
#include "tbq/qkd.hpp"
#include "tbq/rng.hpp"
#include "tbq/sim.hpp"
#include "tbq/tomography.hpp"

namespace tbq::commands {

namespace {

using config::ConfigError;
using config::json;
using csv::format_double;
using csv::KeyValueCsv;

constexpr std::uint64_t kPointSeedTag = 0x90147;

std::string read_file(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw ConfigError("cannot open config file: " + path);
  std::ostringstream os;
  os << is.rdbuf();
  return os.str();
}

sim::ExperimentPlan plan_for_point(const sim::ExperimentPlan& base, std::uint64_t index,
                                   std::uint64_t cycles) {
  sim::ExperimentPlan plan = base;
  plan.seed = rng::derive(base.seed, kPointSeedTag, index);
  plan.duration_s = static_cast<double>(cycles) / plan.pump.rep_rate_hz;
  return plan;
}

std::array<std::uint64_t, 4> pair_counts(const sim::SimResult& run,
                                         std::int64_t window_ps) {
  std::array<std::uint64_t, 4> counts{};
  int k = 0;
  for (int a = 0; a < 2; ++a)
    for (int b = 2; b < 4; ++b)
      counts[k++] =
          analysis::count_coincidences(run.streams[a], run.streams[b], window_ps, 0)
              .total_pairs;
  return counts;
}

qkd::SiftParams sift_params_for(const sim::ExperimentPlan& plan,
                                std::int64_t z_half, std::int64_t x_half) {
  qkd::SiftParams p;
  p.z_window_half_ps = z_half;
  p.x_window_half_ps = x_half;
  switch (plan.policy.kind) {
    case sim::PolicyKind::PassiveSplit:
      p.key_arm = sim::kArmDirect;  // Z
      p.flip_b = {false, false};
      break;
    case sim::PolicyKind::ActivePrbs:
      p.key_arm = 1;  // Y, anti-correlated for |Phi+>
      p.flip_b = {false, true};
      break;
    case sim::PolicyKind::FixedPhase:
      p.key_arm = 1;  // everything is test basis
      p.flip_b = {false, false};
      break;
  }
  return p;
}

void add_qkd_report(KeyValueCsv& kv, const qkd::SiftedBlock& block,
                    const qkd::KeyRateReport& rep) {
  kv.add("key_basis", block.key_basis);
  kv.add("test_basis", block.test_basis);
  kv.add("n_key", static_cast<double>(block.n_key));
  kv.add("n_test", static_cast<double>(block.n_test));
  kv.add("e_key", static_cast<double>(block.e_key));
  kv.add("e_test", static_cast<double>(block.e_test));
  kv.add("qber_key", rep.qber_key);
  kv.add("qber_test", rep.qber_test);
  kv.add("sifting_factor", rep.sifting_factor);
  kv.add("sifted_rate_hz", rep.sifted_rate_hz);
  kv.add("sifted_key_rate_hz", rep.sifted_key_rate_hz);
  kv.add("discarded_multi", static_cast<double>(block.discarded_multi));
  kv.add("block_size", static_cast<double>(rep.block_size));
  kv.add("key_length_serfling_bits", rep.key_length_serfling);
  kv.add("key_length_chernoff_bits", rep.key_length_chernoff);
  kv.add("skr_asymptotic_bps", rep.skr_asymptotic);
  kv.add("skr_serfling_bps", rep.skr_serfling);
  kv.add("skr_chernoff_bps", rep.skr_chernoff);
  kv.add("abort_serfling", rep.abort_serfling ? "1" : "0");
  kv.add("abort_chernoff", rep.abort_chernoff ? "1" : "0");
  kv.add("acquisition_s", block.acquisition_duration_s);
}

// ---------------------------------------------------------------------------

void cmd_fringe(const json& cfg, const RunContext& ctx, csv::OutputBundle& out) {
  config::check_keys(cfg, {"plan", "fringe"}, "config");
  sim::ExperimentPlan base = config::plan_from_json(cfg.at("plan"));
  if (ctx.seed_override) base.seed = *ctx.seed_override;
  const config::FringeScan scan =
      cfg.contains("fringe") ? config::fringe_from_json(cfg["fringe"]) : config::FringeScan{};

  csv::CsvWriter fringe_csv(
      {"theta", "counts_A0B0", "counts_A0B1", "counts_A1B0", "counts_A1B1"});
  std::array<std::vector<std::pair<double, double>>, 4> series;
  std::vector<double> thetas;

  for (int i = 0; i < scan.points; ++i) {
    const double theta =
        scan.theta_min + (scan.theta_max - scan.theta_min) * i / (scan.points - 1);
    sim::ExperimentPlan plan = plan_for_point(base, static_cast<std::uint64_t>(i),
                                              scan.cycles_per_point);
    auto& scanned = scan.side == 0 ? plan.a.receiver : plan.b.receiver;
    auto& fixed = scan.side == 0 ? plan.b.receiver : plan.a.receiver;
    scanned.theta_tps = theta;
    fixed.theta_tps = scan.fixed_theta_other;

    const auto counts = pair_counts(sim::run_simulation(plan), scan.coincidence_window_ps);
    const double x = scan.heater_abscissa ? theta * scan.p_pi_mw / M_PI : theta;
    thetas.push_back(x);
    fringe_csv.row({format_double(x), std::to_string(counts[0]), std::to_string(counts[1]),
                    std::to_string(counts[2]), std::to_string(counts[3])});
    for (int k = 0; k < 4; ++k)
      series[k].emplace_back(x, static_cast<double>(counts[k]));
  }
  out.add("fringe.csv", fringe_csv.str());

  static const char* pair_names[4] = {"A0B0", "A0B1", "A1B0", "A1B1"};
  KeyValueCsv report;
  double v_sum = 0.0;
  double min_bell_sigmas = std::numeric_limits<double>::infinity();
  const double threshold = 1.0 / std::sqrt(2.0);
  for (int k = 0; k < 4; ++k) {
    const analysis::FringeFit fit = scan.heater_abscissa
                                        ? analysis::fit_fringe_scaled(series[k], scan.p_pi_mw)
                                        : analysis::fit_fringe(series[k]);
    const std::string p = pair_names[k];
    report.add("visibility_" + p, fit.visibility);
    report.add("sigma_visibility_" + p, fit.sigma_visibility);
    report.add("amplitude_" + p, fit.amplitude);
    report.add("offset_" + p, fit.offset);
    report.add("phase_" + p, fit.phase);
    report.add("sigma_phase_" + p, fit.sigma_phase);
    if (scan.heater_abscissa) report.add("kappa_rad_per_mw_" + p, fit.kappa);
    const double bell_sigmas =
        fit.sigma_visibility > 0 ? (fit.visibility - threshold) / fit.sigma_visibility : 0;
    report.add("bell_sigmas_" + p, bell_sigmas);
    v_sum += fit.visibility;
    min_bell_sigmas = std::min(min_bell_sigmas, bell_sigmas);
  }
  out.add("fit_report.csv", report.str());

  KeyValueCsv summary;
  summary.add("visibility_mean", v_sum / 4.0);
  summary.add("bell_sigmas_min", min_bell_sigmas);
  summary.add("points", static_cast<double>(scan.points));
  out.add("summary.csv", summary.str());

  if (ctx.plot) {
    std::vector<csv::Series> plot_series;
    for (int k = 0; k < 4; ++k) {
      csv::Series s;
      s.label = pair_names[k];
      for (const auto& [x, y] : series[k]) {
        s.x.push_back(x);
        s.y.push_back(y);
      }
      plot_series.push_back(std::move(s));
    }
    out.add("fringe.svg",
            csv::svg_chart("coincidence fringes",
                           scan.heater_abscissa ? "heater power (mW)" : "theta (rad)",
                           "coincidences", plot_series));
  }
}

void cmd_chsh(const json& cfg, const RunContext& ctx, csv::OutputBundle& out) {
  config::check_keys(cfg, {"plan", "chsh"}, "config");
  sim::ExperimentPlan base = config::plan_from_json(cfg.at("plan"));
  if (ctx.seed_override) base.seed = *ctx.seed_override;
  const config::ChshConfig cc =
      cfg.contains("chsh") ? config::chsh_from_json(cfg["chsh"]) : config::ChshConfig{};

  const double theta_a[2] = {M_PI / 4, -M_PI / 4};
  const double theta_b[2] = {0.0, M_PI / 2};

  csv::CsvWriter counts_csv({"setting", "theta_a", "theta_b", "n_A0B0", "n_A0B1",
                             "n_A1B0", "n_A1B1"});
  std::array<analysis::SettingCounts, 4> settings{};
  int k = 0;
  for (int ia = 0; ia < 2; ++ia)
    for (int ib = 0; ib < 2; ++ib) {
      sim::ExperimentPlan plan = plan_for_point(base, static_cast<std::uint64_t>(k),
                                                cc.cycles_per_setting);
      plan.a.receiver.theta_tps = theta_a[ia];
      plan.b.receiver.theta_tps = theta_b[ib];
      const auto counts =
          pair_counts(sim::run_simulation(plan), cc.coincidence_window_ps);
      settings[k].n = counts;
      counts_csv.row({std::to_string(k), format_double(theta_a[ia]),
                      format_double(theta_b[ib]), std::to_string(counts[0]),
                      std::to_string(counts[1]), std::to_string(counts[2]),
                      std::to_string(counts[3])});
      ++k;
    }
  out.add("chsh_counts.csv", counts_csv.str());

  const analysis::ChshResult r = analysis::chsh_s(settings);
  KeyValueCsv summary;
  summary.add("S", r.s);
  summary.add("sigma_S", r.sigma_s);
  summary.add("classical_violation_sigmas", r.sigma_s > 0 ? (r.s - 2.0) / r.sigma_s : 0.0);
  for (int i = 0; i < 4; ++i) {
    summary.add("E_" + std::to_string(i), r.correlators[i]);
    summary.add("sigma_E_" + std::to_string(i), r.sigma_correlators[i]);
  }
  out.add("summary.csv", summary.str());
}

void cmd_tomo(const json& cfg, const RunContext& ctx, csv::OutputBundle& out) {
  config::check_keys(cfg, {"plan", "tomo"}, "config");
  sim::ExperimentPlan base = config::plan_from_json(cfg.at("plan"));
  if (ctx.seed_override) base.seed = *ctx.seed_override;
  const config::TomoConfig tc =
      cfg.contains("tomo") ? config::tomo_from_json(cfg["tomo"]) : config::TomoConfig{};

  static const char* basis_names[3] = {"X", "Y", "Z"};
  tomo::TomographyData data;
  csv::CsvWriter counts_csv({"setting", "n_00", "n_01", "n_10", "n_11"});
  const auto settings = tomo::all_settings();
  for (int s = 0; s < 9; ++s) {
    sim::ExperimentPlan plan = plan_for_point(base, static_cast<std::uint64_t>(s),
                                              tc.cycles_per_setting);
    plan.a.receiver = tomo::receiver_for_basis(settings[s].a, plan.a.receiver);
    plan.b.receiver = tomo::receiver_for_basis(settings[s].b, plan.b.receiver);
    const auto run = sim::run_simulation(plan);
    data.counts[s] = tomo::counts_from_run(run, settings[s]);
    data.acquisition_s += plan.duration_s;
    const std::string name = std::string(basis_names[static_cast<int>(settings[s].a)]) +
                             basis_names[static_cast<int>(settings[s].b)];
    counts_csv.row({name, std::to_string(data.counts[s][0]),
                    std::to_string(data.counts[s][1]), std::to_string(data.counts[s][2]),
                    std::to_string(data.counts[s][3])});

    // joint temporal intensity of the A0-B0 pair, dense slot grid
    const std::int64_t t = run.bin_separation_ps;
    const auto map = analysis::jti(run.streams[0], run.streams[2], run.clock_period_ps,
                                   {-t / 2, t / 2, 3 * t / 2, 5 * t / 2});
    csv::CsvWriter jti_csv({"slot_b0", "slot_b1", "slot_b2"});
    for (const auto& row : map.counts)
      jti_csv.row({std::to_string(row[0]), std::to_string(row[1]), std::to_string(row[2])});
    out.add("jti_" + name + ".csv", jti_csv.str());
  }
  out.add("counts.csv", counts_csv.str());

  tomo::MleInfo info;
  const Mat4 rho = tomo::mle_reconstruct(data, &info);
  const EntanglementMetrics metrics = entanglement_metrics(rho);

  csv::CsvWriter re({"c0", "c1", "c2", "c3"});
  csv::CsvWriter im({"c0", "c1", "c2", "c3"});
  for (int r = 0; r < 4; ++r) {
    std::vector<std::string> row_re, row_im;
    for (int c = 0; c < 4; ++c) {
      row_re.push_back(format_double(rho(r, c).real()));
      row_im.push_back(format_double(rho(r, c).imag()));
    }
    re.row(row_re);
    im.row(row_im);
  }
  out.add("rho_real.csv", re.str());
  out.add("rho_imag.csv", im.str());

  KeyValueCsv m;
  m.add("purity", metrics.purity);
  m.add("fidelity_phi_plus", metrics.fidelity_to_phi_plus);
  m.add("concurrence", metrics.concurrence);
  m.add("entanglement_of_formation", metrics.entanglement_of_formation);
  m.add("entropy_A", metrics.entropy_a);
  m.add("entropy_B", metrics.entropy_b);
  m.add("mle_iterations", static_cast<double>(info.iterations));
  m.add("mle_log_likelihood", info.log_likelihood);
  out.add("metrics.csv", m.str());

  KeyValueCsv summary;
  summary.add("fidelity_phi_plus", metrics.fidelity_to_phi_plus);
  summary.add("purity", metrics.purity);
  summary.add("entanglement_of_formation", metrics.entanglement_of_formation);
  out.add("summary.csv", summary.str());
}

void cmd_qkd(const json& cfg, const RunContext& ctx, bool active, csv::OutputBundle& out) {
  config::check_keys(cfg, {"plan", "qkd"}, "config");
  sim::ExperimentPlan plan = config::plan_from_json(cfg.at("plan"));
  if (ctx.seed_override) plan.seed = *ctx.seed_override;
  const config::QkdConfig qc =
      cfg.contains("qkd") ? config::qkd_from_json(cfg["qkd"]) : config::QkdConfig{};

  if (active && plan.policy.kind != sim::PolicyKind::ActivePrbs)
    throw ConfigError("qkd_active requires basis_policy.kind = active");
  if (!active && plan.policy.kind != sim::PolicyKind::PassiveSplit)
    throw ConfigError("qkd_passive requires basis_policy.kind = passive");

  const sim::SimResult run = sim::run_simulation(plan);
  qkd::SiftParams params = sift_params_for(plan, qc.z_window_half_ps, qc.x_window_half_ps);

  if (qc.optimize_window && !active) {
    std::vector<std::int64_t> grid;
    for (std::int64_t w = qc.window_min_ps; w <= qc.window_max_ps; w += qc.window_step_ps)
      grid.push_back(w);
    const auto scan = qkd::optimize_z_window(run, params, grid, qc.security.f_ec);
    params.z_window_half_ps = scan.best_half_width_ps;

    csv::CsvWriter wcsv({"half_width_ps", "proxy", "qber_key", "n_key"});
    for (std::size_t i = 0; i < scan.half_widths_ps.size(); ++i)
      wcsv.row({std::to_string(scan.half_widths_ps[i]), format_double(scan.proxy[i]),
                format_double(scan.qber[i]), std::to_string(scan.kept[i])});
    out.add("window_scan.csv", wcsv.str());
  }

  const qkd::SiftedBlock block = qkd::sift(run, params);
  const qkd::KeyRateReport rep = qkd::key_rate_report(block, qc.block_size, qc.security);

  KeyValueCsv kv;
  add_qkd_report(kv, block, rep);
  kv.add("z_window_half_ps", static_cast<double>(params.z_window_half_ps));
  if (active) {
    const double period_a = std::pow(2.0, plan.policy.prbs_order[0]) - 1;
    const double period_b = std::pow(2.0, plan.policy.prbs_order[1]) - 1;
    kv.add("prbs_period_a", period_a);
    kv.add("prbs_period_b", period_b);
    kv.add("joint_basis_period", period_a * period_b);
  }
  if (run.saturation_warning) kv.add("saturation_warning", "1");
  out.add("qkd_report.csv", kv.str());

  KeyValueCsv summary;
  summary.add("skr_chernoff_bps", rep.skr_chernoff);
  summary.add("skr_serfling_bps", rep.skr_serfling);
  summary.add("skr_asymptotic_bps", rep.skr_asymptotic);
  summary.add("qber_key", rep.qber_key);
  summary.add("qber_test", rep.qber_test);
  summary.add("sifting_factor", rep.sifting_factor);
  out.add("summary.csv", summary.str());
}

void cmd_sweep(const json& cfg, const RunContext& ctx, csv::OutputBundle& out) {
  config::check_keys(cfg, {"plan", "sweep"}, "config");
  sim::ExperimentPlan plan = config::plan_from_json(cfg.at("plan"));
  if (ctx.seed_override) plan.seed = *ctx.seed_override;
  const config::SweepConfig sc = config::sweep_from_json(cfg.at("sweep"));

  const qkd::SiftParams params =
      sift_params_for(plan, sc.z_window_half_ps, sc.x_window_half_ps);
  const auto rows =
      qkd::skr_vs_loss_sweep(plan, params, sc.points, sc.block_size, sc.security);

  csv::CsvWriter sweep_csv({"loss_db", "fiber_km_equiv", "qber_key", "qber_test",
                            "skr_asym", "skr_serfling", "skr_chernoff", "block_size"});
  double max_positive_km = 0.0;
  for (const auto& row : rows) {
    sweep_csv.row({format_double(row.loss_db), format_double(row.fiber_km_equiv),
                   format_double(row.report.qber_key), format_double(row.report.qber_test),
                   format_double(row.report.skr_asymptotic),
                   format_double(row.report.skr_serfling),
                   format_double(row.report.skr_chernoff),
                   std::to_string(row.report.block_size)});
    if (row.report.skr_asymptotic > 0.0)
      max_positive_km = std::max(max_positive_km, row.fiber_km_equiv);
  }
  out.add("sweep.csv", sweep_csv.str());

  KeyValueCsv summary;
  summary.add("points", static_cast<double>(rows.size()));
  summary.add("max_positive_key_km_equiv", max_positive_km);
  summary.add("skr_asymptotic_at_first_point_bps",
              rows.empty() ? 0.0 : rows.front().report.skr_asymptotic);
  out.add("summary.csv", summary.str());

  if (ctx.plot) {
    csv::Series asym{"asymptotic", {}, {}}, serf{"serfling", {}, {}}, cher{"chernoff", {}, {}};
    for (const auto& row : rows) {
      asym.x.push_back(row.fiber_km_equiv);
      asym.y.push_back(row.report.skr_asymptotic);
      serf.x.push_back(row.fiber_km_equiv);
      serf.y.push_back(row.report.skr_serfling);
      cher.x.push_back(row.fiber_km_equiv);
      cher.y.push_back(row.report.skr_chernoff);
    }
    out.add("sweep.svg", csv::svg_chart("secret key rate vs link loss",
                                        "equivalent fiber (km)", "bits/s",
                                        {asym, cher, serf}, true));
  }
}

void cmd_bounds(const json& cfg, const RunContext& ctx, csv::OutputBundle& out) {
  config::check_keys(cfg, {"bounds"}, "config");
  const config::BoundsConfig bc = config::bounds_from_json(cfg.at("bounds"));

  csv::CsvWriter bounds_csv({"block_size", "serfling_bits", "chernoff_bits",
                             "skr_serfling", "skr_chernoff", "skr_asymptotic"});
  csv::Series s_serf{"serfling", {}, {}}, s_cher{"chernoff", {}, {}};
  double first_adv = 0.0;
  bool first = true;
  for (const std::uint64_t block : bc.block_sizes) {
    qkd::SiftedBlock b;
    b.n_key = std::max<std::uint64_t>(
        1, static_cast<std::uint64_t>(std::llround(bc.key_fraction * block)));
    b.n_test = std::max<std::uint64_t>(1, block - b.n_key);
    b.e_key = static_cast<std::uint64_t>(std::llround(bc.qber_key * b.n_key));
    b.e_test = static_cast<std::uint64_t>(std::llround(bc.qber_test * b.n_test));
    b.acquisition_duration_s = static_cast<double>(block) / bc.sifted_rate_hz;
    b.sifting_factor = 1.0;

    const auto serf = qkd::serfling_key_length(b, bc.security);
    const auto cher = qkd::chernoff_key_length(b, bc.security);
    const double blocks_per_s = bc.sifted_rate_hz / static_cast<double>(block);
    const double asym = qkd::asymptotic_rate(1.0, bc.sifted_rate_hz * bc.key_fraction,
                                             b.qber_key(), b.qber_test(), bc.security.f_ec);
    bounds_csv.row({std::to_string(block), format_double(serf.bits),
                    format_double(cher.bits), format_double(serf.bits * blocks_per_s),
                    format_double(cher.bits * blocks_per_s), format_double(asym)});
    s_serf.x.push_back(static_cast<double>(block));
    s_serf.y.push_back(serf.bits * blocks_per_s);
    s_cher.x.push_back(static_cast<double>(block));
    s_cher.y.push_back(cher.bits * blocks_per_s);
    if (first && serf.bits > 0.0) {
      first_adv = (cher.bits - serf.bits) / serf.bits;
      first = false;
    }
  }
  out.add("bounds.csv", bounds_csv.str());

  KeyValueCsv summary;
  summary.add("blocks", static_cast<double>(bc.block_sizes.size()));
  summary.add("chernoff_advantage_at_smallest_positive_block", first_adv);
  out.add("summary.csv", summary.str());

  if (ctx.plot)
    out.add("bounds.svg", csv::svg_chart("finite-size key rate vs block size",
                                         "sifted block size", "bits/s",
                                         {s_cher, s_serf}, false));
}

void cmd_timetags(const json& cfg, const RunContext& ctx, csv::OutputBundle& out) {
  config::check_keys(cfg, {"plan"}, "config");
  sim::ExperimentPlan plan = config::plan_from_json(cfg.at("plan"));
  if (ctx.seed_override) plan.seed = *ctx.seed_override;
  const sim::SimResult run = sim::run_simulation(plan);

  std::ostringstream os;
  sim::write_timetags(os, run, plan.seed);
  out.add("timetags.txt", os.str());

  KeyValueCsv summary;
  summary.add("cycles", static_cast<double>(run.cycles));
  summary.add("pairs_emitted", static_cast<double>(run.pairs_emitted));
  for (int ch = 0; ch < sim::kNumChannels; ++ch) {
    summary.add(std::string("rate_hz_") + sim::channel_name(ch), run.click_rate_hz[ch]);
    summary.add(std::string("clicks_") + sim::channel_name(ch),
                static_cast<double>(run.clicks_kept[ch]));
  }
  summary.add("saturation_warning", run.saturation_warning ? "1" : "0");
  out.add("summary.csv", summary.str());
}

}  // namespace

int dispatch(const std::string& command, const RunContext& ctx) {
  csv::OutputBundle out;
  try {
    const std::string raw = read_file(ctx.config_path);
    const json cfg = [&] {
      try {
        return json::parse(raw);
      } catch (const std::exception& e) {
        throw ConfigError(std::string("config parse error: ") + e.what());
      }
    }();

    if (command == "fringe") cmd_fringe(cfg, ctx, out);
    else if (command == "chsh") cmd_chsh(cfg, ctx, out);
    else if (command == "tomo") cmd_tomo(cfg, ctx, out);
    else if (command == "qkd_passive") cmd_qkd(cfg, ctx, false, out);
    else if (command == "qkd_active") cmd_qkd(cfg, ctx, true, out);
    else if (command == "sweep_loss") cmd_sweep(cfg, ctx, out);
    else if (command == "bounds_compare") cmd_bounds(cfg, ctx, out);
    else if (command == "timetags") cmd_timetags(cfg, ctx, out);
    else throw ConfigError("unknown command: " + command);

    std::uint64_t seed = ctx.seed_override.value_or(0);
    if (!ctx.seed_override && cfg.contains("plan") && cfg["plan"].contains("seed"))
      seed = cfg["plan"]["seed"].get<std::uint64_t>();
    out.add("config.json", raw);
    out.add_meta(command, seed, csv::fnv1a64(raw));
    out.write_all(ctx.out_dir);
    return kExitOk;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntimeError;
  }
}

}  // namespace tbq::commands
