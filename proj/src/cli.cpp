#include "magnonlink/cli.hpp"

#include <cmath>
#include <iostream>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <fmt/ostream.h>

#include "magnonlink/calibration.hpp"
#include "magnonlink/config.hpp"
#include "magnonlink/errors.hpp"
#include "magnonlink/fitting.hpp"
#include "magnonlink/io.hpp"
#include "magnonlink/microscopic.hpp"
#include "magnonlink/optimizer.hpp"
#include "magnonlink/parallel.hpp"
#include "magnonlink/sweep.hpp"

namespace magnonlink {

using nlohmann::json;

namespace {

struct CommonArgs {
  std::string config;
  std::vector<std::string> overrides;
  std::string out_dir = "out";
  std::string format = "csv";
};

struct Context {
  RunConfig cfg;
  std::string digest;
  bool json_format = false;
  unsigned threads = 0;
  std::ostream& out;
};

std::string one_line(std::string text) {
  for (char& c : text) {
    if (c == '\n' || c == '\r') c = ' ';
  }
  return text;
}

std::string kv_csv(const std::vector<std::pair<std::string, double>>& rows) {
  std::string text = "quantity,value\n";
  for (const auto& [k, v] : rows) text += fmt::format("{},{}\n", k, format_number(v));
  return text;
}

std::vector<double> window(double start, double stop, double centre, double half_width,
                           std::size_t points) {
  if (start == 0 && stop == 0) {
    start = centre - half_width;
    stop = centre + half_width;
  }
  return linear_grid(start, stop, points);
}

int run_simulate(Context& ctx, OutputSet& outputs) {
  const auto& cfg = ctx.cfg;
  const auto& sim = cfg.simulate;
  const double f0 = rad_to_hz(sim.kind == TraceKind::S11_COIL ? cfg.system.omega_m : cfg.system.omega_c);
  const auto freq = window(sim.start_hz, sim.stop_hz, f0,
                           4.0 * rad_to_hz(cfg.system.cavity_linewidth()), sim.points);
  SpectrumTrace trace =
      sim.kind == TraceKind::S11_COIL
          ? synthesize_coil_trace(cfg.system.omega_m, cfg.system.gamma,
                                  hz_to_rad(sim.coil_gamma_c_hz), freq, sim.noise_sigma, sim.seed)
          : synthesize_trace(cfg.system, sim.kind, freq, sim.noise_sigma, sim.seed, cfg.eta);
  trace.meta["noise_sigma"] = format_number(sim.noise_sigma);
  if (ctx.json_format) {
    outputs.write_json("trace.json", trace_to_json(trace));
  } else {
    outputs.write("trace.csv", trace_to_csv(trace));
  }
  if (sim.kind == TraceKind::S11_HYBRID || sim.kind == TraceKind::S11_COIL) {
    std::vector<double> magnitude;
    for (const auto& v : trace.value) magnitude.push_back(std::abs(v));
    std::string dips;
    for (auto i : local_minima(magnitude)) dips += fmt::format(" {:.9g}", trace.freq[i]);
    fmt::print(ctx.out, "dips_hz:{}\n", dips);
  }
  fmt::print(ctx.out, "wrote {} samples of {}\n", trace.size(), to_string(trace.kind));
  return kExitOk;
}

int run_sweep_command(Context& ctx, OutputSet& outputs) {
  const auto& cfg = ctx.cfg;
  const auto& sw = cfg.sweep;
  const auto freq = window(sw.freq_start_hz, sw.freq_stop_hz, rad_to_hz(cfg.system.omega_c), 250e6,
                           sw.freq_points);
  const auto current = linear_grid(sw.current_start_a, sw.current_stop_a, sw.current_points);
  const SweepGrid grid = run_sweep(cfg.system, cfg.bias, cfg.material.gyromagnetic_ratio, freq,
                                   current, sw.quantity, cfg.eta, ctx.threads);
  if (ctx.json_format) {
    outputs.write_json("sweep.json", sweep_to_json(grid));
  } else {
    outputs.write("sweep.csv", sweep_to_csv(grid));
  }
  fmt::print(ctx.out, "wrote {}x{} {} map\n", current.size(), freq.size(), to_string(sw.quantity));
  return kExitOk;
}

int run_fit(Context& ctx, OutputSet& outputs) {
  const auto& cfg = ctx.cfg;
  const auto& spec = cfg.fit;
  if (spec.trace_path.empty()) throw ValidationError("config /fit/trace: required for fit");
  SpectrumTrace trace = read_trace_csv(spec.trace_path);
  if (spec.kind) trace.kind = *spec.kind;
  FitResult result;
  switch (trace.kind) {
    case TraceKind::S11_HYBRID:
      result = fit_s11_hybrid(trace, spec.init.value_or(initial_guess_s11_hybrid(trace)), spec.options);
      break;
    case TraceKind::S11_COIL:
      result = fit_s11_coil(trace, spec.coil_init ? *spec.coil_init : initial_guess_s11_coil(trace),
                            spec.options);
      break;
    case TraceKind::S_LM:
      result = fit_s_lm(trace, spec.init.value_or(cfg.system),
                        spec.fixed.value_or(std::set<std::string>{"omega_c", "kappa", "kappa_c"}),
                        spec.options);
      break;
    case TraceKind::POWER_ONLY:
      result = fit_efficiency_trace(
          trace, spec.init.value_or(cfg.system),
          spec.fixed.value_or(std::set<std::string>{"omega_c", "kappa", "kappa_c", "gamma", "g"}),
          spec.options);
      break;
  }
  const json doc = fit_to_json(result);
  if (ctx.json_format) {
    outputs.write_json("fit.json", doc);
  } else {
    std::string text = "name,value,std_error\n";
    for (const auto& name : result.names) {
      const auto& entry = doc["parameters"][name];
      text += fmt::format("{},{},{}\n", name, format_number(entry["value"].get<double>()),
                          format_number(entry["std_error"].get<double>()));
    }
    outputs.write("fit.csv", text);
    outputs.write_json("fit.json", doc);
  }
  for (std::size_t i = 0; i < result.names.size(); ++i) {
    const double v = result.values(static_cast<Eigen::Index>(i));
    const double e = result.std_error(result.names[i]);
    const bool angular = result.names[i] != "phase";
    fmt::print(ctx.out, "{} = {:.9g} +- {:.3g}{}\n", result.names[i], angular ? rad_to_hz(v) : v,
               angular ? rad_to_hz(e) : e, angular ? " Hz" : " rad");
  }
  for (const auto& flag : result.flags) fmt::print(ctx.out, "flag: {}\n", flag);
  if (!result.converged) {
    throw ConvergenceError("fit did not converge after " + std::to_string(result.iterations) +
                           " iterations");
  }
  return kExitOk;
}

int run_derive(Context& ctx, OutputSet& outputs) {
  const auto& cfg = ctx.cfg;
  const auto& m = cfg.material;
  const double G = verdet_to_G(m.verdet, m.spin_density);
  const double zeta = zeta_from_G(G, m, cfg.drive, cfg.constants);
  const CouplingPrediction coupling = predict_coupling(m, cfg.system.omega_c, 1.0, cfg.constants);
  const double alpha = gilbert_from_gamma(cfg.system.gamma, cfg.system.omega_m);
  const double slope = m.gyromagnetic_ratio * cfg.bias.field_per_current;
  const std::vector<std::pair<std::string, double>> rows{
      {"G_m2", G},
      {"zeta_rad_s", zeta},
      {"zeta_hz", rad_to_hz(zeta)},
      {"photon_flux_s", cfg.drive.photon_flux(cfg.constants)},
      {"zpf_field_t", coupling.zpf_field},
      {"g0_hz", rad_to_hz(coupling.g0)},
      {"spin_count", coupling.spin_count},
      {"g_predicted_hz", rad_to_hz(coupling.g)},
      {"overlap_factor", coupling.overlap_factor},
      {"g_configured_hz", rad_to_hz(cfg.system.g)},
      {"gilbert_alpha", alpha},
      {"kittel_slope_hz_per_a", rad_to_hz(slope)},
      {"cooperativity", cooperativity(cfg.system)}};
  json doc = json::object();
  for (const auto& [k, v] : rows) doc[k] = v;
  doc["warnings"] = m.warnings();
  if (ctx.json_format) {
    outputs.write_json("derived.json", doc);
  } else {
    outputs.write("derived.csv", kv_csv(rows));
  }
  fmt::print(ctx.out, "G = {:.3g} m^2\n", G);
  fmt::print(ctx.out, "zeta/2pi = {:.4g} mHz\n", 1e3 * rad_to_hz(zeta));
  fmt::print(ctx.out, "g0/2pi = {:.4g} Hz, predicted g/2pi = {:.4g} MHz (overlap factor 1)\n",
             rad_to_hz(coupling.g0), 1e-6 * rad_to_hz(coupling.g));
  fmt::print(ctx.out, "cooperativity = {:.4g}\n", cooperativity(cfg.system));
  for (const auto& w : m.warnings()) fmt::print(ctx.out, "warning: {}\n", w);
  return kExitOk;
}

int run_shotnoise(Context& ctx, OutputSet& outputs) {
  const auto& cfg = ctx.cfg;
  const auto& sn = cfg.shotnoise;
  // zeta is referred to the probe flux of the calibration run itself.
  OpticalDriveParams probe = cfg.drive;
  probe.power = sn.run.probe_photon_flux * cfg.constants.hbar * probe.carrier_angular_freq;
  const ShotNoiseCalibration cal = snr_to_zeta(sn.run, cfg.material, probe, cfg.constants);
  std::vector<double> omega(sn.grid_bins);
  const double mid = 0.5 * static_cast<double>(sn.grid_bins - 1);
  for (std::size_t i = 0; i < sn.grid_bins; ++i) {
    omega[i] = sn.run.magnon_freq + (static_cast<double>(i) - mid) * sn.run.resolution_bandwidth;
  }
  const auto spectrum = svv_spectrum(cal.G, cfg.material, sn.run, omega, cfg.constants);
  const double zeta_hz = rad_to_hz(cal.zeta);
  const double ratio = zeta_hz / sn.reference_zeta_hz;
  json flags = json::array();
  for (const auto& w : cfg.material.warnings()) flags.push_back(w);

  std::vector<double> freq_hz;
  for (double w : omega) freq_hz.push_back(rad_to_hz(w));
  json inputs{{"microwave_power_w", sn.run.microwave_power},
              {"probe_photon_flux_s", sn.run.probe_photon_flux},
              {"resolution_bandwidth_rad_s", sn.run.resolution_bandwidth},
              {"coil_coupling_rad_s", sn.run.coil_coupling},
              {"magnon_freq_rad_s", sn.run.magnon_freq},
              {"measured_snr", sn.run.measured_snr},
              {"spin_density_m3", cfg.material.spin_density},
              {"sample_length_m", cfg.material.sample_length},
              {"sample_volume_m3", cfg.material.sample_volume},
              {"probe_power_w", probe.power},
              {"probe_carrier_rad_s", probe.carrier_angular_freq}};
  if (sn.run.electronic_noise_psd) inputs["electronic_noise_psd_w_hz"] = *sn.run.electronic_noise_psd;
  const json record{{"run_type", "shotnoise"},
                    {"inputs", inputs},
                    {"grid", freq_hz},
                    {"spectrum", spectrum},
                    {"outputs",
                     {{"G_m2", cal.G},
                      {"zeta_rad_s", cal.zeta},
                      {"zeta_hz", zeta_hz},
                      {"reference_zeta_hz", sn.reference_zeta_hz},
                      {"discrepancy_ratio", ratio}}},
                    {"flags", flags}};
  outputs.write_json("calibration.json", record);
  if (!ctx.json_format) {
    std::string text = "freq_hz,svv\n";
    for (std::size_t i = 0; i < omega.size(); ++i) {
      text += fmt::format("{},{}\n", format_number(freq_hz[i]), format_number(spectrum[i]));
    }
    outputs.write("svv.csv", text);
  }
  fmt::print(ctx.out, "G = {:.4g} m^2\n", cal.G);
  fmt::print(ctx.out, "zeta/2pi = {:.4g} mHz\n", 1e3 * zeta_hz);
  fmt::print(ctx.out, "discrepancy ratio vs reference {:.4g} mHz = {:.4f}\n",
             1e3 * sn.reference_zeta_hz, ratio);
  return kExitOk;
}

ChainCalibration synthetic_chain(const RunConfig& cfg) {
  const auto& ch = cfg.chain;
  ChainCalibration cal;
  cal.cavity = {cfg.system.omega_c, cfg.system.kappa, cfg.system.kappa_c, hz_to_rad(ch.kappa_1_hz)};
  const auto freq = window(ch.start_hz, ch.stop_hz, rad_to_hz(cfg.system.omega_c), 100e6, ch.points);
  for (double f : freq) {
    const double w = hz_to_rad(f);
    const double ripple = ch.ripple_db * std::sin(two_pi * (f - freq.front()) / ch.ripple_period_hz);
    const double gain = db_to_linear(ch.gain_db + ripple);
    const double s21 = s21_cavity(cal.cavity.omega_c, cal.cavity.kappa, cal.cavity.kappa_c,
                                  cal.cavity.kappa_1, w);
    cal.omega.push_back(w);
    cal.tone_power.push_back(ch.tone_power);
    cal.measured_power.push_back(gain * s21 * ch.tone_power);
  }
  return cal;
}

ChainCalibration measured_chain(const RunConfig& cfg) {
  const CsvTable table = read_csv(cfg.chain.measured_csv);
  ChainCalibration cal;
  cal.cavity = {cfg.system.omega_c, cfg.system.kappa, cfg.system.kappa_c,
                hz_to_rad(cfg.chain.kappa_1_hz)};
  const auto f = table.column("freq_hz");
  const auto p = table.column("tone_power_w");
  const auto m = table.column("measured_power_w");
  for (const auto& row : table.rows) {
    cal.omega.push_back(hz_to_rad(row[f]));
    cal.tone_power.push_back(row[p]);
    cal.measured_power.push_back(row[m]);
  }
  return cal;
}

int run_chain(Context& ctx, OutputSet& outputs) {
  const auto& cfg = ctx.cfg;
  const bool synthetic = cfg.chain.measured_csv.empty();
  const ChainCalibration cal = synthetic ? synthetic_chain(cfg) : measured_chain(cfg);
  const TransferFunction tf = extract_transfer_function(cal);
  const double peak = s21_cavity(cal.cavity.omega_c, cal.cavity.kappa, cal.cavity.kappa_c,
                                 cal.cavity.kappa_1, cal.cavity.omega_c);
  std::vector<double> grid_hz, tf_hz;
  for (double w : cal.omega) grid_hz.push_back(rad_to_hz(w));
  for (double w : tf.omega) tf_hz.push_back(rad_to_hz(w));
  json flags = json::array();
  if (!tf.excluded_bins.empty()) {
    flags.push_back(fmt::format("{} bins excluded below |S21|^2 threshold {}",
                                tf.excluded_bins.size(), kTransmissionThreshold));
  }
  if (synthetic) flags.push_back("synthetic chain");
  const json record{
      {"run_type", "chain"},
      {"inputs",
       {{"cavity_freq_hz", rad_to_hz(cal.cavity.omega_c)},
        {"kappa_hz", rad_to_hz(cal.cavity.kappa)},
        {"kappa_c_hz", rad_to_hz(cal.cavity.kappa_c)},
        {"kappa_1_hz", rad_to_hz(cal.cavity.kappa_1)},
        {"tone_power_w", cal.tone_power},
        {"measured_power_w", cal.measured_power}}},
      {"grid", grid_hz},
      {"outputs",
       {{"T_a", tf.gain}, {"T_a_freq_hz", tf_hz}, {"excluded_bins", tf.excluded_bins},
        {"s21_peak", peak}}},
      {"flags", flags}};
  outputs.write_json("calibration.json", record);
  if (!ctx.json_format) {
    std::string text = "freq_hz,t_a\n";
    for (std::size_t i = 0; i < tf.gain.size(); ++i) {
      text += fmt::format("{},{}\n", format_number(tf_hz[i]), format_number(tf.gain[i]));
    }
    outputs.write("transfer.csv", text);
  }
  fmt::print(ctx.out, "|S21|^2 peak = {:.6g}\n", peak);
  fmt::print(ctx.out, "calibrated bins: {}, excluded: {}\n", tf.gain.size(), tf.excluded_bins.size());
  return kExitOk;
}

int run_optimize(Context& ctx, OutputSet& outputs) {
  const auto& cfg = ctx.cfg;
  const auto& p = cfg.system;
  OptimizerOptions options;
  options.search_span = cfg.optimize.search_span;
  options.grid_points = cfg.optimize.grid_points;
  options.threads = ctx.threads;
  const OptimumReport report = find_optimum(p, options);

  // Reachable optimum at the configured magnon frequency, and the magnon
  // frequency (coil current) whose trajectory passes through the optimum.
  const TrajectoryOptimum here = optimize_along_trajectory(p, report.search_span);
  SystemParamsd through = p;
  through.omega_m = p.omega_c + report.det.delta_c - report.det.delta_m;
  const double current = current_for_kittel_freq(cfg.bias, through.omega_m,
                                                 cfg.material.gyromagnetic_ratio);
  const TrajectoryOptimum best = optimize_along_trajectory(through, report.search_span);

  json doc = optimum_to_json(report);
  doc["trajectory_configured"] = {{"magnon_freq_hz", rad_to_hz(p.omega_m)},
                                  {"probe_freq_hz", rad_to_hz(here.omega)},
                                  {"delta_c_hz", rad_to_hz(here.det.delta_c)},
                                  {"delta_m_hz", rad_to_hz(here.det.delta_m)},
                                  {"efficiency", here.efficiency},
                                  {"ratio_to_optimum", here.efficiency / report.efficiency}};
  doc["trajectory_through_optimum"] = {{"magnon_freq_hz", rad_to_hz(through.omega_m)},
                                       {"coil_current_a", current},
                                       {"probe_freq_hz", rad_to_hz(best.omega)},
                                       {"efficiency", best.efficiency},
                                       {"ratio_to_optimum", best.efficiency / report.efficiency}};

  const std::size_t n = cfg.optimize.landscape_points;
  std::vector<double> dc, dm;
  if (n >= 2) {
    const double span = report.search_span;
    dc = linear_grid(-span * rad_to_hz(p.cavity_linewidth()), span * rad_to_hz(p.cavity_linewidth()), n);
    dm = linear_grid(-span * rad_to_hz(p.gamma), span * rad_to_hz(p.gamma), n);
  }
  if (ctx.json_format) {
    outputs.write_json("optimum.json", doc);
    if (n >= 2) {
      const auto land = efficiency_landscape(p, dc, dm, ctx.threads);
      json rows = json::array();
      for (Eigen::Index i = 0; i < land.efficiency.rows(); ++i) {
        rows.push_back(std::vector<double>(land.efficiency.row(i).begin(), land.efficiency.row(i).end()));
      }
      outputs.write_json("landscape.json", {{"dc_hz", dc}, {"dm_hz", dm}, {"efficiency", rows}});
    }
  } else {
    outputs.write_json("optimum.json", doc);
    outputs.write("optimum.csv",
                  kv_csv({{"delta_c_hz", rad_to_hz(report.det.delta_c)},
                          {"delta_m_hz", rad_to_hz(report.det.delta_m)},
                          {"efficiency", report.efficiency},
                          {"gradient_norm", report.gradient_norm},
                          {"gain_over_resonant", report.gain_over_resonant},
                          {"resonant_efficiency", report.resonant_efficiency}}));
    if (n >= 2) outputs.write("landscape.csv", landscape_to_csv(efficiency_landscape(p, dc, dm, ctx.threads)));
  }
  fmt::print(ctx.out, "optimum: delta_c/2pi = {:.6g} MHz, delta_m/2pi = {:.6g} MHz ({})\n",
             1e-6 * rad_to_hz(report.det.delta_c), 1e-6 * rad_to_hz(report.det.delta_m),
             to_string(report.hessian_definiteness));
  fmt::print(ctx.out, "efficiency = {:.4g}, gain over resonant = {:.4g}\n", report.efficiency,
             report.gain_over_resonant);
  fmt::print(ctx.out, "along the configured trajectory: {:.4g} ({:.3g} of optimum)\n",
             here.efficiency, here.efficiency / report.efficiency);
  return kExitOk;
}

using Handler = int (*)(Context&, OutputSet&);

int execute(const std::string& command, Handler handler, const CommonArgs& args, std::ostream& out) {
  RunConfig cfg = load_config(args.config, args.overrides);
  Context ctx{std::move(cfg), "", args.format == "json", thread_count_from_env(), out};
  ctx.digest = config_hash(ctx.cfg.effective);
  OutputSet outputs(args.out_dir, ctx.digest);
  int status = kExitOk;
  try {
    status = handler(ctx, outputs);
  } catch (const ConvergenceError&) {
    outputs.finish(command);
    throw;
  }
  outputs.finish(command);
  return status;
}

int exit_status(const Error& e) {
  if (e.code() == "singular" || e.code() == "convergence") return kExitNumerical;
  return kExitInput;
}

}  // namespace

int cli_dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Microwave-optical magnon converter model"};
  app.name("magnonlink");
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all");

  const std::vector<std::pair<std::string, Handler>> commands{
      {"simulate", run_simulate},
      {"sweep", run_sweep_command},
      {"fit", run_fit},
      {"derive-params", run_derive},
      {"calibrate-shotnoise", run_shotnoise},
      {"calibrate-chain", run_chain},
      {"optimize-detuning", run_optimize}};
  const std::map<std::string, std::string> descriptions{
      {"simulate", "synthesize a single trace"},
      {"sweep", "2-D map over probe frequency and coil current"},
      {"fit", "fit a trace of any kind"},
      {"derive-params", "microscopic chain Verdet -> G -> zeta, V -> g0 -> g"},
      {"calibrate-shotnoise", "extract G and zeta from a shot-noise referenced SNR"},
      {"calibrate-chain", "extract the microwave chain transfer function"},
      {"optimize-detuning", "locate the conversion-efficiency optimum"}};

  CommonArgs common;
  std::vector<CLI::App*> subs;
  for (const auto& [name, handler] : commands) {
    auto* sub = app.add_subcommand(name, descriptions.at(name));
    sub->add_option("config", common.config, "configuration file")->required();
    sub->add_option("--set", common.overrides, "override section.key=value")->take_all();
    sub->add_option("--out", common.out_dir, "output directory");
    sub->add_option("--format", common.format, "output format")
        ->check(CLI::IsMember({"csv", "json"}));
    subs.push_back(sub);
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "usage: " << one_line(e.what()) << "\n";
    return kExitUsage;
  }

  for (std::size_t i = 0; i < subs.size(); ++i) {
    if (!subs[i]->parsed()) continue;
    try {
      return execute(commands[i].first, commands[i].second, common, out);
    } catch (const Error& e) {
      err << e.code() << ": " << one_line(e.what()) << "\n";
      return exit_status(e);
    } catch (const std::exception& e) {
      err << "internal: " << one_line(e.what()) << "\n";
      return kExitNumerical;
    }
  }
  err << "usage: no subcommand given\n";
  return kExitUsage;
}

int cli_dispatch(int argc, char** argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return cli_dispatch(args, std::cout, std::cerr);
}

}  // namespace magnonlink
