#include "magnonlink/config.hpp"

#include <fstream>
#include <sstream>

#include <fmt/format.h>

#include "magnonlink/errors.hpp"
#include "magnonlink/units.hpp"

namespace magnonlink {

using nlohmann::json;

const std::map<std::string, std::set<std::string>>& config_schema_keys() {
  static const std::map<std::string, std::set<std::string>> keys{
      {"",
       {"schema_version", "system", "material", "bias", "drive", "constants", "simulate", "sweep",
        "fit", "shotnoise", "chain", "optimize"}},
      {"system",
       {"cavity_freq_hz", "magnon_freq_hz", "kappa_hz", "kappa_c_hz", "gamma_hz", "g_hz",
        "zeta_hz", "eta"}},
      {"material",
       {"spin_density_m3", "verdet_rad_m", "sample_length_m", "sample_radius_m",
        "sample_volume_m3", "cavity_volume_m3", "gilbert_alpha", "gyromagnetic_ratio_hz_t",
        "bare_kittel_freq_hz"}},
      {"bias",
       {"static_field_t", "field_per_current_t_a", "reference_current_a",
        "reference_kittel_freq_hz"}},
      {"drive", {"power", "carrier_freq_hz"}},
      {"constants", {"hbar", "mu0"}},
      {"simulate",
       {"kind", "start_hz", "stop_hz", "points", "noise_sigma", "seed", "coil_gamma_c_hz"}},
      {"sweep",
       {"freq_start_hz", "freq_stop_hz", "freq_points", "current_start_a", "current_stop_a",
        "current_points", "quantity"}},
      {"fit", {"trace", "kind", "fixed", "init", "max_iter", "step_tolerance"}},
      {"fit.init",
       {"cavity_freq_hz", "magnon_freq_hz", "kappa_hz", "kappa_c_hz", "gamma_hz", "g_hz",
        "zeta_hz", "gamma_c_hz"}},
      {"shotnoise",
       {"microwave_power", "probe_photon_flux", "resolution_bandwidth_hz", "coil_coupling_hz",
        "magnon_freq_hz", "snr_db", "electronic_noise_psd", "reference_zeta_hz", "grid_bins"}},
      {"chain",
       {"kappa_1_hz", "measured_csv", "tone_power", "gain_db", "ripple_db", "ripple_period_hz",
        "start_hz", "stop_hz", "points"}},
      {"optimize", {"search_span", "grid_points", "landscape_points"}},
  };
  return keys;
}

namespace {

std::string pointer(const std::string& dotted) {
  std::string out = "/";
  for (char c : dotted) out.push_back(c == '.' ? '/' : c);
  return out;
}

/// Read-only view of one config object with path-aware accessors.
class Section {
 public:
  Section(const json& doc, std::string path) : path_(std::move(path)) {
    const json* node = &doc;
    std::stringstream parts(path_);
    for (std::string part; std::getline(parts, part, '.');) {
      if (!node->contains(part)) {
        node = nullptr;
        break;
      }
      node = &(*node)[part];
    }
    if (path_.empty()) node = &doc;
    if (node != nullptr) {
      if (!node->is_object()) throw ValidationError(fmt::format("config {}: expected an object", pointer(path_)));
      node_ = node;
      const auto& allowed = config_schema_keys().at(path_);
      for (const auto& item : node->items()) {
        if (!allowed.contains(item.key())) {
          throw ValidationError(fmt::format("config {}/{}: unknown key",
                                            path_.empty() ? "" : pointer(path_), item.key()));
        }
      }
    }
  }

  bool present() const { return node_ != nullptr; }
  bool has(const char* key) const { return node_ != nullptr && node_->contains(key); }

  std::string where(const char* key) const {
    return (path_.empty() ? "" : pointer(path_)) + "/" + key;
  }

  double number(const char* key, double fallback) const {
    if (!has(key)) return fallback;
    const json& v = (*node_)[key];
    if (!v.is_number()) throw ValidationError(fmt::format("config {}: expected a number", where(key)));
    const double x = v.get<double>();
    if (!std::isfinite(x)) throw ValidationError(fmt::format("config {}: must be finite", where(key)));
    return x;
  }

  double required_number(const char* key) const {
    if (!has(key)) throw ValidationError(fmt::format("config {}: required", where(key)));
    return number(key, 0.0);
  }

  std::uint64_t count(const char* key, std::uint64_t fallback) const {
    if (!has(key)) return fallback;
    const json& v = (*node_)[key];
    if (!v.is_number_integer() || v.get<std::int64_t>() < 0) {
      throw ValidationError(fmt::format("config {}: expected a non-negative integer", where(key)));
    }
    return v.get<std::uint64_t>();
  }

  std::string text(const char* key, const std::string& fallback) const {
    if (!has(key)) return fallback;
    const json& v = (*node_)[key];
    if (!v.is_string()) throw ValidationError(fmt::format("config {}: expected a string", where(key)));
    return v.get<std::string>();
  }

  /// Number in W or a suffix-tagged power string.
  double power(const char* key, double fallback) const {
    if (!has(key)) return fallback;
    const json& v = (*node_)[key];
    if (v.is_number()) return number(key, fallback);
    if (v.is_string()) {
      try {
        return parse_power(v.get<std::string>());
      } catch (const ValidationError& e) {
        throw ValidationError(fmt::format("config {}: {}", where(key), e.what()));
      }
    }
    throw ValidationError(fmt::format("config {}: expected a power", where(key)));
  }

  std::set<std::string> string_set(const char* key) const {
    const json& v = (*node_)[key];
    if (!v.is_array()) throw ValidationError(fmt::format("config {}: expected an array", where(key)));
    std::set<std::string> out;
    for (const auto& item : v) {
      if (!item.is_string()) {
        throw ValidationError(fmt::format("config {}: expected an array of strings", where(key)));
      }
      out.insert(item.get<std::string>());
    }
    return out;
  }

  template <typename Fn>
  auto wrap(const char* key, Fn&& fn) const {
    try {
      return fn();
    } catch (const ValidationError& e) {
      throw ValidationError(fmt::format("config {}: {}", where(key), e.what()));
    }
  }

 private:
  std::string path_;
  const json* node_ = nullptr;
};

void set_path(json& doc, const std::vector<std::string>& parts, json value) {
  json* node = &doc;
  for (std::size_t i = 0; i + 1 < parts.size(); ++i) {
    if (!node->contains(parts[i])) (*node)[parts[i]] = json::object();
    node = &(*node)[parts[i]];
    if (!node->is_object()) {
      throw ValidationError("override: '" + parts[i] + "' is not an object");
    }
  }
  (*node)[parts.back()] = std::move(value);
}

}  // namespace

void apply_override(json& doc, std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos || eq == 0) {
    throw ValidationError("override '" + std::string(assignment) + "' must be section.key=value");
  }
  const std::string key(assignment.substr(0, eq));
  const std::string raw(assignment.substr(eq + 1));
  std::vector<std::string> parts;
  std::stringstream stream(key);
  for (std::string part; std::getline(stream, part, '.');) {
    if (part.empty()) throw ValidationError("override '" + key + "' has an empty path component");
    parts.push_back(part);
  }
  json value = json::parse(raw, nullptr, false);
  if (value.is_discarded()) value = raw;
  set_path(doc, parts, std::move(value));
}

RunConfig parse_config(const json& doc) {
  if (!doc.is_object()) throw ValidationError("config: top level must be an object");
  const Section top(doc, "");
  if (!top.has("schema_version")) throw ValidationError("config /schema_version: required");
  if (top.count("schema_version", 0) != kSchemaVersion) {
    throw ValidationError(fmt::format("config /schema_version: unsupported (expected {})", kSchemaVersion));
  }

  RunConfig cfg;
  cfg.effective = doc;

  const Section constants(doc, "constants");
  cfg.constants.hbar = constants.number("hbar", cfg.constants.hbar);
  cfg.constants.mu0 = constants.number("mu0", cfg.constants.mu0);
  if (!(cfg.constants.hbar > 0) || !(cfg.constants.mu0 > 0)) {
    throw ValidationError("config /constants: hbar and mu0 must be positive");
  }

  const Section system(doc, "system");
  if (!system.present()) throw ValidationError("config /system: required");
  const double fc = system.required_number("cavity_freq_hz");
  cfg.system = system.wrap("", [&] {
    return SystemParamsd::from_hz(fc, system.number("magnon_freq_hz", fc),
                                  system.required_number("kappa_hz"),
                                  system.required_number("kappa_c_hz"),
                                  system.required_number("gamma_hz"), system.required_number("g_hz"),
                                  system.number("zeta_hz", 0.0));
  });
  cfg.eta = system.number("eta", 1.0);
  if (!(cfg.eta >= 0 && cfg.eta <= 1)) throw ValidationError("config /system/eta: must lie in [0, 1]");

  const Section material(doc, "material");
  auto& m = cfg.material;
  m.spin_density = material.number("spin_density_m3", 2.1e28);
  m.verdet = material.number("verdet_rad_m", 380.0);
  m.sample_length = material.number("sample_length_m", 0.75e-3);
  if (material.has("sample_radius_m") && material.has("sample_volume_m3")) {
    throw ValidationError("config /material: give sample_radius_m or sample_volume_m3, not both");
  }
  m.sample_volume = material.has("sample_volume_m3")
                        ? material.number("sample_volume_m3", 0.0)
                        : MaterialGeometry::sphere_volume(material.number("sample_radius_m", 0.38e-3));
  m.cavity_volume = material.number("cavity_volume_m3", 21e-3 * 19e-3 * 3e-3);
  m.gilbert_alpha = material.number("gilbert_alpha", 0.0);
  m.gyromagnetic_ratio = hz_to_rad(material.number("gyromagnetic_ratio_hz_t", 28.0e9));
  m.bare_kittel_freq = hz_to_rad(material.number("bare_kittel_freq_hz", 0.0));
  material.wrap("", [&] { m.validate(); return 0; });

  const Section bias(doc, "bias");
  cfg.bias.static_field = bias.number("static_field_t", cfg.bias.static_field);
  cfg.bias.field_per_current = bias.number("field_per_current_t_a", cfg.bias.field_per_current);
  cfg.bias.reference_current = bias.number("reference_current_a", cfg.bias.reference_current);
  cfg.bias.reference_kittel_freq = hz_to_rad(bias.number("reference_kittel_freq_hz", fc));
  cfg.bias.validate();

  const Section drive(doc, "drive");
  cfg.drive.power = drive.power("power", 0.015);
  cfg.drive.carrier_angular_freq = hz_to_rad(drive.number("carrier_freq_hz", 200e12));
  cfg.drive.validate();

  const Section simulate(doc, "simulate");
  auto& sim = cfg.simulate;
  if (simulate.has("kind")) {
    sim.kind = simulate.wrap("kind", [&] { return trace_kind_from_string(simulate.text("kind", "")); });
  }
  sim.start_hz = simulate.number("start_hz", 0.0);
  sim.stop_hz = simulate.number("stop_hz", 0.0);
  sim.points = simulate.count("points", sim.points);
  sim.noise_sigma = simulate.number("noise_sigma", 0.0);
  sim.seed = simulate.count("seed", sim.seed);
  sim.coil_gamma_c_hz = simulate.number("coil_gamma_c_hz", rad_to_hz(cfg.system.gamma));
  if (sim.noise_sigma < 0) throw ValidationError("config /simulate/noise_sigma: must be >= 0");

  const Section sweep(doc, "sweep");
  auto& sw = cfg.sweep;
  sw.freq_start_hz = sweep.number("freq_start_hz", 0.0);
  sw.freq_stop_hz = sweep.number("freq_stop_hz", 0.0);
  sw.freq_points = sweep.count("freq_points", sw.freq_points);
  sw.current_start_a = sweep.number("current_start_a", sw.current_start_a);
  sw.current_stop_a = sweep.number("current_stop_a", sw.current_stop_a);
  sw.current_points = sweep.count("current_points", sw.current_points);
  if (sweep.has("quantity")) {
    sw.quantity = sweep.wrap("quantity", [&] { return sweep_quantity_from_string(sweep.text("quantity", "")); });
  }

  const Section fit(doc, "fit");
  auto& f = cfg.fit;
  f.trace_path = fit.text("trace", "");
  if (fit.has("kind")) {
    f.kind = fit.wrap("kind", [&] { return trace_kind_from_string(fit.text("kind", "")); });
  }
  if (fit.has("fixed")) f.fixed = fit.string_set("fixed");
  f.options.max_iter = static_cast<int>(fit.count("max_iter", static_cast<std::uint64_t>(f.options.max_iter)));
  f.options.step_tolerance = fit.number("step_tolerance", f.options.step_tolerance);
  const Section init(doc, "fit.init");
  if (init.present()) {
    const auto& s = cfg.system;
    const double init_fc = init.number("cavity_freq_hz", rad_to_hz(s.omega_c));
    f.init = init.wrap("", [&] {
      return SystemParamsd::from_hz(
          init_fc, init.number("magnon_freq_hz", rad_to_hz(s.omega_m)),
          init.number("kappa_hz", rad_to_hz(s.kappa)), init.number("kappa_c_hz", rad_to_hz(s.kappa_c)),
          init.number("gamma_hz", rad_to_hz(s.gamma)), init.number("g_hz", rad_to_hz(s.g)),
          init.number("zeta_hz", rad_to_hz(s.zeta)));
    });
    if (init.has("gamma_c_hz") || init.has("magnon_freq_hz")) {
      f.coil_init = CoilInit{f.init->omega_m, f.init->gamma,
                             hz_to_rad(init.number("gamma_c_hz", rad_to_hz(f.init->gamma)))};
    }
  }

  const Section shot(doc, "shotnoise");
  auto& sn = cfg.shotnoise;
  sn.run.microwave_power = shot.power("microwave_power", dbm_to_watt(-41.0));
  sn.run.probe_photon_flux = shot.number("probe_photon_flux", 1.2e17);
  sn.run.resolution_bandwidth = hz_to_rad(shot.number("resolution_bandwidth_hz", 100.0));
  sn.run.coil_coupling = hz_to_rad(shot.number("coil_coupling_hz", 1.5e6));
  sn.run.magnon_freq = hz_to_rad(shot.number("magnon_freq_hz", 9.5e9));
  sn.run.measured_snr = db_to_linear(shot.number("snr_db", 36.8));
  if (shot.has("electronic_noise_psd")) sn.run.electronic_noise_psd = shot.number("electronic_noise_psd", 0.0);
  sn.reference_zeta_hz = shot.number("reference_zeta_hz", sn.reference_zeta_hz);
  sn.grid_bins = shot.count("grid_bins", sn.grid_bins);
  sn.run.validate();
  if (sn.grid_bins < 3) throw ValidationError("config /shotnoise/grid_bins: must be >= 3");

  const Section chain(doc, "chain");
  auto& ch = cfg.chain;
  ch.kappa_1_hz = chain.number("kappa_1_hz", ch.kappa_1_hz);
  ch.measured_csv = chain.text("measured_csv", "");
  ch.tone_power = chain.power("tone_power", ch.tone_power);
  ch.gain_db = chain.number("gain_db", ch.gain_db);
  ch.ripple_db = chain.number("ripple_db", ch.ripple_db);
  ch.ripple_period_hz = chain.number("ripple_period_hz", ch.ripple_period_hz);
  ch.start_hz = chain.number("start_hz", 0.0);
  ch.stop_hz = chain.number("stop_hz", 0.0);
  ch.points = chain.count("points", ch.points);
  if (ch.kappa_1_hz < 0) throw ValidationError("config /chain/kappa_1_hz: must be >= 0");

  const Section optimize(doc, "optimize");
  auto& op = cfg.optimize;
  op.search_span = optimize.number("search_span", 0.0);
  op.grid_points = static_cast<int>(optimize.count("grid_points", 201));
  op.landscape_points = optimize.count("landscape_points", op.landscape_points);
  if (op.grid_points < 3) throw ValidationError("config /optimize/grid_points: must be >= 3");
  if (op.search_span < 0) throw ValidationError("config /optimize/search_span: must be >= 0");
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path, const std::vector<std::string>& overrides) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file " + path.string());
  json doc = json::parse(in, nullptr, false);
  if (doc.is_discarded()) throw ValidationError("config " + path.string() + ": not valid JSON");
  for (const auto& o : overrides) apply_override(doc, o);
  return parse_config(doc);
}

}  // namespace magnonlink
