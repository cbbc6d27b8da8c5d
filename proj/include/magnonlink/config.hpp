#pragma once

// JSON run configuration. Frequencies are in Hz, lengths in m, currents in
// A; powers are numbers in W or suffix-tagged strings ("-41 dBm", "15 mW").
// Conversion to angular units happens here, once.

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "magnonlink/calibration.hpp"
#include "magnonlink/fitting.hpp"
#include "magnonlink/microscopic.hpp"
#include "magnonlink/model.hpp"
#include "magnonlink/spectrum.hpp"
#include "magnonlink/sweep.hpp"

namespace magnonlink {

inline constexpr int kSchemaVersion = 1;

struct SimulateSpec {
  TraceKind kind = TraceKind::S11_HYBRID;
  double start_hz = 0;  // 0/0 selects the cavity frequency +- 4 (kappa + kappa_c)
  double stop_hz = 0;
  std::size_t points = 801;
  double noise_sigma = 0;
  std::uint64_t seed = 1;
  double coil_gamma_c_hz = 0;  // port coupling for S11_COIL traces
};

struct SweepSpec {
  double freq_start_hz = 0;  // 0/0 selects the cavity frequency +- 250 MHz
  double freq_stop_hz = 0;
  std::size_t freq_points = 801;
  double current_start_a = 0.0;
  double current_stop_a = 0.8;
  std::size_t current_points = 201;
  SweepQuantity quantity = SweepQuantity::S11_POWER;
};

struct FitSpec {
  std::string trace_path;
  std::optional<TraceKind> kind;  // overrides the kind recorded in the trace file
  std::optional<std::set<std::string>> fixed;
  std::optional<SystemParamsd> init;
  std::optional<CoilInit> coil_init;
  FitOptions options;
};

struct ShotNoiseSpec {
  ShotNoiseRun run;
  double reference_zeta_hz = 0.25e-3;
  std::size_t grid_bins = 201;
};

struct ChainSpec {
  double kappa_1_hz = 42e3;
  std::string measured_csv;  // freq_hz,tone_power_w,measured_power_w; empty = synthetic
  double tone_power = 1e-6;  // W, synthetic chains only
  double gain_db = 60.0;
  double ripple_db = 1.0;
  double ripple_period_hz = 5e6;
  double start_hz = 0;  // 0/0 selects the cavity frequency +- 100 MHz
  double stop_hz = 0;
  std::size_t points = 2001;
};

struct OptimizeSpec {
  double search_span = 0;  // normalized units; 0 = automatic
  int grid_points = 201;
  std::size_t landscape_points = 201;
};

struct RunConfig {
  nlohmann::json effective;  // document after overrides; hashed for provenance
  SystemParamsd system;
  double eta = 1.0;
  MaterialGeometry material;
  FieldBias bias;
  OpticalDriveParams drive;
  PhysicalConstants constants;
  SimulateSpec simulate;
  SweepSpec sweep;
  FitSpec fit;
  ShotNoiseSpec shotnoise;
  ChainSpec chain;
  OptimizeSpec optimize;
};

/// Allowed keys per object path ("" is the top level, "fit.init" the nested
/// fit initial-guess block).
const std::map<std::string, std::set<std::string>>& config_schema_keys();

/// Applies "section.key=value". The value is parsed as JSON when possible
/// and kept as a string otherwise.
void apply_override(nlohmann::json& doc, std::string_view assignment);

/// Validates and converts a configuration document. Unknown keys and type
/// mismatches are reported with their JSON path.
RunConfig parse_config(const nlohmann::json& doc);

RunConfig load_config(const std::filesystem::path& path,
                      const std::vector<std::string>& overrides = {});

}  // namespace magnonlink
