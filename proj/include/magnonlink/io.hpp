#pragma once

// File formats: CSV for traces and grids, JSON for structured results, and
// a manifest with SHA-256 digests of every file written in a run.

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "magnonlink/calibration.hpp"
#include "magnonlink/fitting.hpp"
#include "magnonlink/optimizer.hpp"
#include "magnonlink/spectrum.hpp"
#include "magnonlink/sweep.hpp"

namespace magnonlink {

/// Shortest text that reads back to the same double (17 significant digits).
std::string format_number(double value);

std::string sha256_hex(const std::string& bytes);

/// Digest of the canonical serialization of a configuration document.
std::string config_hash(const nlohmann::json& doc);

struct CsvTable {
  std::map<std::string, std::string> meta;  // from "# key=value" lines
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;

  /// Index of a named column; throws ValidationError when absent.
  std::size_t column(const std::string& name) const;
};

CsvTable read_csv(const std::filesystem::path& path);

/// "freq_hz,re,im" (or "freq_hz,power_w" for POWER_ONLY), preceded by
/// "# key=value" lines for the kind and metadata.
std::string trace_to_csv(const SpectrumTrace& trace);
SpectrumTrace read_trace_csv(const std::filesystem::path& path);

/// Long form "current_a,freq_hz,value" or "current_a,freq_hz,re,im".
std::string sweep_to_csv(const SweepGrid& grid);
SweepGrid read_sweep_csv(const std::filesystem::path& path);

std::string landscape_to_csv(const EfficiencyLandscape& landscape);

nlohmann::json trace_to_json(const SpectrumTrace& trace);
nlohmann::json sweep_to_json(const SweepGrid& grid);
nlohmann::json fit_to_json(const FitResult& fit);
nlohmann::json optimum_to_json(const OptimumReport& report);
nlohmann::json system_to_json(const SystemParamsd& p);

/// Collects the files of one run in `dir` and finishes with manifest.json.
/// Files are written in call order; the manifest lists them sorted by name.
class OutputSet {
 public:
  OutputSet(std::filesystem::path dir, std::string config_digest);

  void write(const std::string& name, const std::string& content);
  void write_json(const std::string& name, const nlohmann::json& doc);
  /// Writes manifest.json; returns its path.
  std::filesystem::path finish(const std::string& command);

  const std::filesystem::path& dir() const { return dir_; }

 private:
  std::filesystem::path dir_;
  std::string config_digest_;
  std::map<std::string, std::string> digests_;
};

}  // namespace magnonlink
