#include "magnonlink/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include <fmt/format.h>
#include <openssl/evp.h>

#include "magnonlink/errors.hpp"

namespace magnonlink {

using nlohmann::json;

std::string format_number(double value) { return fmt::format("{:.17g}", value); }

std::string sha256_hex(const std::string& bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int length = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &length, EVP_sha256(), nullptr) != 1) {
    throw IoError("SHA-256 computation failed");
  }
  std::string out;
  out.reserve(2 * length);
  for (unsigned int i = 0; i < length; ++i) out += fmt::format("{:02x}", digest[i]);
  return out;
}

std::string config_hash(const json& doc) { return sha256_hex(doc.dump()); }

std::size_t CsvTable::column(const std::string& name) const {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return i;
  }
  throw ValidationError("CSV has no column '" + name + "'");
}

namespace {

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::stringstream stream(line);
  for (std::string cell; std::getline(stream, cell, sep);) {
    while (!cell.empty() && (cell.back() == '\r' || cell.back() == ' ')) cell.pop_back();
    while (!cell.empty() && cell.front() == ' ') cell.erase(cell.begin());
    out.push_back(cell);
  }
  return out;
}

double parse_double(const std::string& cell, const std::filesystem::path& path, std::size_t line) {
  double value = 0;
  const char* begin = cell.data();
  const char* end = begin + cell.size();
  if (!cell.empty() && *begin == '+') ++begin;
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end) {
    throw ValidationError(fmt::format("{}:{}: '{}' is not a number", path.string(), line, cell));
  }
  return value;
}

std::string meta_lines(const std::map<std::string, std::string>& meta) {
  std::string out;
  for (const auto& [k, v] : meta) out += fmt::format("# {}={}\n", k, v);
  return out;
}

}  // namespace

CsvTable read_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  CsvTable table;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line.front() == '#') {
      const auto eq = line.find('=');
      if (eq != std::string::npos) {
        auto key = line.substr(1, eq - 1);
        while (!key.empty() && key.front() == ' ') key.erase(key.begin());
        table.meta[key] = line.substr(eq + 1);
      }
      continue;
    }
    auto cells = split(line, ',');
    if (table.header.empty()) {
      table.header = std::move(cells);
      continue;
    }
    if (cells.size() != table.header.size()) {
      throw ValidationError(fmt::format("{}:{}: expected {} columns, found {}", path.string(),
                                        number, table.header.size(), cells.size()));
    }
    std::vector<double> row;
    row.reserve(cells.size());
    for (const auto& c : cells) row.push_back(parse_double(c, path, number));
    table.rows.push_back(std::move(row));
  }
  if (table.header.empty()) throw ValidationError(path.string() + ": no header line");
  return table;
}

std::string trace_to_csv(const SpectrumTrace& trace) {
  auto meta = trace.meta;
  meta["kind"] = std::string(to_string(trace.kind));
  std::string out = meta_lines(meta);
  if (trace.kind == TraceKind::POWER_ONLY) {
    out += "freq_hz,power_w\n";
    for (std::size_t i = 0; i < trace.size(); ++i) {
      out += fmt::format("{:.17g},{:.17g}\n", trace.freq[i], trace.value[i].real());
    }
  } else {
    out += "freq_hz,re,im\n";
    for (std::size_t i = 0; i < trace.size(); ++i) {
      out += fmt::format("{:.17g},{:.17g},{:.17g}\n", trace.freq[i], trace.value[i].real(),
                         trace.value[i].imag());
    }
  }
  return out;
}

SpectrumTrace read_trace_csv(const std::filesystem::path& path) {
  const CsvTable table = read_csv(path);
  SpectrumTrace trace;
  trace.meta = table.meta;
  const bool power = table.header.size() == 2;
  if (table.meta.contains("kind")) {
    trace.kind = trace_kind_from_string(table.meta.at("kind"));
  } else {
    trace.kind = power ? TraceKind::POWER_ONLY : TraceKind::S11_HYBRID;
  }
  trace.meta.erase("kind");
  const std::size_t f = table.column("freq_hz");
  for (const auto& row : table.rows) {
    trace.freq.push_back(row[f]);
    if (power) {
      trace.value.emplace_back(row[table.column("power_w")], 0.0);
    } else {
      trace.value.emplace_back(row[table.column("re")], row[table.column("im")]);
    }
  }
  if ((trace.kind == TraceKind::POWER_ONLY) != power) {
    throw ValidationError(path.string() + ": columns do not match trace kind " +
                          std::string(to_string(trace.kind)));
  }
  trace.validate();
  return trace;
}

std::string sweep_to_csv(const SweepGrid& grid) {
  std::string out = fmt::format("# quantity={}\n", to_string(grid.quantity));
  const bool complex = is_complex(grid.quantity);
  out += complex ? "current_a,freq_hz,re,im\n" : "current_a,freq_hz,value\n";
  for (std::size_t i = 0; i < grid.current_axis.size(); ++i) {
    for (std::size_t j = 0; j < grid.freq_axis.size(); ++j) {
      const auto v = grid.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
      if (complex) {
        out += fmt::format("{:.17g},{:.17g},{:.17g},{:.17g}\n", grid.current_axis[i],
                           grid.freq_axis[j], v.real(), v.imag());
      } else {
        out += fmt::format("{:.17g},{:.17g},{:.17g}\n", grid.current_axis[i], grid.freq_axis[j],
                           v.real());
      }
    }
  }
  return out;
}

SweepGrid read_sweep_csv(const std::filesystem::path& path) {
  const CsvTable table = read_csv(path);
  SweepGrid grid;
  grid.quantity = sweep_quantity_from_string(table.meta.contains("quantity")
                                                 ? table.meta.at("quantity")
                                                 : std::string("S11_POWER"));
  const std::size_t ci = table.column("current_a");
  const std::size_t fi = table.column("freq_hz");
  const bool complex = is_complex(grid.quantity);
  for (const auto& row : table.rows) {
    if (grid.current_axis.empty() || row[ci] != grid.current_axis.back()) {
      grid.current_axis.push_back(row[ci]);
    }
    if (grid.current_axis.size() == 1) grid.freq_axis.push_back(row[fi]);
  }
  const auto rows = static_cast<Eigen::Index>(grid.current_axis.size());
  const auto cols = static_cast<Eigen::Index>(grid.freq_axis.size());
  if (static_cast<Eigen::Index>(table.rows.size()) != rows * cols) {
    throw ValidationError(path.string() + ": long-form sweep is not a complete grid");
  }
  grid.values.resize(rows, cols);
  for (Eigen::Index k = 0; k < rows * cols; ++k) {
    const auto& row = table.rows[static_cast<std::size_t>(k)];
    if (row[fi] != grid.freq_axis[static_cast<std::size_t>(k % cols)]) {
      throw ValidationError(path.string() + ": frequency axis differs between rows");
    }
    grid.values(k / cols, k % cols) =
        complex ? std::complex<double>(row[table.column("re")], row[table.column("im")])
                : std::complex<double>(row[table.column("value")], 0.0);
  }
  grid.validate();
  return grid;
}

std::string landscape_to_csv(const EfficiencyLandscape& landscape) {
  std::string out = "dc_hz,dm_hz,efficiency\n";
  for (std::size_t i = 0; i < landscape.delta_c_hz.size(); ++i) {
    for (std::size_t j = 0; j < landscape.delta_m_hz.size(); ++j) {
      out += fmt::format("{:.17g},{:.17g},{:.17g}\n", landscape.delta_c_hz[i],
                         landscape.delta_m_hz[j],
                         landscape.efficiency(static_cast<Eigen::Index>(i),
                                              static_cast<Eigen::Index>(j)));
    }
  }
  return out;
}

json trace_to_json(const SpectrumTrace& trace) {
  json re = json::array(), im = json::array();
  for (const auto& v : trace.value) {
    re.push_back(v.real());
    im.push_back(v.imag());
  }
  json doc{{"kind", to_string(trace.kind)}, {"freq_hz", trace.freq}, {"meta", trace.meta}};
  if (trace.kind == TraceKind::POWER_ONLY) {
    doc["power_w"] = re;
  } else {
    doc["re"] = re;
    doc["im"] = im;
  }
  return doc;
}

json sweep_to_json(const SweepGrid& grid) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < grid.values.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < grid.values.cols(); ++j) {
      const auto v = grid.values(i, j);
      if (is_complex(grid.quantity)) {
        row.push_back(json::array({v.real(), v.imag()}));
      } else {
        row.push_back(v.real());
      }
    }
    rows.push_back(std::move(row));
  }
  return json{{"quantity", to_string(grid.quantity)},
              {"current_a", grid.current_axis},
              {"freq_hz", grid.freq_axis},
              {"values", rows}};
}

json system_to_json(const SystemParamsd& p) {
  return json{{"cavity_freq_hz", rad_to_hz(p.omega_c)}, {"magnon_freq_hz", rad_to_hz(p.omega_m)},
              {"kappa_hz", rad_to_hz(p.kappa)},         {"kappa_c_hz", rad_to_hz(p.kappa_c)},
              {"gamma_hz", rad_to_hz(p.gamma)},         {"g_hz", rad_to_hz(p.g)},
              {"zeta_hz", rad_to_hz(p.zeta)}};
}

json fit_to_json(const FitResult& fit) {
  // Angular quantities leave the program in Hz; the phase stays in rad.
  std::vector<double> unit(fit.names.size());
  for (std::size_t i = 0; i < fit.names.size(); ++i) unit[i] = fit.names[i] == "phase" ? 1.0 : 1.0 / two_pi;
  json params = json::object();
  for (std::size_t i = 0; i < fit.names.size(); ++i) {
    const auto k = static_cast<Eigen::Index>(i);
    params[fit.names[i]] = json{{"value", fit.values(k) * unit[i]},
                                {"std_error", fit.std_error(fit.names[i]) * unit[i]}};
  }
  json cov = json::array();
  for (Eigen::Index i = 0; i < fit.covariance.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < fit.covariance.cols(); ++j) {
      row.push_back(fit.covariance(i, j) * unit[static_cast<std::size_t>(i)] *
                    unit[static_cast<std::size_t>(j)]);
    }
    cov.push_back(std::move(row));
  }
  json doc{{"kind", to_string(fit.kind)},
           {"units", "Hz for frequencies and rates, rad for phase"},
           {"parameters", params},
           {"names", fit.names},
           {"covariance", cov},
           {"system_hz", system_to_json(fit.params)},
           {"residual_norm", fit.residual_norm},
           {"converged", fit.converged},
           {"iterations", fit.iterations},
           {"flags", fit.flags}};
  if (fit.eta_zeta) doc["eta_zeta_hz"] = rad_to_hz(*fit.eta_zeta);
  if (fit.phase) doc["phase_rad"] = *fit.phase;
  if (fit.gamma_c) doc["gamma_c_hz"] = rad_to_hz(*fit.gamma_c);
  if (fit.regime) doc["regime"] = to_string(*fit.regime);
  return doc;
}

json optimum_to_json(const OptimumReport& r) {
  return json{{"delta_c_hz", rad_to_hz(r.det.delta_c)},
              {"delta_m_hz", rad_to_hz(r.det.delta_m)},
              {"x_normalized", r.x},
              {"y_normalized", r.y},
              {"efficiency", r.efficiency},
              {"gradient_norm", r.gradient_norm},
              {"hessian_definiteness", to_string(r.hessian_definiteness)},
              {"gain_over_resonant", r.gain_over_resonant},
              {"resonant_efficiency", r.resonant_efficiency},
              {"cooperativity", r.cooperativity},
              {"search_span", r.search_span},
              {"refine_iterations", r.refine_iterations}};
}

OutputSet::OutputSet(std::filesystem::path dir, std::string config_digest)
    : dir_(std::move(dir)), config_digest_(std::move(config_digest)) {
  std::error_code ec;
  std::filesystem::create_directories(dir_, ec);
  if (ec) throw IoError("cannot create output directory " + dir_.string() + ": " + ec.message());
}

void OutputSet::write(const std::string& name, const std::string& content) {
  const auto path = dir_ / name;
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << content;
  out.close();
  if (!out) throw IoError("failed writing " + path.string());
  digests_[name] = sha256_hex(content);
}

void OutputSet::write_json(const std::string& name, const json& doc) {
  write(name, doc.dump(2) + "\n");
}

std::filesystem::path OutputSet::finish(const std::string& command) {
  json files = json::array();
  for (const auto& [name, digest] : digests_) files.push_back(json{{"path", name}, {"sha256", digest}});
  const json manifest{{"command", command},
                      {"config_sha256", config_digest_},
                      {"schema_version", 1},
                      {"files", files}};
  const auto path = dir_ / "manifest.json";
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << manifest.dump(2) << "\n";
  if (!out) throw IoError("failed writing " + path.string());
  return path;
}

}  // namespace magnonlink
