#include "magnonlink/spectrum.hpp"

#include <cmath>
#include <random>

#include "magnonlink/errors.hpp"

namespace magnonlink {

std::string_view to_string(TraceKind kind) {
  switch (kind) {
    case TraceKind::S11_HYBRID: return "S11_HYBRID";
    case TraceKind::S11_COIL: return "S11_COIL";
    case TraceKind::S_LM: return "S_LM";
    case TraceKind::POWER_ONLY: return "POWER_ONLY";
  }
  return "UNKNOWN";
}

TraceKind trace_kind_from_string(std::string_view name) {
  if (name == "S11_HYBRID") return TraceKind::S11_HYBRID;
  if (name == "S11_COIL") return TraceKind::S11_COIL;
  if (name == "S_LM") return TraceKind::S_LM;
  if (name == "POWER_ONLY") return TraceKind::POWER_ONLY;
  throw ValidationError("unknown trace kind '" + std::string(name) +
                        "' (expected S11_HYBRID, S11_COIL, S_LM or POWER_ONLY)");
}

void SpectrumTrace::validate() const {
  if (freq.size() != value.size()) {
    throw ValidationError("trace: frequency and value arrays differ in length");
  }
  if (freq.size() < 8) throw ValidationError("trace: at least 8 samples are required");
  for (std::size_t i = 0; i < freq.size(); ++i) {
    if (!std::isfinite(freq[i]) || !std::isfinite(value[i].real()) ||
        !std::isfinite(value[i].imag())) {
      throw ValidationError("trace: non-finite sample at index " + std::to_string(i));
    }
    if (i > 0 && !(freq[i] > freq[i - 1])) {
      throw ValidationError("trace: frequencies must be strictly increasing (index " +
                            std::to_string(i) + ")");
    }
  }
}

std::vector<double> linear_grid(double start, double stop, std::size_t points) {
  if (points < 2 || !(stop > start)) {
    throw ValidationError("grid: need at least 2 points and stop > start");
  }
  std::vector<double> grid(points);
  const double step = (stop - start) / static_cast<double>(points - 1);
  for (std::size_t i = 0; i < points; ++i) grid[i] = start + step * static_cast<double>(i);
  grid.back() = stop;
  return grid;
}

std::complex<double> evaluate_kind(const SystemParamsd& params, TraceKind kind, double omega,
                                   double eta) {
  switch (kind) {
    case TraceKind::S11_HYBRID: return s11_hybrid(params, omega);
    case TraceKind::S_LM: return s_lm(params, eta, omega);
    case TraceKind::POWER_ONLY: return std::norm(s_ml_plus(params, omega));
    case TraceKind::S11_COIL: break;
  }
  throw ValidationError("S11_COIL traces are parameterized by (omega_m, gamma, gamma_c)");
}

namespace {

SpectrumTrace add_noise(SpectrumTrace trace, double sigma, std::uint64_t seed) {
  if (sigma < 0) throw ValidationError("noise_sigma must be >= 0");
  if (sigma == 0) return trace;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, sigma);
  for (auto& v : trace.value) {
    const double re = normal(rng);
    const double im = normal(rng);
    v += trace.kind == TraceKind::POWER_ONLY ? std::complex<double>(re, 0)
                                             : std::complex<double>(re, im);
  }
  return trace;
}

}  // namespace

SpectrumTrace synthesize_trace(const SystemParamsd& params, TraceKind kind,
                               std::span<const double> freq_hz, double noise_sigma,
                               std::uint64_t seed, double eta) {
  params.validate();
  SpectrumTrace trace;
  trace.kind = kind;
  trace.freq.assign(freq_hz.begin(), freq_hz.end());
  trace.value.reserve(freq_hz.size());
  for (double f : freq_hz) trace.value.push_back(evaluate_kind(params, kind, hz_to_rad(f), eta));
  trace.meta["seed"] = std::to_string(seed);
  return add_noise(std::move(trace), noise_sigma, seed);
}

SpectrumTrace synthesize_coil_trace(double omega_m, double gamma, double gamma_c,
                                    std::span<const double> freq_hz, double noise_sigma,
                                    std::uint64_t seed) {
  if (!(omega_m > 0) || gamma < 0 || gamma_c < 0) {
    throw ValidationError("coil trace: omega_m > 0 and gamma, gamma_c >= 0 required");
  }
  SpectrumTrace trace;
  trace.kind = TraceKind::S11_COIL;
  trace.freq.assign(freq_hz.begin(), freq_hz.end());
  trace.value.reserve(freq_hz.size());
  for (double f : freq_hz) trace.value.push_back(s11_coil(omega_m, gamma, gamma_c, hz_to_rad(f)));
  trace.meta["seed"] = std::to_string(seed);
  return add_noise(std::move(trace), noise_sigma, seed);
}

std::vector<std::size_t> local_minima(std::span<const double> values) {
  std::vector<std::size_t> out;
  for (std::size_t i = 1; i + 1 < values.size(); ++i) {
    if (values[i] < values[i - 1] && values[i] < values[i + 1]) out.push_back(i);
  }
  return out;
}

std::vector<std::size_t> local_maxima(std::span<const double> values) {
  std::vector<std::size_t> out;
  for (std::size_t i = 1; i + 1 < values.size(); ++i) {
    if (values[i] > values[i - 1] && values[i] > values[i + 1]) out.push_back(i);
  }
  return out;
}

}  // namespace magnonlink
