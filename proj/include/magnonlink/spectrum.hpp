#pragma once

#include <complex>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "magnonlink/model.hpp"

namespace magnonlink {

enum class TraceKind { S11_HYBRID, S11_COIL, S_LM, POWER_ONLY };

std::string_view to_string(TraceKind kind);
TraceKind trace_kind_from_string(std::string_view name);

/// Ordered samples of a measured or simulated response. Frequencies are in
/// Hz. POWER_ONLY traces keep the power in the real part of `value`.
struct SpectrumTrace {
  std::vector<double> freq;
  std::vector<std::complex<double>> value;
  TraceKind kind = TraceKind::S11_HYBRID;
  std::map<std::string, std::string> meta;

  /// Strictly increasing frequencies, equal lengths >= 8, finite values.
  void validate() const;
  std::size_t size() const { return freq.size(); }
};

/// Inclusive linear grid of `points` frequencies.
std::vector<double> linear_grid(double start, double stop, std::size_t points);

/// Model value for one sample of the given kind. POWER_ONLY evaluates the
/// light-to-microwave photon efficiency |S_ML^+|^2; S11_COIL is not
/// described by SystemParams and is rejected here (see coil overloads).
std::complex<double> evaluate_kind(const SystemParamsd& params, TraceKind kind, double omega,
                                   double eta = 1.0);

/// Noise-free or noisy trace on `freq_hz`. Noise is independent Gaussian
/// per quadrature (real part only for POWER_ONLY) and fully determined by
/// `seed`.
SpectrumTrace synthesize_trace(const SystemParamsd& params, TraceKind kind,
                               std::span<const double> freq_hz, double noise_sigma,
                               std::uint64_t seed, double eta = 1.0);

SpectrumTrace synthesize_coil_trace(double omega_m, double gamma, double gamma_c,
                                    std::span<const double> freq_hz, double noise_sigma,
                                    std::uint64_t seed);

/// Indices of strict interior local minima.
std::vector<std::size_t> local_minima(std::span<const double> values);
std::vector<std::size_t> local_maxima(std::span<const double> values);

}  // namespace magnonlink
