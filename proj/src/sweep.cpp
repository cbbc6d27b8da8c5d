#include "magnonlink/sweep.hpp"

#include <cmath>
#include <fmt/format.h>

#include "magnonlink/errors.hpp"
#include "magnonlink/parallel.hpp"

namespace magnonlink {

std::string_view to_string(SweepQuantity q) {
  switch (q) {
    case SweepQuantity::S11_POWER: return "S11_POWER";
    case SweepQuantity::S11_COMPLEX: return "S11_COMPLEX";
    case SweepQuantity::SLM_POWER: return "SLM_POWER";
    case SweepQuantity::SLM_COMPLEX: return "SLM_COMPLEX";
    case SweepQuantity::EFFICIENCY: return "EFFICIENCY";
  }
  return "UNKNOWN";
}

SweepQuantity sweep_quantity_from_string(std::string_view name) {
  for (auto q : {SweepQuantity::S11_POWER, SweepQuantity::S11_COMPLEX, SweepQuantity::SLM_POWER,
                 SweepQuantity::SLM_COMPLEX, SweepQuantity::EFFICIENCY}) {
    if (name == to_string(q)) return q;
  }
  throw ValidationError("unknown sweep quantity '" + std::string(name) +
                        "' (expected S11_POWER, S11_COMPLEX, SLM_POWER, SLM_COMPLEX or EFFICIENCY)");
}

bool is_complex(SweepQuantity q) {
  return q == SweepQuantity::S11_COMPLEX || q == SweepQuantity::SLM_COMPLEX;
}

namespace {

void require_increasing(const std::vector<double>& axis, const char* name) {
  if (axis.empty()) throw ValidationError(std::string("sweep: ") + name + " is empty");
  for (std::size_t i = 0; i < axis.size(); ++i) {
    if (!std::isfinite(axis[i])) {
      throw ValidationError(fmt::format("sweep: {}[{}] is not finite", name, i));
    }
    if (i > 0 && !(axis[i] > axis[i - 1])) {
      throw ValidationError(fmt::format("sweep: {} must be strictly increasing (index {})", name, i));
    }
  }
}

}  // namespace

void SweepGrid::validate() const {
  require_increasing(freq_axis, "freq_axis");
  require_increasing(current_axis, "current_axis");
  if (values.rows() != static_cast<Eigen::Index>(current_axis.size()) ||
      values.cols() != static_cast<Eigen::Index>(freq_axis.size())) {
    throw ValidationError("sweep: value matrix does not match the axes");
  }
  if (!values.allFinite()) throw ValidationError("sweep: non-finite value");
}

std::complex<double> evaluate_quantity(const SystemParamsd& params, SweepQuantity q, double omega,
                                       double eta) {
  switch (q) {
    case SweepQuantity::S11_POWER: return std::norm(s11_hybrid(params, omega));
    case SweepQuantity::S11_COMPLEX: return s11_hybrid(params, omega);
    case SweepQuantity::SLM_POWER: return std::norm(s_lm(params, eta, omega));
    case SweepQuantity::SLM_COMPLEX: return s_lm(params, eta, omega);
    case SweepQuantity::EFFICIENCY: return std::norm(s_ml_plus(params, omega));
  }
  throw ValidationError("unknown sweep quantity");
}

SweepGrid run_sweep(const SystemParamsd& params, const FieldBias& bias, double gyromagnetic_ratio,
                    const std::vector<double>& freq_hz, const std::vector<double>& current_a,
                    SweepQuantity q, double eta, unsigned threads) {
  params.validate();
  bias.validate();
  require_increasing(freq_hz, "freq_axis");
  require_increasing(current_a, "current_axis");
  SweepGrid grid{freq_hz, current_a, q,
                 Eigen::MatrixXcd(static_cast<Eigen::Index>(current_a.size()),
                                  static_cast<Eigen::Index>(freq_hz.size()))};
  parallel_for(current_a.size(), threads, [&](std::size_t i) {
    const double current = current_a[i];
    SystemParamsd row = params;
    row.omega_m = kittel_freq_from_current(bias, current, gyromagnetic_ratio);
    try {
      row.validate();
    } catch (const ValidationError& e) {
      throw ValidationError(fmt::format("sweep at I = {:.6g} A: {}", current, e.what()));
    }
    for (std::size_t j = 0; j < freq_hz.size(); ++j) {
      try {
        grid.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
            evaluate_quantity(row, q, hz_to_rad(freq_hz[j]), eta);
      } catch (const SingularInputError& e) {
        throw SingularInputError(
            fmt::format("sweep at I = {:.6g} A, f = {:.9g} Hz: {}", current, freq_hz[j], e.what()));
      }
    }
  });
  return grid;
}

}  // namespace magnonlink
