#pragma once

// Two-dimensional maps over probe frequency and coil current.

#include <complex>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "magnonlink/microscopic.hpp"
#include "magnonlink/model.hpp"

namespace magnonlink {

enum class SweepQuantity { S11_POWER, S11_COMPLEX, SLM_POWER, SLM_COMPLEX, EFFICIENCY };

std::string_view to_string(SweepQuantity q);
SweepQuantity sweep_quantity_from_string(std::string_view name);
/// True for the quantities whose values carry a meaningful imaginary part.
bool is_complex(SweepQuantity q);

struct SweepGrid {
  std::vector<double> freq_axis;     // Hz
  std::vector<double> current_axis;  // A
  SweepQuantity quantity = SweepQuantity::S11_POWER;
  Eigen::MatrixXcd values;           // rows: current, columns: frequency

  /// Increasing axes, matching dimensions, finite entries.
  void validate() const;
};

/// Value of `q` at one probe frequency; the real quantities have zero
/// imaginary part.
std::complex<double> evaluate_quantity(const SystemParamsd& params, SweepQuantity q, double omega,
                                       double eta = 1.0);

/// For each current I the magnon frequency is set to
/// kittel_freq_from_current(bias, I) and `q` is evaluated on `freq_hz`.
/// Rows are computed in parallel; the result does not depend on `threads`.
SweepGrid run_sweep(const SystemParamsd& params, const FieldBias& bias, double gyromagnetic_ratio,
                    const std::vector<double>& freq_hz, const std::vector<double>& current_a,
                    SweepQuantity q, double eta = 1.0, unsigned threads = 0);

}  // namespace magnonlink
