#pragma once

// Maximization of the photon conversion efficiency over the cavity and
// magnon detunings. All searching happens in normalized coordinates
// x = delta_c / (kappa + kappa_c), y = delta_m / gamma.

#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "magnonlink/model.hpp"

namespace magnonlink {

enum class Definiteness { MAX, MIN, SADDLE, DEGENERATE };
std::string_view to_string(Definiteness d);

struct OptimumReport {
  Detuningsd det;  // rad/s
  double x = 0;    // normalized cavity detuning
  double y = 0;    // normalized magnon detuning
  double efficiency = 0;
  double gradient_norm = 0;  // |grad E| / E in normalized coordinates
  Definiteness hessian_definiteness = Definiteness::DEGENERATE;
  double gain_over_resonant = 1;
  double resonant_efficiency = 0;
  double cooperativity = 0;
  double search_span = 0;  // normalized half-width of the coarse grid
  int refine_iterations = 0;
};

struct OptimizerOptions {
  /// Normalized half-width of the coarse grid; <= 0 picks 3 max(sqrt(C), 1).
  double search_span = 0;
  int grid_points = 201;
  int max_refine_iter = 200;
  double step_tolerance = 1e-10;
  unsigned threads = 0;
};

/// Global maximum of efficiency_detuned. Of the symmetric pair (+-delta_c,
/// +-delta_m) the representative with delta_c >= 0 is returned. A flat
/// landscape (g = 0 or zeta = 0) is reported as DEGENERATE at the origin.
/// Throws SearchSpanError when the coarse maximum lies on the grid boundary.
OptimumReport find_optimum(const SystemParamsd& params, const OptimizerOptions& options = {});

/// Central-difference gradient of the efficiency in normalized detunings,
/// divided by the efficiency at `det` (unscaled when that is zero).
std::pair<double, double> stationarity_residual(const SystemParamsd& params,
                                                const Detuningsd& det);

/// Efficiency over a rectangular detuning grid. Axes are in Hz; entry (i, j)
/// is at (delta_c_hz[i], delta_m_hz[j]).
struct EfficiencyLandscape {
  std::vector<double> delta_c_hz;
  std::vector<double> delta_m_hz;
  Eigen::MatrixXd efficiency;
};

EfficiencyLandscape efficiency_landscape(const SystemParamsd& params,
                                         const std::vector<double>& delta_c_hz,
                                         const std::vector<double>& delta_m_hz,
                                         unsigned threads = 0);

/// Best operating point reachable at a fixed magnon frequency by tuning
/// the probe frequency only, i.e. along delta_c = omega - omega_c,
/// delta_m = omega - omega_m.
struct TrajectoryOptimum {
  double omega = 0;  // rad/s
  Detuningsd det;
  double efficiency = 0;
};

TrajectoryOptimum optimize_along_trajectory(const SystemParamsd& params, double search_span = 0);

}  // namespace magnonlink
