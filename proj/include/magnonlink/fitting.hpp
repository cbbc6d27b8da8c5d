#pragma once

// Parameter recovery from complex spectra by damped (Levenberg-Marquardt)
// least squares on real/imaginary residual pairs, with central-difference
// Jacobians.

#include <functional>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "magnonlink/finite_difference.hpp"
#include "magnonlink/spectrum.hpp"

namespace magnonlink {

struct FitOptions {
  int max_iter = 500;
  double step_tolerance = 1e-9;      // max_i |dx_i| / scale_i
  double gradient_tolerance = 1e-9;  // relative to the initial scaled gradient
  double initial_damping = 1e-3;
  double damping_up = 10.0;
  double damping_down = 0.1;
  FiniteDifferenceStep fd{};
};

/// A residual function together with what the solver needs to know about
/// its parameters.
struct LeastSquaresProblem {
  std::function<Eigen::VectorXd(const Eigen::VectorXd&)> residuals;
  /// Per-parameter magnitude used for finite-difference steps and the
  /// relative-step stopping rule.
  std::function<Eigen::VectorXd(const Eigen::VectorXd&)> scales;
  /// Lower bounds; -inf where unbounded. Trial points are projected onto them.
  Eigen::VectorXd lower;
};

struct LeastSquaresOutcome {
  Eigen::VectorXd x;
  Eigen::VectorXd residual;
  Eigen::MatrixXd jacobian;
  double cost = 0;  // sum of squared residuals
  bool converged = false;
  int iterations = 0;
  std::string stop_reason;
};

/// Levenberg-Marquardt with Marquardt (diagonal) scaling and multiplicative
/// damping: damping grows by `damping_up` on a rejected step and shrinks by
/// `damping_down` on an accepted one. Stops when the relative step or the
/// scaled gradient falls below tolerance; otherwise returns the best point
/// found with converged = false.
LeastSquaresOutcome damped_least_squares(const LeastSquaresProblem& problem,
                                         const Eigen::VectorXd& x0, const FitOptions& options = {});

enum class CouplingRegime { UNDER, CRITICAL, OVER };
std::string_view to_string(CouplingRegime regime);

struct FitResult {
  TraceKind kind = TraceKind::S11_HYBRID;
  std::vector<std::string> names;  // fitted parameters, in vector order
  Eigen::VectorXd values;          // rad/s for frequencies and rates, rad for phase
  Eigen::MatrixXd covariance;
  /// Complete parameter set (fixed and fitted). For S_LM fits `zeta` holds
  /// the composite eta*zeta; for coil fits only omega_m and gamma are set.
  SystemParamsd params;
  std::optional<double> eta_zeta;
  std::optional<double> phase;
  std::optional<double> gamma_c;
  std::optional<CouplingRegime> regime;
  double residual_norm = 0;
  bool converged = false;
  int iterations = 0;
  std::vector<std::string> flags;

  /// Fitted value by name; throws ValidationError if it was not fitted.
  double value(std::string_view name) const;
  double std_error(std::string_view name) const;
  bool has_flag(std::string_view flag) const;
};

/// Fits (omega_c, omega_m, kappa, kappa_c, gamma, g) to a hybrid-cavity S11 trace.
FitResult fit_s11_hybrid(const SpectrumTrace& trace, const SystemParamsd& init,
                         const FitOptions& options = {});

/// Fits a microwave-to-light trace. Free parameters are every name in
/// {omega_c, omega_m, kappa, kappa_c, gamma, g, eta_zeta, phase} that is not
/// in `fixed`; fixed values come from `init`. A global complex prefactor
/// (eta_zeta for amplitude, phase for the instrument phase) is always fitted.
/// Only the product eta*zeta is identifiable.
FitResult fit_s_lm(const SpectrumTrace& trace, const SystemParamsd& init,
                   const std::set<std::string>& fixed = {"omega_c", "kappa", "kappa_c"},
                   const FitOptions& options = {});

/// Fits a calibrated photon-efficiency spectrum |S_ML^+|^2 (POWER_ONLY).
/// Free parameters are every name in {omega_c, omega_m, kappa, kappa_c,
/// gamma, g, zeta} not in `fixed`.
FitResult fit_efficiency_trace(const SpectrumTrace& trace, const SystemParamsd& init,
                               const std::set<std::string>& fixed = {"omega_c", "kappa",
                                                                     "kappa_c", "gamma", "g"},
                               const FitOptions& options = {});

struct CoilInit {
  double omega_m = 0;
  double gamma = 0;
  double gamma_c = 0;
};

/// Fits the three-parameter coil reflection and classifies the port coupling.
FitResult fit_s11_coil(const SpectrumTrace& trace, const CoilInit& init,
                       const FitOptions& options = {});

/// Starting point for fit_s11_hybrid read off |S11|: the modes are assumed
/// degenerate at the midpoint of the two deepest dips, g is half their
/// separation, and the rates follow from the dip width and depth.
SystemParamsd initial_guess_s11_hybrid(const SpectrumTrace& trace);

/// Starting point for fit_s11_coil from the dip position, width and depth.
CoilInit initial_guess_s11_coil(const SpectrumTrace& trace);

/// Runs one fit per seed on independently synthesized noisy traces, in
/// parallel. `threads` = 0 picks the hardware concurrency.
std::vector<FitResult> monte_carlo_s11_hybrid(const SystemParamsd& truth,
                                              std::span<const double> freq_hz, double noise_sigma,
                                              std::span<const std::uint64_t> seeds,
                                              const SystemParamsd& init, unsigned threads = 0,
                                              const FitOptions& options = {});

}  // namespace magnonlink
