#include "magnonlink/fitting.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "magnonlink/errors.hpp"
#include "magnonlink/parallel.hpp"

namespace magnonlink {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double evaluate_cost(const LeastSquaresProblem& problem, const Eigen::VectorXd& x,
                     Eigen::VectorXd& residual) {
  try {
    residual = problem.residuals(x);
  } catch (const SingularInputError&) {
    return kInf;
  }
  const double cost = residual.squaredNorm();
  return std::isfinite(cost) ? cost : kInf;
}

Eigen::VectorXd project(const Eigen::VectorXd& x, const Eigen::VectorXd& lower) {
  return x.cwiseMax(lower);
}

}  // namespace

LeastSquaresOutcome damped_least_squares(const LeastSquaresProblem& problem,
                                         const Eigen::VectorXd& x0, const FitOptions& options) {
  const Eigen::Index n = x0.size();
  Eigen::VectorXd lower = problem.lower.size() == n
                              ? problem.lower
                              : Eigen::VectorXd::Constant(n, -kInf);
  LeastSquaresOutcome out;
  out.x = project(x0, lower);
  out.cost = evaluate_cost(problem, out.x, out.residual);
  if (!std::isfinite(out.cost)) {
    throw SingularInputError("damped_least_squares: model is singular at the initial point");
  }
  if (out.residual.size() < n) {
    throw ValidationError("damped_least_squares: fewer residuals than parameters");
  }

  auto residual_fn = [&](const Eigen::VectorXd& x) { return problem.residuals(x); };
  auto scales_at = [&](const Eigen::VectorXd& x) {
    return problem.scales ? problem.scales(x) : Eigen::VectorXd(x.cwiseAbs());
  };

  Eigen::VectorXd scales = scales_at(out.x);
  out.jacobian = jacobian_fd(residual_fn, out.x, scales, options.fd);
  auto scaled_gradient = [&] {
    return (scales.cwiseMax(options.fd.absolute_floor).asDiagonal() *
            (out.jacobian.transpose() * out.residual))
        .norm();
  };
  const double initial_gradient = scaled_gradient();
  const double zero_cost = 1e-28 * static_cast<double>(out.residual.size());

  if (out.cost <= zero_cost || initial_gradient == 0.0) {
    out.converged = true;
    out.stop_reason = "exact fit at initial point";
    return out;
  }

  auto relative_step = [&](const Eigen::VectorXd& step) {
    double worst = 0;
    for (Eigen::Index i = 0; i < n; ++i) {
      const double ref = std::max(std::abs(scales(i)), options.fd.absolute_floor);
      worst = std::max(worst, std::abs(step(i)) / ref);
    }
    return worst;
  };

  double damping = options.initial_damping;
  for (out.iterations = 1; out.iterations <= options.max_iter; ++out.iterations) {
    const Eigen::MatrixXd normal = out.jacobian.transpose() * out.jacobian;
    const Eigen::VectorXd gradient = out.jacobian.transpose() * out.residual;
    Eigen::VectorXd diag = normal.diagonal();
    const double diag_floor = 1e-12 * std::max(diag.maxCoeff(), 1e-300);
    diag = diag.cwiseMax(diag_floor);

    bool accepted = false;
    Eigen::VectorXd step;
    while (!accepted) {
      Eigen::MatrixXd damped = normal;
      damped.diagonal() += damping * diag;
      step = -damped.ldlt().solve(gradient);
      const Eigen::VectorXd trial = project(out.x + step, lower);
      step = trial - out.x;
      Eigen::VectorXd trial_residual;
      const double trial_cost = evaluate_cost(problem, trial, trial_residual);
      if (trial_cost < out.cost) {
        out.x = trial;
        out.residual = std::move(trial_residual);
        out.cost = trial_cost;
        damping = std::max(damping * options.damping_down, 1e-15);
        accepted = true;
      } else if (relative_step(step) < options.step_tolerance) {
        out.converged = true;
        out.stop_reason = "relative step below tolerance";
        return out;
      } else {
        damping *= options.damping_up;
        if (damping > 1e16) break;
      }
    }
    if (!accepted) {
      // No descent direction left at machine precision.
      out.converged = scaled_gradient() <= 1e-6 * initial_gradient;
      out.stop_reason = "damping saturated";
      return out;
    }

    scales = scales_at(out.x);
    const double max_relative_step = relative_step(step);
    out.jacobian = jacobian_fd(residual_fn, out.x, scales, options.fd);

    if (out.cost <= zero_cost) {
      out.converged = true;
      out.stop_reason = "residual vanished";
      return out;
    }
    if (max_relative_step < options.step_tolerance) {
      out.converged = true;
      out.stop_reason = "relative step below tolerance";
      return out;
    }
    if (scaled_gradient() < options.gradient_tolerance * initial_gradient) {
      out.converged = true;
      out.stop_reason = "gradient below tolerance";
      return out;
    }
  }
  out.iterations = options.max_iter;
  out.stop_reason = "iteration limit reached";
  return out;
}

std::string_view to_string(CouplingRegime regime) {
  switch (regime) {
    case CouplingRegime::UNDER: return "under";
    case CouplingRegime::CRITICAL: return "critical";
    case CouplingRegime::OVER: return "over";
  }
  return "unknown";
}

double FitResult::value(std::string_view name) const {
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (names[i] == name) return values(static_cast<Eigen::Index>(i));
  }
  throw ValidationError("parameter '" + std::string(name) + "' was not fitted");
}

double FitResult::std_error(std::string_view name) const {
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (names[i] == name) {
      const auto k = static_cast<Eigen::Index>(i);
      return std::sqrt(std::max(covariance(k, k), 0.0));
    }
  }
  throw ValidationError("parameter '" + std::string(name) + "' was not fitted");
}

bool FitResult::has_flag(std::string_view flag) const {
  return std::find(flags.begin(), flags.end(), flag) != flags.end();
}

namespace {

/// Full parameter vector with a subset marked free.
struct ParameterLayout {
  std::vector<std::string> names;
  Eigen::VectorXd full;
  std::vector<bool> is_centre;  // resonance frequencies use the trace span as step scale
  std::vector<double> lower;
  std::vector<Eigen::Index> free;

  Eigen::VectorXd expand(const Eigen::VectorXd& x) const {
    Eigen::VectorXd out = full;
    for (std::size_t i = 0; i < free.size(); ++i) out(free[i]) = x(static_cast<Eigen::Index>(i));
    return out;
  }
  Eigen::VectorXd compress(const Eigen::VectorXd& v) const {
    Eigen::VectorXd x(static_cast<Eigen::Index>(free.size()));
    for (std::size_t i = 0; i < free.size(); ++i) x(static_cast<Eigen::Index>(i)) = v(free[i]);
    return x;
  }
  std::vector<std::string> free_names() const {
    std::vector<std::string> out;
    for (auto i : free) out.push_back(names[static_cast<std::size_t>(i)]);
    return out;
  }
};

ParameterLayout make_layout(std::vector<std::string> names, Eigen::VectorXd full,
                            std::vector<bool> is_centre, std::vector<double> lower,
                            const std::set<std::string>& fixed) {
  for (const auto& f : fixed) {
    if (std::find(names.begin(), names.end(), f) == names.end()) {
      throw ValidationError("unknown parameter '" + f + "' in fixed set");
    }
  }
  ParameterLayout layout{std::move(names), std::move(full), std::move(is_centre),
                         std::move(lower), {}};
  for (std::size_t i = 0; i < layout.names.size(); ++i) {
    if (!fixed.contains(layout.names[i])) layout.free.push_back(static_cast<Eigen::Index>(i));
  }
  if (layout.free.empty()) throw ValidationError("every parameter is fixed; nothing to fit");
  return layout;
}

std::vector<double> angular_grid(const SpectrumTrace& trace) {
  std::vector<double> omega(trace.freq.size());
  std::transform(trace.freq.begin(), trace.freq.end(), omega.begin(), hz_to_rad);
  return omega;
}

double half_span(const std::vector<double>& omega) {
  return 0.5 * (omega.back() - omega.front());
}

void require_kind(const SpectrumTrace& trace, TraceKind kind) {
  if (trace.kind != kind) {
    throw ValidationError("trace kind is " + std::string(to_string(trace.kind)) + ", expected " +
                          std::string(to_string(kind)));
  }
}

void require_enough_points(const SpectrumTrace& trace, std::size_t parameters,
                           std::size_t per_point) {
  if (trace.size() * per_point < parameters || trace.size() < parameters) {
    throw ValidationError("degenerate trace: " + std::to_string(trace.size()) +
                          " points cannot determine " + std::to_string(parameters) +
                          " parameters");
  }
}

template <typename Model>
Eigen::VectorXd complex_residuals(const std::vector<double>& omega, const SpectrumTrace& trace,
                                  Model&& model) {
  const auto n = static_cast<Eigen::Index>(omega.size());
  Eigen::VectorXd r(2 * n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const std::complex<double> diff = model(omega[static_cast<std::size_t>(i)]) -
                                      trace.value[static_cast<std::size_t>(i)];
    r(i) = diff.real();
    r(n + i) = diff.imag();
  }
  return r;
}

LeastSquaresProblem make_problem(const ParameterLayout& layout, double span,
                                 std::function<Eigen::VectorXd(const Eigen::VectorXd&)> residuals) {
  LeastSquaresProblem problem;
  problem.residuals = std::move(residuals);
  problem.scales = [&layout, span](const Eigen::VectorXd& x) {
    Eigen::VectorXd s(x.size());
    for (std::size_t i = 0; i < layout.free.size(); ++i) {
      const auto k = static_cast<Eigen::Index>(i);
      s(k) = layout.is_centre[static_cast<std::size_t>(layout.free[i])] ? span : std::abs(x(k));
    }
    return s;
  };
  problem.lower.resize(static_cast<Eigen::Index>(layout.free.size()));
  for (std::size_t i = 0; i < layout.free.size(); ++i) {
    problem.lower(static_cast<Eigen::Index>(i)) = layout.lower[static_cast<std::size_t>(layout.free[i])];
  }
  return problem;
}

Eigen::MatrixXd estimate_covariance(const LeastSquaresOutcome& outcome) {
  const Eigen::Index m = outcome.residual.size();
  const Eigen::Index p = outcome.x.size();
  const double dof = static_cast<double>(std::max<Eigen::Index>(m - p, 1));
  const double variance = outcome.cost / dof;
  const Eigen::MatrixXd normal = outcome.jacobian.transpose() * outcome.jacobian;
  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(normal);
  Eigen::MatrixXd cov = variance * cod.pseudoInverse();
  return 0.5 * (cov + cov.transpose());
}

/// Flags parameters whose Jacobian column (scaled to the parameter's own
/// magnitude) is negligible against the strongest one.
void flag_unidentifiable(FitResult& result, const LeastSquaresOutcome& outcome,
                         const Eigen::VectorXd& scales, double floor) {
  Eigen::VectorXd influence(outcome.x.size());
  for (Eigen::Index j = 0; j < outcome.x.size(); ++j) {
    influence(j) = outcome.jacobian.col(j).norm() * std::max(std::abs(scales(j)), floor);
  }
  const double strongest = influence.maxCoeff();
  for (Eigen::Index j = 0; j < influence.size(); ++j) {
    if (!(influence(j) > 1e-8 * strongest)) {
      result.flags.push_back("unidentifiable:" + result.names[static_cast<std::size_t>(j)]);
    }
  }
}

FitResult finish(TraceKind kind, const ParameterLayout& layout, const LeastSquaresProblem& problem,
                 const LeastSquaresOutcome& outcome, const FitOptions& options) {
  FitResult result;
  result.kind = kind;
  result.names = layout.free_names();
  result.values = outcome.x;
  result.covariance = estimate_covariance(outcome);
  result.residual_norm = std::sqrt(outcome.cost);
  result.converged = outcome.converged;
  result.iterations = outcome.iterations;
  if (!outcome.converged) result.flags.push_back("not_converged");
  flag_unidentifiable(result, outcome, problem.scales(outcome.x), options.fd.absolute_floor);
  return result;
}

SystemParamsd params_from(const Eigen::VectorXd& v) {
  // g only enters squared; report it non-negative.
  return SystemParamsd{v(0), v(1), v(2), v(3), v(4), std::abs(v(5)), 0.0};
}

void flag_label_ambiguity(FitResult& result) {
  const auto& p = result.params;
  if (std::abs(p.omega_c - p.omega_m) < p.g) result.flags.push_back("label_assignment_ambiguous");
}

const std::vector<std::string> kSystemNames{"omega_c", "omega_m", "kappa", "kappa_c", "gamma", "g"};

}  // namespace

FitResult fit_s11_hybrid(const SpectrumTrace& trace, const SystemParamsd& init,
                         const FitOptions& options) {
  require_kind(trace, TraceKind::S11_HYBRID);
  trace.validate();
  require_enough_points(trace, 6, 2);
  init.validate();

  const auto omega = angular_grid(trace);
  Eigen::VectorXd full(6);
  full << init.omega_c, init.omega_m, init.kappa, init.kappa_c, init.gamma, init.g;
  const ParameterLayout layout =
      make_layout(kSystemNames, full, {true, true, false, false, false, false},
                  {-kInf, -kInf, 0, 0, 0, 0}, {});

  const auto problem = make_problem(layout, half_span(omega), [&](const Eigen::VectorXd& x) {
    const SystemParamsd p = params_from(layout.expand(x));
    return complex_residuals(omega, trace, [&](double w) { return s11_hybrid(p, w); });
  });
  const auto outcome = damped_least_squares(problem, layout.compress(layout.full), options);

  FitResult result = finish(TraceKind::S11_HYBRID, layout, problem, outcome, options);
  result.params = params_from(layout.expand(outcome.x));
  result.params.zeta = init.zeta;
  flag_label_ambiguity(result);
  return result;
}

FitResult fit_s_lm(const SpectrumTrace& trace, const SystemParamsd& init,
                   const std::set<std::string>& fixed, const FitOptions& options) {
  require_kind(trace, TraceKind::S_LM);
  trace.validate();
  init.validate();
  const auto omega = angular_grid(trace);

  // Seed the complex prefactor by projecting the data onto the unit-gain model.
  SystemParamsd unit = init;
  unit.zeta = 1.0;
  std::complex<double> dot(0), norm(0);
  for (std::size_t i = 0; i < omega.size(); ++i) {
    const auto m = s_lm(unit, 1.0, omega[i]);
    dot += std::conj(m) * trace.value[i];
    norm += std::conj(m) * m;
  }
  const std::complex<double> prefactor = norm.real() > 0 ? dot / norm.real() : 1.0;
  const double amplitude = init.zeta > 0 && fixed.contains("eta_zeta") ? std::sqrt(init.zeta)
                                                                        : std::abs(prefactor);
  const double phase = fixed.contains("phase") ? 0.0 : std::arg(prefactor);

  Eigen::VectorXd full(8);
  full << init.omega_c, init.omega_m, init.kappa, init.kappa_c, init.gamma, init.g, amplitude,
      phase;
  std::vector<std::string> names = kSystemNames;
  names.push_back("eta_zeta");
  names.push_back("phase");
  const ParameterLayout layout =
      make_layout(names, full, {true, true, false, false, false, false, false, false},
                  {-kInf, -kInf, 0, 0, 0, 0, 0, -kInf}, fixed);
  require_enough_points(trace, layout.free.size(), 2);

  const auto problem = make_problem(layout, half_span(omega), [&](const Eigen::VectorXd& x) {
    const Eigen::VectorXd v = layout.expand(x);
    SystemParamsd p = params_from(v);
    p.zeta = v(6) * v(6);
    const std::complex<double> rotation = std::polar(1.0, v(7));
    return complex_residuals(omega, trace, [&](double w) { return rotation * s_lm(p, 1.0, w); });
  });
  // The amplitude parameter is sqrt(eta*zeta); its step scale is its own magnitude.
  auto outcome = damped_least_squares(problem, layout.compress(layout.full), options);

  FitResult result = finish(TraceKind::S_LM, layout, problem, outcome, options);
  const Eigen::VectorXd v = layout.expand(outcome.x);
  result.params = params_from(v);
  result.eta_zeta = v(6) * v(6);
  result.params.zeta = *result.eta_zeta;
  result.phase = std::remainder(v(7), two_pi);
  // Report eta_zeta itself rather than its square root.
  for (std::size_t i = 0; i < result.names.size(); ++i) {
    const auto k = static_cast<Eigen::Index>(i);
    if (result.names[i] == "eta_zeta") {
      const double a = result.values(k);
      result.values(k) = a * a;
      // d(a^2) = 2a da
      result.covariance.row(k) *= 2 * a;
      result.covariance.col(k) *= 2 * a;
    } else if (result.names[i] == "phase") {
      result.values(k) = *result.phase;
    }
  }
  flag_label_ambiguity(result);
  return result;
}

FitResult fit_efficiency_trace(const SpectrumTrace& trace, const SystemParamsd& init,
                               const std::set<std::string>& fixed, const FitOptions& options) {
  require_kind(trace, TraceKind::POWER_ONLY);
  trace.validate();
  init.validate();
  const auto omega = angular_grid(trace);

  // |S_ML^+|^2 is linear in zeta: seed it by projection when it is free.
  double zeta0 = init.zeta;
  if (!fixed.contains("zeta")) {
    SystemParamsd unit = init;
    unit.zeta = 1.0;
    double dot = 0, norm = 0;
    for (std::size_t i = 0; i < omega.size(); ++i) {
      const double m = std::norm(s_ml_plus(unit, omega[i]));
      dot += m * trace.value[i].real();
      norm += m * m;
    }
    if (norm > 0 && dot > 0) zeta0 = dot / norm;
  }
  Eigen::VectorXd full(7);
  full << init.omega_c, init.omega_m, init.kappa, init.kappa_c, init.gamma, init.g, zeta0;
  std::vector<std::string> names = kSystemNames;
  names.push_back("zeta");
  const ParameterLayout layout =
      make_layout(names, full, {true, true, false, false, false, false, false},
                  {-kInf, -kInf, 0, 0, 0, 0, 0}, fixed);
  require_enough_points(trace, layout.free.size(), 1);

  // Residuals are normalized by the largest sample so that the stopping
  // rules see O(1) numbers regardless of the absolute efficiency scale.
  double peak = 0;
  for (const auto& v : trace.value) peak = std::max(peak, std::abs(v.real()));
  if (!(peak > 0)) throw ValidationError("efficiency trace is identically zero");

  const auto problem = make_problem(layout, half_span(omega), [&](const Eigen::VectorXd& x) {
    const Eigen::VectorXd v = layout.expand(x);
    SystemParamsd p = params_from(v);
    p.zeta = v(6);
    Eigen::VectorXd r(static_cast<Eigen::Index>(omega.size()));
    for (std::size_t i = 0; i < omega.size(); ++i) {
      r(static_cast<Eigen::Index>(i)) =
          (std::norm(s_ml_plus(p, omega[i])) - trace.value[i].real()) / peak;
    }
    return r;
  });
  const auto outcome = damped_least_squares(problem, layout.compress(layout.full), options);
  FitResult result = finish(TraceKind::POWER_ONLY, layout, problem, outcome, options);
  // Covariance is in normalized residual units; rescaling the data does not
  // change parameter uncertainties, so no correction is needed.
  const Eigen::VectorXd v = layout.expand(outcome.x);
  result.params = params_from(v);
  result.params.zeta = v(6);
  return result;
}

FitResult fit_s11_coil(const SpectrumTrace& trace, const CoilInit& init,
                       const FitOptions& options) {
  require_kind(trace, TraceKind::S11_COIL);
  trace.validate();
  require_enough_points(trace, 3, 2);
  if (!(init.omega_m > 0) || init.gamma < 0 || init.gamma_c < 0) {
    throw ValidationError("coil fit: omega_m > 0 and gamma, gamma_c >= 0 required");
  }
  const auto omega = angular_grid(trace);
  Eigen::VectorXd full(3);
  full << init.omega_m, init.gamma, init.gamma_c;
  const ParameterLayout layout =
      make_layout({"omega_m", "gamma", "gamma_c"}, full, {true, false, false}, {-kInf, 0, 0}, {});

  const auto problem = make_problem(layout, half_span(omega), [&](const Eigen::VectorXd& x) {
    return complex_residuals(omega, trace,
                             [&](double w) { return s11_coil(x(0), x(1), x(2), w); });
  });
  const auto outcome = damped_least_squares(problem, full, options);

  FitResult result = finish(TraceKind::S11_COIL, layout, problem, outcome, options);
  result.params = SystemParamsd{0.0, outcome.x(0), 0.0, 0.0, outcome.x(1), 0.0, 0.0};
  result.gamma_c = outcome.x(2);

  const double gamma = outcome.x(1);
  const double gamma_c = outcome.x(2);
  const double sigma_diff = std::sqrt(std::max(
      result.covariance(1, 1) + result.covariance(2, 2) - 2 * result.covariance(1, 2), 0.0));
  const double tolerance = std::max(2.0 * sigma_diff, 1e-6 * (gamma + gamma_c));
  if (std::abs(gamma_c - gamma) <= tolerance) {
    result.regime = CouplingRegime::CRITICAL;
  } else {
    result.regime = gamma_c > gamma ? CouplingRegime::OVER : CouplingRegime::UNDER;
  }
  // On resonance the reflection departs from unity by 2 gamma_c / (gamma + gamma_c).
  const double depth = gamma + gamma_c > 0 ? 2 * gamma_c / (gamma + gamma_c) : 0.0;
  const double rms = std::sqrt(outcome.cost / static_cast<double>(outcome.residual.size()));
  if (depth < std::max(1e-6, 3 * rms) && !result.has_flag("unidentifiable:gamma")) {
    result.flags.push_back("unidentifiable:gamma");
  }
  return result;
}

namespace {

struct Dip {
  std::size_t index;
  double depth;  // |S11| at the minimum
};

std::vector<Dip> deepest_dips(const SpectrumTrace& trace, std::size_t count) {
  std::vector<double> magnitude(trace.size());
  for (std::size_t i = 0; i < trace.size(); ++i) magnitude[i] = std::abs(trace.value[i]);
  std::vector<Dip> dips;
  for (auto i : local_minima(magnitude)) dips.push_back({i, magnitude[i]});
  std::sort(dips.begin(), dips.end(), [](const Dip& a, const Dip& b) { return a.depth < b.depth; });
  if (dips.size() > count) dips.resize(count);
  std::sort(dips.begin(), dips.end(), [](const Dip& a, const Dip& b) { return a.index < b.index; });
  return dips;
}

/// Full width (rad/s) of a dip at half of its depth below the unit baseline.
double dip_width(const SpectrumTrace& trace, std::size_t index) {
  const double depth = std::abs(trace.value[index]);
  const double level = 1.0 - 0.5 * (1.0 - depth * depth);
  auto power = [&](std::size_t i) { return std::norm(trace.value[i]); };
  std::size_t lo = index, hi = index;
  while (lo > 0 && power(lo) < level) --lo;
  while (hi + 1 < trace.size() && power(hi) < level) ++hi;
  return hz_to_rad(trace.freq[hi] - trace.freq[lo]);
}

}  // namespace

SystemParamsd initial_guess_s11_hybrid(const SpectrumTrace& trace) {
  trace.validate();
  const auto dips = deepest_dips(trace, 2);
  if (dips.size() < 2) {
    throw ValidationError("initial guess: fewer than two dips in |S11|; supply an init block");
  }
  const double f_lo = trace.freq[dips[0].index];
  const double f_hi = trace.freq[dips[1].index];
  const double centre = hz_to_rad(0.5 * (f_lo + f_hi));
  const double g = hz_to_rad(0.5 * (f_hi - f_lo));
  // Each hybrid mode decays at (kappa + kappa_c + gamma)/2; its external
  // part kappa_c/2 is set by the dip depth assuming over-coupling.
  const double width = 0.5 * (dip_width(trace, dips[0].index) + dip_width(trace, dips[1].index));
  const double depth = 0.5 * (dips[0].depth + dips[1].depth);
  const double kappa_c = width * (1.0 + depth);
  const double internal = std::max(width * (1.0 - depth), 1e-3 * width);
  SystemParamsd p{centre, centre, internal, kappa_c, internal, g, 0.0};
  p.validate();
  return p;
}

CoilInit initial_guess_s11_coil(const SpectrumTrace& trace) {
  trace.validate();
  const auto dips = deepest_dips(trace, 1);
  if (dips.empty()) throw ValidationError("initial guess: no dip in |S11|; supply an init block");
  const double width = dip_width(trace, dips[0].index);
  const double depth = dips[0].depth;
  return {hz_to_rad(trace.freq[dips[0].index]), 0.5 * width * (1.0 - depth),
          0.5 * width * (1.0 + depth)};
}

std::vector<FitResult> monte_carlo_s11_hybrid(const SystemParamsd& truth,
                                              std::span<const double> freq_hz, double noise_sigma,
                                              std::span<const std::uint64_t> seeds,
                                              const SystemParamsd& init, unsigned threads,
                                              const FitOptions& options) {
  std::vector<FitResult> results(seeds.size());
  parallel_for(seeds.size(), threads, [&](std::size_t i) {
    const auto trace =
        synthesize_trace(truth, TraceKind::S11_HYBRID, freq_hz, noise_sigma, seeds[i]);
    results[i] = fit_s11_hybrid(trace, init, options);
  });
  return results;
}

}  // namespace magnonlink
