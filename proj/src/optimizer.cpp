#include "magnonlink/optimizer.hpp"

#include <cmath>
#include <fmt/format.h>

#include "magnonlink/errors.hpp"
#include "magnonlink/parallel.hpp"

namespace magnonlink {

std::string_view to_string(Definiteness d) {
  switch (d) {
    case Definiteness::MAX: return "MAX";
    case Definiteness::MIN: return "MIN";
    case Definiteness::SADDLE: return "SADDLE";
    case Definiteness::DEGENERATE: return "DEGENERATE";
  }
  return "UNKNOWN";
}

namespace {

struct Normalized {
  const SystemParamsd& p;
  double linewidth;

  explicit Normalized(const SystemParamsd& params) : p(params), linewidth(params.cavity_linewidth()) {
    cooperativity(p);  // rejects gamma = 0 or kappa + kappa_c = 0
  }
  double operator()(double x, double y) const {
    return efficiency_detuned(p, Detuningsd{x * linewidth, y * p.gamma});
  }
  double operator()(const Eigen::Vector2d& u) const { return (*this)(u(0), u(1)); }
};

double fd_step(double u) { return 1e-4 * std::max(1.0, std::abs(u)); }

Eigen::Vector2d gradient(const Normalized& f, const Eigen::Vector2d& u) {
  Eigen::Vector2d g;
  for (int k = 0; k < 2; ++k) {
    const double h = fd_step(u(k));
    Eigen::Vector2d up = u, dn = u;
    up(k) += h;
    dn(k) -= h;
    g(k) = (f(up) - f(dn)) / (2 * h);
  }
  return g;
}

Eigen::Matrix2d hessian(const Normalized& f, const Eigen::Vector2d& u) {
  Eigen::Matrix2d H;
  const double hx = fd_step(u(0));
  const double hy = fd_step(u(1));
  const double f0 = f(u);
  H(0, 0) = (f(u(0) + hx, u(1)) - 2 * f0 + f(u(0) - hx, u(1))) / (hx * hx);
  H(1, 1) = (f(u(0), u(1) + hy) - 2 * f0 + f(u(0), u(1) - hy)) / (hy * hy);
  H(0, 1) = H(1, 0) = (f(u(0) + hx, u(1) + hy) - f(u(0) + hx, u(1) - hy) -
                       f(u(0) - hx, u(1) + hy) + f(u(0) - hx, u(1) - hy)) /
                      (4 * hx * hy);
  return H;
}

/// Vertex of the parabola through (u - h, u, u + h) along one coordinate.
double coordinate_parabola_step(const Normalized& f, const Eigen::Vector2d& u, int k) {
  const double h = fd_step(u(k));
  Eigen::Vector2d up = u, dn = u;
  up(k) += h;
  dn(k) -= h;
  const double fp = f(up), f0 = f(u), fm = f(dn);
  const double curvature = fp - 2 * f0 + fm;
  if (!(curvature < 0)) return fp > fm ? h : -h;
  return 0.5 * h * (fm - fp) / curvature;
}

Definiteness classify(const Eigen::Matrix2d& H, double scale) {
  const Eigen::Vector2d eig = Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d>(H).eigenvalues();
  const double tiny = 1e-9 * scale;
  if (std::abs(eig(0)) <= tiny || std::abs(eig(1)) <= tiny) return Definiteness::DEGENERATE;
  if (eig(0) < 0 && eig(1) < 0) return Definiteness::MAX;
  if (eig(0) > 0 && eig(1) > 0) return Definiteness::MIN;
  return Definiteness::SADDLE;
}

}  // namespace

std::pair<double, double> stationarity_residual(const SystemParamsd& params,
                                                const Detuningsd& det) {
  const Normalized f(params);
  const Eigen::Vector2d u(det.delta_c / f.linewidth, det.delta_m / params.gamma);
  const Eigen::Vector2d g = gradient(f, u);
  const double value = f(u);
  const double scale = value > 0 ? value : 1.0;
  return {g(0) / scale, g(1) / scale};
}

OptimumReport find_optimum(const SystemParamsd& params, const OptimizerOptions& options) {
  params.validate();
  const Normalized f(params);
  OptimumReport report;
  report.cooperativity = cooperativity(params);
  report.resonant_efficiency = efficiency_resonant(params);
  report.search_span = options.search_span > 0
                           ? options.search_span
                           : 3.0 * std::max(std::sqrt(report.cooperativity), 1.0);
  if (options.grid_points < 3) throw ValidationError("optimizer: grid_points must be >= 3");

  const int n = options.grid_points;
  const double span = report.search_span;
  auto axis = [&](int i) { return -span + 2.0 * span * i / (n - 1); };
  Eigen::MatrixXd grid(n, n);
  parallel_for(static_cast<std::size_t>(n), options.threads, [&](std::size_t i) {
    const double x = axis(static_cast<int>(i));
    for (int j = 0; j < n; ++j) grid(static_cast<Eigen::Index>(i), j) = f(x, axis(j));
  });

  Eigen::Index bi = 0, bj = 0;
  const double best = grid.maxCoeff(&bi, &bj);
  if (!(best > 0) || best == grid.minCoeff()) {
    report.hessian_definiteness = Definiteness::DEGENERATE;
    report.efficiency = best;
    report.gain_over_resonant = 1.0;
    return report;
  }
  if (bi == 0 || bj == 0 || bi == n - 1 || bj == n - 1) {
    throw SearchSpanError(fmt::format(
        "optimum lies on the search boundary (span {:.6g} normalized units); increase the span",
        span));
  }

  Eigen::Vector2d u(axis(static_cast<int>(bi)), axis(static_cast<int>(bj)));
  if (u(0) < 0 || (u(0) == 0 && u(1) < 0)) u = -u;
  double fu = f(u);
  const double cell = 2.0 * span / (n - 1);

  for (report.refine_iterations = 1; report.refine_iterations <= options.max_refine_iter;
       ++report.refine_iterations) {
    const Eigen::Vector2d g = gradient(f, u);
    const Eigen::Matrix2d H = hessian(f, u);
    Eigen::Vector2d step = Eigen::Vector2d::Zero();
    bool improved = false;
    if (classify(H, fu) == Definiteness::MAX) {
      step = -H.ldlt().solve(g);
      if (step.norm() <= cell && f(u + step) >= fu) improved = true;
    }
    if (!improved) {
      // Coordinate-wise quadratic interpolation, limited to one grid cell.
      step = Eigen::Vector2d::Zero();
      for (int k = 0; k < 2; ++k) {
        Eigen::Vector2d trial = u + step;
        double s = std::clamp(coordinate_parabola_step(f, trial, k), -cell, cell);
        trial(k) += s;
        while (f(trial) < f(u + step) && std::abs(s) > 1e-16 * std::max(1.0, std::abs(u(k)))) {
          s *= 0.5;
          trial(k) = u(k) + step(k) + s;
        }
        if (f(trial) >= f(u + step)) step(k) += s;
      }
    }
    u += step;
    const double fnew = f(u);
    fu = std::max(fu, fnew);
    const double relative_step =
        std::max(std::abs(step(0)) / std::max(1.0, std::abs(u(0))),
                 std::abs(step(1)) / std::max(1.0, std::abs(u(1))));
    if (relative_step < options.step_tolerance) break;
  }
  report.refine_iterations = std::min(report.refine_iterations, options.max_refine_iter);

  report.x = u(0);
  report.y = u(1);
  report.det = Detuningsd{u(0) * f.linewidth, u(1) * params.gamma};
  report.efficiency = f(u);
  const auto [gx, gy] = stationarity_residual(params, report.det);
  report.gradient_norm = std::hypot(gx, gy);
  report.hessian_definiteness = classify(hessian(f, u), report.efficiency);
  report.gain_over_resonant = report.efficiency / report.resonant_efficiency;
  return report;
}

EfficiencyLandscape efficiency_landscape(const SystemParamsd& params,
                                         const std::vector<double>& delta_c_hz,
                                         const std::vector<double>& delta_m_hz, unsigned threads) {
  params.validate();
  for (const auto* axis : {&delta_c_hz, &delta_m_hz}) {
    for (double v : *axis) {
      if (!std::isfinite(v)) throw ValidationError("landscape: detuning axes must be finite");
    }
  }
  EfficiencyLandscape out{delta_c_hz, delta_m_hz,
                          Eigen::MatrixXd(static_cast<Eigen::Index>(delta_c_hz.size()),
                                          static_cast<Eigen::Index>(delta_m_hz.size()))};
  parallel_for(delta_c_hz.size(), threads, [&](std::size_t i) {
    for (std::size_t j = 0; j < delta_m_hz.size(); ++j) {
      out.efficiency(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          efficiency_detuned(params, Detuningsd{hz_to_rad(delta_c_hz[i]), hz_to_rad(delta_m_hz[j])});
    }
  });
  return out;
}

TrajectoryOptimum optimize_along_trajectory(const SystemParamsd& params, double search_span) {
  params.validate();
  const double C = cooperativity(params);
  const double span = search_span > 0 ? search_span : 3.0 * std::max(std::sqrt(C), 1.0);
  const double width = params.cavity_linewidth();
  const double lo = std::min(params.omega_c, params.omega_m) - span * width;
  const double hi = std::max(params.omega_c, params.omega_m) + span * width;
  // Work in offsets from omega_c so the detunings keep full precision.
  auto efficiency_at = [&](double offset) {
    const double delta_m = offset + (params.omega_c - params.omega_m);
    return efficiency_detuned(params, Detuningsd{offset, delta_m});
  };
  const int n = 20001;
  const double a = lo - params.omega_c;
  const double step = (hi - lo) / (n - 1);
  int best = 0;
  double best_value = -1;
  for (int i = 0; i < n; ++i) {
    const double v = efficiency_at(a + step * i);
    if (v > best_value) {
      best_value = v;
      best = i;
    }
  }
  // Golden-section refinement on the neighbouring cells.
  double left = a + step * std::max(best - 1, 0);
  double right = a + step * std::min(best + 1, n - 1);
  const double ratio = 0.5 * (std::sqrt(5.0) - 1.0);
  double c = right - ratio * (right - left);
  double d = left + ratio * (right - left);
  double fc = efficiency_at(c), fd = efficiency_at(d);
  while (right - left > 1e-12 * std::max(std::abs(left), width)) {
    if (fc > fd) {
      right = d;
      d = c;
      fd = fc;
      c = right - ratio * (right - left);
      fc = efficiency_at(c);
    } else {
      left = c;
      c = d;
      fc = fd;
      d = left + ratio * (right - left);
      fd = efficiency_at(d);
    }
  }
  const double offset = 0.5 * (left + right);
  TrajectoryOptimum out;
  out.omega = params.omega_c + offset;
  out.det = Detuningsd{offset, offset + (params.omega_c - params.omega_m)};
  out.efficiency = efficiency_at(offset);
  if (out.efficiency < best_value) {
    out.det = Detuningsd{a + step * best, a + step * best + (params.omega_c - params.omega_m)};
    out.omega = params.omega_c + out.det.delta_c;
    out.efficiency = best_value;
  }
  return out;
}

}  // namespace magnonlink
