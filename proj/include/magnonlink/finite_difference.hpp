#pragma once

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>

namespace magnonlink {

/// Step rule for central differences: h_i = max(relative * |scale_i|, absolute_floor).
struct FiniteDifferenceStep {
  double relative = 1e-6;
  double absolute_floor = 1e-3;  // rad/s for rates

  double for_scale(double scale) const {
    return std::max(relative * std::abs(scale), absolute_floor);
  }
};

/// Central-difference Jacobian of a vector-valued model.
///
/// `f` maps an Eigen::VectorXd of parameters to any dense Eigen column
/// vector (real or complex); the result has one column per parameter.
/// `scales` sets the per-parameter step magnitude and defaults to |x|.
template <typename Func>
auto jacobian_fd(Func&& f, const Eigen::VectorXd& x, const Eigen::VectorXd& scales,
                 const FiniteDifferenceStep& step = {}) {
  using Result = std::decay_t<decltype(f(x))>;
  using Scalar = typename Result::Scalar;
  const Result f0 = f(x);
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> jac(f0.size(), x.size());
  Eigen::VectorXd probe = x;
  for (Eigen::Index j = 0; j < x.size(); ++j) {
    const double h = step.for_scale(scales(j));
    probe(j) = x(j) + h;
    const Result plus = f(probe);
    probe(j) = x(j) - h;
    const Result minus = f(probe);
    probe(j) = x(j);
    jac.col(j) = (plus - minus) / Scalar(2.0 * h);
  }
  return jac;
}

template <typename Func>
auto jacobian_fd(Func&& f, const Eigen::VectorXd& x, const FiniteDifferenceStep& step = {}) {
  return jacobian_fd(std::forward<Func>(f), x, x.cwiseAbs().eval(), step);
}

}  // namespace magnonlink
