#pragma once

// Closed-form frequency-domain response of a microwave cavity mode coupled
// to a Kittel magnon mode, with the optical field addressing the magnon.
// All frequencies and rates are angular (rad/s). Noise terms are dropped;
// every function returns mean-field (classical expectation) responses.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <string>

#include <Eigen/Dense>

#include "magnonlink/errors.hpp"
#include "magnonlink/units.hpp"

namespace magnonlink {

/// Rates and resonance frequencies of the hybrid converter.
///
/// `kappa` is the cavity internal loss, `kappa_c` its coupling to the
/// microwave line, `gamma` the intrinsic magnon dissipation, `g` the
/// magnon-photon coupling and `zeta` the magnon-light parametric rate.
template <typename Scalar>
struct SystemParams {
  Scalar omega_c{};
  Scalar omega_m{};
  Scalar kappa{};
  Scalar kappa_c{};
  Scalar gamma{};
  Scalar g{};
  Scalar zeta{};

  Scalar cavity_linewidth() const { return kappa + kappa_c; }

  /// Throws ValidationError when any invariant is broken.
  void validate() const;

  /// Builds validated parameters from ordinary frequencies in Hz.
  static SystemParams from_hz(Scalar fc, Scalar fm, Scalar kappa_hz,
                              Scalar kappa_c_hz, Scalar gamma_hz, Scalar g_hz,
                              Scalar zeta_hz = Scalar(0)) {
    SystemParams p{Scalar(two_pi) * fc,       Scalar(two_pi) * fm,
                   Scalar(two_pi) * kappa_hz, Scalar(two_pi) * kappa_c_hz,
                   Scalar(two_pi) * gamma_hz, Scalar(two_pi) * g_hz,
                   Scalar(two_pi) * zeta_hz};
    p.validate();
    return p;
  }
};

using SystemParamsd = SystemParams<double>;

template <typename Scalar>
struct Detunings {
  Scalar delta_c{};  // omega - omega_c
  Scalar delta_m{};  // omega - omega_m
};

using Detuningsd = Detunings<double>;

template <typename Scalar>
void SystemParams<Scalar>::validate() const {
  using std::isfinite;
  const std::array<std::pair<const char*, Scalar>, 7> fields{{{"omega_c", omega_c},
                                                             {"omega_m", omega_m},
                                                             {"kappa", kappa},
                                                             {"kappa_c", kappa_c},
                                                             {"gamma", gamma},
                                                             {"g", g},
                                                             {"zeta", zeta}}};
  for (const auto& [name, value] : fields) {
    if (!isfinite(value)) {
      throw ValidationError(std::string("system.") + name + " must be finite");
    }
  }
  if (!(omega_c > 0) || !(omega_m > 0)) {
    throw ValidationError("system: omega_c and omega_m must be positive");
  }
  for (std::size_t i = 2; i < fields.size(); ++i) {
    if (fields[i].second < 0) {
      throw ValidationError(std::string("system.") + fields[i].first + " must be >= 0");
    }
  }
  const Scalar carrier = std::min(omega_c, omega_m);
  for (std::size_t i = 2; i < fields.size(); ++i) {
    if (!(fields[i].second < carrier)) {
      throw ValidationError(std::string("system.") + fields[i].first +
                            " must be below the carrier frequencies (rotating-frame model)");
    }
  }
}

namespace detail {

template <typename Scalar>
std::complex<Scalar> inverse_susceptibility(Scalar omega, Scalar omega_res,
                                            Scalar linewidth) {
  return {linewidth / Scalar(2), -(omega - omega_res)};
}

template <typename Scalar>
std::complex<Scalar> checked_inverse(const std::complex<Scalar>& denom, Scalar scale,
                                     Scalar omega, const char* what) {
  if (!(std::abs(denom) > Scalar(1e-15) * scale)) {
    throw SingularInputError(std::string(what) + ": vanishing denominator at omega=" +
                             std::to_string(static_cast<double>(omega)) + " rad/s");
  }
  return Scalar(1) / denom;
}

/// Shared microwave<->light kernel g*sqrt(kappa_c*zeta)*chi_m*chi_c/(1+g^2*chi_m*chi_c),
/// written with the susceptibilities inverted so that zero-loss resonances
/// stay finite wherever the full expression is.
template <typename Scalar>
std::complex<Scalar> conversion_kernel(const SystemParams<Scalar>& p, Scalar omega) {
  const auto inv_c = inverse_susceptibility(omega, p.omega_c, p.cavity_linewidth());
  const auto inv_m = inverse_susceptibility(omega, p.omega_m, p.gamma);
  const std::complex<Scalar> denom = inv_c * inv_m + p.g * p.g;
  const Scalar scale = std::abs(inv_c) * std::abs(inv_m) + p.g * p.g;
  using std::sqrt;
  return p.g * sqrt(p.kappa_c * p.zeta) *
         checked_inverse(denom, scale, omega, "conversion amplitude");
}

}  // namespace detail

/// Cavity susceptibility [-i(omega-omega_c) + (kappa+kappa_c)/2]^-1, in seconds.
template <typename Scalar>
std::complex<Scalar> chi_c(const SystemParams<Scalar>& p, Scalar omega) {
  const auto inv = detail::inverse_susceptibility(omega, p.omega_c, p.cavity_linewidth());
  if (inv == std::complex<Scalar>(0)) {
    throw SingularInputError("chi_c: lossless cavity driven exactly on resonance");
  }
  return Scalar(1) / inv;
}

/// Magnon susceptibility [-i(omega-omega_m) + gamma/2]^-1, in seconds.
template <typename Scalar>
std::complex<Scalar> chi_m(const SystemParams<Scalar>& p, Scalar omega) {
  const auto inv = detail::inverse_susceptibility(omega, p.omega_m, p.gamma);
  if (inv == std::complex<Scalar>(0)) {
    throw SingularInputError("chi_m: lossless magnon driven exactly on resonance");
  }
  return Scalar(1) / inv;
}

/// Microwave reflection off the hybrid cavity.
///
/// Evaluated as N/D with both sides multiplied through by the magnon
/// factor i(omega-omega_m) - gamma/2, so the expression stays finite at a
/// lossless magnon resonance.
template <typename Scalar>
std::complex<Scalar> s11_hybrid(const SystemParams<Scalar>& p, Scalar omega) {
  const std::complex<Scalar> i(0, 1);
  const std::complex<Scalar> magnon = i * (omega - p.omega_m) - p.gamma / Scalar(2);
  const std::complex<Scalar> num =
      (i * (omega - p.omega_c) - (p.kappa - p.kappa_c) / Scalar(2)) * magnon + p.g * p.g;
  const std::complex<Scalar> den =
      (i * (omega - p.omega_c) - (p.kappa + p.kappa_c) / Scalar(2)) * magnon + p.g * p.g;
  const Scalar scale =
      std::abs(i * (omega - p.omega_c) - p.cavity_linewidth() / Scalar(2)) * std::abs(magnon) +
      p.g * p.g;
  return num * detail::checked_inverse(den, scale, omega, "s11_hybrid");
}

/// Reflection off a bare coil port coupled at gamma_c to the Kittel mode.
template <typename Scalar>
std::complex<Scalar> s11_coil(Scalar omega_m, Scalar gamma, Scalar gamma_c, Scalar omega) {
  const std::complex<Scalar> i(0, 1);
  const std::complex<Scalar> num = i * (omega - omega_m) + (gamma_c - gamma) / Scalar(2);
  const std::complex<Scalar> den = i * (omega - omega_m) - (gamma_c + gamma) / Scalar(2);
  if (den == std::complex<Scalar>(0)) {
    throw SingularInputError("s11_coil: lossless, uncoupled mode driven on resonance");
  }
  return num / den;
}

/// Microwave-to-light amplitude as seen through the heterodyne chain, with
/// `eta` the (uncalibrated) detection gain.
template <typename Scalar>
std::complex<Scalar> s_lm(const SystemParams<Scalar>& p, Scalar eta, Scalar omega) {
  if (eta < 0) throw ValidationError("s_lm: eta must be >= 0");
  using std::sqrt;
  return sqrt(eta) * detail::conversion_kernel(p, omega);
}

/// Microwave-to-light amplitude into the Stokes sideband Omega_0 - omega.
template <typename Scalar>
std::complex<Scalar> s_lm_stokes(const SystemParams<Scalar>& p, Scalar omega) {
  return std::complex<Scalar>(0, 1) * detail::conversion_kernel(p, omega);
}

/// Microwave-to-light amplitude into the anti-Stokes sideband Omega_0 + omega.
/// Shares its kernel with the Stokes amplitude, so the two are bit-identical.
template <typename Scalar>
std::complex<Scalar> s_lm_anti_stokes(const SystemParams<Scalar>& p, Scalar omega) {
  return std::complex<Scalar>(0, 1) * detail::conversion_kernel(p, omega);
}

/// Light-to-microwave amplitude at omega_a = Omega_0 - Omega (parametric process).
template <typename Scalar>
std::complex<Scalar> s_ml_plus(const SystemParams<Scalar>& p, Scalar omega_a) {
  return std::complex<Scalar>(0, -1) * detail::conversion_kernel(p, omega_a);
}

/// Light-to-microwave amplitude at omega_b = Omega - Omega_0 (beam-splitter process).
template <typename Scalar>
std::complex<Scalar> s_ml_minus(const SystemParams<Scalar>& p, Scalar omega_b) {
  return std::complex<Scalar>(0, 1) * detail::conversion_kernel(p, omega_b);
}

/// C = 4 g^2 / ((kappa_c + kappa) gamma).
template <typename Scalar>
Scalar cooperativity(const SystemParams<Scalar>& p) {
  if (!(p.gamma > 0) || !(p.cavity_linewidth() > 0)) {
    throw SingularInputError("cooperativity: requires gamma > 0 and kappa + kappa_c > 0");
  }
  return Scalar(4) * p.g * p.g / (p.cavity_linewidth() * p.gamma);
}

/// Photon conversion efficiency |S_ML^+|^2 in cooperativity form, as a
/// function of the cavity and magnon detunings.
template <typename Scalar>
Scalar efficiency_detuned(const SystemParams<Scalar>& p, const Detunings<Scalar>& det) {
  const Scalar C = cooperativity(p);
  const Scalar xc = det.delta_c / p.cavity_linewidth();
  const Scalar xm = det.delta_m / p.gamma;
  const Scalar prefactor = Scalar(4) * C * p.kappa_c * p.zeta / (p.cavity_linewidth() * p.gamma);
  const Scalar real_part = C + Scalar(1) - Scalar(4) * xc * xm;
  const Scalar imag_part = Scalar(2) * xc + Scalar(2) * xm;
  return prefactor / (real_part * real_part + imag_part * imag_part);
}

/// Zero-detuning value of efficiency_detuned.
template <typename Scalar>
Scalar efficiency_resonant(const SystemParams<Scalar>& p) {
  const Scalar C = cooperativity(p);
  return Scalar(4) * C * p.kappa_c * p.zeta / (p.cavity_linewidth() * p.gamma) /
         ((C + Scalar(1)) * (C + Scalar(1)));
}

/// Lossless avoided-crossing frequencies (lower, upper):
/// (omega_c+omega_m)/2 -+ sqrt(g^2 + ((omega_c-omega_m)/2)^2).
template <typename Scalar>
std::pair<Scalar, Scalar> normal_mode_frequencies(const SystemParams<Scalar>& p) {
  using std::sqrt;
  const Scalar mean = (p.omega_c + p.omega_m) / Scalar(2);
  const Scalar half_gap = (p.omega_c - p.omega_m) / Scalar(2);
  const Scalar split = sqrt(p.g * p.g + half_gap * half_gap);
  return {mean - split, mean + split};
}

/// Complex normal modes of the lossy coupled pair, sorted by frequency.
/// Real part is the mode frequency, -2 * imaginary part its energy decay rate.
inline std::array<std::complex<double>, 2> normal_modes_lossy(const SystemParamsd& p) {
  using cd = std::complex<double>;
  Eigen::Matrix2cd dynamics;
  dynamics << cd(p.omega_c, -p.cavity_linewidth() / 2), cd(p.g, 0),
              cd(p.g, 0), cd(p.omega_m, -p.gamma / 2);
  Eigen::ComplexEigenSolver<Eigen::Matrix2cd> solver(dynamics, false);
  std::array<cd, 2> modes{solver.eigenvalues()(0), solver.eigenvalues()(1)};
  std::sort(modes.begin(), modes.end(),
            [](const cd& a, const cd& b) { return a.real() < b.real(); });
  return modes;
}

/// Power transmission through the cavity from a weak auxiliary port
/// (coupling kappa_1) to the main port (coupling kappa_c).
template <typename Scalar>
Scalar s21_cavity(Scalar omega_c, Scalar kappa, Scalar kappa_c, Scalar kappa_1, Scalar omega) {
  const Scalar total = kappa_1 + kappa_c + kappa;
  if (!(total > 0)) throw SingularInputError("s21_cavity: total cavity rate must be > 0");
  const Scalar detuning = omega - omega_c;
  return kappa_1 * kappa_c / (detuning * detuning + total * total / Scalar(4));
}

}  // namespace magnonlink
