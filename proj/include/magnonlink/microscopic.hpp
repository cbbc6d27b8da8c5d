#pragma once

// Derives the phenomenological rates of SystemParams from material,
// geometry and optical-drive quantities. SI units throughout; every
// function that needs hbar, mu0 or the gyromagnetic ratio takes them
// explicitly through PhysicalConstants.

#include <string>
#include <vector>

#include "magnonlink/units.hpp"

namespace magnonlink {

struct MaterialGeometry {
  double spin_density = 0;        // n, m^-3
  double verdet = 0;              // rad / m
  double sample_length = 0;       // optical path l, m
  double sample_volume = 0;       // V_s, m^3
  double cavity_volume = 0;       // V, m^3
  double gilbert_alpha = 0;
  double gyromagnetic_ratio = two_pi * 28.0e9;  // rad / (s T)
  double bare_kittel_freq = 0;    // omega_K, rad/s (0 when unused)

  /// Throws on non-positive spin density, lengths or volumes, or alpha < 0.
  void validate() const;

  /// Non-fatal findings, e.g. an optical path longer than the diameter of
  /// a sphere of volume V_s.
  std::vector<std::string> warnings() const;

  static double sphere_volume(double radius);
};

struct OpticalDriveParams {
  double power = 0;                 // P_0, W
  double carrier_angular_freq = 0;  // Omega_0, rad/s

  void validate() const;
  /// |beta|^2 = P_0 / (hbar Omega_0), photons per second.
  double photon_flux(const PhysicalConstants& k = {}) const;
};

/// Affine coil-current to Kittel-frequency map.
struct FieldBias {
  double static_field = 0.310;       // bias field at the reference current, T
  double field_per_current = 0.050;  // dB0/dI, T/A
  double reference_current = 0.400;  // A
  double reference_kittel_freq = 0;  // omega_m at the reference current, rad/s

  void validate() const;
};

/// sqrt(mu0 hbar omega_c / 2V): vacuum fluctuation amplitude of the cavity
/// magnetic field, in tesla.
double zero_point_field(double cavity_volume, double omega_c, const PhysicalConstants& k = {});

/// Single-spin coupling gamma_e * B_zpf / sqrt(2); only the co-rotating half
/// of the linearly polarized cavity field drives the precession.
double single_spin_coupling(double zpf_field, double gyromagnetic_ratio);

/// g0 sqrt(n V_s). Throws when the spin count n V_s is below one.
double collective_coupling(double g0, double spin_density, double sample_volume);

/// Faraday coupling constant G = 4 V / n (m^2), from phi_F = V l = G n l / 4.
double verdet_to_G(double verdet, double spin_density);

/// zeta = G^2 l^2 n P_0 / (16 V_s hbar Omega_0).
double zeta_from_G(double G, const MaterialGeometry& geom, const OpticalDriveParams& drive,
                   const PhysicalConstants& k = {});

/// gamma = 2 alpha omega_m.
double gamma_from_gilbert(double alpha, double omega_m);

/// Inverse of gamma_from_gilbert.
double gilbert_from_gamma(double gamma, double omega_m);

/// omega_m = omega_K / (1 + alpha^2).
double kittel_shift(double omega_K, double alpha);

/// omega_m(I) = omega_m(I_0) + gamma_e dB0/dI (I - I_0).
double kittel_freq_from_current(const FieldBias& bias, double current,
                                double gyromagnetic_ratio);

/// Inverse of kittel_freq_from_current.
double current_for_kittel_freq(const FieldBias& bias, double omega_m, double gyromagnetic_ratio);

/// First-principles coupling chain V -> B_zpf -> g0 -> g. The predicted g is
/// multiplied by `overlap_factor`, which accounts for the non-uniform cavity
/// field over the sample; 1.0 means no correction. A fitted g always takes
/// precedence over this prediction.
struct CouplingPrediction {
  double zpf_field = 0;
  double g0 = 0;
  double spin_count = 0;
  double g = 0;
  double overlap_factor = 1.0;
};

CouplingPrediction predict_coupling(const MaterialGeometry& geom, double omega_c,
                                    double overlap_factor = 1.0,
                                    const PhysicalConstants& k = {});

}  // namespace magnonlink
