#include "magnonlink/microscopic.hpp"

#include <cmath>
#include <string>

#include "magnonlink/errors.hpp"

namespace magnonlink {

namespace {

void require_positive(double value, const char* name) {
  if (!(value > 0) || !std::isfinite(value)) {
    throw ValidationError(std::string(name) + " must be positive and finite");
  }
}

void require_non_negative(double value, const char* name) {
  if (!(value >= 0) || !std::isfinite(value)) {
    throw ValidationError(std::string(name) + " must be non-negative and finite");
  }
}

}  // namespace

void MaterialGeometry::validate() const {
  require_positive(spin_density, "material.spin_density");
  require_non_negative(verdet, "material.verdet");
  require_positive(sample_length, "material.sample_length");
  require_positive(sample_volume, "material.sample_volume");
  require_positive(cavity_volume, "material.cavity_volume");
  require_non_negative(gilbert_alpha, "material.gilbert_alpha");
  require_positive(gyromagnetic_ratio, "material.gyromagnetic_ratio");
  require_non_negative(bare_kittel_freq, "material.bare_kittel_freq");
}

std::vector<std::string> MaterialGeometry::warnings() const {
  std::vector<std::string> out;
  const double diameter = 2.0 * std::cbrt(3.0 * sample_volume / (4.0 * std::numbers::pi));
  if (sample_length > diameter) {
    out.push_back("material.sample_length " + std::to_string(sample_length) +
                  " m exceeds the diameter " + std::to_string(diameter) +
                  " m of a sphere with volume sample_volume");
  }
  return out;
}

double MaterialGeometry::sphere_volume(double radius) {
  return 4.0 / 3.0 * std::numbers::pi * radius * radius * radius;
}

void OpticalDriveParams::validate() const {
  require_non_negative(power, "drive.power");
  require_positive(carrier_angular_freq, "drive.carrier_angular_freq");
}

double OpticalDriveParams::photon_flux(const PhysicalConstants& k) const {
  return power / (k.hbar * carrier_angular_freq);
}

void FieldBias::validate() const {
  require_non_negative(static_field, "bias.static_field");
  if (!std::isfinite(field_per_current)) throw ValidationError("bias.field_per_current must be finite");
  if (!std::isfinite(reference_current)) throw ValidationError("bias.reference_current must be finite");
  require_positive(reference_kittel_freq, "bias.reference_kittel_freq");
}

double zero_point_field(double cavity_volume, double omega_c, const PhysicalConstants& k) {
  require_positive(cavity_volume, "cavity_volume");
  require_non_negative(omega_c, "omega_c");
  return std::sqrt(k.mu0 * k.hbar * omega_c / (2.0 * cavity_volume));
}

double single_spin_coupling(double zpf_field, double gyromagnetic_ratio) {
  require_non_negative(zpf_field, "zpf_field");
  require_non_negative(gyromagnetic_ratio, "gyromagnetic_ratio");
  return gyromagnetic_ratio * zpf_field / std::numbers::sqrt2;
}

double collective_coupling(double g0, double spin_density, double sample_volume) {
  const double spins = spin_density * sample_volume;
  if (!(spins >= 1.0)) {
    throw ValidationError("collective_coupling: spin count n*V_s must be >= 1");
  }
  return g0 * std::sqrt(spins);
}

double verdet_to_G(double verdet, double spin_density) {
  require_positive(spin_density, "spin_density");
  return 4.0 * verdet / spin_density;
}

double zeta_from_G(double G, const MaterialGeometry& geom, const OpticalDriveParams& drive,
                   const PhysicalConstants& k) {
  const double l = geom.sample_length;
  return G * G * l * l * geom.spin_density * drive.photon_flux(k) / (16.0 * geom.sample_volume);
}

double gamma_from_gilbert(double alpha, double omega_m) {
  require_non_negative(alpha, "gilbert_alpha");
  return 2.0 * alpha * omega_m;
}

double gilbert_from_gamma(double gamma, double omega_m) {
  require_positive(omega_m, "omega_m");
  return gamma / (2.0 * omega_m);
}

double kittel_shift(double omega_K, double alpha) {
  require_non_negative(alpha, "gilbert_alpha");
  return omega_K / (1.0 + alpha * alpha);
}

double kittel_freq_from_current(const FieldBias& bias, double current, double gyromagnetic_ratio) {
  return bias.reference_kittel_freq +
         gyromagnetic_ratio * bias.field_per_current * (current - bias.reference_current);
}

double current_for_kittel_freq(const FieldBias& bias, double omega_m, double gyromagnetic_ratio) {
  const double slope = gyromagnetic_ratio * bias.field_per_current;
  if (slope == 0.0) throw ValidationError("bias.field_per_current is zero; current is undetermined");
  return bias.reference_current + (omega_m - bias.reference_kittel_freq) / slope;
}

CouplingPrediction predict_coupling(const MaterialGeometry& geom, double omega_c,
                                    double overlap_factor, const PhysicalConstants& k) {
  CouplingPrediction out;
  out.zpf_field = zero_point_field(geom.cavity_volume, omega_c, k);
  out.g0 = single_spin_coupling(out.zpf_field, geom.gyromagnetic_ratio);
  out.spin_count = geom.spin_density * geom.sample_volume;
  out.overlap_factor = overlap_factor;
  out.g = overlap_factor * collective_coupling(out.g0, geom.spin_density, geom.sample_volume);
  return out;
}

}  // namespace magnonlink
