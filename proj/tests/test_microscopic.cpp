#include <gtest/gtest.h>

#include <cmath>

#include "magnonlink/errors.hpp"
#include "magnonlink/microscopic.hpp"

using namespace magnonlink;

namespace {

constexpr double kPi = 3.14159265358979323846;

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

MaterialGeometry reference_geometry() {
  MaterialGeometry g;
  g.spin_density = 2.1e28;
  g.verdet = 380;
  g.sample_length = 0.75e-3;
  g.sample_volume = MaterialGeometry::sphere_volume(0.38e-3);
  g.cavity_volume = 21e-3 * 19e-3 * 3e-3;
  g.gilbert_alpha = 0;
  return g;
}

OpticalDriveParams reference_drive() { return {0.015, 2 * kPi * 200e12}; }

}  // namespace

TEST(Microscopic, VerdetToG) {
  EXPECT_LT(rel(verdet_to_G(380, 2.1e28), 7.2e-26), 0.01);
  EXPECT_EQ(verdet_to_G(0, 2.1e28), 0.0);
  EXPECT_DOUBLE_EQ(verdet_to_G(380, 4.2e28), 0.5 * verdet_to_G(380, 2.1e28));
  EXPECT_THROW(verdet_to_G(380, 0), ValidationError);
}

TEST(Microscopic, ZetaFromVerdetChain) {
  const auto geom = reference_geometry();
  const double G = verdet_to_G(geom.verdet, geom.spin_density);
  const double zeta = zeta_from_G(G, geom, reference_drive());
  // Independent arithmetic: G^2 l^2 n P0 / (16 Vs hbar Omega0).
  const double hbar = 1.054571817e-34;
  const double expected = G * G * 0.75e-3 * 0.75e-3 * 2.1e28 * 0.015 /
                          (16 * (4.0 / 3.0 * kPi * std::pow(0.38e-3, 3)) * hbar * 2 * kPi * 200e12);
  EXPECT_LT(rel(zeta, expected), 1e-12);
  EXPECT_LT(rel(zeta / (2 * kPi), 0.33e-3), 0.10);
}

TEST(Microscopic, ZetaLinearInPowerQuadraticInVerdet) {
  auto geom = reference_geometry();
  auto drive = reference_drive();
  const double base = zeta_from_G(verdet_to_G(geom.verdet, geom.spin_density), geom, drive);
  drive.power *= 2;
  EXPECT_LT(rel(zeta_from_G(verdet_to_G(geom.verdet, geom.spin_density), geom, drive), 2 * base), 1e-14);
  drive.power = 0;
  EXPECT_EQ(zeta_from_G(verdet_to_G(geom.verdet, geom.spin_density), geom, drive), 0.0);
  drive = reference_drive();
  EXPECT_LT(rel(zeta_from_G(verdet_to_G(2 * geom.verdet, geom.spin_density), geom, drive), 4 * base), 1e-14);
}

TEST(Microscopic, ZeroPointFieldAndCoupling) {
  const auto geom = reference_geometry();
  const double wc = 2 * kPi * 10.45e9;
  const double b = zero_point_field(geom.cavity_volume, wc);
  EXPECT_LT(rel(b, 1.9e-12), 0.01);
  EXPECT_LT(rel(zero_point_field(2 * geom.cavity_volume, wc), b / std::sqrt(2.0)), 1e-14);
  EXPECT_EQ(zero_point_field(geom.cavity_volume, 0.0), 0.0);
  const double g0 = single_spin_coupling(b, geom.gyromagnetic_ratio);
  EXPECT_DOUBLE_EQ(g0 / (geom.gyromagnetic_ratio * b), 1.0 / std::sqrt(2.0));
  EXPECT_LT(rel(g0 / (2 * kPi), 0.038), 0.01);
  EXPECT_EQ(single_spin_coupling(0.0, geom.gyromagnetic_ratio), 0.0);
}

TEST(Microscopic, CollectiveCoupling) {
  EXPECT_DOUBLE_EQ(collective_coupling(3.0, 1.0, 1.0), 3.0);
  EXPECT_DOUBLE_EQ(collective_coupling(3.0, 1e20, 4e-9), 2 * collective_coupling(3.0, 1e20, 1e-9));
  EXPECT_THROW(collective_coupling(3.0, 1.0, 0.5), ValidationError);
  const auto pred = predict_coupling(reference_geometry(), 2 * kPi * 10.45e9);
  const double g_hz = pred.g / (2 * kPi);
  // Prediction is within a factor of 2 of the measured 63 MHz.
  EXPECT_GT(g_hz, 63e6 / 2);
  EXPECT_LT(g_hz, 63e6 * 2);
  const auto scaled = predict_coupling(reference_geometry(), 2 * kPi * 10.45e9, 0.76);
  EXPECT_DOUBLE_EQ(scaled.g, 0.76 * pred.g);
}

TEST(Microscopic, CouplingScalesAsSqrtVolumeRatio) {
  auto geom = reference_geometry();
  const double wc = 2 * kPi * 10e9;
  const double base = predict_coupling(geom, wc).g;
  geom.sample_volume *= 9;
  geom.cavity_volume *= 4;
  EXPECT_LT(rel(predict_coupling(geom, wc).g, base * 3.0 / 2.0), 1e-13);
}

TEST(Microscopic, Gilbert) {
  const double wm = 2 * kPi * 10.45e9;
  const double alpha = gilbert_from_gamma(2 * kPi * 1.1e6, wm);
  EXPECT_LT(rel(alpha, 5.3e-5), 0.01);
  EXPECT_LT(rel(gamma_from_gilbert(alpha, wm), 2 * kPi * 1.1e6), 1e-14);
  EXPECT_EQ(gamma_from_gilbert(0.0, wm), 0.0);
  EXPECT_EQ(kittel_shift(wm, 0.0), wm);
  const double a = 1e-3;
  EXPECT_NEAR(kittel_shift(wm, a) / wm, 1 - a * a, 2 * std::pow(a, 4));
  EXPECT_THROW(gamma_from_gilbert(-1e-5, wm), ValidationError);
}

TEST(Microscopic, KittelFromCurrent) {
  FieldBias bias;
  bias.reference_kittel_freq = 2 * kPi * 10.45e9;
  const double ge = 2 * kPi * 28e9;
  EXPECT_EQ(kittel_freq_from_current(bias, 0.4, ge), bias.reference_kittel_freq);
  const double slope = kittel_freq_from_current(bias, 1.4, ge) - kittel_freq_from_current(bias, 0.4, ge);
  EXPECT_LT(rel(slope / (2 * kPi), 1.4e9), 1e-12);
  EXPECT_NEAR(current_for_kittel_freq(bias, kittel_freq_from_current(bias, 0.123, ge), ge), 0.123, 1e-12);
}

TEST(Microscopic, PhotonFlux) {
  const auto drive = reference_drive();
  EXPECT_LT(rel(drive.photon_flux(), 0.015 / (1.054571817e-34 * 2 * kPi * 200e12)), 1e-12);
}

TEST(Microscopic, GeometryWarningsAndValidation) {
  auto geom = reference_geometry();
  EXPECT_TRUE(geom.warnings().empty());
  geom.sample_length = 1e-3;
  EXPECT_EQ(geom.warnings().size(), 1u);
  geom.cavity_volume = 0;
  EXPECT_THROW(geom.validate(), ValidationError);
}

namespace {

/// Numerical scale factors of a unit change; a quantity of dimension
/// m^a s^b A^c T^d is multiplied by m^a s^b A^c T^d.
struct UnitScale {
  double m, s, A, T;
  double of(int a, int b, int c, int d) const {
    return std::pow(m, a) * std::pow(s, b) * std::pow(A, c) * std::pow(T, d);
  }
};

}  // namespace

TEST(Microscopic, DimensionalScalingHarness) {
  const UnitScale u{1e3, 1e-2, 7.0, 1e-3};
  const PhysicalConstants k0;
  PhysicalConstants k1;
  k1.hbar = k0.hbar * u.of(2, 1, 1, 1);  // J s = T A m^2 s
  k1.mu0 = k0.mu0 * u.of(1, 0, -1, 1);   // T m / A

  const auto g0 = reference_geometry();
  MaterialGeometry g1 = g0;
  g1.spin_density *= u.of(-3, 0, 0, 0);
  g1.verdet *= u.of(-1, 0, 0, 0);
  g1.sample_length *= u.of(1, 0, 0, 0);
  g1.sample_volume *= u.of(3, 0, 0, 0);
  g1.cavity_volume *= u.of(3, 0, 0, 0);
  g1.gyromagnetic_ratio *= u.of(0, -1, 0, -1);

  const auto d0 = reference_drive();
  OpticalDriveParams d1{d0.power * u.of(2, -1, 1, 1), d0.carrier_angular_freq * u.of(0, -1, 0, 0)};
  const double wc0 = 2 * kPi * 10.45e9, wc1 = wc0 * u.of(0, -1, 0, 0);

  auto check = [](double scaled, double base, double factor) {
    EXPECT_LT(rel(scaled, base * factor), 1e-10);
  };
  check(zero_point_field(g1.cavity_volume, wc1, k1), zero_point_field(g0.cavity_volume, wc0, k0),
        u.of(0, 0, 0, 1));
  const auto p0 = predict_coupling(g0, wc0, 1.0, k0);
  const auto p1 = predict_coupling(g1, wc1, 1.0, k1);
  check(p1.g0, p0.g0, u.of(0, -1, 0, 0));
  check(p1.g, p0.g, u.of(0, -1, 0, 0));
  check(p1.spin_count, p0.spin_count, 1.0);
  const double G0 = verdet_to_G(g0.verdet, g0.spin_density);
  const double G1 = verdet_to_G(g1.verdet, g1.spin_density);
  check(G1, G0, u.of(2, 0, 0, 0));
  check(d1.photon_flux(k1), d0.photon_flux(k0), u.of(0, -1, 0, 0));
  check(zeta_from_G(G1, g1, d1, k1), zeta_from_G(G0, g0, d0, k0), u.of(0, -1, 0, 0));
  check(gamma_from_gilbert(1e-4, wc1), gamma_from_gilbert(1e-4, wc0), u.of(0, -1, 0, 0));
  check(kittel_shift(wc1, 0.01), kittel_shift(wc0, 0.01), u.of(0, -1, 0, 0));

  FieldBias b0;
  b0.reference_kittel_freq = wc0;
  FieldBias b1 = b0;
  b1.static_field *= u.of(0, 0, 0, 1);
  b1.field_per_current *= u.of(0, 0, -1, 1);
  b1.reference_current *= u.of(0, 0, 1, 0);
  b1.reference_kittel_freq = wc1;
  check(kittel_freq_from_current(b1, 0.7 * u.A, g1.gyromagnetic_ratio),
        kittel_freq_from_current(b0, 0.7, g0.gyromagnetic_ratio), u.of(0, -1, 0, 0));
}
