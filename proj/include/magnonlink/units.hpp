#pragma once

#include <cmath>
#include <numbers>
#include <string_view>

namespace magnonlink {

inline constexpr double two_pi = 2.0 * std::numbers::pi;

/// Physical constants used by the microscopic and calibration formulas.
/// Overridable so that a run can be repeated in a rescaled unit system.
struct PhysicalConstants {
  double hbar = 1.054571817e-34;      // J s
  double mu0 = 1.25663706212e-6;      // T m / A
};

/// Ordinary frequency (Hz) to angular frequency (rad/s).
constexpr double hz_to_rad(double hz) { return two_pi * hz; }
constexpr double rad_to_hz(double rad_s) { return rad_s / two_pi; }

inline double dbm_to_watt(double dbm) { return 1e-3 * std::pow(10.0, dbm / 10.0); }
inline double watt_to_dbm(double watt) { return 10.0 * std::log10(watt / 1e-3); }

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double ratio) { return 10.0 * std::log10(ratio); }

/// Parses a power given as a suffix-tagged string: "-41 dBm", "15 mW",
/// "450 uW", "0.015 W". A Unicode minus sign is accepted. Throws
/// ValidationError on anything else.
double parse_power(std::string_view text);

}  // namespace magnonlink
