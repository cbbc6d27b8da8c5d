#pragma once

// Shot-noise referenced extraction of the Faraday coupling G and the
// magnon-light rate zeta, and the microwave-chain transfer-function
// calibration used to turn analyzer powers into photon-number efficiencies.

#include <optional>
#include <span>
#include <vector>

#include "magnonlink/microscopic.hpp"
#include "magnonlink/units.hpp"

namespace magnonlink {

/// One coil-driven Faraday-rotation measurement referenced to shot noise.
struct ShotNoiseRun {
  double microwave_power = 0;        // P_i, W
  double probe_photon_flux = 0;      // |beta|^2, s^-1
  double resolution_bandwidth = 0;   // Delta omega, rad/s
  double coil_coupling = 0;          // gamma_c, rad/s
  double magnon_freq = 0;            // omega_m, rad/s
  double measured_snr = 0;           // linear signal / shot-noise floor
  std::optional<double> electronic_noise_psd;  // W/Hz

  void validate() const;
};

/// Weight P_i / (hbar omega_m gamma_c) of the coherent delta line in the
/// magnon number spectrum. Only valid at critical coupling: throws
/// ValidationError when |gamma - gamma_c| exceeds 10% of gamma_c.
double magnon_spectral_density(double microwave_power, double omega_m, double gamma_c,
                               double gamma, const PhysicalConstants& k = {});

/// SNR = G^2 l^2 |beta|^2 n P_i / (8 V_s hbar omega_m gamma_c Delta omega).
double predict_snr(double G, const MaterialGeometry& geom, const ShotNoiseRun& run,
                   const PhysicalConstants& k = {});

/// Result of inverting a shot-noise run; echoes its inputs for auditing.
struct ShotNoiseCalibration {
  ShotNoiseRun run;
  MaterialGeometry geometry;
  OpticalDriveParams drive;
  double G = 0;     // m^2
  double zeta = 0;  // rad/s
};

/// Solves predict_snr for G, then evaluates zeta_from_G with `drive`.
ShotNoiseCalibration snr_to_zeta(const ShotNoiseRun& run, const MaterialGeometry& geom,
                                 const OpticalDriveParams& drive,
                                 const PhysicalConstants& k = {});

/// Photodetector power per resolution bin, S_VV(omega) * Delta omega, on
/// `omega_grid`: a flat shot-noise floor |beta|^2 Delta omega / 2 plus the
/// coherent magnon line placed in the single bin nearest omega_m. The line
/// height above the floor divided by the floor equals predict_snr.
std::vector<double> svv_spectrum(double G, const MaterialGeometry& geom, const ShotNoiseRun& run,
                                 std::span<const double> omega_grid,
                                 const PhysicalConstants& k = {});

/// Index of the grid bin nearest `omega`.
std::size_t nearest_bin(std::span<const double> grid, double omega);

/// (peak - floor) / floor, where the peak is the bin nearest omega_m and
/// the floor is the mean of all other bins.
double measure_snr(std::span<const double> spectrum, std::span<const double> omega_grid,
                   double omega_m);

struct NoiseSubtraction {
  std::vector<double> psd;
  std::vector<std::size_t> clamped_bins;
};

/// Bin-wise total - electronic. Bins where the electronic estimate exceeds
/// the total are clamped to zero and reported.
NoiseSubtraction subtract_electronic_noise(std::span<const double> total_psd,
                                           std::span<const double> electronic_psd);

/// Cavity parameters needed for the auxiliary-port transmission.
struct CavityPorts {
  double omega_c = 0;
  double kappa = 0;
  double kappa_c = 0;
  double kappa_1 = 0;
};

/// A calibration tone of known power swept through the cavity.
struct ChainCalibration {
  std::vector<double> omega;           // rad/s, strictly increasing
  std::vector<double> tone_power;      // P_i per bin, W
  std::vector<double> measured_power;  // P_m per bin, W
  CavityPorts cavity;

  void validate() const;
};

struct TransferFunction {
  std::vector<double> omega;        // calibrated bins only
  std::vector<double> gain;         // T_a on those bins
  std::vector<std::size_t> excluded_bins;  // indices into the input grid
};

inline constexpr double kTransmissionThreshold = 1e-8;

/// T_a = P_m / (|S21|^2 P_i) on every bin where |S21|^2 exceeds `threshold`.
TransferFunction extract_transfer_function(const ChainCalibration& cal,
                                           double threshold = kTransmissionThreshold);

/// Photon-number conversion efficiency (P_mw / hbar omega_a) / (P_opt / hbar Omega),
/// with both powers integrated over the same `bandwidth` (rad/s) and the
/// microwave power already referred to the cavity output.
double efficiency_from_powers(double optical_power_in, double optical_angular_freq,
                              double microwave_power_out, double omega_a, double bandwidth,
                              const PhysicalConstants& k = {});

}  // namespace magnonlink
