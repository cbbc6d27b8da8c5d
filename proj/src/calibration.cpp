#include "magnonlink/calibration.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "magnonlink/errors.hpp"
#include "magnonlink/model.hpp"

namespace magnonlink {

namespace {

void require_positive(double value, const char* name) {
  if (!(value > 0) || !std::isfinite(value)) {
    throw ValidationError(std::string(name) + " must be positive and finite");
  }
}

void require_increasing(std::span<const double> grid, const char* name) {
  for (std::size_t i = 1; i < grid.size(); ++i) {
    if (!(grid[i] > grid[i - 1])) {
      throw ValidationError(std::string(name) + " must be strictly increasing (bin " +
                            std::to_string(i) + ")");
    }
  }
}

}  // namespace

void ShotNoiseRun::validate() const {
  require_positive(microwave_power, "shotnoise.microwave_power");
  require_positive(probe_photon_flux, "shotnoise.probe_photon_flux");
  require_positive(resolution_bandwidth, "shotnoise.resolution_bandwidth");
  require_positive(coil_coupling, "shotnoise.coil_coupling");
  require_positive(magnon_freq, "shotnoise.magnon_freq");
  require_positive(measured_snr, "shotnoise.measured_snr");
  if (electronic_noise_psd && !(*electronic_noise_psd >= 0)) {
    throw ValidationError("shotnoise.electronic_noise_psd must be >= 0");
  }
}

double magnon_spectral_density(double microwave_power, double omega_m, double gamma_c,
                               double gamma, const PhysicalConstants& k) {
  if (!(microwave_power >= 0)) throw ValidationError("microwave power must be >= 0");
  require_positive(omega_m, "omega_m");
  require_positive(gamma_c, "gamma_c");
  if (std::abs(gamma - gamma_c) > 0.1 * gamma_c) {
    throw ValidationError(
        "magnon_spectral_density: only valid at critical coupling (gamma within 10% of gamma_c)");
  }
  return microwave_power / (k.hbar * omega_m * gamma_c);
}

double predict_snr(double G, const MaterialGeometry& geom, const ShotNoiseRun& run,
                   const PhysicalConstants& k) {
  const double l = geom.sample_length;
  return G * G * l * l * run.probe_photon_flux * geom.spin_density * run.microwave_power /
         (8.0 * geom.sample_volume * k.hbar * run.magnon_freq * run.coil_coupling *
          run.resolution_bandwidth);
}

ShotNoiseCalibration snr_to_zeta(const ShotNoiseRun& run, const MaterialGeometry& geom,
                                 const OpticalDriveParams& drive, const PhysicalConstants& k) {
  if (!(run.measured_snr > 0)) {
    throw ValidationError("snr_to_zeta: measured SNR must be positive");
  }
  run.validate();
  geom.validate();
  drive.validate();
  // predict_snr is exactly quadratic in G.
  const double snr_at_unit_G = predict_snr(1.0, geom, run, k);
  ShotNoiseCalibration out{run, geom, drive, 0.0, 0.0};
  out.G = std::sqrt(run.measured_snr / snr_at_unit_G);
  out.zeta = zeta_from_G(out.G, geom, drive, k);
  return out;
}

std::size_t nearest_bin(std::span<const double> grid, double omega) {
  if (grid.empty()) throw ValidationError("empty frequency grid");
  const auto it = std::lower_bound(grid.begin(), grid.end(), omega);
  if (it == grid.begin()) return 0;
  if (it == grid.end()) return grid.size() - 1;
  const auto hi = static_cast<std::size_t>(it - grid.begin());
  return (omega - grid[hi - 1] <= grid[hi] - omega) ? hi - 1 : hi;
}

std::vector<double> svv_spectrum(double G, const MaterialGeometry& geom, const ShotNoiseRun& run,
                                 std::span<const double> omega_grid, const PhysicalConstants& k) {
  require_increasing(omega_grid, "svv_spectrum grid");
  if (omega_grid.empty() || run.magnon_freq < omega_grid.front() ||
      run.magnon_freq > omega_grid.back()) {
    throw ValidationError("svv_spectrum: grid must include omega_m");
  }
  const double floor = 0.5 * run.probe_photon_flux * run.resolution_bandwidth;
  std::vector<double> spectrum(omega_grid.size(), floor);
  spectrum[nearest_bin(omega_grid, run.magnon_freq)] += floor * predict_snr(G, geom, run, k);
  return spectrum;
}

double measure_snr(std::span<const double> spectrum, std::span<const double> omega_grid,
                   double omega_m) {
  if (spectrum.size() != omega_grid.size() || spectrum.size() < 2) {
    throw ValidationError("measure_snr: spectrum and grid must match and hold >= 2 bins");
  }
  const std::size_t peak = nearest_bin(omega_grid, omega_m);
  double floor_sum = 0;
  for (std::size_t i = 0; i < spectrum.size(); ++i) {
    if (i != peak) floor_sum += spectrum[i];
  }
  const double floor = floor_sum / static_cast<double>(spectrum.size() - 1);
  if (!(floor > 0)) throw ValidationError("measure_snr: noise floor is not positive");
  return (spectrum[peak] - floor) / floor;
}

NoiseSubtraction subtract_electronic_noise(std::span<const double> total_psd,
                                           std::span<const double> electronic_psd) {
  if (total_psd.size() != electronic_psd.size()) {
    throw ValidationError("subtract_electronic_noise: grids differ in length (" +
                          std::to_string(total_psd.size()) + " vs " +
                          std::to_string(electronic_psd.size()) + ")");
  }
  NoiseSubtraction out;
  out.psd.resize(total_psd.size());
  for (std::size_t i = 0; i < total_psd.size(); ++i) {
    const double diff = total_psd[i] - electronic_psd[i];
    if (diff <= 0.0) {
      out.psd[i] = 0.0;
      out.clamped_bins.push_back(i);
    } else {
      out.psd[i] = diff;
    }
  }
  return out;
}

void ChainCalibration::validate() const {
  if (omega.empty()) throw ValidationError("chain calibration: no frequency bins");
  if (tone_power.size() != omega.size() || measured_power.size() != omega.size()) {
    throw ValidationError("chain calibration: tone_power, measured_power and grid differ in length");
  }
  require_increasing(omega, "chain calibration grid");
  for (std::size_t i = 0; i < omega.size(); ++i) {
    if (!(tone_power[i] > 0)) {
      throw ValidationError("chain calibration: tone power must be positive (bin " +
                            std::to_string(i) + ")");
    }
    if (!(measured_power[i] >= 0) || !std::isfinite(measured_power[i])) {
      throw ValidationError("chain calibration: measured power must be finite and >= 0 (bin " +
                            std::to_string(i) + ")");
    }
  }
}

TransferFunction extract_transfer_function(const ChainCalibration& cal, double threshold) {
  cal.validate();
  TransferFunction out;
  for (std::size_t i = 0; i < cal.omega.size(); ++i) {
    const double s21 = s21_cavity(cal.cavity.omega_c, cal.cavity.kappa, cal.cavity.kappa_c,
                                  cal.cavity.kappa_1, cal.omega[i]);
    if (!(s21 > threshold)) {
      out.excluded_bins.push_back(i);
      continue;
    }
    const double gain = cal.measured_power[i] / (s21 * cal.tone_power[i]);
    if (!(gain > 0)) {
      out.excluded_bins.push_back(i);
      continue;
    }
    out.omega.push_back(cal.omega[i]);
    out.gain.push_back(gain);
  }
  return out;
}

double efficiency_from_powers(double optical_power_in, double optical_angular_freq,
                              double microwave_power_out, double omega_a, double bandwidth,
                              const PhysicalConstants& k) {
  require_positive(optical_power_in, "optical_power_in");
  require_positive(optical_angular_freq, "optical_angular_freq");
  require_positive(omega_a, "omega_a");
  require_positive(bandwidth, "bandwidth");
  if (!(microwave_power_out >= 0)) throw ValidationError("microwave_power_out must be >= 0");
  const double microwave_photons = microwave_power_out / (k.hbar * omega_a);
  const double optical_photons = optical_power_in / (k.hbar * optical_angular_freq);
  return microwave_photons / optical_photons;
}

}  // namespace magnonlink
