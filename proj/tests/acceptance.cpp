// Acceptance run: one PASS/FAIL line per criterion, then a summary.
// Exits 0 once every criterion has been evaluated; --strict turns any FAIL
// into exit status 1.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstring>
#include <functional>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "magnonlink/calibration.hpp"
#include "magnonlink/finite_difference.hpp"
#include "magnonlink/fitting.hpp"
#include "magnonlink/microscopic.hpp"
#include "magnonlink/optimizer.hpp"
#include "magnonlink/sweep.hpp"
#include "oracles.hpp"

using namespace magnonlink;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

MaterialGeometry reference_geometry() {
  MaterialGeometry g;
  g.spin_density = 2.1e28;
  g.verdet = 380;
  g.sample_length = 0.75e-3;
  g.sample_volume = MaterialGeometry::sphere_volume(0.38e-3);
  g.cavity_volume = 1.197e-6;
  return g;
}

Outcome cooperativity_check() {
  const double C = cooperativity(oracle::reference_params());
  return {rel(C, 510) < 0.01, fmt::format("C = {:.2f}", C)};
}

Outcome verdet_chain() {
  const auto geom = reference_geometry();
  const double G = verdet_to_G(geom.verdet, geom.spin_density);
  const double zeta = zeta_from_G(G, geom, {15e-3, hz_to_rad(200e12)});
  const double zeta_hz = rad_to_hz(zeta);
  return {rel(G, 7.2e-26) < 0.01 && rel(zeta_hz, 0.33e-3) < 0.10,
          fmt::format("G = {:.4g} m^2, zeta/2pi = {:.4g} mHz", G, zeta_hz * 1e3)};
}

Outcome optimal_detunings() {
  const auto p = oracle::reference_params();
  const auto r = find_optimum(p);
  const double dc = rad_to_hz(r.det.delta_c) / 1e6, dm = rad_to_hz(r.det.delta_m) / 1e6;
  const auto [gx, gy] = stationarity_residual(p, r.det);
  const double res = std::hypot(gx, gy);
  const double C = cooperativity(p);
  const double oracle_err = std::max(rel(4 * r.x * r.x, C + 1), rel(4 * r.y * r.y, C + 1));
  const bool ok = dc >= 288 && dc <= 352 && dm >= 10.8 && dm <= 13.2 && res < 1e-6 &&
                  oracle_err < 0.02;
  return {ok, fmt::format("dc/2pi = {:.3f} MHz, dm/2pi = {:.4f} MHz, residual {:.1e}, "
                          "4x^2/(C+1) off by {:.1e}",
                          dc, dm, res, oracle_err)};
}

Outcome peak_efficiency() {
  const auto p = oracle::reference_params();
  const auto r = find_optimum(p);
  const double s = 3 * std::sqrt(cooperativity(p));
  const auto grid = oracle::brute_force_max(p, 0, s, 0, s, 2001);
  const double agree = rel(grid.value, r.efficiency);
  const bool ok = r.efficiency > 0.5e-10 && r.efficiency < 2e-10 && r.gain_over_resonant >= 100 &&
                  r.gain_over_resonant <= 170 && agree < 1e-4;
  return {ok, fmt::format("E* = {:.4g}, gain {:.1f}, grid oracle off by {:.1e}", r.efficiency,
                          r.gain_over_resonant, agree)};
}

Outcome normal_modes() {
  const auto p = oracle::reference_params();
  FieldBias bias;
  bias.reference_kittel_freq = p.omega_c;
  const auto freq = linear_grid(10.2e9, 10.7e9, 801);
  const auto current = linear_grid(0.0, 0.8, 201);
  const auto grid =
      run_sweep(p, bias, hz_to_rad(28e9), freq, current, SweepQuantity::S11_POWER, 1.0);
  const double two_g = 2 * rad_to_hz(p.g);
  double degenerate_split = 0, min_gap = 1e300;
  std::size_t degenerate_count = 0;
  for (Eigen::Index r = 0; r < grid.values.rows(); ++r) {
    std::vector<double> row(freq.size());
    for (std::size_t c = 0; c < freq.size(); ++c) row[c] = grid.values(r, c).real();
    const auto mins = local_minima(row);
    if (r == 100) {
      degenerate_count = mins.size();
      if (mins.size() == 2) degenerate_split = freq[mins[1]] - freq[mins[0]];
    }
    if (mins.size() == 2) min_gap = std::min(min_gap, freq[mins[1]] - freq[mins[0]]);
  }
  const bool ok = degenerate_count == 2 && rel(degenerate_split, two_g) < 0.05 &&
                  rel(min_gap, two_g) < 0.05;
  return {ok, fmt::format("{} minima at degeneracy, split/2g = {:.4f}, min gap/2g = {:.4f}",
                          degenerate_count, degenerate_split / two_g, min_gap / two_g)};
}

Outcome fit_recovery() {
  const auto p = oracle::reference_params();
  const double half = rad_to_hz(4 * p.cavity_linewidth());
  const auto freq = linear_grid(rad_to_hz(p.omega_c) - half, rad_to_hz(p.omega_c) + half, 801);
  SystemParamsd init = p;
  init.omega_c += 0.3 * p.cavity_linewidth();
  init.omega_m -= 0.3 * p.cavity_linewidth();
  init.kappa *= 1.3;
  init.kappa_c *= 1.3;
  init.gamma *= 1.3;
  init.g *= 1.3;

  const auto clean = fit_s11_hybrid(synthesize_trace(p, TraceKind::S11_HYBRID, freq, 0.0, 1), init);
  const double noiseless = std::max({rel(clean.params.g, p.g), rel(clean.params.gamma, p.gamma),
                                     rel(clean.params.kappa, p.kappa),
                                     rel(clean.params.kappa_c, p.kappa_c),
                                     std::abs(clean.params.omega_c - p.omega_c) / p.omega_c,
                                     std::abs(clean.params.omega_m - p.omega_m) / p.omega_m});

  std::vector<std::uint64_t> seeds(20);
  std::iota(seeds.begin(), seeds.end(), 1);
  const auto fits = monte_carlo_s11_hybrid(p, freq, 0.01, seeds, init);
  auto median = [&](double SystemParamsd::*field) {
    std::vector<double> e;
    for (const auto& f : fits) e.push_back(rel(f.params.*field, p.*field));
    std::nth_element(e.begin(), e.begin() + 10, e.end());
    return e[10];
  };
  const double mg = median(&SystemParamsd::g), mgam = median(&SystemParamsd::gamma);
  const double mk = median(&SystemParamsd::kappa), mkc = median(&SystemParamsd::kappa_c);
  const bool ok = noiseless < 1e-6 && mg < 0.02 && mgam < 0.02 && mk < 0.02 && mkc < 0.02;
  return {ok, fmt::format("noiseless {:.1e}; median error g {:.2f}%, gamma {:.2f}%, kappa "
                          "{:.2f}%, kappa_c {:.2f}%",
                          noiseless, 100 * mg, 100 * mgam, 100 * mk, 100 * mkc)};
}

Outcome shot_noise() {
  const auto geom = reference_geometry();
  ShotNoiseRun run;
  run.microwave_power = dbm_to_watt(-41);
  run.probe_photon_flux = 1.2e17;
  run.resolution_bandwidth = hz_to_rad(100);
  run.coil_coupling = hz_to_rad(1.5e6);
  run.magnon_freq = hz_to_rad(9.5e9);
  const double carrier = hz_to_rad(200e12);
  const OpticalDriveParams drive{run.probe_photon_flux * PhysicalConstants{}.hbar * carrier, carrier};

  const double G0 = verdet_to_G(geom.verdet, geom.spin_density);
  run.measured_snr = predict_snr(G0, geom, run);
  const auto back = snr_to_zeta(run, geom, drive);
  const double trip = std::max(rel(back.G, G0), rel(back.zeta, zeta_from_G(G0, geom, drive)));

  run.measured_snr = db_to_linear(36.8);
  const double zeta_hz = rad_to_hz(snr_to_zeta(run, geom, drive).zeta);
  const double ratio = zeta_hz / 0.25e-3;
  return {trip < 1e-10 && ratio > 0.5 && ratio < 2.0,
          fmt::format("round trip {:.1e}; zeta/2pi = {:.4g} mHz, discrepancy ratio {:.3f}", trip,
                      zeta_hz * 1e3, ratio)};
}

Outcome chain_calibration() {
  CavityPorts cav{hz_to_rad(10.45e9), hz_to_rad(3.3e6), hz_to_rad(25e6), hz_to_rad(42e3)};
  ChainCalibration cal;
  cal.cavity = cav;
  cal.omega = linear_grid(hz_to_rad(10.35e9), hz_to_rad(10.55e9), 2001);
  std::vector<double> truth;
  for (double w : cal.omega) {
    const double t = db_to_linear(60.0 + std::sin(w / hz_to_rad(5e6)));
    truth.push_back(t);
    cal.tone_power.push_back(1e-9);
    cal.measured_power.push_back(t * s21_cavity(cav.omega_c, cav.kappa, cav.kappa_c, cav.kappa_1, w) * 1e-9);
  }
  const auto tf = extract_transfer_function(cal);
  double worst = 0;
  std::size_t j = 0;
  for (std::size_t i = 0; i < cal.omega.size(); ++i) {
    if (j < tf.omega.size() && tf.omega[j] == cal.omega[i]) worst = std::max(worst, rel(tf.gain[j++], truth[i]));
  }
  const double k = cav.kappa, kc = cav.kappa_c, k1 = cav.kappa_1;
  const double peak = s21_cavity(cav.omega_c, k, kc, k1, cav.omega_c);
  const double peak_err = rel(peak, 4 * k1 * kc / std::pow(k1 + kc + k, 2));
  return {worst < 0.01 && j == tf.omega.size() && peak_err < 1e-10,
          fmt::format("{} bins calibrated, worst T_a error {:.1e}, |S21|^2 peak {:.6g} (err {:.1e})",
                      tf.gain.size(), worst, peak, peak_err)};
}

Outcome cross_direction() {
  std::mt19937_64 rng(1234);
  double worst_pair = 0, worst_rest = 0, worst_passive = 0;
  bool sign_ok = true;
  for (int k = 0; k < 1000; ++k) {
    const auto p = oracle::random_params(rng);
    const double span = 4 * (p.g + p.cavity_linewidth());
    for (int j = 0; j < 100; ++j) {
      const double w = p.omega_c - span + 2 * span * j / 99.0;
      const double a = std::abs(s_lm_stokes(p, w));
      worst_pair = std::max(worst_pair, std::abs(a - std::abs(s_lm_anti_stokes(p, w))));
      worst_rest = std::max({worst_rest, rel(std::abs(s_ml_plus(p, w)), a),
                             rel(std::abs(s_ml_minus(p, w)), a)});
      worst_passive = std::max(worst_passive, std::abs(s11_hybrid(p, w)) - 1.0);
      const Detuningsd d{w - p.omega_c, w - p.omega_m};
      sign_ok = sign_ok && efficiency_detuned(p, d) == efficiency_detuned(p, {-d.delta_c, -d.delta_m});
    }
  }
  return {worst_pair == 0 && worst_rest < 1e-12 && worst_passive <= 1e-12 && sign_ok,
          fmt::format("stokes/anti-stokes diff {:.1e}, other directions {:.1e}, max |S11|-1 "
                      "{:.1e}, sign flip {}",
                      worst_pair, worst_rest, worst_passive, sign_ok ? "exact" : "broken")};
}

Outcome gradient_checks() {
  std::mt19937_64 rng(99);
  double worst_chi = 0;
  for (int k = 0; k < 100; ++k) {
    const auto p = oracle::random_params(rng);
    const double w = p.omega_c + (k % 11 - 5) * 0.3 * p.cavity_linewidth();
    Eigen::VectorXd x(5);
    x << p.omega_c, p.kappa, p.kappa_c, p.omega_m, p.gamma;
    auto f = [&](const Eigen::VectorXd& v) {
      SystemParamsd q = p;
      q.omega_c = v(0);
      q.kappa = v(1);
      q.kappa_c = v(2);
      q.omega_m = v(3);
      q.gamma = v(4);
      Eigen::VectorXcd out(2);
      out << chi_c(q, w), chi_m(q, w);
      return out;
    };
    Eigen::VectorXd scales(5);
    scales << 100 * p.cavity_linewidth(), p.kappa, p.kappa_c, 100 * p.gamma, p.gamma;
    const Eigen::MatrixXcd J = jacobian_fd(f, x, scales);
    const std::complex<double> cc = chi_c(p, w), cm = chi_m(p, w), i(0, 1);
    const std::complex<double> exact[4] = {-i * cc * cc, -0.5 * cc * cc, -i * cm * cm, -0.5 * cm * cm};
    const std::complex<double> got[4] = {J(0, 0), J(0, 1), J(1, 3), J(1, 4)};
    for (int n = 0; n < 4; ++n) worst_chi = std::max(worst_chi, std::abs(got[n] - exact[n]) / std::abs(exact[n]));
  }

  const auto p = oracle::reference_params();
  const double lw = p.kappa + p.kappa_c;
  auto E = [&](double x, double y) { return efficiency_detuned(p, {x * lw, y * p.gamma}); };
  std::uniform_real_distribution<double> u(-15, 15);
  double worst_opt = 0;
  for (int k = 0; k < 100; ++k) {
    const double x = u(rng), y = u(rng), h = 1e-3, e0 = E(x, y);
    const auto [gx, gy] = stationarity_residual(p, {x * lw, y * p.gamma});
    const double sx = (-E(x + 2 * h, y) + 8 * E(x + h, y) - 8 * E(x - h, y) + E(x - 2 * h, y)) / (12 * h) / e0;
    const double sy = (-E(x, y + 2 * h) + 8 * E(x, y + h) - 8 * E(x, y - h) + E(x, y - 2 * h)) / (12 * h) / e0;
    const double scale = std::max({std::abs(sx), std::abs(sy), 1e-3});
    worst_opt = std::max({worst_opt, std::abs(gx - sx) / scale, std::abs(gy - sy) / scale});
  }
  return {worst_chi < 1e-6 && worst_opt < 1e-4,
          fmt::format("chi Jacobian {:.1e}, optimizer gradient vs 5-point {:.1e}", worst_chi, worst_opt)};
}

}  // namespace

int main(int argc, char** argv) {
  const bool strict = argc > 1 && std::strcmp(argv[1], "--strict") == 0;
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"cooperativity", cooperativity_check},
      {"verdet chain", verdet_chain},
      {"optimal detunings", optimal_detunings},
      {"peak efficiency", peak_efficiency},
      {"normal-mode structure", normal_modes},
      {"fit recovery", fit_recovery},
      {"shot-noise calibration", shot_noise},
      {"chain calibration", chain_calibration},
      {"cross-direction properties", cross_direction},
      {"gradient checks", gradient_checks},
  };
  int passed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    passed += o.pass;
    fmt::print("{} {:2}. {}: {} [{:.2f} s]\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first,
               o.detail, secs);
  }
  fmt::print("{}/{} criteria passed\n", passed, criteria.size());
  return strict && passed != static_cast<int>(criteria.size()) ? 1 : 0;
}
