#include <gtest/gtest.h>

#include <random>

#include "magnonlink/finite_difference.hpp"
#include "magnonlink/model.hpp"
#include "oracles.hpp"

using namespace magnonlink;

namespace {

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

}  // namespace

TEST(Model, CooperativityReferenceValue) {
  const auto p = oracle::reference_params();
  EXPECT_NEAR(cooperativity(p), 4.0 * 63 * 63 / (28.3 * 1.1), 1e-9);
  EXPECT_LT(rel(cooperativity(p), 510.0), 0.01);
}

TEST(Model, CooperativityRejectsZeroRates) {
  auto p = oracle::reference_params();
  p.gamma = 0;
  EXPECT_THROW(cooperativity(p), SingularInputError);
}

TEST(Model, SusceptibilityHermitianSymmetry) {
  const auto p = oracle::reference_params();
  for (double d : {1e5, 3e7, 2e8}) {
    EXPECT_NEAR(std::abs(chi_c(p, p.omega_c + d) - std::conj(chi_c(p, p.omega_c - d))), 0.0,
                1e-22);
    EXPECT_NEAR(std::abs(chi_m(p, p.omega_m + d) - std::conj(chi_m(p, p.omega_m - d))), 0.0,
                1e-22);
  }
}

TEST(Model, SusceptibilityPeakValue) {
  const auto p = oracle::reference_params();
  EXPECT_NEAR(chi_m(p, p.omega_m).real(), 2.0 / p.gamma, 1e-20);
  EXPECT_NEAR(chi_c(p, p.omega_c).real(), 2.0 / p.cavity_linewidth(), 1e-20);
}

TEST(Model, S11MatchesCoupledModeSolve) {
  std::mt19937_64 rng(11);
  for (int k = 0; k < 200; ++k) {
    const auto p = oracle::random_params(rng);
    for (double off : {-3.0, -1.0, -0.1, 0.0, 0.2, 1.5, 4.0}) {
      const double w = p.omega_c + off * (p.g + p.cavity_linewidth());
      const auto a = s11_hybrid(p, w);
      const auto b = oracle::s11(p, w);
      EXPECT_LT(std::abs(a - b), 1e-9 * std::max(1.0, std::abs(b)));
    }
  }
}

TEST(Model, S11ZeroCouplingIsBareCavity) {
  auto p = oracle::reference_params();
  p.g = 0;
  const double w = p.omega_c + 1e7;
  const auto expected = 1.0 - p.kappa_c * chi_c(p, w);
  EXPECT_LT(std::abs(s11_hybrid(p, w) - expected), 1e-14);
}

TEST(Model, PassivityOnRandomSets) {
  std::mt19937_64 rng(5);
  for (int k = 0; k < 500; ++k) {
    const auto p = oracle::random_params(rng);
    for (int j = 0; j < 50; ++j) {
      const double w = p.omega_c + (j - 25) * 0.2 * (p.g + p.cavity_linewidth());
      EXPECT_LE(std::abs(s11_hybrid(p, w)), 1.0 + 1e-12);
    }
  }
}

TEST(Model, CriticalCouplingZeroReflection) {
  const double wm = 2 * M_PI * 9.5e9;
  const double g = 2 * M_PI * 1.5e6;
  EXPECT_LT(std::abs(s11_coil(wm, g, g, wm)), 1e-12);
  EXPECT_NEAR(std::abs(s11_coil(wm, g, 0.0, wm + 1e6)), 1.0, 1e-15);
}

TEST(Model, ConversionDirectionsShareMagnitude) {
  std::mt19937_64 rng(8);
  for (int k = 0; k < 100; ++k) {
    const auto p = oracle::random_params(rng);
    for (int j = 0; j < 20; ++j) {
      const double w = p.omega_c + (j - 10) * 0.3 * (p.g + p.cavity_linewidth());
      const double m = std::abs(s_lm_stokes(p, w));
      EXPECT_EQ(m, std::abs(s_lm_anti_stokes(p, w)));
      EXPECT_LT(std::abs(std::abs(s_ml_plus(p, w)) - m), 1e-12 * m);
      EXPECT_LT(std::abs(std::abs(s_ml_minus(p, w)) - m), 1e-12 * m);
      EXPECT_LT(std::abs(std::abs(s_lm(p, 1.0, w)) - oracle::s_lm_magnitude(p, 1.0, w)), 1e-9 * m);
    }
  }
}

TEST(Model, SlmScalesWithSqrtEta) {
  const auto p = oracle::reference_params();
  const double w = p.omega_c + 6e7;
  EXPECT_NEAR(std::abs(s_lm(p, 0.25, w)), 0.5 * std::abs(s_lm(p, 1.0, w)), 1e-25);
}

TEST(Model, EfficiencyDetunedEqualsPowerOfSmlPlus) {
  std::mt19937_64 rng(3);
  for (int k = 0; k < 200; ++k) {
    const auto p = oracle::random_params(rng);
    const double w = p.omega_c + (k % 7 - 3) * 0.4 * p.g;
    const Detuningsd det{w - p.omega_c, w - p.omega_m};
    const double a = efficiency_detuned(p, det);
    const double b = std::norm(s_ml_plus(p, w));
    EXPECT_LT(rel(a, b), 1e-9);
  }
}

TEST(Model, ResonantEfficiency) {
  const auto p = oracle::reference_params();
  EXPECT_LT(rel(efficiency_resonant(p), efficiency_detuned(p, {0.0, 0.0})), 1e-14);
  EXPECT_LT(rel(efficiency_resonant(p), 1.129e-12), 2e-3);
}

TEST(Model, EfficiencySignFlipSymmetry) {
  const auto p = oracle::reference_params();
  for (double dc : {1e7, 2e9, -5e8}) {
    for (double dm : {3e6, -7e7}) {
      EXPECT_EQ(efficiency_detuned(p, {dc, dm}), efficiency_detuned(p, {-dc, -dm}));
    }
  }
}

TEST(Model, NormalModesAtDegeneracy) {
  const auto p = oracle::reference_params();
  const auto [lo, hi] = normal_mode_frequencies(p);
  EXPECT_LT(rel(hi - lo, 2 * p.g), 1e-12);
  const auto lossy = normal_modes_lossy(p);
  EXPECT_LT(rel(lossy[1].real() - lossy[0].real(), 2 * std::sqrt(p.g * p.g - std::pow((p.cavity_linewidth() - p.gamma) / 4, 2))), 1e-9);
}

TEST(Model, S21PeakValue) {
  const double k1 = 2 * M_PI * 42e3, kc = 2 * M_PI * 25e6, k = 2 * M_PI * 3.3e6;
  const double peak = s21_cavity(1.0e10, k, kc, k1, 1.0e10);
  EXPECT_NEAR(peak, 4 * k1 * kc / std::pow(k1 + kc + k, 2), 1e-18);
  EXPECT_LT(rel(peak, 5.2286e-3), 1e-4);
  EXPECT_EQ(s21_cavity(1.0e10, k, kc, 0.0, 1.0e10 + 5e6), 0.0);
}

TEST(Model, ValidationRejectsBadParams) {
  EXPECT_THROW(SystemParamsd::from_hz(-1, 1e9, 1, 1, 1, 1), ValidationError);
  EXPECT_THROW(SystemParamsd::from_hz(1e9, 1e9, -1, 1, 1, 1), ValidationError);
  EXPECT_THROW(SystemParamsd::from_hz(1e9, 1e9, 1, 1, 1, NAN), ValidationError);
  EXPECT_THROW(SystemParamsd::from_hz(1e9, 1e9, 1, 1, 2e9, 1), ValidationError);
}

TEST(Model, SingularLosslessResonance) {
  SystemParamsd p{1e10, 1e10, 0, 0, 0, 0, 0};
  EXPECT_THROW(chi_c(p, 1e10), SingularInputError);
}

TEST(Model, FloatInstantiation) {
  const auto p = SystemParams<float>::from_hz(10.45e9f, 10.45e9f, 3.3e6f, 25e6f, 1.1e6f, 63e6f);
  EXPECT_NEAR(cooperativity(p), 510.0f, 1.0f);
}

TEST(FiniteDifference, SusceptibilityDerivatives) {
  std::mt19937_64 rng(21);
  for (int k = 0; k < 100; ++k) {
    const auto p = oracle::random_params(rng);
    const double w = p.omega_c + (k % 11 - 5) * 0.3 * p.cavity_linewidth();
    // x = (omega_c, kappa, kappa_c, omega_m, gamma)
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
    // Resonance frequencies step on a linewidth scale rather than their own
    // magnitude; a 1e-6 relative step of a 10 GHz carrier is below roundoff.
    scales << 100 * p.cavity_linewidth(), p.kappa, p.kappa_c, 100 * p.gamma, p.gamma;
    const Eigen::MatrixXcd J = jacobian_fd(f, x, scales);
    const std::complex<double> cc = chi_c(p, w), cm = chi_m(p, w), i(0, 1);
    const std::complex<double> expected[2][5] = {
        {-i * cc * cc, -0.5 * cc * cc, -0.5 * cc * cc, 0.0, 0.0},
        {0.0, 0.0, 0.0, -i * cm * cm, -0.5 * cm * cm}};
    for (int r = 0; r < 2; ++r) {
      for (int c = 0; c < 5; ++c) {
        if (expected[r][c] == 0.0) {
          EXPECT_EQ(J(r, c), 0.0);
        } else {
          EXPECT_LT(std::abs(J(r, c) - expected[r][c]) / std::abs(expected[r][c]), 1e-6);
        }
      }
    }
  }
}

TEST(FiniteDifference, LinearModelExact) {
  Eigen::MatrixXd A(3, 2);
  A << 1, 2, -3, 4, 0.5, 7;
  auto f = [&](const Eigen::VectorXd& v) -> Eigen::VectorXd { return A * v; };
  Eigen::VectorXd x(2);
  x << 1.5, -2.0;
  const Eigen::MatrixXd J = jacobian_fd(f, x);
  EXPECT_LT((J - A).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(FiniteDifference, StepHalvingConverges) {
  const auto p = oracle::reference_params();
  const double w = p.omega_c + 3e7;
  auto f = [&](const Eigen::VectorXd& v) {
    SystemParamsd q = p;
    q.g = v(0);
    q.gamma = v(1);
    Eigen::VectorXcd out(1);
    out << s11_hybrid(q, w);
    return out;
  };
  Eigen::VectorXd x(2);
  x << p.g, p.gamma;
  FiniteDifferenceStep coarse, fine;
  fine.relative = 0.5 * coarse.relative;
  const Eigen::MatrixXcd a = jacobian_fd(f, x, Eigen::VectorXd(x.cwiseAbs()), coarse);
  const Eigen::MatrixXcd b = jacobian_fd(f, x, Eigen::VectorXd(x.cwiseAbs()), fine);
  for (int c = 0; c < 2; ++c) EXPECT_LT(std::abs(a(0, c) - b(0, c)) / std::abs(b(0, c)), 1e-4);
}
