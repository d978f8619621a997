#include "qi/gaussian_state.hpp"

#include "oracle.hpp"

#include <gtest/gtest.h>

#include <array>
#include <cmath>
#include <random>

using namespace qi;

namespace {

constexpr ModeIndex kA{0};
constexpr ModeIndex kB{1};
constexpr ModeIndex kC{2};

double max_abs(const ComplexMatrix& x) { return x.cwiseAbs().maxCoeff(); }

/// Three-mode physical state with generic complex moments, built in quadrature
/// space by the oracle (thermal diagonal, random squeezing and rotation).
GaussianState random_state(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const Eigen::Index k = 3;
  Eigen::MatrixXd v = Eigen::MatrixXd::Zero(2 * k, 2 * k);
  for (Eigen::Index i = 0; i < k; ++i) {
    const double occupation = 3.0 * unit(rng);
    v(i, i) = v(i + k, i + k) = occupation + 0.5;
  }
  for (int step = 0; step < 4; ++step) {
    Eigen::MatrixXcd a;
    Eigen::MatrixXcd b;
    const auto i = static_cast<Eigen::Index>(step % 3);
    const auto j = static_cast<Eigen::Index>((step + 1) % 3);
    oracle::squeezer_maps(k, i, j, 1.0 + unit(rng), a, b);
    const std::complex<double> phase = std::polar(1.0, 6.283 * unit(rng));
    a(i, i) *= phase;
    b(i, j) *= phase;
    const auto s = oracle::symplectic(a, b);
    v = s * v * s.transpose();
  }
  ComplexMatrix n;
  ComplexMatrix m;
  oracle::moments_from_quadratures(v, n, m);
  return {n, m};
}

}  // namespace

TEST(ThermalState, StoresMeanAndNoPairing) {
  for (const double mean : {0.0, 20.0, 1000.0}) {
    const auto s = thermal_state(mean);
    ASSERT_EQ(s.mode_count(), 1u);
    EXPECT_EQ(s.n(kA, kA), Complex(mean, 0.0));
    EXPECT_EQ(s.m(kA, kA), Complex(0.0, 0.0));
  }
}

TEST(ThermalState, RejectsNegativeMean) {
  EXPECT_THROW(thermal_state(-1e-3), std::domain_error);
}

TEST(ThermalState, VarianceIsBoseEinstein) {
  for (const double mean : {0.0, 0.01, 1.0, 20.0, 1000.0}) {
    EXPECT_EQ(photon_variance(thermal_state(mean), kA), mean * (mean + 1.0));
  }
}

TEST(TmsvState, Correlation) {
  EXPECT_NEAR(tmsv_state(0.01).m(kA, kB).real(), 0.1004987562112089, 1e-15);
  EXPECT_NEAR(tmsv_state(1.0).m(kA, kB).real(), std::sqrt(2.0), 1e-15);
  const auto vac = tmsv_state(0.0);
  EXPECT_EQ(max_abs(vac.n()), 0.0);
  EXPECT_EQ(max_abs(vac.m()), 0.0);
  EXPECT_THROW(tmsv_state(-0.5), std::domain_error);
}

TEST(TmsvState, PhotonNumbersAreLocked) {
  // |psi> = sum_n c_n |n, n>, so N_a = N_b on every component and the
  // covariance equals the single-mode thermal variance.
  for (const double ns : {0.01, 0.3, 2.0}) {
    const auto s = tmsv_state(ns);
    EXPECT_NEAR(photon_covariance(s, kA, kB), ns * (ns + 1.0), 1e-14);
    EXPECT_NEAR(photon_variance(s, kA), ns * (ns + 1.0), 1e-14);
  }
}

TEST(GaussianStateValidation, RejectsMalformedMoments) {
  ComplexMatrix n = ComplexMatrix::Zero(2, 2);
  ComplexMatrix m = ComplexMatrix::Zero(2, 2);
  n(0, 1) = Complex(0.1, 0.0);
  EXPECT_THROW(GaussianState(n, m), std::invalid_argument);
  n(1, 0) = Complex(0.1, 0.0);
  m(0, 1) = 1e-3;
  EXPECT_THROW(GaussianState(n, m), std::invalid_argument);
  EXPECT_THROW(GaussianState(ComplexMatrix::Zero(2, 2), ComplexMatrix::Zero(3, 3)),
               std::invalid_argument);
}

TEST(GaussianStateValidation, RejectsUnphysicalCorrelation) {
  // Pair amplitude above sqrt(N(N+1)) violates the uncertainty relation.
  ComplexMatrix n = ComplexMatrix::Identity(2, 2) * 0.01;
  ComplexMatrix m = ComplexMatrix::Zero(2, 2);
  m(0, 1) = m(1, 0) = 0.2;
  EXPECT_THROW(GaussianState(n, m), ModelError);
  ComplexMatrix negative = ComplexMatrix::Zero(1, 1);
  negative(0, 0) = -0.1;
  EXPECT_THROW(GaussianState(negative, ComplexMatrix::Zero(1, 1)), ModelError);
}

TEST(GaussianStateValidation, ModeBounds) {
  const auto s = GaussianState::vacuum(2);
  EXPECT_THROW(s.n(kC, kA), std::out_of_range);
  EXPECT_THROW(apply_beam_splitter(s, kA, kA, 0.5), std::invalid_argument);
  EXPECT_THROW(photon_covariance(s, kB, kB), std::invalid_argument);
}

TEST(TwoModeSqueezer, UnitGainIsIdentity) {
  std::mt19937_64 rng(7);
  const auto s = random_state(rng);
  const auto out = apply_two_mode_squeezer(s, kA, kC, 1.0);
  EXPECT_LE(max_abs(out.n() - s.n()), 1e-15);
  EXPECT_LE(max_abs(out.m() - s.m()), 1e-15);
}

TEST(TwoModeSqueezer, VacuumPairProduction) {
  for (const double gain : {1.0, 1.005, 2.0, 7.5}) {
    const auto out = apply_two_mode_squeezer(GaussianState::vacuum(2), kA, kB, gain);
    EXPECT_NEAR(mean_photon(out, kA), gain - 1.0, 1e-14);
    EXPECT_NEAR(mean_photon(out, kB), gain - 1.0, 1e-14);
  }
}

TEST(TwoModeSqueezer, RejectsBadArguments) {
  const auto s = GaussianState::vacuum(2);
  EXPECT_THROW(apply_two_mode_squeezer(s, kA, kB, 0.999), std::domain_error);
  EXPECT_THROW(apply_two_mode_squeezer(s, kB, kB, 1.5), std::invalid_argument);
}

TEST(TwoModeSqueezer, InverseSignUndoes) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const auto s = random_state(rng);
    const double gain = 1.0 + std::uniform_real_distribution<double>(0.0, 3.0)(rng);
    const auto there = apply_two_mode_squeezer(s, kB, kC, gain);
    const auto back = apply_two_mode_squeezer(there, kB, kC, gain, SqueezeSign::negative);
    EXPECT_LE(max_abs(back.n() - s.n()), 1e-10);
    EXPECT_LE(max_abs(back.m() - s.m()), 1e-10);
  }
}

TEST(Bogoliubov, MatchesQuadratureSymplecticOracle) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    const auto s = random_state(rng);
    const double gain = 1.0 + std::uniform_real_distribution<double>(0.0, 2.0)(rng);
    const double eta = std::uniform_real_distribution<double>(0.0, 1.0)(rng);

    Eigen::MatrixXcd a;
    Eigen::MatrixXcd b;
    oracle::squeezer_maps(3, 2, 0, gain, a, b);
    const auto sq = oracle::symplectic(a, b);
    Eigen::MatrixXd v = oracle::quadrature_covariance(s.n(), s.m());
    v = sq * v * sq.transpose();
    Eigen::MatrixXcd bs = Eigen::MatrixXcd::Identity(3, 3);
    bs(1, 1) = bs(2, 2) = std::sqrt(eta);
    bs(1, 2) = std::sqrt(1.0 - eta);
    bs(2, 1) = -std::sqrt(1.0 - eta);
    const auto sb = oracle::symplectic(bs, Eigen::MatrixXcd::Zero(3, 3));
    v = sb * v * sb.transpose();

    const auto out = apply_beam_splitter(apply_two_mode_squeezer(s, kC, kA, gain), kB, kC, eta);
    ComplexMatrix n;
    ComplexMatrix m;
    oracle::moments_from_quadratures(v, n, m);
    EXPECT_LE(max_abs(out.n() - n), 1e-12);
    EXPECT_LE(max_abs(out.m() - m), 1e-12);
  }
}

TEST(BeamSplitter, UnitTransmissivityIsIdentity) {
  std::mt19937_64 rng(5);
  const auto s = random_state(rng);
  const auto out = apply_beam_splitter(s, kA, kB, 1.0);
  EXPECT_LE(max_abs(out.n() - s.n()), 1e-15);
  EXPECT_LE(max_abs(out.m() - s.m()), 1e-15);
  EXPECT_THROW(apply_beam_splitter(s, kA, kB, 1.01), std::domain_error);
  EXPECT_THROW(apply_beam_splitter(s, kA, kB, -0.01), std::domain_error);
}

TEST(BeamSplitter, PureLossAndThermalAdmixture) {
  for (const double eta : {0.0, 0.3, 0.84, 0.93}) {
    const auto lossy = apply_beam_splitter(thermal_state(20.0).tensor(thermal_state(0.0)), kA, kB, eta);
    EXPECT_NEAR(mean_photon(lossy, kA), eta * 20.0, 1e-12);
    const double dark = 1.0 / (1.0 - 0.03) - 1.0;
    if (eta < 1.0) {
      const auto noisy = apply_beam_splitter(
          thermal_state(20.0).tensor(thermal_state(dark / (1.0 - eta))), kA, kB, eta);
      EXPECT_NEAR(mean_photon(noisy, kA), eta * 20.0 + dark, 1e-12);
    }
  }
}

TEST(BeamSplitter, ConservesPhotonNumber) {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 50; ++trial) {
    const auto s = random_state(rng);
    const double eta = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
    const auto out = apply_beam_splitter(s, kA, kC, eta);
    const double before = mean_photon(s, kA) + mean_photon(s, kC);
    const double after = mean_photon(out, kA) + mean_photon(out, kC);
    EXPECT_NEAR(after, before, 1e-12 * before);
  }
}

TEST(Invariants, SymmetryAndPhysicalityAfterOperationSequences) {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 30; ++trial) {
    auto s = random_state(rng);
    for (int step = 0; step < 6; ++step) {
      const ModeIndex a{static_cast<std::size_t>(step % 3)};
      const ModeIndex b{static_cast<std::size_t>((step + 2) % 3)};
      s = step % 2 == 0 ? apply_two_mode_squeezer(s, a, b, 1.0 + unit(rng))
                        : apply_beam_splitter(s, a, b, unit(rng));
      EXPECT_LE(max_abs(s.n() - s.n().adjoint()), 1e-12);
      EXPECT_LE(max_abs(s.m() - s.m().transpose()), 1e-12);
      const double scale = 1.0 + max_abs(s.n()) + max_abs(s.m());
      EXPECT_GE(s.min_uncertainty_eigenvalue(), -1e-10 * scale);
    }
  }
}

TEST(Wick, ProductStatesHaveNoCovariance) {
  const auto s = thermal_state(3.0).tensor(thermal_state(0.5));
  EXPECT_EQ(photon_covariance(s, kA, kB), 0.0);
}

TEST(Marginal, ReordersAndTraces) {
  std::mt19937_64 rng(19);
  const auto s = random_state(rng);
  const std::array<ModeIndex, 2> keep{kC, kA};
  const auto r = s.marginal(keep);
  EXPECT_EQ(r.n(kA, kB), s.n(kC, kA));
  EXPECT_EQ(r.m(kB, kB), s.m(kA, kA));
  EXPECT_EQ(photon_covariance(r, kA, kB), photon_covariance(s, kC, kA));
}

TEST(PRepresentability, ThermalIsClassicalTmsvIsNot) {
  EXPECT_TRUE(is_p_representable(thermal_state(0.0)));
  EXPECT_TRUE(is_p_representable(thermal_state(20.0)));
  EXPECT_FALSE(is_p_representable(tmsv_state(0.01)));
}

TEST(PRepresentability, AmplitudeCovarianceReproducesNormalMoments) {
  // For a classical state E[|alpha_i|^2] = n_ii and the real covariance is PSD.
  const auto s = thermal_state(2.0).tensor(thermal_state(5.0));
  const auto mixed = apply_beam_splitter(apply_two_mode_squeezer(s, kA, kB, 1.05), kA, kB, 0.4);
  ASSERT_TRUE(is_p_representable(mixed));
  const Eigen::MatrixXd cov = p_function_covariance(mixed);
  EXPECT_NEAR(cov(0, 0) + cov(1, 1), mean_photon(mixed, kA), 1e-12);
  EXPECT_NEAR(cov(2, 2) + cov(3, 3), mean_photon(mixed, kB), 1e-12);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(cov);
  EXPECT_GE(solver.eigenvalues().minCoeff(), -1e-12);
}
