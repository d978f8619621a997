#include "qi/receiver.hpp"

#include "oracle.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace qi;

namespace {

const Scenario kLow{0.01, 20.0, 0.01};
const Scenario kWide{0.01, 1000.0, 0.01};

// High-precision (40-digit) golden-section maximization of the PC1 exponent,
// computed offline from the operator expansion of the mixer photon numbers.
constexpr double kGainExcessLow = 5.00905967402046e-3;
constexpr double kGainExcessMid = 1.00840578004318e-3;
constexpr double kGainExcessWide = 1.00694102947087e-4;
constexpr double kExponentLow = 1.9660533818372e-6;
constexpr double kExponentWide = 4.12848247592893e-8;
constexpr double kThresholdLow = 115951.228437583;  // PC1, M = 1e6
constexpr double kErrorLow = 0.0236862812113732;    // PC1, M = 1e6
constexpr double kAdvantageLow = 2.07409157906;
constexpr double kAdvantageMid = 2.15644570764;
constexpr double kAdvantageWide = 2.18067529797;

ReceiverConfig ideal(double gain) {
  ReceiverConfig cfg;
  cfg.gain = gain;
  return cfg;
}

double rel(double a, double b) { return std::abs(a / b - 1.0); }

}  // namespace

TEST(NormalTail, MatchesErfcAndContinuesSmoothly) {
  EXPECT_NEAR(normal_tail(0.0).value, 0.5, 1e-16);
  EXPECT_NEAR(normal_tail(1.0).value, 0.15865525393145705, 1e-16);
  EXPECT_NEAR(normal_tail(5.0).value, 2.866515718791939e-7, 1e-21);
  // 40-digit references on both sides of the switch to the asymptotic series.
  EXPECT_NEAR(log_normal_tail(29.99), -454.0209613044681, 1e-9);
  EXPECT_NEAR(log_normal_tail(30.0), -454.3212439563432, 1e-9);
  EXPECT_NEAR(log_normal_tail(40.0), -804.6084420137538, 1e-9);
  const auto tiny = normal_tail(40.0);
  EXPECT_EQ(tiny.value, 0.0);
  EXPECT_NEAR(tiny.log10_value, -804.6084420137538 / std::numbers::ln10, 1e-9);
}

TEST(MixerOutput, UnitGainPassesInputsThrough) {
  const auto out = mixer_output(build_hypotheses(kLow), 1.0);
  EXPECT_DOUBLE_EQ(mean_photon(out.h0, kIdlerOutput), 0.01);
  EXPECT_DOUBLE_EQ(mean_photon(out.h0, kReturnOutput), 20.0);
  EXPECT_THROW(mixer_output(build_hypotheses(kLow), 0.5), std::domain_error);
}

TEST(MixerOutput, MeansMatchOperatorExpansion) {
  std::mt19937_64 rng(37);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int i = 0; i < 100; ++i) {
    const Scenario sc{unit(rng), 1.0 + 1999.0 * unit(rng), 0.1 * unit(rng)};
    const double gain = 1.0 + 0.01 * unit(rng);
    const auto out = mixer_output(build_hypotheses(sc), gain);
    for (const bool target : {false, true}) {
      const auto expect = oracle::mixer_means(sc.n_s, sc.n_b, sc.kappa, gain, target);
      const auto& s = target ? out.h1 : out.h0;
      EXPECT_LE(rel(mean_photon(s, kIdlerOutput), expect.n1), 1e-12);
      EXPECT_LE(rel(mean_photon(s, kReturnOutput), expect.n2), 1e-12);
    }
  }
}

TEST(MixerOutput, CovarianceClosedForms) {
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int i = 0; i < 100; ++i) {
    const Scenario sc{unit(rng), 1.0 + 1999.0 * unit(rng), 0.1 * unit(rng)};
    const double gain = 1.0 + 0.01 * unit(rng);
    const auto out = mixer_output(build_hypotheses(sc), gain);
    const double cov0 = photon_covariance(out.h0, kIdlerOutput, kReturnOutput);
    const double cov1 = photon_covariance(out.h1, kIdlerOutput, kReturnOutput);
    EXPECT_LE(rel(cov0, covariance_closed_form(sc, gain, Hypothesis::h0)), 1e-12);
    EXPECT_LE(rel(cov1, covariance_closed_form(sc, gain, Hypothesis::h1)), 1e-12);
    const double pair = oracle::mixer_pair_amplitude(sc.n_s, sc.n_b, sc.kappa, gain, true);
    EXPECT_LE(rel(cov1, pair * pair), 1e-12);
    // The printed form drops sqrt(kappa) and so overstates the covariance.
    EXPECT_GE(covariance_closed_form(sc, gain, Hypothesis::h1, CovarianceForm::printed), cov1);
  }
}

TEST(MixerOutput, ReferencePhotonNumbers) {
  const auto out = mixer_output(build_hypotheses(kLow), optimal_gain(kLow));
  EXPECT_NEAR(mean_photon(out.h0, kReturnOutput), 20.104, 0.005);
  EXPECT_NEAR(mean_photon(out.h1, kReturnOutput), 20.105, 0.005);
  EXPECT_NEAR(mean_photon(out.h0, kIdlerOutput), 0.11, 0.01);
  EXPECT_NEAR(mean_photon(out.h1, kIdlerOutput), 0.11, 0.01);
  EXPECT_TRUE(is_p_representable(out.h0));
  EXPECT_TRUE(is_p_representable(out.h1));
}

TEST(ApplyDetector, IdealIsIdentity) {
  const auto out = mixer_output(build_hypotheses(kLow), 1.005);
  const auto same = apply_detector(out.h1, kIdlerOutput, DetectorModel{});
  EXPECT_LE((same.n() - out.h1.n()).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_LE((same.m() - out.h1.m()).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(ApplyDetector, DarkCountComposition) {
  EXPECT_NEAR(mean_photon(apply_detector(thermal_state(0.11), ModeIndex{0}, {0.93, 0.03, {}}),
                          ModeIndex{0}),
              0.93 * 0.11 + (1.0 / 0.97 - 1.0), 1e-12);
  EXPECT_NEAR(mean_photon(apply_detector(thermal_state(0.11), ModeIndex{0}, {0.84, 0.014, {}}),
                          ModeIndex{0}),
              0.1066, 1e-4);
  std::mt19937_64 rng(43);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int i = 0; i < 200; ++i) {
    const double n = 50.0 * unit(rng);
    const double eta = i % 10 == 0 ? 1.0 : unit(rng);
    const double p = 0.5 * unit(rng);
    const auto s = apply_detector(thermal_state(n), ModeIndex{0}, {eta, p, {}});
    EXPECT_NEAR(mean_photon(s, ModeIndex{0}), eta * n + (1.0 / (1.0 - p) - 1.0), 1e-12 * (1.0 + n));
    EXPECT_EQ(s.mode_count(), 1u);
  }
  EXPECT_THROW(apply_detector(thermal_state(1.0), ModeIndex{0}, {0.9, 1.0, {}}), std::domain_error);
  EXPECT_THROW(apply_detector(thermal_state(1.0), ModeIndex{0}, {1.1, 0.0, {}}), std::domain_error);
}

TEST(ApplyDetector, IdealStatisticsUnchanged) {
  const auto pair = build_hypotheses(kLow);
  ReceiverConfig cfg = ideal(1.004);
  cfg.weights = {1.004, 0.004};
  const auto plain = cpc_statistics(pair, cfg);
  cfg.detector1 = DetectorModel{1.0, 0.0, {}};
  const auto again = cpc_statistics(pair, cfg);
  EXPECT_NEAR(plain.var(Hypothesis::h1), again.var(Hypothesis::h1), 1e-15);
}

TEST(IndividualStatistics, ExpectedStructure) {
  const auto pair = build_hypotheses(kLow);
  const auto cfg = ideal(optimal_gain(kLow));
  const auto pc1 = individual_statistics(pair, cfg, Counter::pc1);
  EXPECT_LT(pc1.mu(Hypothesis::h0), pc1.mu(Hypothesis::h1));
  for (const auto h : {Hypothesis::h0, Hypothesis::h1}) {
    const double n1 = pc1.mu(h);
    EXPECT_DOUBLE_EQ(pc1.var(h), n1 * (n1 + 1.0));
  }
  const auto pc2 = individual_statistics(pair, cfg, Counter::pc2);
  EXPECT_NEAR(pc2.var(Hypothesis::h0) / std::pow(pc2.mu(Hypothesis::h0), 2), 1.0, 0.06);
  const auto blind = individual_statistics(build_hypotheses({0.01, 20.0, 0.0}), cfg, Counter::pc1);
  EXPECT_EQ(blind.mu(Hypothesis::h0), blind.mu(Hypothesis::h1));
}

TEST(CpcStatistics, ZeroWeightsAndH0Covariance) {
  const auto pair = build_hypotheses(kLow);
  ReceiverConfig cfg = ideal(1.003);
  cfg.weights = {0.0, 0.0};
  const auto zero = cpc_statistics(pair, cfg);
  EXPECT_EQ(zero.mu(Hypothesis::h0), 0.0);
  EXPECT_EQ(zero.var(Hypothesis::h1), 0.0);
  const auto& counters = zero.counters(Hypothesis::h0);
  ASSERT_TRUE(counters.has_value());
  EXPECT_LE(rel(counters->cov, covariance_closed_form(kLow, 1.003, Hypothesis::h0)), 1e-12);
}

TEST(CpcStatistics, BeatsIndividualDetectionOnTheGainLine) {
  for (const auto& sc : {kLow, kWide}) {
    const double gain = optimal_gain(sc);
    const auto pair = build_hypotheses(sc);
    ReceiverConfig cfg = ideal(gain);
    cfg.weights = {gain, gain - 1.0};
    const auto cpc = cpc_statistics(pair, cfg);
    const auto pc1 = individual_statistics(pair, cfg, Counter::pc1);
    EXPECT_GT(effective_exponent(cpc), effective_exponent(pc1));
    for (const double m : {1e5, 1e6, 1e7}) {
      EXPECT_LE(error_probability(cpc, m).value, error_probability(pc1, m).value);
    }
  }
}

TEST(DetectionStatistics, RejectsInconsistentCounters) {
  EXPECT_THROW(DetectionStatistics(0.0, 1.0, -1.0, 1.0), std::domain_error);
  EXPECT_THROW(DetectionStatistics(0.0, 1.0, 1.0, 1.0, {1.0, 1.0, 1.5}, {1.0, 1.0, 0.0}),
               std::domain_error);
  EXPECT_NO_THROW(DetectionStatistics(0.0, 1.0, 1.0, 1.0, {1.0, 4.0, 2.0}, {1.0, 1.0, -1.0}));
}

TEST(MlThreshold, SymmetricCases) {
  EXPECT_DOUBLE_EQ(ml_threshold(DetectionStatistics(2.0, 2.0, 1.0, 9.0), 10.0), 20.0);
  EXPECT_DOUBLE_EQ(ml_threshold(DetectionStatistics(1.0, 3.0, 4.0, 4.0), 10.0), 20.0);
  EXPECT_THROW(ml_threshold(DetectionStatistics(1.0, 3.0, 0.0, 0.0), 10.0), DegenerateStatistics);
}

TEST(MlThreshold, ReferencePointRegression) {
  const auto stats =
      individual_statistics(build_hypotheses(kLow), ideal(optimal_gain(kLow)), Counter::pc1);
  // The optimum is flat, so the searched gain carries ~1e-7 relative error.
  EXPECT_LE(rel(ml_threshold(stats, 1e6), kThresholdLow), 2e-6);
  EXPECT_LE(rel(error_probability(stats, 1e6).value, kErrorLow), 1e-6);
}

TEST(ErrorProbability, BasicProperties) {
  EXPECT_DOUBLE_EQ(error_probability(DetectionStatistics(1.0, 1.0, 1.0, 2.0), 1e6).value, 0.5);
  const DetectionStatistics stats(0.1, 0.101, 0.11, 0.111);
  double previous = 0.5;
  for (const double m : {1e2, 1e3, 1e4, 1e5, 1e6, 1e7}) {
    const double pe = error_probability(stats, m).value;
    EXPECT_LT(pe, previous);
    previous = pe;
  }
  EXPECT_THROW(error_probability(DetectionStatistics(0.0, 1.0, 0.0, 0.0), 10.0),
               DegenerateStatistics);
}

TEST(ErrorProbability, ExponentIsTheLargeMRate) {
  const DetectionStatistics stats(0.1, 0.101, 0.11, 0.111);
  const double rate = effective_exponent(stats);
  const double m = 1e11;
  const auto pe = error_probability(stats, m);
  const double estimate = -pe.log10_value * std::numbers::ln10 / m;
  EXPECT_LE(rel(estimate, rate), 1e-3);
}

TEST(ErrorProbability, WeightScalingInvariance) {
  const auto pair = build_hypotheses(kWide);
  ReceiverConfig cfg = ideal(optimal_gain(kWide));
  cfg.weights = {1.2, 3e-4};
  const auto base = cpc_statistics(pair, cfg);
  for (const double c : {0.01, 3.0, 1e4}) {
    cfg.weights = {1.2 * c, 3e-4 * c};
    const auto scaled = cpc_statistics(pair, cfg);
    EXPECT_LE(rel(effective_exponent(scaled), effective_exponent(base)), 1e-12);
    EXPECT_LE(rel(error_probability(scaled, 3e7).value, error_probability(base, 3e7).value), 1e-10);
  }
}

TEST(OptimalGain, FrozenOptimaAndOrdering) {
  const double low = optimal_gain(kLow);
  const double mid = optimal_gain({0.01, 100.0, 0.01});
  const double wide = optimal_gain(kWide);
  EXPECT_LE(rel(low - 1.0, kGainExcessLow), 1e-6);
  EXPECT_LE(rel(mid - 1.0, kGainExcessMid), 1e-6);
  EXPECT_LE(rel(wide - 1.0, kGainExcessWide), 1e-6);
  EXPECT_LT(wide, mid);
  EXPECT_LT(mid, low);
  EXPECT_THROW(optimal_gain({0.01, 20.0, 0.0}), ModelError);
}

TEST(OptimalGain, LocalMaximumCertificate) {
  for (const auto& sc : {kLow, kWide}) {
    const auto pair = build_hypotheses(sc);
    const double gain = optimal_gain(sc);
    auto exponent = [&](double g) {
      return effective_exponent(individual_statistics(pair, ideal(g), Counter::pc1));
    };
    const double best = exponent(gain);
    EXPECT_GE(best, exponent(1.0 + 0.9 * (gain - 1.0)));
    EXPECT_GE(best, exponent(1.0 + 1.1 * (gain - 1.0)));
    EXPECT_GE(best, exponent(1.1 * gain));
  }
  const auto pair = build_hypotheses(kLow);
  EXPECT_LE(rel(effective_exponent(individual_statistics(pair, ideal(optimal_gain(kLow)),
                                                          Counter::pc1)),
                kExponentLow),
            1e-9);
  EXPECT_LE(rel(effective_exponent(individual_statistics(build_hypotheses(kWide),
                                                          ideal(optimal_gain(kWide)),
                                                          Counter::pc1)),
                kExponentWide),
            1e-9);
}

TEST(OptimalGainReport, PhotonNumbersAndResiduals) {
  const auto report = optimal_gain_report(kLow);
  // Photon numbers move by (N_B + 1) times the gain error of the flat optimum.
  EXPECT_NEAR(report.n1_h0, 0.115240343751, 2e-7);
  EXPECT_NEAR(report.n1_h1, 0.116666957115, 2e-7);
  EXPECT_NEAR(report.n2_h0, 20.1052403438, 2e-7);
  EXPECT_NEAR(report.n2_h1, 20.1067669571, 2e-7);
  EXPECT_NEAR(report.weight_line_residual, -0.01616, 5e-5);
  EXPECT_GT(report.printed_covariance_deviation, 0.0);
  const auto wide = optimal_gain_report(kWide);
  EXPECT_NEAR(wide.n1_h0, 0.110795803991, 2e-7);
  EXPECT_NEAR(wide.n2_h1, 1000.10109752, 2e-7);
  EXPECT_NEAR(wide.weight_line_residual, -0.00234, 5e-5);
}

TEST(QuantumAdvantage, FrozenValues) {
  const Scenario mid{0.01, 100.0, 0.01};
  for (const auto& [sc, expect] : {std::pair{kLow, kAdvantageLow}, std::pair{mid, kAdvantageMid},
                                   std::pair{kWide, kAdvantageWide}}) {
    const auto stats =
        individual_statistics(build_hypotheses(sc), ideal(optimal_gain(sc)), Counter::pc1);
    EXPECT_NEAR(quantum_advantage_db(stats, sc), expect, 1e-8);
  }
}

TEST(QuantumAdvantage, ReferencePointAndDarkCounts) {
  const double rate = coherent_state_exponent(kLow);
  // dmu^2 / (2 (2 sigma)^2) = rate for sigma = 1.
  const DetectionStatistics at_reference(0.0, std::sqrt(8.0 * rate), 1.0, 1.0);
  EXPECT_NEAR(quantum_advantage_db(at_reference, kLow), 0.0, 1e-12);
  ReceiverConfig cfg = ideal(optimal_gain(kWide));
  cfg.detector1.p_dc = 0.3;
  const auto noisy = individual_statistics(build_hypotheses(kWide), cfg, Counter::pc1);
  EXPECT_LT(quantum_advantage_db(noisy, kWide), 0.0);
  EXPECT_THROW(quantum_advantage_db(noisy, {0.01, 1000.0, 0.0}), std::domain_error);
}

TEST(OptimalWeights, AffineLineAndProportionalVariant) {
  EXPECT_EQ(optimal_weights({0.0, 20.0, 0.01}, 1.3).w2, 0.0);
  const double gain = optimal_gain(kWide);
  const auto affine = optimal_weights(kWide, gain);
  const auto proportional = proportional_weights(gain, gain);
  EXPECT_NEAR(affine.w2, 1.00459e-4, 2e-9);
  EXPECT_NEAR(proportional.w2, gain * (gain - 1.0), 1e-18);
  EXPECT_THROW(optimal_weights(kWide, 0.0), std::domain_error);
  // N_B + (kappa - 1) N_S = 0 zeroes the denominator.
  EXPECT_THROW(optimal_weights({1.0, 0.5, 0.5}, 1.0), std::domain_error);
}

TEST(OptimalWeights, NearOptimalAlongTheLine) {
  const auto pair = build_hypotheses(kWide);
  const double gain = optimal_gain(kWide);
  ReceiverConfig cfg = ideal(gain);
  auto advantage = [&](Weights w) {
    cfg.weights = w;
    return quantum_advantage_db(cpc_statistics(pair, cfg), kWide);
  };
  const double optimum = advantage({gain, gain - 1.0});
  for (const double scale : {0.9, 1.0, 1.1}) {
    EXPECT_NEAR(advantage(optimal_weights(kWide, scale * gain)), optimum, 0.2);
  }
  // The proportional variant is a strict local maximum in w2 at w1 = G*.
  const auto prop = proportional_weights(gain, gain);
  const double at = advantage(prop);
  EXPECT_GE(at, advantage({prop.w1, prop.w2 * (1.0 + 1e-3)}));
  EXPECT_GE(at, advantage({prop.w1, prop.w2 * (1.0 - 1e-3)}));
  // The affine line sits within 1e-3 dB of that maximum.
  EXPECT_NEAR(advantage(optimal_weights(kWide, gain)), at, 1e-3);
}

TEST(OptimalWeights, GainMisestimateDestroysAdvantage) {
  const auto pair = build_hypotheses(kWide);
  const double gain = optimal_gain(kWide);
  ReceiverConfig cfg = ideal(gain);
  const double shifted = 1.0005 * gain;
  cfg.weights = {shifted, shifted - 1.0};
  EXPECT_LT(quantum_advantage_db(cpc_statistics(pair, cfg), kWide), 0.0);
}
