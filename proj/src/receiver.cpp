#include "qi/receiver.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

namespace qi {

namespace {

constexpr double kCauchySchwarzSlack = 1e-9;
constexpr double kGainTolerance = 1e-10;

double require_variance(double variance, const char* label) {
  if (!(variance >= 0.0) || !std::isfinite(variance)) {
    throw std::domain_error(std::string("variance must be finite and >= 0: ") + label);
  }
  return variance;
}

void check_counters(const CounterMoments& c) {
  require_variance(c.var1, "counter 1");
  require_variance(c.var2, "counter 2");
  const double bound = std::sqrt(c.var1 * c.var2);
  if (std::abs(c.cov) > bound * (1.0 + kCauchySchwarzSlack)) {
    throw std::domain_error("counter covariance exceeds the Cauchy-Schwarz bound");
  }
}

double sigma_sum(const DetectionStatistics& stats) {
  const double total = stats.sigma(Hypothesis::h0) + stats.sigma(Hypothesis::h1);
  if (total <= 0.0) {
    throw DegenerateStatistics("both hypotheses have zero variance");
  }
  return total;
}

GaussianState mixer_state(const GaussianState& return_idler, double gain) {
  const auto mixed = apply_two_mode_squeezer(return_idler, kIdlerMode, kReturnMode, gain);
  const std::array<ModeIndex, 2> order{kIdlerMode, kReturnMode};
  return mixed.marginal(order);
}

double pc1_exponent(const HypothesisPair& pair, double gain) {
  ReceiverConfig cfg;
  cfg.gain = gain;
  return effective_exponent(individual_statistics(pair, cfg, Counter::pc1));
}

void require_signal(const Scenario& sc) {
  sc.validate();
  if (sc.n_s <= 0.0 || sc.n_b <= 0.0 || sc.kappa <= 0.0) {
    throw ModelError("optimal gain undefined: n_s, n_b and kappa must all be positive");
  }
}

}  // namespace

Resolution Resolution::limited(std::uint32_t k) {
  if (k < 1) {
    throw std::domain_error("photon-number resolution must be at least 1");
  }
  return {k};
}

void DetectorModel::validate() const {
  if (!(eta >= 0.0 && eta <= 1.0)) {
    throw std::domain_error("detector efficiency must lie in [0, 1]");
  }
  if (!(p_dc >= 0.0 && p_dc < 1.0)) {
    throw std::domain_error("dark-count probability must lie in [0, 1)");
  }
  if (resolution.max_count && *resolution.max_count < 1) {
    throw std::domain_error("photon-number resolution must be at least 1");
  }
}

double DetectorModel::dark_mean() const {
  validate();
  return p_dc / (1.0 - p_dc);
}

void ReceiverConfig::validate() const {
  if (!(gain >= 1.0) || !std::isfinite(gain)) {
    throw std::domain_error("mixer gain must be finite and >= 1");
  }
  if (!(weights.w1 >= 0.0 && weights.w2 >= 0.0)) {
    throw std::domain_error("weights must be nonnegative");
  }
  detector1.validate();
  detector2.validate();
}

ModeIndex output_mode(Counter counter) {
  return counter == Counter::pc1 ? kIdlerOutput : kReturnOutput;
}

DetectionStatistics::DetectionStatistics(double mu_h0, double mu_h1, double var_h0, double var_h1)
    : mu_h0_(mu_h0),
      mu_h1_(mu_h1),
      var_h0_(require_variance(var_h0, "H0")),
      var_h1_(require_variance(var_h1, "H1")) {}

DetectionStatistics::DetectionStatistics(double mu_h0, double mu_h1, double var_h0, double var_h1,
                                         CounterMoments counters_h0, CounterMoments counters_h1)
    : DetectionStatistics(mu_h0, mu_h1, var_h0, var_h1) {
  check_counters(counters_h0);
  check_counters(counters_h1);
  counters_h0_ = counters_h0;
  counters_h1_ = counters_h1;
}

double DetectionStatistics::sigma(Hypothesis h) const { return std::sqrt(var(h)); }

MixerOutput mixer_output(const HypothesisPair& pair, double gain) {
  return {mixer_state(pair.h0, gain), mixer_state(pair.h1, gain)};
}

GaussianState apply_detector(const GaussianState& state, ModeIndex mode, const DetectorModel& det) {
  det.validate();
  state.check_mode(mode);
  const double dark = det.dark_mean();
  if (det.eta == 1.0) {
    if (dark == 0.0) {
      return state;
    }
    ComplexMatrix n = state.n();
    const auto i = static_cast<Eigen::Index>(mode.value);
    n(i, i) += dark;
    return {std::move(n), state.m()};
  }
  const ModeIndex ancilla{state.mode_count()};
  const auto extended = state.tensor(thermal_state(dark / (1.0 - det.eta)));
  const auto mixed = apply_beam_splitter(extended, mode, ancilla, det.eta);
  std::vector<ModeIndex> keep;
  keep.reserve(state.mode_count());
  for (std::size_t i = 0; i < state.mode_count(); ++i) {
    keep.push_back(ModeIndex{i});
  }
  return mixed.marginal(keep);
}

MixerOutput detected_output(const HypothesisPair& pair, const ReceiverConfig& cfg) {
  cfg.validate();
  auto out = mixer_output(pair, cfg.gain);
  auto detect = [&](const GaussianState& s) {
    return apply_detector(apply_detector(s, kIdlerOutput, cfg.detector1), kReturnOutput,
                          cfg.detector2);
  };
  return {detect(out.h0), detect(out.h1)};
}

DetectionStatistics individual_statistics(const HypothesisPair& pair, const ReceiverConfig& cfg,
                                          Counter which) {
  const auto out = detected_output(pair, cfg);
  const ModeIndex mode = output_mode(which);
  return {mean_photon(out.h0, mode), mean_photon(out.h1, mode), photon_variance(out.h0, mode),
          photon_variance(out.h1, mode)};
}

DetectionStatistics cpc_statistics(const HypothesisPair& pair, const ReceiverConfig& cfg) {
  const auto out = detected_output(pair, cfg);
  const double w1 = cfg.weights.w1;
  const double w2 = cfg.weights.w2;
  auto moments = [&](const GaussianState& s) {
    return CounterMoments{photon_variance(s, kIdlerOutput), photon_variance(s, kReturnOutput),
                          photon_covariance(s, kIdlerOutput, kReturnOutput)};
  };
  auto mean = [&](const GaussianState& s) {
    return w1 * mean_photon(s, kIdlerOutput) - w2 * mean_photon(s, kReturnOutput);
  };
  auto variance = [&](const CounterMoments& c) {
    // Clamp roundoff: the exact value is nonnegative for any physical state.
    return std::max(0.0, w1 * w1 * c.var1 + w2 * w2 * c.var2 - 2.0 * w1 * w2 * c.cov);
  };
  const auto c0 = moments(out.h0);
  const auto c1 = moments(out.h1);
  return {mean(out.h0), mean(out.h1), variance(c0), variance(c1), c0, c1};
}

double ml_threshold(const DetectionStatistics& stats, double modes) {
  const double s0 = stats.sigma(Hypothesis::h0);
  const double s1 = stats.sigma(Hypothesis::h1);
  const double total = sigma_sum(stats);
  return modes * (s1 * stats.mu(Hypothesis::h0) + s0 * stats.mu(Hypothesis::h1)) / total;
}

ErrorProbability error_probability(const DetectionStatistics& stats, double modes) {
  if (!(modes >= 0.0) || !std::isfinite(modes)) {
    throw std::domain_error("mode count must be finite and nonnegative");
  }
  const double separation = std::abs(stats.mu(Hypothesis::h1) - stats.mu(Hypothesis::h0));
  if (separation == 0.0) {
    return ErrorProbability::from_log(std::log(0.5));
  }
  return normal_tail(std::sqrt(modes) * separation / sigma_sum(stats));
}

double effective_exponent(const DetectionStatistics& stats) {
  const double separation = stats.mu(Hypothesis::h1) - stats.mu(Hypothesis::h0);
  if (separation == 0.0) {
    return 0.0;
  }
  const double total = sigma_sum(stats);
  return separation * separation / (2.0 * total * total);
}

double quantum_advantage_db(const DetectionStatistics& stats, const Scenario& sc) {
  const double reference = coherent_state_exponent(sc);
  if (reference <= 0.0) {
    throw std::domain_error("coherent-state exponent is zero; advantage undefined");
  }
  return 10.0 * std::log10(effective_exponent(stats) / reference);
}

double optimal_gain(const Scenario& sc) {
  require_signal(sc);
  const auto pair = build_hypotheses(sc);
  auto objective = [&](double excess) { return pc1_exponent(pair, 1.0 + excess); };

  // Golden-section search on the gain excess G - 1.
  const double ratio = (std::sqrt(5.0) - 1.0) / 2.0;
  double lo = 0.0;
  double hi = 10.0 * pair_correlation(sc.n_s) / sc.n_b;
  double x1 = hi - ratio * (hi - lo);
  double x2 = lo + ratio * (hi - lo);
  double f1 = objective(x1);
  double f2 = objective(x2);
  while (hi - lo > kGainTolerance * 0.5 * (hi + lo)) {
    if (f1 < f2) {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + ratio * (hi - lo);
      f2 = objective(x2);
    } else {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - ratio * (hi - lo);
      f1 = objective(x1);
    }
  }
  return 1.0 + 0.5 * (lo + hi);
}

GainReport optimal_gain_report(const Scenario& sc) {
  const double gain = optimal_gain(sc);
  const auto out = mixer_output(build_hypotheses(sc), gain);
  const double excess = gain - 1.0;
  const double line = optimal_weights(sc, gain).w2;
  const double corrected = covariance_closed_form(sc, gain, Hypothesis::h1);
  const double printed = covariance_closed_form(sc, gain, Hypothesis::h1, CovarianceForm::printed);
  return {gain,
          mean_photon(out.h0, kIdlerOutput),
          mean_photon(out.h1, kIdlerOutput),
          mean_photon(out.h0, kReturnOutput),
          mean_photon(out.h1, kReturnOutput),
          line / excess - 1.0,
          printed / corrected - 1.0};
}

Weights optimal_weights(const Scenario& sc, double w1) {
  sc.validate();
  if (!(w1 > 0.0)) {
    throw std::domain_error("w1 must be positive");
  }
  const double ns = sc.n_s;
  const double nb = sc.n_b;
  const double k = sc.kappa;
  const double pair = ns * (ns + 1.0);
  const double denominator = (nb + (k - 1.0) * ns) * (nb + (k + 1.0) * ns + 1.0);
  if (denominator == 0.0) {
    throw std::domain_error("optimal weighting line has a zero denominator");
  }
  const double numerator = std::sqrt(pair * (nb + k * ns) * (nb + k * ns + 1.0)) + pair * w1;
  return {w1, numerator / denominator};
}

Weights proportional_weights(double gain, double w1) {
  if (!(gain >= 1.0)) {
    throw std::domain_error("mixer gain must be >= 1");
  }
  return {w1, (gain - 1.0) * w1};
}

double covariance_closed_form(const Scenario& sc, double gain, Hypothesis h, CovarianceForm form) {
  sc.validate();
  if (!(gain >= 1.0)) {
    throw std::domain_error("mixer gain must be >= 1");
  }
  const double cross_gain = std::sqrt(gain * (gain - 1.0));
  if (h == Hypothesis::h0) {
    const double amplitude = cross_gain * (sc.n_s + sc.n_b + 1.0);
    return amplitude * amplitude;
  }
  const double correlation = pair_correlation(sc.n_s) *
                             (form == CovarianceForm::corrected ? std::sqrt(sc.kappa) : 1.0);
  const double amplitude = (2.0 * gain - 1.0) * correlation +
                           cross_gain * (sc.n_s * (sc.kappa + 1.0) + sc.n_b + 1.0);
  return amplitude * amplitude;
}

}  // namespace qi
