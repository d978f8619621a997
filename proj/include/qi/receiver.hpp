#pragma once

#include "qi/gaussian_state.hpp"
#include "qi/normal_tail.hpp"
#include "qi/scenario.hpp"

#include <cstdint>
#include <optional>
#include <stdexcept>

namespace qi {

/// Largest count a photon counter can report; unbounded when empty.
struct Resolution {
  std::optional<std::uint32_t> max_count;

  static Resolution unbounded() { return {}; }
  static Resolution limited(std::uint32_t k);
  bool is_unbounded() const { return !max_count.has_value(); }
  friend bool operator==(const Resolution&, const Resolution&) = default;
};

struct DetectorModel {
  double eta = 1.0;
  double p_dc = 0.0;
  Resolution resolution;

  void validate() const;
  /// Thermal mean of the dark-count mode, 1/(1 - p_dc) - 1.
  double dark_mean() const;
  bool is_ideal() const { return eta == 1.0 && p_dc == 0.0 && resolution.is_unbounded(); }
};

struct Weights {
  double w1 = 1.0;
  double w2 = 0.0;
};

struct ReceiverConfig {
  double gain = 1.0;
  DetectorModel detector1;
  DetectorModel detector2;
  Weights weights;

  void validate() const;
};

enum class Counter { pc1, pc2 };
enum class Hypothesis { h0, h1 };

/// Mixer output modes: b1 (idler-dominated) first, b2 (return-dominated) second.
inline constexpr ModeIndex kIdlerOutput{0};
inline constexpr ModeIndex kReturnOutput{1};

ModeIndex output_mode(Counter counter);

/// Joint two-counter states under each hypothesis.
struct MixerOutput {
  GaussianState h0;
  GaussianState h1;

  const GaussianState& operator[](Hypothesis h) const { return h == Hypothesis::h0 ? h0 : h1; }
};

/// Thrown when neither hypothesis has spread, so no threshold test exists.
class DegenerateStatistics : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Per-counter moments behind a two-counter statistic.
struct CounterMoments {
  double var1 = 0.0;
  double var2 = 0.0;
  double cov = 0.0;
};

/// Per-mode mean and variance of a decision statistic under H0 and H1.
class DetectionStatistics {
 public:
  DetectionStatistics(double mu_h0, double mu_h1, double var_h0, double var_h1);
  /// Two-counter form; also checks |cov| <= sqrt(var1 var2).
  DetectionStatistics(double mu_h0, double mu_h1, double var_h0, double var_h1,
                      CounterMoments counters_h0, CounterMoments counters_h1);

  double mu(Hypothesis h) const { return h == Hypothesis::h0 ? mu_h0_ : mu_h1_; }
  double var(Hypothesis h) const { return h == Hypothesis::h0 ? var_h0_ : var_h1_; }
  double sigma(Hypothesis h) const;
  const std::optional<CounterMoments>& counters(Hypothesis h) const {
    return h == Hypothesis::h0 ? counters_h0_ : counters_h1_;
  }

 private:
  double mu_h0_;
  double mu_h1_;
  double var_h0_;
  double var_h1_;
  std::optional<CounterMoments> counters_h0_;
  std::optional<CounterMoments> counters_h1_;
};

/// Two-mode squeezer on (idler, return) of both hypotheses.
MixerOutput mixer_output(const HypothesisPair& pair, double gain);

/// Efficiency and dark counts on `mode`: a thermal ancilla of mean N_dc/(1-eta) is
/// mixed in at transmissivity eta and traced out again, so the mode count is
/// unchanged. For eta = 1 the dark-count mean is added directly. Resolution is
/// not applied here.
GaussianState apply_detector(const GaussianState& state, ModeIndex mode, const DetectorModel& det);

/// Mixer output after both counters' loss and dark-count channels.
MixerOutput detected_output(const HypothesisPair& pair, const ReceiverConfig& cfg);

/// Photon-number mean and variance of one counter. Resolution is ignored.
DetectionStatistics individual_statistics(const HypothesisPair& pair, const ReceiverConfig& cfg,
                                          Counter which);

/// Statistic w1 N1 - w2 N2. Resolution is ignored.
DetectionStatistics cpc_statistics(const HypothesisPair& pair, const ReceiverConfig& cfg);

/// Maximum-likelihood threshold on the M-mode sum.
double ml_threshold(const DetectionStatistics& stats, double modes);

/// Gaussian-approximation error probability Q(sqrt(M) |dmu| / (sigma0 + sigma1)).
ErrorProbability error_probability(const DetectionStatistics& stats, double modes);

/// dmu^2 / (2 (sigma0 + sigma1)^2): the per-mode exponent of error_probability.
double effective_exponent(const DetectionStatistics& stats);

/// 10 log10 of effective_exponent over the coherent-state exponent.
double quantum_advantage_db(const DetectionStatistics& stats, const Scenario& sc);

/// Gain maximizing the ideal-detector PC1 exponent.
double optimal_gain(const Scenario& sc);

struct GainReport {
  double gain;
  double n1_h0;
  double n1_h1;
  double n2_h0;
  double n2_h1;
  /// Affine weight line at w1 = G* relative to G* - 1, minus one.
  double weight_line_residual;
  /// Relative deviation of the printed H1 covariance form from the engine value.
  double printed_covariance_deviation;
};

GainReport optimal_gain_report(const Scenario& sc);

/// Affine optimal weighting line, w2 as a function of w1.
Weights optimal_weights(const Scenario& sc, double w1);

/// Proportional variant w2 = (G - 1) w1.
Weights proportional_weights(double gain, double w1);

enum class CovarianceForm { corrected, printed };

/// Closed-form counter covariance of the ideal mixer outputs. Under H1 the
/// printed form drops the sqrt(kappa) factor on the pair-correlation term.
double covariance_closed_form(const Scenario& sc, double gain, Hypothesis h,
                              CovarianceForm form = CovarianceForm::corrected);

}  // namespace qi
