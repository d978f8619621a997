#pragma once

#include "qi/receiver.hpp"

#include <array>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace qi {

/// The sampling oracle needs a classical P-function; raised otherwise.
class NonClassicalState : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised when the per-mode sampler would exceed the configured work cap.
class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class SamplingMethod {
  automatic,  ///< aggregate path when one applies, otherwise per mode
  per_mode,   ///< amplitude, Poisson, thinning, dark count and clip for every mode
};

struct SamplerSpec {
  /// Mixer outputs before detection (modes b1, b2).
  MixerOutput states;
  std::array<DetectorModel, 2> detectors{};
  std::uint64_t modes_per_trial = 1;
  std::uint64_t trials = 1;
  std::uint64_t seed = 0;
  /// Cap on trials * modes_per_trial for the per-mode sampler.
  std::uint64_t max_mode_samples = 200'000'000;
  SamplingMethod method = SamplingMethod::automatic;
  unsigned threads = 1;

  /// Throws std::domain_error on bad sizes and NonClassicalState if either
  /// hypothesis state has no classical P-function.
  void validate() const;
};

/// Counts of both counters summed over the modes of one trial.
struct CountRecord {
  std::uint64_t n1 = 0;
  std::uint64_t n2 = 0;
  friend bool operator==(const CountRecord&, const CountRecord&) = default;
};

/// Which counters a caller consumes; unused ones are left at zero.
struct CounterSelection {
  bool pc1 = true;
  bool pc2 = true;
};

std::vector<CountRecord> sample_counts(const SamplerSpec& spec, Hypothesis hypothesis,
                                       CounterSelection counters = {});

/// Decide H1 when the weighted total lies strictly on the H1 side of the threshold.
struct DecisionRule {
  Weights weights;
  double threshold = 0.0;
  bool h1_above = true;

  double statistic(const CountRecord& record) const;
  Hypothesis decide(const CountRecord& record) const;
};

/// Single-counter weights (1, 0) or (0, 1).
Weights counter_weights(Counter which);

/// Rule from analytic per-mode statistics and the ML threshold.
DecisionRule analytic_rule(const DetectionStatistics& stats, Weights weights, std::uint64_t modes);

/// Rule from per-mode statistics estimated on a separate calibration run.
DecisionRule calibrated_rule(const SamplerSpec& spec, Weights weights,
                             std::uint64_t calibration_trials);

struct EmpiricalResult {
  double p_e_hat = 0.0;
  double std_err = 0.0;
  std::uint64_t trials = 0;
};

/// Trial t is drawn under hypothesis t mod 2 and classified with `rule`.
EmpiricalResult empirical_error_probability(const SamplerSpec& spec, const DecisionRule& rule);

}  // namespace qi
