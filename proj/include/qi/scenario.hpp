#pragma once

#include "qi/gaussian_state.hpp"
#include "qi/normal_tail.hpp"

#include <cstdint>

namespace qi {

/// Physical operating point of the illumination experiment.
struct Scenario {
  double n_s = 0.0;    ///< mean signal photons per mode
  double n_b = 0.0;    ///< mean background photons per mode
  double kappa = 0.0;  ///< round-trip transmissivity

  /// Throws std::domain_error unless n_s >= 0, n_b >= 0 and kappa in [0, 1].
  void validate() const;
};

inline constexpr ModeIndex kReturnMode{0};
inline constexpr ModeIndex kIdlerMode{1};

/// Return/idler states under the two hypotheses (modes: return, idler).
struct HypothesisPair {
  GaussianState h0;
  GaussianState h1;
};

HypothesisPair build_hypotheses(const Scenario& sc);

/// Idler/signal cross-correlation sqrt(N_S (N_S + 1)).
double pair_correlation(double n_s);

/// kappa N_S / (4 N_B).
double classical_exponent(const Scenario& sc);

/// kappa N_S / N_B.
double quantum_exponent(const Scenario& sc);

/// Exponent of the coherent-state homodyne reference, kappa N_S / (2 (2 N_B + 1)).
double coherent_state_exponent(const Scenario& sc);

/// 0.5 exp(-R_Q M).
ErrorProbability qcb_curve(const Scenario& sc, double modes);

/// 0.5 erfc(sqrt(kappa M N_S / (2 (2 N_B + 1)))).
ErrorProbability classical_error_probability(const Scenario& sc, double modes);

}  // namespace qi
