#include "qi/scenario.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <utility>

namespace qi {

namespace {

void require_background(const Scenario& sc) {
  sc.validate();
  if (sc.n_b <= 0.0) {
    throw std::domain_error("error exponent diverges for zero background");
  }
}

void require_modes(double modes) {
  if (!(modes >= 0.0) || !std::isfinite(modes)) {
    throw std::domain_error("mode count must be finite and nonnegative");
  }
}

}  // namespace

void Scenario::validate() const {
  if (!(n_s >= 0.0) || !std::isfinite(n_s)) {
    throw std::domain_error("n_s must be finite and >= 0");
  }
  if (!(n_b >= 0.0) || !std::isfinite(n_b)) {
    throw std::domain_error("n_b must be finite and >= 0");
  }
  if (!(kappa >= 0.0 && kappa <= 1.0)) {
    throw std::domain_error("kappa must lie in [0, 1]");
  }
}

double pair_correlation(double n_s) { return std::sqrt(n_s * (n_s + 1.0)); }

HypothesisPair build_hypotheses(const Scenario& sc) {
  sc.validate();
  ComplexMatrix n0 = ComplexMatrix::Zero(2, 2);
  n0(0, 0) = sc.n_b;
  n0(1, 1) = sc.n_s;

  ComplexMatrix n1 = n0;
  n1(0, 0) = sc.kappa * sc.n_s + sc.n_b;
  ComplexMatrix m1 = ComplexMatrix::Zero(2, 2);
  const double cross = std::sqrt(sc.kappa) * pair_correlation(sc.n_s);
  m1(0, 1) = cross;
  m1(1, 0) = cross;

  return {GaussianState(std::move(n0), ComplexMatrix::Zero(2, 2)),
          GaussianState(std::move(n1), std::move(m1))};
}

double classical_exponent(const Scenario& sc) {
  require_background(sc);
  return sc.kappa * sc.n_s / (4.0 * sc.n_b);
}

double quantum_exponent(const Scenario& sc) {
  require_background(sc);
  return sc.kappa * sc.n_s / sc.n_b;
}

double coherent_state_exponent(const Scenario& sc) {
  sc.validate();
  return sc.kappa * sc.n_s / (2.0 * (2.0 * sc.n_b + 1.0));
}

ErrorProbability qcb_curve(const Scenario& sc, double modes) {
  require_modes(modes);
  return ErrorProbability::from_log(std::log(0.5) - quantum_exponent(sc) * modes);
}

ErrorProbability classical_error_probability(const Scenario& sc, double modes) {
  require_modes(modes);
  // 0.5 erfc(x) = Q(sqrt(2) x)
  const double z = std::sqrt(2.0 * coherent_state_exponent(sc) * modes);
  return normal_tail(z);
}

}  // namespace qi
