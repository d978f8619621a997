#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstddef>
#include <span>
#include <stdexcept>

namespace qi {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;

struct ModeIndex {
  std::size_t value;
  friend bool operator==(ModeIndex, ModeIndex) = default;
};

/// Raised when a state or model would leave its physical domain.
class ModelError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Zero-mean multimode Gaussian bosonic state held through its complex
/// second moments n_ij = <a_i^dag a_j> and m_ij = <a_i a_j>.
///
/// Instances are immutable and always satisfy: n Hermitian, m symmetric
/// (entrywise 1e-12 on construction, exact afterwards), real nonnegative
/// occupations, and the bosonic uncertainty relation
/// <xi xi^dag> = [[I + n^T, m], [m^*, n]] >= -1e-10.
class GaussianState {
 public:
  static constexpr double kSymmetryTolerance = 1e-12;
  static constexpr double kEigenTolerance = -1e-10;

  /// Validates and stores the moments. Throws std::invalid_argument on shape
  /// or symmetry violations and ModelError on unphysical moments.
  GaussianState(ComplexMatrix n, ComplexMatrix m);

  static GaussianState vacuum(std::size_t modes);

  std::size_t mode_count() const { return static_cast<std::size_t>(n_.rows()); }
  const ComplexMatrix& n() const { return n_; }
  const ComplexMatrix& m() const { return m_; }
  Complex n(ModeIndex i, ModeIndex j) const;
  Complex m(ModeIndex i, ModeIndex j) const;

  /// Product state: this state's modes first, then `other`'s.
  GaussianState tensor(const GaussianState& other) const;

  /// Reduced state on `keep`, in that order (partial trace).
  GaussianState marginal(std::span<const ModeIndex> keep) const;

  /// Smallest eigenvalue of <xi xi^dag>; nonnegative for physical states.
  double min_uncertainty_eigenvalue() const;

  void check_mode(ModeIndex mode) const;

 private:
  struct Trusted {};
  GaussianState(ComplexMatrix n, ComplexMatrix m, Trusted);

  friend GaussianState apply_bogoliubov(const GaussianState&, const ComplexMatrix&,
                                        const ComplexMatrix&);

  ComplexMatrix n_;
  ComplexMatrix m_;
};

GaussianState thermal_state(double mean_photons);

/// Two-mode squeezed vacuum with N_S photons per mode and
/// cross-correlation C_q = sqrt(N_S (N_S + 1)).
GaussianState tmsv_state(double n_s);

/// Linear Bogoliubov map b = A a + B a^dag applied to every mode at once.
/// The caller guarantees that (A, B) preserves the commutators.
GaussianState apply_bogoliubov(const GaussianState& state, const ComplexMatrix& a,
                               const ComplexMatrix& b);

enum class SqueezeSign { positive, negative };

/// Two-mode squeezer (parametric mixer):
///   b_a = sqrt(G) a_a ± sqrt(G-1) a_b^dag,  b_b = sqrt(G) a_b ± sqrt(G-1) a_a^dag.
/// SqueezeSign::negative at the same gain undoes SqueezeSign::positive.
GaussianState apply_two_mode_squeezer(const GaussianState& state, ModeIndex mode_a,
                                      ModeIndex mode_b, double gain,
                                      SqueezeSign sign = SqueezeSign::positive);

/// c_a = sqrt(eta) a_a + sqrt(1-eta) a_b,  c_b = -sqrt(1-eta) a_a + sqrt(eta) a_b.
GaussianState apply_beam_splitter(const GaussianState& state, ModeIndex mode_a,
                                  ModeIndex mode_b, double transmissivity);

double mean_photon(const GaussianState& state, ModeIndex mode);

/// Var(N_i) = n_ii (n_ii + 1) + |m_ii|^2.
double photon_variance(const GaussianState& state, ModeIndex mode);

/// Cov(N_a, N_b) = |n_ab|^2 + |m_ab|^2, a != b.
double photon_covariance(const GaussianState& state, ModeIndex mode_a, ModeIndex mode_b);

/// Covariance of the real amplitude vector (Re a_0, Im a_0, Re a_1, ...) of the
/// Glauber-Sudarshan P-function. Only a covariance when is_p_representable().
Eigen::MatrixXd p_function_covariance(const GaussianState& state);

/// True iff the P-function is a (classical) Gaussian, i.e.
/// [[n^T, m], [m^*, n]] >= -1e-10.
bool is_p_representable(const GaussianState& state);

}  // namespace qi
