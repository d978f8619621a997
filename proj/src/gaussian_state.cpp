#include "qi/gaussian_state.hpp"

#include <cmath>
#include <string>
#include <utility>
#include <vector>

namespace qi {

namespace {

ComplexMatrix uncertainty_matrix(const ComplexMatrix& n, const ComplexMatrix& m) {
  const auto modes = n.rows();
  ComplexMatrix gram(2 * modes, 2 * modes);
  gram.topLeftCorner(modes, modes) = ComplexMatrix::Identity(modes, modes) + n.transpose();
  gram.topRightCorner(modes, modes) = m;
  gram.bottomLeftCorner(modes, modes) = m.conjugate();
  gram.bottomRightCorner(modes, modes) = n;
  return gram;
}

double min_eigenvalue(const ComplexMatrix& hermitian) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(hermitian, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

void require_distinct(const GaussianState& state, ModeIndex a, ModeIndex b) {
  state.check_mode(a);
  state.check_mode(b);
  if (a == b) {
    throw std::invalid_argument("two-mode operation needs distinct modes");
  }
}

}  // namespace

GaussianState::GaussianState(ComplexMatrix n, ComplexMatrix m) : n_(std::move(n)), m_(std::move(m)) {
  if (n_.rows() == 0 || n_.rows() != n_.cols() || m_.rows() != n_.rows() ||
      m_.cols() != n_.cols()) {
    throw std::invalid_argument("moment matrices must be square, nonempty and of equal size");
  }
  for (Eigen::Index i = 0; i < n_.rows(); ++i) {
    for (Eigen::Index j = 0; j < n_.cols(); ++j) {
      if (std::abs(n_(i, j) - std::conj(n_(j, i))) > kSymmetryTolerance) {
        throw std::invalid_argument("n matrix is not Hermitian");
      }
      if (std::abs(m_(i, j) - m_(j, i)) > kSymmetryTolerance) {
        throw std::invalid_argument("m matrix is not symmetric");
      }
    }
    if (n_(i, i).real() < 0.0) {
      throw ModelError("negative mean photon number on mode " + std::to_string(i));
    }
  }
  // Store the exactly symmetric projection.
  n_ = (0.5 * (n_ + n_.adjoint())).eval();
  m_ = (0.5 * (m_ + m_.transpose())).eval();
  if (min_uncertainty_eigenvalue() < kEigenTolerance) {
    throw ModelError("moments violate the bosonic uncertainty relation");
  }
}

GaussianState::GaussianState(ComplexMatrix n, ComplexMatrix m, Trusted)
    : n_(0.5 * (n + n.adjoint())), m_(0.5 * (m + m.transpose())) {}

GaussianState GaussianState::vacuum(std::size_t modes) {
  const auto size = static_cast<Eigen::Index>(modes);
  return {ComplexMatrix::Zero(size, size), ComplexMatrix::Zero(size, size)};
}

Complex GaussianState::n(ModeIndex i, ModeIndex j) const {
  check_mode(i);
  check_mode(j);
  return n_(static_cast<Eigen::Index>(i.value), static_cast<Eigen::Index>(j.value));
}

Complex GaussianState::m(ModeIndex i, ModeIndex j) const {
  check_mode(i);
  check_mode(j);
  return m_(static_cast<Eigen::Index>(i.value), static_cast<Eigen::Index>(j.value));
}

void GaussianState::check_mode(ModeIndex mode) const {
  if (mode.value >= mode_count()) {
    throw std::out_of_range("mode index " + std::to_string(mode.value) + " outside a " +
                            std::to_string(mode_count()) + "-mode state");
  }
}

GaussianState GaussianState::tensor(const GaussianState& other) const {
  const auto a = n_.rows();
  const auto b = other.n_.rows();
  ComplexMatrix n = ComplexMatrix::Zero(a + b, a + b);
  ComplexMatrix m = ComplexMatrix::Zero(a + b, a + b);
  n.topLeftCorner(a, a) = n_;
  n.bottomRightCorner(b, b) = other.n_;
  m.topLeftCorner(a, a) = m_;
  m.bottomRightCorner(b, b) = other.m_;
  return {std::move(n), std::move(m), Trusted{}};
}

GaussianState GaussianState::marginal(std::span<const ModeIndex> keep) const {
  if (keep.empty()) {
    throw std::invalid_argument("marginal needs at least one mode");
  }
  const auto size = static_cast<Eigen::Index>(keep.size());
  ComplexMatrix n(size, size);
  ComplexMatrix m(size, size);
  for (Eigen::Index i = 0; i < size; ++i) {
    check_mode(keep[i]);
    for (Eigen::Index j = 0; j < size; ++j) {
      const auto src_i = static_cast<Eigen::Index>(keep[i].value);
      const auto src_j = static_cast<Eigen::Index>(keep[j].value);
      n(i, j) = n_(src_i, src_j);
      m(i, j) = m_(src_i, src_j);
    }
  }
  return {std::move(n), std::move(m), Trusted{}};
}

double GaussianState::min_uncertainty_eigenvalue() const {
  return min_eigenvalue(uncertainty_matrix(n_, m_));
}

GaussianState thermal_state(double mean_photons) {
  if (!(mean_photons >= 0.0) || !std::isfinite(mean_photons)) {
    throw std::domain_error("thermal_state: mean photon number must be finite and >= 0");
  }
  ComplexMatrix n(1, 1);
  n(0, 0) = mean_photons;
  return {std::move(n), ComplexMatrix::Zero(1, 1)};
}

GaussianState tmsv_state(double n_s) {
  if (!(n_s >= 0.0) || !std::isfinite(n_s)) {
    throw std::domain_error("tmsv_state: mean photon number must be finite and >= 0");
  }
  const double correlation = std::sqrt(n_s * (n_s + 1.0));
  ComplexMatrix n = ComplexMatrix::Zero(2, 2);
  ComplexMatrix m = ComplexMatrix::Zero(2, 2);
  n(0, 0) = n_s;
  n(1, 1) = n_s;
  m(0, 1) = correlation;
  m(1, 0) = correlation;
  return {std::move(n), std::move(m)};
}

GaussianState apply_bogoliubov(const GaussianState& state, const ComplexMatrix& a,
                               const ComplexMatrix& b) {
  const auto modes = static_cast<Eigen::Index>(state.mode_count());
  if (a.rows() != modes || a.cols() != modes || b.rows() != modes || b.cols() != modes) {
    throw std::invalid_argument("Bogoliubov matrices do not match the mode count");
  }
  const ComplexMatrix& n = state.n_;
  const ComplexMatrix& m = state.m_;
  const ComplexMatrix anti_normal = ComplexMatrix::Identity(modes, modes) + n.transpose();
  const ComplexMatrix a_conj = a.conjugate();
  const ComplexMatrix b_conj = b.conjugate();
  const ComplexMatrix m_conj = m.conjugate();

  ComplexMatrix n_out = a_conj * n * a.transpose() + a_conj * m_conj * b.transpose() +
                        b_conj * m * a.transpose() + b_conj * anti_normal * b.transpose();
  ComplexMatrix m_out = a * m * a.transpose() + a * anti_normal * b.transpose() +
                        b * n * a.transpose() + b * m_conj * b.transpose();
  return {std::move(n_out), std::move(m_out), GaussianState::Trusted{}};
}

GaussianState apply_two_mode_squeezer(const GaussianState& state, ModeIndex mode_a,
                                      ModeIndex mode_b, double gain, SqueezeSign sign) {
  require_distinct(state, mode_a, mode_b);
  if (!(gain >= 1.0) || !std::isfinite(gain)) {
    throw std::domain_error("two-mode squeezer gain must be finite and >= 1");
  }
  const auto modes = static_cast<Eigen::Index>(state.mode_count());
  const auto ia = static_cast<Eigen::Index>(mode_a.value);
  const auto ib = static_cast<Eigen::Index>(mode_b.value);
  const double amplitude = std::sqrt(gain);
  const double conjugate = (sign == SqueezeSign::positive ? 1.0 : -1.0) * std::sqrt(gain - 1.0);

  ComplexMatrix a = ComplexMatrix::Identity(modes, modes);
  ComplexMatrix b = ComplexMatrix::Zero(modes, modes);
  a(ia, ia) = amplitude;
  a(ib, ib) = amplitude;
  b(ia, ib) = conjugate;
  b(ib, ia) = conjugate;
  return apply_bogoliubov(state, a, b);
}

GaussianState apply_beam_splitter(const GaussianState& state, ModeIndex mode_a, ModeIndex mode_b,
                                  double transmissivity) {
  require_distinct(state, mode_a, mode_b);
  if (!(transmissivity >= 0.0 && transmissivity <= 1.0)) {
    throw std::domain_error("beam splitter transmissivity must lie in [0, 1]");
  }
  const auto modes = static_cast<Eigen::Index>(state.mode_count());
  const auto ia = static_cast<Eigen::Index>(mode_a.value);
  const auto ib = static_cast<Eigen::Index>(mode_b.value);
  const double t = std::sqrt(transmissivity);
  const double r = std::sqrt(1.0 - transmissivity);

  ComplexMatrix a = ComplexMatrix::Identity(modes, modes);
  a(ia, ia) = t;
  a(ia, ib) = r;
  a(ib, ia) = -r;
  a(ib, ib) = t;
  return apply_bogoliubov(state, a, ComplexMatrix::Zero(modes, modes));
}

double mean_photon(const GaussianState& state, ModeIndex mode) { return state.n(mode, mode).real(); }

double photon_variance(const GaussianState& state, ModeIndex mode) {
  const double occupation = state.n(mode, mode).real();
  return occupation * (occupation + 1.0) + std::norm(state.m(mode, mode));
}

double photon_covariance(const GaussianState& state, ModeIndex mode_a, ModeIndex mode_b) {
  require_distinct(state, mode_a, mode_b);
  return std::norm(state.n(mode_a, mode_b)) + std::norm(state.m(mode_a, mode_b));
}

Eigen::MatrixXd p_function_covariance(const GaussianState& state) {
  const auto modes = static_cast<Eigen::Index>(state.mode_count());
  const ComplexMatrix& n = state.n();
  const ComplexMatrix& m = state.m();
  Eigen::MatrixXd cov(2 * modes, 2 * modes);
  for (Eigen::Index i = 0; i < modes; ++i) {
    for (Eigen::Index j = 0; j < modes; ++j) {
      // E[a_i a_j^*] = n_ji and E[a_i a_j] = m_ij for the P-function amplitudes.
      const Complex nji = n(j, i);
      const Complex mij = m(i, j);
      cov(2 * i, 2 * j) = 0.5 * (nji.real() + mij.real());
      cov(2 * i + 1, 2 * j + 1) = 0.5 * (nji.real() - mij.real());
      cov(2 * i, 2 * j + 1) = 0.5 * (mij.imag() - nji.imag());
      cov(2 * i + 1, 2 * j) = 0.5 * (mij.imag() + nji.imag());
    }
  }
  return cov;
}

bool is_p_representable(const GaussianState& state) {
  const auto modes = static_cast<Eigen::Index>(state.mode_count());
  ComplexMatrix normal(2 * modes, 2 * modes);
  normal.topLeftCorner(modes, modes) = state.n().transpose();
  normal.topRightCorner(modes, modes) = state.m();
  normal.bottomLeftCorner(modes, modes) = state.m().conjugate();
  normal.bottomRightCorner(modes, modes) = state.n();
  return min_eigenvalue(normal) >= GaussianState::kEigenTolerance;
}

}  // namespace qi
