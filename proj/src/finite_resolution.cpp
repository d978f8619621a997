#include "qi/finite_resolution.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace qi {

namespace {

constexpr double kThermalTolerance = 1e-9;

}  // namespace

TruncatedGeometric::TruncatedGeometric(double mean_photons, std::uint32_t resolution)
    : mean_photons_(mean_photons), resolution_(resolution) {
  if (!(mean_photons >= 0.0) || !std::isfinite(mean_photons)) {
    throw std::domain_error("thermal mean must be finite and >= 0");
  }
  if (resolution < 1) {
    throw std::domain_error("resolution must be at least 1");
  }
  q_ = mean_photons / (mean_photons + 1.0);
  log_q_ = mean_photons == 0.0 ? -std::numeric_limits<double>::infinity()
                               : -std::log1p(1.0 / mean_photons);
}

double TruncatedGeometric::pmf(std::uint32_t n) const {
  if (n > resolution_) {
    throw std::out_of_range("count " + std::to_string(n) + " above resolution " +
                            std::to_string(resolution_));
  }
  if (mean_photons_ == 0.0) {
    return n == 0 ? 1.0 : 0.0;
  }
  const double tail = std::exp(static_cast<double>(n) * log_q_);
  return n < resolution_ ? (1.0 - q_) * tail : tail;
}

double TruncatedGeometric::mean() const {
  if (mean_photons_ == 0.0) {
    return 0.0;
  }
  // q (1 - q^K) / (1 - q) with q / (1 - q) = N
  return mean_photons_ * -std::expm1(static_cast<double>(resolution_) * log_q_);
}

double TruncatedGeometric::variance() const {
  if (mean_photons_ == 0.0) {
    return 0.0;
  }
  // The reported count is sum_{i<=K} [n >= i]; P(n >= i) = q^i, so
  // Var = sum_j q^j [(1 - q^j) + 2 sum_{i<j} (1 - q^i)], a sum of positive terms.
  double total = 0.0;
  double below = 0.0;
  for (std::uint32_t j = 1; j <= resolution_; ++j) {
    const double tail = std::exp(static_cast<double>(j) * log_q_);
    const double miss = -std::expm1(static_cast<double>(j) * log_q_);
    const double term = tail * (miss + 2.0 * below);
    total += term;
    below += miss;
    if (j > mean_photons_ + 1.0 && term < 1e-18 * total) {
      break;
    }
  }
  return total;
}

DetectionStatistics finite_k_statistics(const HypothesisPair& pair, const ReceiverConfig& cfg,
                                        Counter which) {
  const auto& det = which == Counter::pc1 ? cfg.detector1 : cfg.detector2;
  if (det.resolution.is_unbounded()) {
    return individual_statistics(pair, cfg, which);
  }
  const auto out = detected_output(pair, cfg);
  const ModeIndex mode = output_mode(which);
  auto moments = [&](const GaussianState& s) {
    if (std::abs(s.m(mode, mode)) > kThermalTolerance) {
      throw ModelError("detected mode is not thermal; truncated-geometric counts do not apply");
    }
    return TruncatedGeometric(mean_photon(s, mode), *det.resolution.max_count);
  };
  const auto d0 = moments(out.h0);
  const auto d1 = moments(out.h1);
  return {d0.mean(), d1.mean(), d0.variance(), d1.variance()};
}

}  // namespace qi
