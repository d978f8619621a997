#pragma once

#include "qi/receiver.hpp"

#include <cstdint>

namespace qi {

/// Count distribution of a thermal mode seen by a counter that reports
/// min(n, K): geometric with ratio q = N/(N+1), all mass at n >= K folded into K.
class TruncatedGeometric {
 public:
  TruncatedGeometric(double mean_photons, std::uint32_t resolution);

  double q() const { return q_; }
  double mean_photons() const { return mean_photons_; }
  std::uint32_t resolution() const { return resolution_; }

  double pmf(std::uint32_t n) const;
  double mean() const;
  double variance() const;

 private:
  double mean_photons_;
  std::uint32_t resolution_;
  double q_;
  double log_q_;
};

/// Per-counter statistics with the resolution of that counter's detector applied
/// after loss and dark counts; equals individual_statistics for an unbounded
/// counter. Throws ModelError if the detected mode is not thermal.
DetectionStatistics finite_k_statistics(const HypothesisPair& pair, const ReceiverConfig& cfg,
                                        Counter which);

}  // namespace qi
