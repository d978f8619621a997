#pragma once

namespace qi {

/// A probability carried both linearly and as log10, so values far below
/// the double range survive. `value` is zero once it drops under 1e-300.
struct ErrorProbability {
  double value;
  double log10_value;

  static ErrorProbability from_log(double natural_log);
};

/// ln Q(z) for the standard normal upper tail Q(z) = P(Z > z).
/// Accurate for any finite z; uses an asymptotic expansion deep in the tail.
double log_normal_tail(double z);

/// Q(z) as an ErrorProbability.
ErrorProbability normal_tail(double z);

}  // namespace qi
