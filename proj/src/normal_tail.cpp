#include "qi/normal_tail.hpp"

#include <cmath>
#include <numbers>

namespace qi {

namespace {
constexpr double kUnderflowFloor = 1e-300;
constexpr double kAsymptoticStart = 30.0;
}  // namespace

ErrorProbability ErrorProbability::from_log(double natural_log) {
  const double log10_value = natural_log / std::numbers::ln10;
  const double value = std::exp(natural_log);
  return {value < kUnderflowFloor ? 0.0 : value, log10_value};
}

double log_normal_tail(double z) {
  if (z < kAsymptoticStart) {
    return std::log(0.5 * std::erfc(z / std::numbers::sqrt2));
  }
  // Q(z) = phi(z)/z * (1 - 1/z^2 + 3/z^4 - 15/z^6 + 105/z^8 ...)
  const double inv2 = 1.0 / (z * z);
  const double series = 1.0 - inv2 * (1.0 - 3.0 * inv2 * (1.0 - 5.0 * inv2 * (1.0 - 7.0 * inv2)));
  return -0.5 * z * z - std::log(z) - 0.5 * std::log(2.0 * std::numbers::pi) + std::log(series);
}

ErrorProbability normal_tail(double z) { return ErrorProbability::from_log(log_normal_tail(z)); }

}  // namespace qi
