#include "qi/sweep/grid.hpp"

#include <fmt/format.h>

#include <cmath>

namespace qi::sweep {

void Axis::validate() const {
  if (points < 2) {
    throw ConfigError(fmt::format("[sweep] {}_points: an axis needs at least 2 points", name));
  }
  if (!std::isfinite(min) || !std::isfinite(max) || !(min < max)) {
    throw ConfigError(fmt::format("[sweep] {}: bounds [{}, {}] do not form an interval", name,
                                  format_number(min), format_number(max)));
  }
  if (spacing == Spacing::log && !(min > 0.0)) {
    throw ConfigError(fmt::format("[sweep] {}_min: log axes need positive bounds", name));
  }
}

std::vector<double> Axis::values() const {
  validate();
  std::vector<double> out(points);
  const double last = static_cast<double>(points - 1);
  if (spacing == Spacing::log) {
    const double lo = std::log10(min);
    const double hi = std::log10(max);
    for (std::size_t i = 0; i < points; ++i) {
      out[i] = std::pow(10.0, lo + (hi - lo) * static_cast<double>(i) / last);
    }
  } else {
    for (std::size_t i = 0; i < points; ++i) {
      out[i] = min + (max - min) * static_cast<double>(i) / last;
    }
  }
  // Pin the endpoints so they print exactly as configured.
  out.front() = min;
  out.back() = max;
  return out;
}

Axis resolve_axis(const std::string& name, const AxisSetting& setting, double default_min,
                  double default_max) {
  Axis axis{name, setting.min.value_or(default_min), setting.max.value_or(default_max),
            setting.points, setting.spacing};
  axis.validate();
  return axis;
}

}  // namespace qi::sweep
