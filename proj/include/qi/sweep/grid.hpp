#pragma once

#include "qi/sweep/config.hpp"

#include <cstddef>
#include <string>
#include <vector>

namespace qi::sweep {

/// One resolved sweep axis.
struct Axis {
  std::string name;
  double min = 0.0;
  double max = 0.0;
  std::size_t points = 2;
  Spacing spacing = Spacing::linear;

  /// Throws ConfigError unless points >= 2, min < max and, for log axes, min > 0.
  void validate() const;
  std::vector<double> values() const;
};

/// Fills the bounds of `setting` that the config left open.
Axis resolve_axis(const std::string& name, const AxisSetting& setting, double default_min,
                  double default_max);

/// Row-major grid over two axes; cell index = iy * x.points + ix.
struct SweepGrid {
  Axis x;
  Axis y;

  std::size_t size() const { return x.points * y.points; }
};

}  // namespace qi::sweep
