#pragma once

#include "qi/receiver.hpp"
#include "qi/scenario.hpp"

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace qi::sweep {

/// Configuration problem, with the file, line and field in the message.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Spacing { linear, log };

enum class WeightChoice { gain, optimal, explicit_values };

/// Literature detector drawn on a QA map; coordinates come from the config.
struct DetectorPoint {
  std::string name;
  double p_dc;
  double eta;
};

struct AxisSetting {
  std::optional<double> min;
  std::optional<double> max;
  std::size_t points;
  Spacing spacing;
};

struct SweepSection {
  AxisSetting m{{}, {}, 41, Spacing::log};
  AxisSetting p_dc{1e-4, 1e-1, 50, Spacing::log};
  AxisSetting eta{0.5, 1.0, 50, Spacing::linear};
  AxisSetting w1{{}, {}, 61, Spacing::linear};
  AxisSetting w2{{}, {}, 61, Spacing::linear};
  std::vector<DetectorPoint> overlay;
  double gain_misestimate = 5e-4;
  std::vector<std::uint32_t> k_values{1, 2, 3};
  std::vector<double> n_b_values;
};

struct MonteCarloSection {
  bool present = false;
  std::uint64_t trials = 100'000;
  std::uint64_t seed = 1;
  std::vector<double> targets{0.3, 0.1, 0.02};
  std::vector<std::uint64_t> m_values;
  std::vector<std::string> schemes{"pc1"};
  std::vector<Resolution> resolutions;
  std::uint64_t calibration_trials = 20'000;
  std::uint64_t max_mode_samples = 200'000'000;
};

struct RunConfig {
  Scenario scenario{0.01, 20.0, 0.01};
  std::optional<double> gain;  ///< empty: optimal gain of the scenario
  WeightChoice weights = WeightChoice::gain;
  Weights explicit_weights;
  DetectorModel detector1;
  DetectorModel detector2;
  SweepSection sweep;
  MonteCarloSection montecarlo;
  unsigned threads = 1;
};

/// Parses INI text. `origin` names the source in diagnostics.
RunConfig parse_config(const std::string& text, const std::string& origin);
RunConfig load_config(const std::string& path);

/// Every setting after defaults are applied, as ("section.key", value) pairs.
std::vector<std::pair<std::string, std::string>> resolved_entries(const RunConfig& cfg);

std::string format_number(double value);

}  // namespace qi::sweep
