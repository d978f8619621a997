#include "qi/sweep/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <fmt/format.h>

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace qi::sweep {

namespace {

namespace pt = boost::property_tree;

const std::map<std::string, std::set<std::string>> kKnownKeys{
    {"scenario", {"n_s", "n_b", "kappa"}},
    {"receiver", {"gain", "cpc_weights", "w1", "w2"}},
    {"detector1", {"eta", "p_dc", "resolution"}},
    {"detector2", {"eta", "p_dc", "resolution"}},
    {"sweep",
     {"m_min", "m_max", "m_points", "m_spacing", "p_dc_min", "p_dc_max", "p_dc_points",
      "p_dc_spacing", "eta_min", "eta_max", "eta_points", "eta_spacing", "w1_min", "w1_max",
      "w1_points", "w1_spacing", "w2_min", "w2_max", "w2_points", "w2_spacing", "overlay",
      "gain_misestimate", "k_values", "n_b_values"}},
    {"montecarlo",
     {"trials", "seed", "targets", "m_values", "schemes", "resolutions", "calibration_trials",
      "max_mode_samples"}},
};

std::string trim(std::string_view s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string_view::npos) {
    return {};
  }
  const auto end = s.find_last_not_of(" \t\r");
  return std::string(s.substr(begin, end - begin + 1));
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::stringstream in(s);
  std::string part;
  while (std::getline(in, part, sep)) {
    part = trim(part);
    if (!part.empty()) {
      parts.push_back(part);
    }
  }
  return parts;
}

struct LineIndex {
  std::map<std::string, int> entries;  ///< "section.key" or "section" -> first line
  std::vector<std::pair<std::string, int>> headers;
};

LineIndex index_lines(const std::string& text) {
  LineIndex index;
  auto& lines = index.entries;
  std::istringstream in(text);
  std::string raw;
  std::string section;
  int number = 0;
  while (std::getline(in, raw)) {
    ++number;
    const auto line = trim(raw);
    if (line.empty() || line[0] == ';' || line[0] == '#') {
      continue;
    }
    if (line.front() == '[' && line.back() == ']') {
      section = trim(std::string_view(line).substr(1, line.size() - 2));
      lines.emplace(section, number);
      index.headers.emplace_back(section, number);
      continue;
    }
    const auto eq = line.find('=');
    if (eq != std::string::npos) {
      const auto key = trim(std::string_view(line).substr(0, eq));
      lines.emplace(section.empty() ? key : section + "." + key, number);
    }
  }
  return index;
}

class Reader {
 public:
  Reader(const std::string& text, std::string origin) : origin_(std::move(origin)) {
    auto index = index_lines(text);
    lines_ = std::move(index.entries);
    std::istringstream in(text);
    try {
      pt::read_ini(in, tree_);
    } catch (const pt::ini_parser_error& e) {
      throw ConfigError(fmt::format("{}:{}: {}", origin_, e.line(), e.message()));
    }
    for (const auto& [section, line] : index.headers) {
      if (!kKnownKeys.count(section)) {
        throw ConfigError(fmt::format("{}:{}: unknown section [{}]", origin_, line, section));
      }
    }
    for (const auto& [section, body] : tree_) {
      const auto known = kKnownKeys.find(section);
      if (known == kKnownKeys.end()) {
        if (body.empty()) {
          throw ConfigError(fmt::format("{}:{}: key '{}' outside any section", origin_,
                                        line_of(section), section));
        }
        throw ConfigError(fmt::format("{}:{}: unknown section [{}]", origin_, line_of(section), section));
      }
      for (const auto& [key, value] : body) {
        if (!known->second.count(key)) {
          throw ConfigError(fmt::format("{}:{}: unknown key '{}' in [{}]", origin_,
                                        line_of(section + "." + key), key, section));
        }
      }
    }
  }

  bool has_section(const std::string& section) const { return tree_.find(section) != tree_.not_found(); }

  std::optional<std::string> raw(const std::string& section, const std::string& key) const {
    const auto value = tree_.get_optional<std::string>(pt::ptree::path_type(section + "." + key, '.'));
    if (!value) {
      return std::nullopt;
    }
    return trim(*value);
  }

  [[noreturn]] void fail(const std::string& section, const std::string& key,
                         const std::string& problem) const {
    throw ConfigError(fmt::format("{}:{}: [{}] {}: {}", origin_, line_of(section + "." + key),
                                  section, key, problem));
  }

  double number(const std::string& section, const std::string& key, const std::string& text) const {
    double value = 0.0;
    const auto* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (ec != std::errc() || ptr != end || !std::isfinite(value)) {
      fail(section, key, fmt::format("expected a number, got '{}'", text));
    }
    return value;
  }

  std::uint64_t integer(const std::string& section, const std::string& key, const std::string& text) const {
    std::uint64_t value = 0;
    const auto* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (ec != std::errc() || ptr != end) {
      // Accept integral values written in floating notation, e.g. 1e5.
      const double approx = number(section, key, text);
      if (approx < 0.0 || approx != std::floor(approx) || approx > 1.8e19) {
        fail(section, key, fmt::format("expected a nonnegative integer, got '{}'", text));
      }
      return static_cast<std::uint64_t>(approx);
    }
    return value;
  }

  void read(const std::string& section, const std::string& key, double& out) const {
    if (const auto text = raw(section, key)) {
      out = number(section, key, *text);
    }
  }

  void read(const std::string& section, const std::string& key, std::optional<double>& out) const {
    if (const auto text = raw(section, key)) {
      out = number(section, key, *text);
    }
  }

  template <typename Int>
  void read_integer(const std::string& section, const std::string& key, Int& out) const {
    if (const auto text = raw(section, key)) {
      out = static_cast<Int>(integer(section, key, *text));
    }
  }

  void require(bool ok, const std::string& section, const std::string& key,
               const std::string& problem) const {
    if (!ok) {
      fail(section, key, problem);
    }
  }

 private:
  int line_of(const std::string& entry) const {
    const auto it = lines_.find(entry);
    return it == lines_.end() ? 0 : it->second;
  }

  std::string origin_;
  std::map<std::string, int> lines_;
  pt::ptree tree_;
};

Resolution parse_resolution(const Reader& r, const std::string& section, const std::string& key,
                            const std::string& text) {
  if (text == "unbounded") {
    return Resolution::unbounded();
  }
  const auto k = r.integer(section, key, text);
  r.require(k >= 1 && k <= 1'000'000, section, key, "resolution must be 'unbounded' or an integer in [1, 1e6]");
  return Resolution::limited(static_cast<std::uint32_t>(k));
}

void read_detector(const Reader& r, const std::string& section, DetectorModel& det) {
  r.read(section, "eta", det.eta);
  r.require(det.eta >= 0.0 && det.eta <= 1.0, section, "eta", "must lie in [0, 1]");
  r.read(section, "p_dc", det.p_dc);
  r.require(det.p_dc >= 0.0 && det.p_dc < 1.0, section, "p_dc", "must lie in [0, 1)");
  if (const auto text = r.raw(section, "resolution")) {
    det.resolution = parse_resolution(r, section, "resolution", *text);
  }
}

Spacing parse_spacing(const Reader& r, const std::string& key, const std::string& text) {
  if (text == "log") {
    return Spacing::log;
  }
  if (text == "linear") {
    return Spacing::linear;
  }
  r.fail("sweep", key, fmt::format("spacing must be 'log' or 'linear', got '{}'", text));
}

void read_axis(const Reader& r, const std::string& prefix, AxisSetting& axis) {
  r.read("sweep", prefix + "_min", axis.min);
  r.read("sweep", prefix + "_max", axis.max);
  r.read_integer("sweep", prefix + "_points", axis.points);
  r.require(axis.points >= 2, "sweep", prefix + "_points", "an axis needs at least 2 points");
  if (const auto text = r.raw("sweep", prefix + "_spacing")) {
    axis.spacing = parse_spacing(r, prefix + "_spacing", *text);
  }
  if (axis.min && axis.max) {
    r.require(*axis.min < *axis.max, "sweep", prefix + "_max", "must exceed the axis minimum");
  }
  if (axis.spacing == Spacing::log) {
    r.require(!axis.min || *axis.min > 0.0, "sweep", prefix + "_min", "log axes need positive bounds");
  }
}

std::string spacing_name(Spacing s) { return s == Spacing::log ? "log" : "linear"; }

std::string resolution_name(const Resolution& r) {
  return r.is_unbounded() ? "unbounded" : std::to_string(*r.max_count);
}

template <typename T, typename F>
std::string join(const std::vector<T>& items, F&& format) {
  std::string out;
  for (const auto& item : items) {
    if (!out.empty()) {
      out += ", ";
    }
    out += format(item);
  }
  return out;
}

std::string optional_number(const std::optional<double>& value) {
  return value ? format_number(*value) : "auto";
}

}  // namespace

std::string format_number(double value) { return fmt::format("{:.15g}", value); }

RunConfig parse_config(const std::string& text, const std::string& origin) {
  const Reader r(text, origin);
  RunConfig cfg;

  r.read("scenario", "n_s", cfg.scenario.n_s);
  r.require(cfg.scenario.n_s >= 0.0, "scenario", "n_s", "must be >= 0");
  r.read("scenario", "n_b", cfg.scenario.n_b);
  r.require(cfg.scenario.n_b >= 0.0, "scenario", "n_b", "must be >= 0");
  r.read("scenario", "kappa", cfg.scenario.kappa);
  r.require(cfg.scenario.kappa >= 0.0 && cfg.scenario.kappa <= 1.0, "scenario", "kappa",
            "must lie in [0, 1]");

  if (const auto text = r.raw("receiver", "gain"); text && *text != "optimal") {
    cfg.gain = r.number("receiver", "gain", *text);
    r.require(*cfg.gain >= 1.0, "receiver", "gain", "must be 'optimal' or a number >= 1");
  }
  if (const auto text = r.raw("receiver", "cpc_weights")) {
    if (*text == "gain") {
      cfg.weights = WeightChoice::gain;
    } else if (*text == "optimal") {
      cfg.weights = WeightChoice::optimal;
    } else if (*text == "explicit") {
      cfg.weights = WeightChoice::explicit_values;
    } else {
      r.fail("receiver", "cpc_weights", fmt::format("expected gain, optimal or explicit, got '{}'", *text));
    }
  }
  r.read("receiver", "w1", cfg.explicit_weights.w1);
  r.read("receiver", "w2", cfg.explicit_weights.w2);
  r.require(cfg.explicit_weights.w1 >= 0.0, "receiver", "w1", "must be >= 0");
  r.require(cfg.explicit_weights.w2 >= 0.0, "receiver", "w2", "must be >= 0");
  if (cfg.weights == WeightChoice::explicit_values) {
    r.require(r.raw("receiver", "w1") && r.raw("receiver", "w2"), "receiver", "cpc_weights",
              "explicit weights need both w1 and w2");
  }

  read_detector(r, "detector1", cfg.detector1);
  read_detector(r, "detector2", cfg.detector2);

  auto& sw = cfg.sweep;
  read_axis(r, "m", sw.m);
  r.require(!sw.m.min || *sw.m.min >= 1.0, "sweep", "m_min", "must be at least one mode");
  read_axis(r, "p_dc", sw.p_dc);
  r.require(*sw.p_dc.min >= 0.0 && *sw.p_dc.max < 1.0, "sweep", "p_dc_max", "p_dc axis must lie in [0, 1)");
  read_axis(r, "eta", sw.eta);
  r.require(*sw.eta.min >= 0.0 && *sw.eta.max <= 1.0, "sweep", "eta_max", "eta axis must lie in [0, 1]");
  read_axis(r, "w1", sw.w1);
  read_axis(r, "w2", sw.w2);
  r.require(!sw.w1.min || *sw.w1.min >= 0.0, "sweep", "w1_min", "weights must be >= 0");
  r.require(!sw.w2.min || *sw.w2.min >= 0.0, "sweep", "w2_min", "weights must be >= 0");
  if (const auto text = r.raw("sweep", "overlay")) {
    for (const auto& entry : split(*text, ',')) {
      const auto fields = split(entry, ':');
      r.require(fields.size() == 3, "sweep", "overlay",
                fmt::format("entries are name:p_dc:eta, got '{}'", entry));
      DetectorPoint point{fields[0], r.number("sweep", "overlay", fields[1]),
                          r.number("sweep", "overlay", fields[2])};
      r.require(point.p_dc >= 0.0 && point.p_dc < 1.0 && point.eta >= 0.0 && point.eta <= 1.0,
                "sweep", "overlay", fmt::format("point '{}' is outside p_dc in [0,1), eta in [0,1]", entry));
      sw.overlay.push_back(point);
    }
  }
  r.read("sweep", "gain_misestimate", sw.gain_misestimate);
  if (const auto text = r.raw("sweep", "k_values")) {
    sw.k_values.clear();
    for (const auto& item : split(*text, ',')) {
      const auto k = r.integer("sweep", "k_values", item);
      r.require(k >= 1 && k <= 1'000'000, "sweep", "k_values", "resolutions must lie in [1, 1e6]");
      sw.k_values.push_back(static_cast<std::uint32_t>(k));
    }
    r.require(!sw.k_values.empty(), "sweep", "k_values", "list is empty");
  }
  if (const auto text = r.raw("sweep", "n_b_values")) {
    for (const auto& item : split(*text, ',')) {
      sw.n_b_values.push_back(r.number("sweep", "n_b_values", item));
      r.require(sw.n_b_values.back() >= 0.0, "sweep", "n_b_values", "must be >= 0");
    }
  }

  auto& mc = cfg.montecarlo;
  mc.present = r.has_section("montecarlo");
  r.read_integer("montecarlo", "trials", mc.trials);
  r.require(mc.trials >= 1, "montecarlo", "trials", "must be at least 1");
  r.read_integer("montecarlo", "seed", mc.seed);
  if (const auto text = r.raw("montecarlo", "targets")) {
    mc.targets.clear();
    for (const auto& item : split(*text, ',')) {
      mc.targets.push_back(r.number("montecarlo", "targets", item));
      r.require(mc.targets.back() > 0.0 && mc.targets.back() < 0.5, "montecarlo", "targets",
                "target error probabilities must lie in (0, 0.5)");
    }
  }
  if (const auto text = r.raw("montecarlo", "m_values")) {
    for (const auto& item : split(*text, ',')) {
      mc.m_values.push_back(r.integer("montecarlo", "m_values", item));
      r.require(mc.m_values.back() >= 1, "montecarlo", "m_values", "must be at least 1");
    }
  }
  if (const auto text = r.raw("montecarlo", "schemes")) {
    mc.schemes = split(*text, ',');
    for (const auto& s : mc.schemes) {
      r.require(s == "pc1" || s == "pc2" || s == "cpc", "montecarlo", "schemes",
                fmt::format("unknown scheme '{}' (pc1, pc2, cpc)", s));
    }
  }
  if (const auto text = r.raw("montecarlo", "resolutions")) {
    for (const auto& item : split(*text, ',')) {
      mc.resolutions.push_back(parse_resolution(r, "montecarlo", "resolutions", item));
    }
  }
  r.read_integer("montecarlo", "calibration_trials", mc.calibration_trials);
  r.require(mc.calibration_trials >= 2, "montecarlo", "calibration_trials", "must be at least 2");
  r.read_integer("montecarlo", "max_mode_samples", mc.max_mode_samples);
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError(fmt::format("{}: cannot open config file", path));
  }
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str(), path);
}

std::vector<std::pair<std::string, std::string>> resolved_entries(const RunConfig& cfg) {
  std::vector<std::pair<std::string, std::string>> out{
      {"scenario.n_s", format_number(cfg.scenario.n_s)},
      {"scenario.n_b", format_number(cfg.scenario.n_b)},
      {"scenario.kappa", format_number(cfg.scenario.kappa)},
      {"receiver.gain", cfg.gain ? format_number(*cfg.gain) : "optimal"},
      {"receiver.cpc_weights", cfg.weights == WeightChoice::gain      ? "gain"
                               : cfg.weights == WeightChoice::optimal ? "optimal"
                                                                      : "explicit"},
      {"receiver.w1", format_number(cfg.explicit_weights.w1)},
      {"receiver.w2", format_number(cfg.explicit_weights.w2)},
  };
  for (const auto& [name, det] : {std::pair{"detector1", &cfg.detector1}, std::pair{"detector2", &cfg.detector2}}) {
    out.emplace_back(std::string(name) + ".eta", format_number(det->eta));
    out.emplace_back(std::string(name) + ".p_dc", format_number(det->p_dc));
    out.emplace_back(std::string(name) + ".resolution", resolution_name(det->resolution));
  }
  const auto& sw = cfg.sweep;
  for (const auto& [name, axis] : {std::pair{"m", &sw.m}, std::pair{"p_dc", &sw.p_dc},
                                   std::pair{"eta", &sw.eta}, std::pair{"w1", &sw.w1},
                                   std::pair{"w2", &sw.w2}}) {
    const std::string prefix = std::string("sweep.") + name;
    out.emplace_back(prefix + "_min", optional_number(axis->min));
    out.emplace_back(prefix + "_max", optional_number(axis->max));
    out.emplace_back(prefix + "_points", std::to_string(axis->points));
    out.emplace_back(prefix + "_spacing", spacing_name(axis->spacing));
  }
  out.emplace_back("sweep.overlay", join(sw.overlay, [](const DetectorPoint& p) {
                     return p.name + ":" + format_number(p.p_dc) + ":" + format_number(p.eta);
                   }));
  out.emplace_back("sweep.gain_misestimate", format_number(sw.gain_misestimate));
  out.emplace_back("sweep.k_values", join(sw.k_values, [](std::uint32_t k) { return std::to_string(k); }));
  out.emplace_back("sweep.n_b_values", join(sw.n_b_values, [](double v) { return format_number(v); }));
  if (cfg.montecarlo.present) {
    const auto& mc = cfg.montecarlo;
    out.emplace_back("montecarlo.trials", std::to_string(mc.trials));
    out.emplace_back("montecarlo.seed", std::to_string(mc.seed));
    out.emplace_back("montecarlo.targets", join(mc.targets, [](double v) { return format_number(v); }));
    out.emplace_back("montecarlo.m_values",
                     join(mc.m_values, [](std::uint64_t v) { return std::to_string(v); }));
    out.emplace_back("montecarlo.schemes", join(mc.schemes, [](const std::string& s) { return s; }));
    out.emplace_back("montecarlo.resolutions", join(mc.resolutions, resolution_name));
    out.emplace_back("montecarlo.calibration_trials", std::to_string(mc.calibration_trials));
    out.emplace_back("montecarlo.max_mode_samples", std::to_string(mc.max_mode_samples));
  }
  return out;
}

}  // namespace qi::sweep
