#include "qi/sweep/commands.hpp"

#include "qi/finite_resolution.hpp"
#include "qi/montecarlo.hpp"
#include "qi/parallel.hpp"
#include "qi/sweep/grid.hpp"

#include <boost/math/distributions/normal.hpp>
#include <boost/math/tools/roots.hpp>
#include <fmt/format.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>

namespace qi::sweep {

namespace {

using Row = std::vector<Cell>;
using Stats = std::optional<DetectionStatistics>;

constexpr double kDefaultMinExponentSpan = 0.4;
constexpr double kDefaultMaxExponentSpan = 12.0;
constexpr double kWeightSpan = 1e-3;
constexpr double kWeightLineFactor = 8.0;
constexpr double kLargestModeCount = 1e15;

const Column kModes{"M", "modes"};

Cell na() { return std::monostate{}; }

Cell integer(std::uint64_t value) { return static_cast<std::int64_t>(value); }

std::string resolution_label(const Resolution& r) {
  return r.is_unbounded() ? "unbounded" : fmt::format("k{}", *r.max_count);
}

/// Statistics are undefined for degenerate or unphysical points; such cells print as NA.
Stats try_stats(const std::function<DetectionStatistics()>& make) {
  try {
    return make();
  } catch (const std::domain_error&) {
    return std::nullopt;
  } catch (const ModelError&) {
    return std::nullopt;
  }
}

std::optional<ErrorProbability> try_probability(const std::function<ErrorProbability()>& make) {
  try {
    return make();
  } catch (const std::domain_error&) {
    return std::nullopt;
  }
}

double resolved_gain(const RunConfig& cfg, const Scenario& sc) {
  if (cfg.gain) {
    return *cfg.gain;
  }
  try {
    return optimal_gain(sc);
  } catch (const ModelError& e) {
    throw ConfigError(fmt::format("[receiver] gain: optimal gain undefined ({}); set an explicit gain",
                                  e.what()));
  }
}

Weights cpc_weights(const RunConfig& cfg, const Scenario& sc, double gain) {
  switch (cfg.weights) {
    case WeightChoice::optimal:
      return optimal_weights(sc, gain);
    case WeightChoice::explicit_values:
      return cfg.explicit_weights;
    case WeightChoice::gain:
      break;
  }
  return {gain, gain - 1.0};
}

bool both_unbounded(const DetectorModel& a, const DetectorModel& b) {
  return a.resolution.is_unbounded() && b.resolution.is_unbounded();
}

Axis m_axis(const RunConfig& cfg, const Scenario& sc) {
  const double rate = coherent_state_exponent(sc);
  if (!(rate > 0.0) && !(cfg.sweep.m.min && cfg.sweep.m.max)) {
    throw ConfigError("[sweep] m_min: the default M range scales with kappa*n_s, which is zero here; "
                      "set m_min and m_max");
  }
  return resolve_axis("m", cfg.sweep.m, kDefaultMinExponentSpan / rate, kDefaultMaxExponentSpan / rate);
}

std::vector<Row> evaluate_rows(std::size_t count, unsigned threads,
                               const std::function<Row(std::size_t)>& make_row) {
  std::vector<Row> rows(count);
  parallel_for(count, threads, [&](std::size_t i) { rows[i] = make_row(i); });
  return rows;
}

void append_probability(Row& row, const std::optional<ErrorProbability>& p) {
  if (p) {
    row.emplace_back(p->value);
    row.emplace_back(p->log10_value);
  } else {
    row.push_back(na());
    row.push_back(na());
  }
}

void append_probability_columns(std::vector<Column>& columns, const std::string& prefix) {
  columns.push_back({prefix + "_pe", "probability"});
  columns.push_back({prefix + "_log10_pe", "log10"});
}

std::optional<ErrorProbability> scheme_probability(const Stats& stats, double modes) {
  if (!stats) {
    return std::nullopt;
  }
  return error_probability(*stats, modes);
}

Cell difference(const std::optional<ErrorProbability>& p, const ErrorProbability& reference) {
  if (!p) {
    return na();
  }
  return p->log10_value - reference.log10_value;
}

Scenario with_background(Scenario sc, double n_b) {
  sc.n_b = n_b;
  sc.validate();
  return sc;
}

std::vector<double> background_levels(const RunConfig& cfg) {
  return cfg.sweep.n_b_values.empty() ? std::vector<double>{cfg.scenario.n_b} : cfg.sweep.n_b_values;
}

ReceiverConfig receiver(const RunConfig& cfg, double gain) {
  ReceiverConfig rc{gain, cfg.detector1, cfg.detector2, {}};
  rc.validate();
  return rc;
}

DetectionStatistics negated(const DetectionStatistics& s) {
  return {-s.mu(Hypothesis::h0), -s.mu(Hypothesis::h1), s.var(Hypothesis::h0), s.var(Hypothesis::h1)};
}

}  // namespace

DataTable error_curve(const RunConfig& cfg) {
  const Scenario sc = with_background(cfg.scenario, cfg.scenario.n_b);
  const auto pair = build_hypotheses(sc);
  const double gain = resolved_gain(cfg, sc);
  ReceiverConfig rc = receiver(cfg, gain);
  rc.weights = cpc_weights(cfg, sc, gain);

  const Stats pc1 = try_stats([&] { return finite_k_statistics(pair, rc, Counter::pc1); });
  const Stats pc2 = try_stats([&] { return finite_k_statistics(pair, rc, Counter::pc2); });
  const Stats cpc = both_unbounded(rc.detector1, rc.detector2)
                        ? try_stats([&] { return cpc_statistics(pair, rc); })
                        : std::nullopt;
  const auto modes = m_axis(cfg, sc).values();

  DataTable table;
  table.metadata = {{"derived.gain", format_number(gain)},
                    {"derived.cpc_w1", format_number(rc.weights.w1)},
                    {"derived.cpc_w2", format_number(rc.weights.w2)},
                    {"derived.cs_exponent", format_number(coherent_state_exponent(sc))}};
  if (!cpc) {
    table.metadata.emplace_back("note.cpc", "no analytic CPC statistics for finite-resolution counters");
  }

  std::vector<Column> columns{kModes};
  for (const auto* name : {"pc1", "pc2", "cpc", "cs", "qcb"}) {
    append_probability_columns(columns, name);
  }
  for (const auto* name : {"pc1", "pc2", "cpc", "qcb"}) {
    columns.push_back({std::string(name) + "_dlog10_cs", "decades"});
  }
  auto& curves = table.add_series("error_curve", columns);
  curves.rows = evaluate_rows(modes.size(), cfg.threads, [&](std::size_t i) {
    const double m = modes[i];
    const auto p1 = scheme_probability(pc1, m);
    const auto p2 = scheme_probability(pc2, m);
    const auto pc = scheme_probability(cpc, m);
    const auto cs = classical_error_probability(sc, m);
    const auto qcb = try_probability([&] { return qcb_curve(sc, m); });
    Row row{m};
    for (const auto& p : {p1, p2, pc, std::optional(cs), qcb}) {
      append_probability(row, p);
    }
    for (const auto& p : {p1, p2, pc, qcb}) {
      row.push_back(difference(p, cs));
    }
    return row;
  });

  if (!cfg.sweep.overlay.empty()) {
    std::vector<std::array<Stats, 3>> overlay_stats;
    std::vector<Column> overlay_columns{kModes};
    for (const auto& point : cfg.sweep.overlay) {
      ReceiverConfig shifted = rc;
      for (auto* det : {&shifted.detector1, &shifted.detector2}) {
        det->eta = point.eta;
        det->p_dc = point.p_dc;
      }
      overlay_stats.push_back(
          {try_stats([&] { return finite_k_statistics(pair, shifted, Counter::pc1); }),
           try_stats([&] { return finite_k_statistics(pair, shifted, Counter::pc2); }),
           cpc ? try_stats([&] { return cpc_statistics(pair, shifted); }) : std::nullopt});
      for (const auto* counter : {"pc1", "pc2", "cpc"}) {
        const std::string prefix = point.name + "_" + counter;
        append_probability_columns(overlay_columns, prefix);
        overlay_columns.push_back({prefix + "_dlog10_cs", "decades"});
      }
    }
    auto& overlay = table.add_series("detector_overlay", overlay_columns);
    overlay.rows = evaluate_rows(modes.size(), cfg.threads, [&](std::size_t i) {
      const double m = modes[i];
      const auto cs = classical_error_probability(sc, m);
      Row row{m};
      for (const auto& point_stats : overlay_stats) {
        for (const auto& stats : point_stats) {
          const auto p = scheme_probability(stats, m);
          append_probability(row, p);
          row.push_back(difference(p, cs));
        }
      }
      return row;
    });
  }
  return table;
}

DataTable qa_map(const RunConfig& cfg) {
  const Scenario sc = with_background(cfg.scenario, cfg.scenario.n_b);
  const auto pair = build_hypotheses(sc);
  const double gain = resolved_gain(cfg, sc);
  const ReceiverConfig base = receiver(cfg, gain);
  const SweepGrid grid{resolve_axis("p_dc", cfg.sweep.p_dc, 1e-4, 1e-1),
                       resolve_axis("eta", cfg.sweep.eta, 0.5, 1.0)};
  const auto p_values = grid.x.values();
  const auto eta_values = grid.y.values();

  const auto advantage = [&](double p_dc, double eta) -> std::optional<double> {
    ReceiverConfig rc = base;
    rc.detector1.p_dc = p_dc;
    rc.detector1.eta = eta;
    const auto stats = try_stats([&] { return finite_k_statistics(pair, rc, Counter::pc1); });
    if (!stats) {
      return std::nullopt;
    }
    return quantum_advantage_db(*stats, sc);
  };
  const auto as_cell = [](const std::optional<double>& v) -> Cell { return v ? Cell(*v) : na(); };

  DataTable table;
  table.metadata = {{"derived.gain", format_number(gain)},
                    {"derived.cs_exponent", format_number(coherent_state_exponent(sc))}};
  auto& map = table.add_series("qa_map", {{"p_dc", "probability"},
                                          {"eta", "efficiency"},
                                          {"qa", "dB"},
                                          {"above_0db", "flag"},
                                          {"above_1db", "flag"}});
  map.rows = evaluate_rows(grid.size(), cfg.threads, [&](std::size_t cell) {
    const double p_dc = p_values[cell % grid.x.points];
    const double eta = eta_values[cell / grid.x.points];
    const auto qa = advantage(p_dc, eta);
    if (!qa || !std::isfinite(*qa)) {
      return Row{p_dc, eta, na(), integer(0), integer(0)};
    }
    return Row{p_dc, eta, *qa, integer(*qa > 0.0), integer(*qa > 1.0)};
  });

  for (const double level : {0.0, 1.0}) {
    auto& contour = table.add_series(fmt::format("contour_{}db", level), {{"p_dc", "probability"},
                                                                          {"eta", "efficiency"}});
    contour.rows = evaluate_rows(p_values.size(), cfg.threads, [&](std::size_t i) {
      const double p_dc = p_values[i];
      const auto excess = [&](double eta) {
        const auto qa = advantage(p_dc, eta);
        return qa && std::isfinite(*qa) ? *qa - level : -std::numeric_limits<double>::max();
      };
      const double lo = excess(grid.y.min);
      const double hi = excess(grid.y.max);
      if (!(lo < 0.0 && hi > 0.0)) {
        return Row{p_dc, na()};
      }
      std::uintmax_t iterations = 200;
      const auto [a, b] = boost::math::tools::toms748_solve(
          excess, grid.y.min, grid.y.max, lo, hi, boost::math::tools::eps_tolerance<double>(40), iterations);
      return Row{p_dc, 0.5 * (a + b)};
    });
  }

  auto& overlay = table.add_series("detector_overlay", {{"name", "label"},
                                                        {"p_dc", "probability"},
                                                        {"eta", "efficiency"},
                                                        {"qa", "dB"}});
  for (const auto& point : cfg.sweep.overlay) {
    overlay.rows.push_back({point.name, point.p_dc, point.eta, as_cell(advantage(point.p_dc, point.eta))});
  }
  return table;
}

DataTable weight_map(const RunConfig& cfg) {
  const Scenario sc = with_background(cfg.scenario, cfg.scenario.n_b);
  const auto pair = build_hypotheses(sc);
  const double gain = resolved_gain(cfg, sc);
  const ReceiverConfig base = receiver(cfg, gain);
  if (!both_unbounded(base.detector1, base.detector2)) {
    throw ConfigError("[detector1] resolution: weight-map needs unbounded counters on both outputs");
  }
  const SweepGrid grid{
      resolve_axis("w1", cfg.sweep.w1, gain * (1.0 - kWeightSpan), gain * (1.0 + kWeightSpan)),
      resolve_axis("w2", cfg.sweep.w2, 0.0, kWeightLineFactor * (gain - 1.0))};
  const auto w1_values = grid.x.values();
  const auto w2_values = grid.y.values();

  const auto advantage = [&](Weights w) -> Cell {
    ReceiverConfig rc = base;
    rc.weights = w;
    const auto stats = try_stats([&] {
      rc.validate();
      return cpc_statistics(pair, rc);
    });
    if (!stats) {
      return na();
    }
    return quantum_advantage_db(*stats, sc);
  };

  DataTable table;
  table.metadata = {{"derived.gain", format_number(gain)},
                    {"derived.cs_exponent", format_number(coherent_state_exponent(sc))}};
  const std::vector<Column> columns{{"w1", "weight"}, {"w2", "weight"}, {"qa", "dB"}};
  auto& map = table.add_series("weight_map", columns);
  map.rows = evaluate_rows(grid.size(), cfg.threads, [&](std::size_t cell) {
    const Weights w{w1_values[cell % grid.x.points], w2_values[cell / grid.x.points]};
    return Row{w.w1, w.w2, advantage(w)};
  });

  const auto trace = [&](const std::string& name, const std::function<std::optional<Weights>(double)>& line) {
    auto& series = table.add_series(name, columns);
    series.rows = evaluate_rows(w1_values.size(), cfg.threads, [&](std::size_t i) {
      const auto w = line(w1_values[i]);
      return w ? Row{w->w1, w->w2, advantage(*w)} : Row{w1_values[i], na(), na()};
    });
  };
  trace("gain_line", [](double w1) { return std::optional<Weights>({w1, w1 - 1.0}); });
  trace("optimal_line", [&](double w1) -> std::optional<Weights> {
    try {
      return optimal_weights(sc, w1);
    } catch (const std::domain_error&) {
      return std::nullopt;
    }
  });
  trace("proportional_line", [&](double w1) { return std::optional(proportional_weights(gain, w1)); });

  const double shifted = gain * (1.0 + cfg.sweep.gain_misestimate);
  auto& markers = table.add_series("markers", {{"name", "label"}, {"w1", "weight"}, {"w2", "weight"}, {"qa", "dB"}});
  const std::vector<std::pair<std::string, Weights>> points{
      {"gain_optimum", {gain, gain - 1.0}},
      {"gain_misestimate", {shifted, shifted - 1.0}},
      {"optimal_line_at_gain", optimal_weights(sc, gain)},
      {"pc1_only", {1.0, 0.0}}};
  for (const auto& [name, w] : points) {
    markers.rows.push_back({name, w.w1, w.w2, advantage(w)});
  }
  return table;
}

DataTable resolution_curve(const RunConfig& cfg) {
  DataTable table;
  std::vector<Resolution> resolutions{Resolution::unbounded()};
  for (const auto k : cfg.sweep.k_values) {
    resolutions.push_back(Resolution::limited(k));
  }
  for (const double n_b : background_levels(cfg)) {
    const Scenario sc = with_background(cfg.scenario, n_b);
    const auto pair = build_hypotheses(sc);
    const double gain = resolved_gain(cfg, sc);
    const ReceiverConfig base = receiver(cfg, gain);
    const auto modes = m_axis(cfg, sc).values();

    std::vector<Column> columns{kModes};
    append_probability_columns(columns, "cs");
    std::vector<Stats> stats;
    for (const auto* counter : {"pc1", "pc2"}) {
      for (const auto& r : resolutions) {
        ReceiverConfig rc = base;
        rc.detector1.resolution = r;
        rc.detector2.resolution = r;
        const Counter which = std::string_view(counter) == "pc1" ? Counter::pc1 : Counter::pc2;
        stats.push_back(try_stats([&] { return finite_k_statistics(pair, rc, which); }));
        append_probability_columns(columns, fmt::format("{}_{}", counter, resolution_label(r)));
      }
    }
    table.metadata.emplace_back(fmt::format("derived.gain.n_b={}", format_number(n_b)), format_number(gain));
    auto& series = table.add_series(fmt::format("n_b={}", format_number(n_b)), columns);
    series.rows = evaluate_rows(modes.size(), cfg.threads, [&](std::size_t i) {
      const double m = modes[i];
      Row row{m};
      append_probability(row, classical_error_probability(sc, m));
      for (const auto& s : stats) {
        append_probability(row, scheme_probability(s, m));
      }
      return row;
    });
  }
  return table;
}

DataTable optimal_gain_table(const RunConfig& cfg) {
  DataTable table;
  auto& series = table.add_series("optimal_gain", {{"n_b", "photons"},
                                                   {"gain", "1"},
                                                   {"gain_minus_1", "1"},
                                                   {"n1_h0", "photons"},
                                                   {"n1_h1", "photons"},
                                                   {"n2_h0", "photons"},
                                                   {"n2_h1", "photons"},
                                                   {"weight_line_residual", "relative"},
                                                   {"printed_covariance_deviation", "relative"}});
  const auto levels = background_levels(cfg);
  series.rows = evaluate_rows(levels.size(), cfg.threads, [&](std::size_t i) {
    const Scenario sc = with_background(cfg.scenario, levels[i]);
    const auto report = optimal_gain_report(sc);
    return Row{sc.n_b,         report.gain,  report.gain - 1.0,
               report.n1_h0,   report.n1_h1, report.n2_h0,
               report.n2_h1,   report.weight_line_residual,
               report.printed_covariance_deviation};
  });
  return table;
}

DataTable mc_verify(const RunConfig& cfg) {
  const auto& mc = cfg.montecarlo;
  if (!mc.present) {
    throw ConfigError("[montecarlo]: mc-verify needs a [montecarlo] section");
  }
  const Scenario sc = with_background(cfg.scenario, cfg.scenario.n_b);
  const auto pair = build_hypotheses(sc);
  const double gain = resolved_gain(cfg, sc);
  const ReceiverConfig base = receiver(cfg, gain);
  const Weights combined = cpc_weights(cfg, sc, gain);
  const auto resolutions =
      mc.resolutions.empty() ? std::vector<Resolution>{base.detector1.resolution} : mc.resolutions;
  const bool by_target = mc.m_values.empty();
  const std::size_t per_group = by_target ? mc.targets.size() : mc.m_values.size();
  const boost::math::normal standard;

  DataTable table;
  table.metadata = {
      {"seed", std::to_string(mc.seed)},
      {"source", "montecarlo"},
      {"derived.gain", format_number(gain)},
      {"derived.cpc_w1", format_number(combined.w1)},
      {"derived.cpc_w2", format_number(combined.w2)},
      {"montecarlo.row_seed", "seed + row index"},
      {"montecarlo.trial_hypothesis", "trial t is drawn under H(t mod 2)"},
      {"montecarlo.pass_rule", "|empirical - analytic| <= 4 std_err"},
      {"montecarlo.dark_count_model",
       "independent geometric dark counts per mode; the analytic model merges them with the signal into one "
       "thermal mode, so count variances differ by 2*eta*N*N_dc"},
  };
  auto& series = table.add_series("mc_verify", {{"scheme", "label"},
                                                {"resolution", "label"},
                                                {"target_pe", "probability"},
                                                {"M", "modes"},
                                                {"analytic_pe", "probability"},
                                                {"empirical_pe", "probability"},
                                                {"std_err", "probability"},
                                                {"z_score", "std_err"},
                                                {"trials", "trials"},
                                                {"seed", "u64"},
                                                {"status", "label"}});
  std::uint64_t row_index = 0;
  for (const auto& scheme : mc.schemes) {
    for (const auto& resolution : resolutions) {
      ReceiverConfig rc = base;
      rc.detector1.resolution = resolution;
      rc.detector2.resolution = resolution;
      rc.weights = combined;

      Weights weights = combined;
      Stats analytic;
      Stats sizing;
      if (scheme == "cpc") {
        ReceiverConfig unbounded = rc;
        unbounded.detector1.resolution = Resolution::unbounded();
        unbounded.detector2.resolution = Resolution::unbounded();
        sizing = try_stats([&] { return cpc_statistics(pair, unbounded); });
        if (both_unbounded(rc.detector1, rc.detector2)) {
          analytic = sizing;
        }
      } else {
        const Counter which = scheme == "pc1" ? Counter::pc1 : Counter::pc2;
        weights = counter_weights(which);
        analytic = try_stats([&] { return finite_k_statistics(pair, rc, which); });
        // The sampled statistic is w1 N1 - w2 N2, so PC2 is tested on -N2.
        if (analytic && which == Counter::pc2) {
          analytic = negated(*analytic);
        }
        sizing = analytic;
      }

      for (std::size_t i = 0; i < per_group; ++i, ++row_index) {
        const std::uint64_t seed = mc.seed + row_index;
        Row row{scheme, resolution_label(resolution)};
        std::uint64_t modes = 1;
        if (by_target) {
          const double target = mc.targets[i];
          row.emplace_back(target);
          if (sizing) {
            const double spread = sizing->sigma(Hypothesis::h0) + sizing->sigma(Hypothesis::h1);
            const double gap = std::abs(sizing->mu(Hypothesis::h1) - sizing->mu(Hypothesis::h0));
            const double z = boost::math::quantile(boost::math::complement(standard, target));
            const double needed = gap > 0.0 ? std::ceil(std::pow(z * spread / gap, 2)) : 1.0;
            if (!(needed <= kLargestModeCount)) {
              row.insert(row.end(), {na(), na(), na(), na(), na(), integer(mc.trials), integer(seed),
                                     std::string("skipped: mode count out of range")});
              series.rows.push_back(std::move(row));
              continue;
            }
            modes = static_cast<std::uint64_t>(std::max(1.0, needed));
          }
        } else {
          row.push_back(na());
          modes = mc.m_values[i];
        }
        row.push_back(integer(modes));
        const auto analytic_pe = scheme_probability(analytic, static_cast<double>(modes));
        row.push_back(analytic_pe ? Cell(analytic_pe->value) : na());

        SamplerSpec spec{mixer_output(pair, gain), {rc.detector1, rc.detector2}};
        spec.modes_per_trial = modes;
        spec.trials = mc.trials;
        spec.seed = seed;
        spec.max_mode_samples = mc.max_mode_samples;
        spec.threads = cfg.threads;
        try {
          const DecisionRule rule = analytic ? analytic_rule(*analytic, weights, modes)
                                             : calibrated_rule(spec, weights, mc.calibration_trials);
          const auto result = empirical_error_probability(spec, rule);
          row.emplace_back(result.p_e_hat);
          row.emplace_back(result.std_err);
          std::string status = "empirical-only";
          Cell z = na();
          if (analytic_pe) {
            const double deviation = result.p_e_hat - analytic_pe->value;
            if (result.std_err > 0.0) {
              z = deviation / result.std_err;
            }
            status = std::abs(deviation) <= 4.0 * result.std_err ? "pass" : "fail";
          }
          row.insert(row.end(), {z, integer(result.trials), integer(seed), status});
        } catch (const NonClassicalState&) {
          row.insert(row.end(), {na(), na(), na(), integer(mc.trials), integer(seed),
                                 std::string("skipped: nonclassical")});
        } catch (const BudgetExceeded&) {
          row.insert(row.end(), {na(), na(), na(), integer(mc.trials), integer(seed),
                                 std::string("skipped: budget")});
        }
        series.rows.push_back(std::move(row));
      }
    }
  }
  return table;
}

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names{"error-curve",      "qa-map",        "weight-map",
                                              "resolution-curve", "optimal-gain",  "mc-verify"};
  return names;
}

DataTable run_command(std::string_view name, const RunConfig& cfg) {
  DataTable table;
  if (name == "error-curve") {
    table = error_curve(cfg);
  } else if (name == "qa-map") {
    table = qa_map(cfg);
  } else if (name == "weight-map") {
    table = weight_map(cfg);
  } else if (name == "resolution-curve") {
    table = resolution_curve(cfg);
  } else if (name == "optimal-gain") {
    table = optimal_gain_table(cfg);
  } else if (name == "mc-verify") {
    table = mc_verify(cfg);
  } else {
    throw std::invalid_argument(fmt::format("unknown command '{}'", name));
  }
  std::vector<std::pair<std::string, std::string>> header{{"command", std::string(name)},
                                                          {"version", QI_VERSION}};
  for (const auto& [key, value] : resolved_entries(cfg)) {
    header.emplace_back("config." + key, value);
  }
  header.insert(header.end(), table.metadata.begin(), table.metadata.end());
  table.metadata = std::move(header);
  return table;
}

}  // namespace qi::sweep
