#include "qi/montecarlo.hpp"

#include "qi/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <optional>
#include <random>
#include <string>

namespace qi {

namespace {

constexpr std::uint64_t kChunkTrials = 2048;
constexpr std::uint64_t kCalibrationStream = 0x6a09e667f3bcc909ULL;
constexpr std::uint64_t kWishartMinModes = 4;

using Rng = std::mt19937_64;

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t chunk_seed(std::uint64_t seed, Hypothesis h, std::uint64_t chunk) {
  const std::uint64_t lane = h == Hypothesis::h0 ? 1 : 2;
  return splitmix64(splitmix64(splitmix64(seed) ^ lane) ^ chunk);
}

struct CounterPlan {
  bool used = false;
  double eta = 1.0;
  double dark = 0.0;
  std::optional<std::uint32_t> clip;
};

std::array<CounterPlan, 2> make_plans(const SamplerSpec& spec, CounterSelection sel) {
  std::array<CounterPlan, 2> plans;
  const std::array<bool, 2> used{sel.pc1, sel.pc2};
  for (std::size_t i = 0; i < 2; ++i) {
    plans[i] = {used[i], spec.detectors[i].eta, spec.detectors[i].dark_mean(),
                spec.detectors[i].resolution.max_count};
  }
  return plans;
}

/// Square root of the amplitude covariance, so x = root * z has that covariance.
Eigen::Matrix4d amplitude_root(const GaussianState& state) {
  const Eigen::Matrix4d cov = p_function_covariance(state);
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> solver(cov);
  const Eigen::Vector4d scale = solver.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return solver.eigenvectors() * scale.asDiagonal();
}

std::uint64_t poisson(Rng& rng, double mean) {
  if (mean <= 0.0) {
    return 0;
  }
  return std::poisson_distribution<std::uint64_t>(mean)(rng);
}

class Sampler {
 public:
  virtual ~Sampler() = default;
  virtual CountRecord draw(Rng& rng) const = 0;
};

class PerModeSampler final : public Sampler {
 public:
  PerModeSampler(const GaussianState& state, std::array<CounterPlan, 2> plans, std::uint64_t modes)
      : root_(amplitude_root(state)), plans_(plans), modes_(modes) {}

  CountRecord draw(Rng& rng) const override {
    std::normal_distribution<double> normal;
    std::array<std::uint64_t, 2> totals{0, 0};
    for (std::uint64_t mode = 0; mode < modes_; ++mode) {
      const Eigen::Vector4d z{normal(rng), normal(rng), normal(rng), normal(rng)};
      const Eigen::Vector4d x = root_ * z;
      for (std::size_t i = 0; i < 2; ++i) {
        const auto& plan = plans_[i];
        if (!plan.used) {
          continue;
        }
        std::uint64_t count = poisson(rng, x(2 * i) * x(2 * i) + x(2 * i + 1) * x(2 * i + 1));
        if (plan.eta < 1.0 && count > 0) {
          count = std::binomial_distribution<std::uint64_t>(count, plan.eta)(rng);
        }
        if (plan.dark > 0.0) {
          count += std::geometric_distribution<std::uint64_t>(1.0 / (1.0 + plan.dark))(rng);
        }
        if (plan.clip) {
          count = std::min<std::uint64_t>(count, *plan.clip);
        }
        totals[i] += count;
      }
    }
    return {totals[0], totals[1]};
  }

 private:
  Eigen::Matrix4d root_;
  std::array<CounterPlan, 2> plans_;
  std::uint64_t modes_;
};

/// Unbounded counters: the summed intensities over M modes are diagonal blocks
/// of a Wishart matrix, drawn through the Bartlett decomposition.
class WishartSampler final : public Sampler {
 public:
  WishartSampler(const GaussianState& state, std::array<CounterPlan, 2> plans, std::uint64_t modes)
      : root_(amplitude_root(state)), plans_(plans), modes_(modes) {}

  CountRecord draw(Rng& rng) const override {
    std::normal_distribution<double> normal;
    Eigen::Matrix4d bartlett = Eigen::Matrix4d::Zero();
    for (int i = 0; i < 4; ++i) {
      const double dof = static_cast<double>(modes_ - static_cast<std::uint64_t>(i));
      bartlett(i, i) = std::sqrt(std::chi_squared_distribution<double>(dof)(rng));
      for (int j = 0; j < i; ++j) {
        bartlett(i, j) = normal(rng);
      }
    }
    const Eigen::Matrix4d factor = root_ * bartlett;
    std::array<std::uint64_t, 2> totals{0, 0};
    for (std::size_t i = 0; i < 2; ++i) {
      const auto& plan = plans_[i];
      if (!plan.used) {
        continue;
      }
      const auto row = static_cast<Eigen::Index>(2 * i);
      const double intensity = factor.row(row).squaredNorm() + factor.row(row + 1).squaredNorm();
      totals[i] = poisson(rng, plan.eta * intensity);
      if (plan.dark > 0.0) {
        totals[i] += std::negative_binomial_distribution<std::uint64_t>(
            modes_, 1.0 / (1.0 + plan.dark))(rng);
      }
    }
    return {totals[0], totals[1]};
  }

 private:
  Eigen::Matrix4d root_;
  std::array<CounterPlan, 2> plans_;
  std::uint64_t modes_;
};

/// Coefficients of 1 / Q(z) for a polynomial Q with Q(0) != 0.
std::vector<long double> reciprocal_series(const std::vector<long double>& q, std::size_t terms) {
  std::vector<long double> g(terms, 0.0L);
  for (std::size_t n = 0; n < terms; ++n) {
    long double acc = n == 0 ? 1.0L : 0.0L;
    for (std::size_t k = 1; k < q.size() && k <= n; ++k) {
      acc -= q[k] * g[n - k];
    }
    g[n] = acc / q[0];
  }
  return g;
}

std::vector<long double> multiply(const std::vector<long double>& a, const std::vector<long double>& b) {
  std::vector<long double> out(a.size() + b.size() - 1, 0.0L);
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) {
      out[i + j] += a[i] * b[j];
    }
  }
  return out;
}

/// Dark-count factor (1 + d) - d z of the per-mode generating function.
std::vector<long double> dark_factor(double dark) {
  return {1.0L + static_cast<long double>(dark), -static_cast<long double>(dark)};
}

struct Cell {
  std::uint32_t n1;
  std::uint32_t n2;
  double conditional;  ///< probability of this cell given none of the earlier cells
};

/// Finite resolution with a circular amplitude distribution: the clipped counts
/// of one mode take finitely many values, so an M-mode trial is a multinomial
/// draw over those cells.
class CellSampler final : public Sampler {
 public:
  CellSampler(const std::vector<std::array<long double, 3>>& cells, std::uint64_t modes)
      : modes_(modes) {
    long double remaining = 0.0L;
    for (const auto& c : cells) {
      remaining += c[2];
    }
    for (const auto& c : cells) {
      const long double p = remaining > 0.0L ? c[2] / remaining : 0.0L;
      cells_.push_back({static_cast<std::uint32_t>(c[0]), static_cast<std::uint32_t>(c[1]),
                        static_cast<double>(std::clamp(p, 0.0L, 1.0L))});
      remaining -= c[2];
    }
  }

  CountRecord draw(Rng& rng) const override {
    std::uint64_t left = modes_;
    CountRecord record;
    for (std::size_t c = 0; c < cells_.size() && left > 0; ++c) {
      const auto& cell = cells_[c];
      const std::uint64_t hits =
          c + 1 == cells_.size() ? left
                                 : std::binomial_distribution<std::uint64_t>(left, cell.conditional)(rng);
      record.n1 += hits * cell.n1;
      record.n2 += hits * cell.n2;
      left -= hits;
    }
    return record;
  }

 private:
  std::vector<Cell> cells_;
  std::uint64_t modes_;
};

struct CircularForm {
  long double intensity1;
  long double intensity2;
  long double cross;  ///< squared magnitude of the intensity cross-moment
};

std::optional<CircularForm> circular_form(const GaussianState& s) {
  const double scale = 1.0 + s.n().cwiseAbs().maxCoeff() + s.m().cwiseAbs().maxCoeff();
  const double tol = 1e-12 * scale;
  const ModeIndex a = kIdlerOutput;
  const ModeIndex b = kReturnOutput;
  const bool no_pairing = s.m().cwiseAbs().maxCoeff() <= tol;
  const bool cross_pairing_only = std::abs(s.n(a, b)) <= tol && std::abs(s.m(a, a)) <= tol &&
                                  std::abs(s.m(b, b)) <= tol;
  if (!no_pairing && !cross_pairing_only) {
    return std::nullopt;
  }
  // With pairing only across modes, (alpha_1, conj(alpha_2)) is circular.
  const double cross = no_pairing ? std::norm(s.n(a, b)) : std::norm(s.m(a, b));
  return CircularForm{mean_photon(s, a), mean_photon(s, b), cross};
}

/// Probabilities of clipped counts for a single counter: thermal light of mean
/// `a` plus dark counts, clipped at K.
std::vector<long double> clipped_marginal(long double a, const CounterPlan& plan) {
  const std::vector<long double> light{1.0L + a, -a};
  const auto q = multiply(light, dark_factor(plan.dark));
  const std::uint32_t k = *plan.clip;
  auto g = reciprocal_series(q, k);
  long double below = 0.0L;
  for (const auto p : g) {
    below += p;
  }
  g.push_back(std::max(0.0L, 1.0L - below));
  for (auto& p : g) {
    p = std::max(0.0L, p);
  }
  return g;
}

std::vector<std::array<long double, 3>> build_cells(const CircularForm& form,
                                                    const std::array<CounterPlan, 2>& plans) {
  const long double a = plans[0].eta * form.intensity1;
  const long double b = plans[1].eta * form.intensity2;
  std::vector<std::array<long double, 3>> cells;
  if (!plans[1].used) {
    const auto pmf = clipped_marginal(a, plans[0]);
    for (std::size_t n = 0; n < pmf.size(); ++n) {
      cells.push_back({static_cast<long double>(n), 0.0L, pmf[n]});
    }
    return cells;
  }
  if (!plans[0].used) {
    const auto pmf = clipped_marginal(b, plans[1]);
    for (std::size_t n = 0; n < pmf.size(); ++n) {
      cells.push_back({0.0L, static_cast<long double>(n), pmf[n]});
    }
    return cells;
  }

  const long double c = form.cross * plans[0].eta * plans[1].eta;
  // Q(z1, z2) = P(z1, z2) L1(z1) L2(z2); P is bilinear, each L_i linear.
  const std::array<std::array<long double, 2>, 2> bilinear{
      {{(1.0L + a) * (1.0L + b) - c, c - b * (1.0L + a)},
       {c - a * (1.0L + b), a * b - c}}};
  const auto l1 = dark_factor(plans[0].dark);
  const auto l2 = dark_factor(plans[1].dark);
  std::array<std::array<long double, 3>, 3> q{};
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      for (int u = 0; u < 2; ++u) {
        for (int v = 0; v < 2; ++v) {
          q[i + u][j + v] += bilinear[i][j] * l1[u] * l2[v];
        }
      }
    }
  }

  const std::uint32_t k1 = *plans[0].clip;
  const std::uint32_t k2 = *plans[1].clip;
  std::vector<std::vector<long double>> joint(k1, std::vector<long double>(k2, 0.0L));
  for (std::uint32_t x = 0; x < k1; ++x) {
    for (std::uint32_t y = 0; y < k2; ++y) {
      long double acc = (x == 0 && y == 0) ? 1.0L : 0.0L;
      for (std::uint32_t i = 0; i <= std::min<std::uint32_t>(2, x); ++i) {
        for (std::uint32_t j = 0; j <= std::min<std::uint32_t>(2, y); ++j) {
          if (i != 0 || j != 0) {
            acc -= q[i][j] * joint[x - i][y - j];
          }
        }
      }
      joint[x][y] = acc / q[0][0];
    }
  }

  const auto m1 = clipped_marginal(a, plans[0]);
  const auto m2 = clipped_marginal(b, plans[1]);
  long double assigned = 0.0L;
  auto add = [&](std::uint32_t x, std::uint32_t y, long double p) {
    p = std::max(0.0L, p);
    assigned += p;
    cells.push_back({static_cast<long double>(x), static_cast<long double>(y), p});
  };
  for (std::uint32_t x = 0; x < k1; ++x) {
    long double row = 0.0L;
    for (std::uint32_t y = 0; y < k2; ++y) {
      add(x, y, joint[x][y]);
      row += joint[x][y];
    }
    add(x, k2, m1[x] - row);
  }
  for (std::uint32_t y = 0; y < k2; ++y) {
    long double column = 0.0L;
    for (std::uint32_t x = 0; x < k1; ++x) {
      column += joint[x][y];
    }
    add(k1, y, m2[y] - column);
  }
  add(k1, k2, 1.0L - assigned);
  return cells;
}

bool all_used_clipped(const std::array<CounterPlan, 2>& plans, bool clipped) {
  for (const auto& plan : plans) {
    if (plan.used && plan.clip.has_value() != clipped) {
      return false;
    }
  }
  return true;
}

void check_budget(const SamplerSpec& spec, std::uint64_t trials) {
  if (spec.modes_per_trial > spec.max_mode_samples / std::max<std::uint64_t>(trials, 1)) {
    throw BudgetExceeded("per-mode sampling of " + std::to_string(trials) + " trials x " +
                         std::to_string(spec.modes_per_trial) + " modes exceeds the cap of " +
                         std::to_string(spec.max_mode_samples) + " mode samples");
  }
}

std::unique_ptr<Sampler> make_sampler(const SamplerSpec& spec, const GaussianState& state,
                                      const std::array<CounterPlan, 2>& plans,
                                      std::uint64_t trials) {
  if (spec.method == SamplingMethod::automatic) {
    if (all_used_clipped(plans, false) && spec.modes_per_trial >= kWishartMinModes) {
      return std::make_unique<WishartSampler>(state, plans, spec.modes_per_trial);
    }
    if (all_used_clipped(plans, true)) {
      if (const auto form = circular_form(state)) {
        return std::make_unique<CellSampler>(build_cells(*form, plans), spec.modes_per_trial);
      }
    }
  }
  check_budget(spec, trials);
  return std::make_unique<PerModeSampler>(state, plans, spec.modes_per_trial);
}

struct Moments {
  double mean = 0.0;
  double variance = 0.0;
};

Moments statistic_moments(const std::vector<CountRecord>& records, const DecisionRule& rule) {
  double mean = 0.0;
  double m2 = 0.0;
  std::size_t n = 0;
  for (const auto& r : records) {
    const double x = rule.statistic(r);
    ++n;
    const double delta = x - mean;
    mean += delta / static_cast<double>(n);
    m2 += delta * (x - mean);
  }
  return {mean, n > 1 ? m2 / static_cast<double>(n - 1) : 0.0};
}

CounterSelection selection_for(const Weights& w) { return {w.w1 != 0.0, w.w2 != 0.0}; }

}  // namespace

void SamplerSpec::validate() const {
  if (modes_per_trial < 1) {
    throw std::domain_error("modes_per_trial must be at least 1");
  }
  if (trials < 1) {
    throw std::domain_error("trials must be at least 1");
  }
  for (const auto& det : detectors) {
    det.validate();
  }
  for (const auto h : {Hypothesis::h0, Hypothesis::h1}) {
    const auto& state = states[h];
    if (state.mode_count() != 2) {
      throw std::domain_error("sampler expects two-mode mixer outputs");
    }
    if (!is_p_representable(state)) {
      throw NonClassicalState(std::string("state under ") + (h == Hypothesis::h0 ? "H0" : "H1") +
                              " has no classical P-function; the sampling oracle does not apply");
    }
  }
}

std::vector<CountRecord> sample_counts(const SamplerSpec& spec, Hypothesis hypothesis,
                                       CounterSelection counters) {
  spec.validate();
  const auto plans = make_plans(spec, counters);
  const auto sampler = make_sampler(spec, spec.states[hypothesis], plans, spec.trials);
  std::vector<CountRecord> records(spec.trials);
  const std::uint64_t chunks = (spec.trials + kChunkTrials - 1) / kChunkTrials;
  parallel_for(chunks, spec.threads, [&](std::size_t chunk) {
    Rng rng(chunk_seed(spec.seed, hypothesis, chunk));
    const std::uint64_t begin = chunk * kChunkTrials;
    const std::uint64_t end = std::min(spec.trials, begin + kChunkTrials);
    for (std::uint64_t t = begin; t < end; ++t) {
      records[t] = sampler->draw(rng);
    }
  });
  return records;
}

double DecisionRule::statistic(const CountRecord& record) const {
  return weights.w1 * static_cast<double>(record.n1) - weights.w2 * static_cast<double>(record.n2);
}

Hypothesis DecisionRule::decide(const CountRecord& record) const {
  const double s = statistic(record);
  const bool above = h1_above ? s > threshold : s < threshold;
  return above ? Hypothesis::h1 : Hypothesis::h0;
}

Weights counter_weights(Counter which) {
  return which == Counter::pc1 ? Weights{1.0, 0.0} : Weights{0.0, 1.0};
}

DecisionRule analytic_rule(const DetectionStatistics& stats, Weights weights, std::uint64_t modes) {
  return {weights, ml_threshold(stats, static_cast<double>(modes)),
          stats.mu(Hypothesis::h1) >= stats.mu(Hypothesis::h0)};
}

DecisionRule calibrated_rule(const SamplerSpec& spec, Weights weights,
                             std::uint64_t calibration_trials) {
  SamplerSpec calibration = spec;
  calibration.trials = calibration_trials;
  calibration.seed = splitmix64(spec.seed ^ kCalibrationStream);
  const DecisionRule probe{weights, 0.0, true};
  const auto sel = selection_for(weights);
  const auto h0 = statistic_moments(sample_counts(calibration, Hypothesis::h0, sel), probe);
  const auto h1 = statistic_moments(sample_counts(calibration, Hypothesis::h1, sel), probe);
  const auto modes = static_cast<double>(spec.modes_per_trial);
  const DetectionStatistics per_mode(h0.mean / modes, h1.mean / modes, h0.variance / modes,
                                     h1.variance / modes);
  return analytic_rule(per_mode, weights, spec.modes_per_trial);
}

EmpiricalResult empirical_error_probability(const SamplerSpec& spec, const DecisionRule& rule) {
  if (spec.trials < 1) {
    throw std::domain_error("empirical error probability needs at least one trial");
  }
  const auto sel = selection_for(rule.weights);
  std::uint64_t errors = 0;
  for (const auto h : {Hypothesis::h0, Hypothesis::h1}) {
    SamplerSpec share = spec;
    share.trials = h == Hypothesis::h0 ? (spec.trials + 1) / 2 : spec.trials / 2;
    if (share.trials == 0) {
      continue;
    }
    for (const auto& record : sample_counts(share, h, sel)) {
      errors += rule.decide(record) != h ? 1 : 0;
    }
  }
  const double p = static_cast<double>(errors) / static_cast<double>(spec.trials);
  return {p, std::sqrt(p * (1.0 - p) / static_cast<double>(spec.trials)), spec.trials};
}

}  // namespace qi
