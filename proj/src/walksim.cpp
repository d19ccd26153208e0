#include "nandwalk/walksim.hpp"

#include <chrono>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "nandwalk/rng.hpp"

namespace nandwalk {

std::string to_string(Mode mode) {
  return mode == Mode::kExact ? "exact" : "sampled";
}

Mode parse_mode(const std::string& text) {
  if (text == "exact") return Mode::kExact;
  if (text == "sampled") return Mode::kSampled;
  throw std::invalid_argument("mode must be 'exact' or 'sampled', got '" + text + "'");
}

void PhaseEstimationConfig::validate() const {
  if (counter_size < 2 || counter_size % 2 != 0) {
    throw std::invalid_argument("counter size T must be even and >= 2, got " +
                                std::to_string(counter_size));
  }
  if (!(precision > 0.0)) throw std::invalid_argument("precision must be positive");
  if (!(error_budget > 0.0 && error_budget < 0.25)) {
    throw std::invalid_argument("error budget must lie in (0, 1/4)");
  }
  if (mode == Mode::kSampled && reps == 0) {
    throw std::invalid_argument("sampled mode needs at least one repetition");
  }
}

PhaseEstimationConfig default_config(const FormulaStats& stats, double nh) {
  PhaseEstimationConfig cfg;
  cfg.nh = nh;
  const double root_plus = std::sqrt(stats.sigma_plus);
  cfg.precision = 1.0 / (10.0 * stats.sigma_minus * root_plus);
  cfg.error_budget = kErrorBudget;
  if (stats.perfectly_balanced) {
    cfg.balanced_rule = true;
    cfg.counter_constant = static_cast<double>(kBalancedCounterConstant);
    const auto root_n =
        static_cast<std::size_t>(std::floor(std::sqrt(static_cast<double>(stats.leaf_count))));
    cfg.counter_size = kBalancedCounterConstant * root_n;
  } else {
    cfg.counter_constant = kGeneralCounterConstant;
    const double target = kGeneralCounterConstant * nh * stats.sigma_minus * root_plus;
    auto t = static_cast<std::size_t>(std::ceil(target - 1e-9));
    if (t % 2) ++t;
    cfg.counter_size = std::max<std::size_t>(t, 2);
  }
  return cfg;
}

namespace {

// p(k) = (1/T^2) [T + 2 Re sum_{m=1}^{T-1} (T - m) c(m) e^{-2 pi i m k / T}]
double outcome_probability(std::span<const cplx> c, std::span<const cplx> twiddle,
                           std::size_t k) {
  const std::size_t t = c.size();
  cplx acc = 0.0;
  std::size_t phase = 0;
  for (std::size_t m = 1; m < t; ++m) {
    phase += k;
    if (phase >= t) phase -= t;
    acc += static_cast<double>(t - m) * c[m] * twiddle[phase];
  }
  const double td = static_cast<double>(t);
  return (td + 2.0 * acc.real()) / (td * td);
}

std::size_t draw(Rng& rng, std::span<const double> distribution) {
  const double u = rng.uniform();
  double cumulative = 0.0;
  for (std::size_t k = 0; k < distribution.size(); ++k) {
    cumulative += distribution[k];
    if (u < cumulative) return k;
  }
  // Rounding left a sliver above the total: return the last outcome with mass.
  for (std::size_t k = distribution.size(); k-- > 0;) {
    if (distribution[k] > 0.0) return k;
  }
  return 0;
}

}  // namespace

RunResult run_phase_estimation(const CoinedWalk& walk, const InputAssignment& x,
                               const PhaseEstimationConfig& cfg) {
  cfg.validate();
  const auto start = std::chrono::steady_clock::now();
  const std::size_t t = cfg.counter_size;
  const std::size_t d = walk.dimension();
  const std::size_t e0 = walk.space().index(GateTree::kTailOuter, GateTree::kTailInner);

  // c(m) = <psi_0| (-iU)^m |psi_0>
  std::vector<cplx> c(t);
  const std::vector<double> sign = walk.oracle_signs(x);
  std::vector<cplx> state(d), scratch(d);
  state[e0] = 1.0;
  c[0] = 1.0;
  const cplx minus_i{0.0, -1.0};
  cplx phase = 1.0;
  for (std::size_t m = 1; m < t; ++m) {
    walk.step(state, scratch, sign);
    state.swap(scratch);
    phase *= minus_i;
    c[m] = phase * state[e0];
  }
  double norm_sq = 0.0;
  for (const auto& a : state) norm_sq += std::norm(a);

  std::vector<cplx> twiddle(t);
  for (std::size_t j = 0; j < t; ++j) {
    const double angle = -2.0 * std::numbers::pi * static_cast<double>(j) /
                         static_cast<double>(t);
    twiddle[j] = {std::cos(angle), std::sin(angle)};
  }

  RunResult r;
  r.counter_size = t;
  r.final_norm = std::sqrt(norm_sq);
  r.max_queries = t - 1;
  r.mean_queries = static_cast<double>(t - 1) / 2.0;
  const bool need_full = cfg.full_distribution || cfg.mode == Mode::kSampled;
  if (need_full) {
    r.distribution.resize(t);
    for (std::size_t k = 0; k < t; ++k) r.distribution[k] = outcome_probability(c, twiddle, k);
    r.mass_zero = r.distribution[0];
    r.mass_half = r.distribution[t / 2];
  } else {
    r.mass_zero = outcome_probability(c, twiddle, 0);
    r.mass_half = outcome_probability(c, twiddle, t / 2);
  }
  r.acceptance = r.mass_zero + r.mass_half;

  if (cfg.mode == Mode::kExact) {
    r.decision = r.acceptance >= cfg.threshold ? 0 : 1;
  } else {
    Rng rng(cfg.seed);
    std::size_t hits = 0;
    r.samples.reserve(cfg.reps);
    for (std::size_t i = 0; i < cfg.reps; ++i) {
      const std::size_t k = draw(rng, r.distribution);
      r.samples.push_back(k);
      if (k == 0 || k == t / 2) ++hits;
    }
    r.zero_fraction = static_cast<double>(hits) / static_cast<double>(cfg.reps);
    r.decision = r.zero_fraction >= cfg.threshold ? 0 : 1;
  }
  r.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

std::size_t count_queries(const RunResult& result) { return result.max_queries; }

Evaluator::Evaluator(const FormulaAst& ast, EvaluatorOptions options)
    : stats_(compute_stats(ast)),
      tree_(build_tree_with_tail(ast)),
      h0_(edge_weights(tree_, options.beta)),
      quantized_(quantize(h0_, tree_)),
      config_(default_config(stats_, quantized_.nh)) {
  config_.mode = options.mode;
  config_.reps = options.reps;
  config_.seed = options.seed;
  config_.full_distribution = options.full_distribution;
  if (options.counter_size) config_.counter_size = *options.counter_size;
  config_.validate();
}

RunResult Evaluator::run(const InputAssignment& x) const {
  if (x.size() != tree_.num_vars) {
    throw DimensionError("input has " + std::to_string(x.size()) +
                         " bits but the formula has " + std::to_string(tree_.num_vars) +
                         " variables");
  }
  return run_phase_estimation(quantized_.walk, x, config_);
}

int evaluate(const FormulaAst& ast, const InputAssignment& x,
             const EvaluatorOptions& options) {
  return Evaluator(ast, options).evaluate(x);
}

}  // namespace nandwalk
