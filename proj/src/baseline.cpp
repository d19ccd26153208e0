#include "nandwalk/baseline.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace nandwalk {

namespace {

int alpha_beta(const NandNode& node, const InputAssignment& x, Rng& rng,
               std::size_t& queries) {
  if (node.is_leaf()) {
    ++queries;
    return x.at(node.var);
  }
  const std::size_t k = node.children.size();
  std::vector<std::size_t> order(k);
  std::iota(order.begin(), order.end(), std::size_t{0});
  for (std::size_t i = k; i > 1; --i) {
    std::swap(order[i - 1], order[rng.below(i)]);
  }
  for (auto i : order) {
    if (alpha_beta(node.children[i], x, rng, queries) == 0) return 1;
  }
  return 0;
}

}  // namespace

AlphaBetaResult alpha_beta_evaluate(const FormulaAst& ast, const InputAssignment& x,
                                    Rng& rng) {
  if (x.size() != ast.num_vars()) {
    throw DimensionError("input has " + std::to_string(x.size()) +
                         " bits but the formula has " + std::to_string(ast.num_vars()) +
                         " variables");
  }
  AlphaBetaResult r;
  r.value = alpha_beta(ast.root(), x, rng, r.queries);
  return r;
}

AlphaBetaResult alpha_beta_evaluate(const FormulaAst& ast, const InputAssignment& x,
                                    std::uint64_t seed) {
  Rng rng(seed);
  return alpha_beta_evaluate(ast, x, rng);
}

namespace {

using Table = std::vector<std::uint64_t>;

Table variable_table(std::uint32_t var, std::size_t words, std::size_t codes) {
  static constexpr std::uint64_t kPatterns[6] = {
      0xAAAAAAAAAAAAAAAAull, 0xCCCCCCCCCCCCCCCCull, 0xF0F0F0F0F0F0F0F0ull,
      0xFF00FF00FF00FF00ull, 0xFFFF0000FFFF0000ull, 0xFFFFFFFF00000000ull};
  Table t(words);
  const std::uint32_t bit = var - 1;
  for (std::size_t w = 0; w < words; ++w) {
    if (bit < 6) {
      t[w] = kPatterns[bit];
    } else {
      t[w] = ((static_cast<std::uint64_t>(w) << 6) >> bit) & 1u ? ~0ull : 0ull;
    }
  }
  if (codes < 64) t[0] &= (1ull << codes) - 1;
  return t;
}

Table table_of(const NandNode& node, std::size_t words, std::size_t codes) {
  if (node.is_leaf()) return variable_table(node.var, words, codes);
  Table acc(words, ~0ull);
  for (const auto& c : node.children) {
    Table ct = table_of(c, words, codes);
    for (std::size_t w = 0; w < words; ++w) acc[w] &= ct[w];
  }
  for (auto& w : acc) w = ~w;
  if (codes < 64) acc[0] &= (1ull << codes) - 1;
  return acc;
}

}  // namespace

std::vector<std::uint8_t> brute_force_truth_table(const FormulaAst& ast) {
  const std::uint32_t v = ast.num_vars();
  if (v > kMaxTruthTableVars) {
    throw SizeError("truth table over " + std::to_string(v) + " variables exceeds the limit of " +
                    std::to_string(kMaxTruthTableVars));
  }
  const std::size_t codes = std::size_t{1} << v;
  const std::size_t words = (codes + 63) / 64;
  const Table t = table_of(ast.root(), words, codes);
  std::vector<std::uint8_t> out(codes);
  for (std::size_t c = 0; c < codes; ++c) out[c] = (t[c >> 6] >> (c & 63)) & 1u;
  return out;
}

namespace {

void assign_hard(const NandNode& node, int value, Rng& rng,
                 std::vector<std::uint8_t>& bits, std::vector<bool>& seen) {
  if (node.is_leaf()) {
    if (seen[node.var - 1]) {
      throw std::invalid_argument("hard_input needs each variable on one leaf");
    }
    seen[node.var - 1] = true;
    bits[node.var - 1] = static_cast<std::uint8_t>(value);
    return;
  }
  const std::size_t k = node.children.size();
  const std::size_t zero_child = value == 1 ? rng.below(k) : k;
  for (std::size_t i = 0; i < k; ++i) {
    assign_hard(node.children[i], i == zero_child ? 0 : 1, rng, bits, seen);
  }
}

}  // namespace

InputAssignment hard_input(const FormulaAst& ast, Rng& rng) {
  std::vector<std::uint8_t> bits(ast.num_vars(), 0);
  std::vector<bool> seen(ast.num_vars(), false);
  const int root = rng.coin(0.5) ? 1 : 0;
  assign_hard(ast.root(), root, rng, bits, seen);
  return InputAssignment(std::move(bits));
}

LogLogFit fit_loglog(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw std::invalid_argument("log-log fit needs at least two paired points");
  }
  const auto n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0 && y[i] > 0.0)) {
      throw std::invalid_argument("log-log fit needs positive data");
    }
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    syy += ly * ly;
  }
  const double vx = sxx - sx * sx / n;
  const double vy = syy - sy * sy / n;
  const double cxy = sxy - sx * sy / n;
  if (vx <= 0.0) throw std::invalid_argument("log-log fit needs distinct x values");
  LogLogFit f;
  f.slope = cxy / vx;
  f.intercept = (sy - f.slope * sx) / n;
  f.r_squared = vy > 0.0 ? cxy * cxy / (vx * vy) : 1.0;
  return f;
}

double mean_alpha_beta_queries(const FormulaAst& ast, std::size_t trials,
                               std::uint64_t seed) {
  if (trials == 0) throw std::invalid_argument("need at least one trial");
  double total = 0.0;
  for (std::size_t i = 0; i < trials; ++i) {
    Rng rng(seed + i);
    const InputAssignment x = hard_input(ast, rng);
    total += static_cast<double>(alpha_beta_evaluate(ast, x, rng).queries);
  }
  return total / static_cast<double>(trials);
}

double alpha_beta_branching_factor() { return (1.0 + std::sqrt(33.0)) / 4.0; }

}  // namespace nandwalk
