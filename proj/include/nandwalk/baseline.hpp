#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "nandwalk/formula.hpp"
#include "nandwalk/rng.hpp"

namespace nandwalk {

struct AlphaBetaResult {
  int value = 0;
  std::size_t queries = 0;  // leaves read
};

// Zero-error randomized evaluation: children of each gate are visited in a
// uniformly random order and a gate stops at its first 0-valued child.
AlphaBetaResult alpha_beta_evaluate(const FormulaAst& ast, const InputAssignment& x,
                                    std::uint64_t seed);
AlphaBetaResult alpha_beta_evaluate(const FormulaAst& ast, const InputAssignment& x,
                                    Rng& rng);

inline constexpr std::uint32_t kMaxTruthTableVars = 20;

// phi(x) for every x, indexed by code (bit i of the index is x_{i+1}).
// Evaluated word-parallel over 64 inputs at a time. Throws SizeError when
// V > kMaxTruthTableVars.
std::vector<std::uint8_t> brute_force_truth_table(const FormulaAst& ast);

// Input under which every 1-valued gate has exactly one 0-valued child (chosen
// at random) and every 0-valued gate has only 1-valued children. The root
// value is a fair coin. Requires distinct variables on the leaves.
InputAssignment hard_input(const FormulaAst& ast, Rng& rng);

struct LogLogFit {
  double slope = 0.0;
  double intercept = 0.0;  // log y = intercept + slope log x
  double r_squared = 0.0;
};

// Least squares on (log x, log y).
LogLogFit fit_loglog(std::span<const double> x, std::span<const double> y);

// Mean alpha-beta queries over `trials` hard inputs, trial i seeded seed + i.
double mean_alpha_beta_queries(const FormulaAst& ast, std::size_t trials,
                               std::uint64_t seed);

// (1 + sqrt 33) / 4, the per-level growth of the expected cost on balanced
// binary trees.
double alpha_beta_branching_factor();

}  // namespace nandwalk
