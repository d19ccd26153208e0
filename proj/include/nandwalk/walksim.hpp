#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "nandwalk/formula.hpp"
#include "nandwalk/hamiltonian.hpp"
#include "nandwalk/szegedy.hpp"

namespace nandwalk {

enum class Mode { kExact, kSampled };

std::string to_string(Mode mode);
Mode parse_mode(const std::string& text);

inline constexpr double kGeneralCounterConstant = 100.0;
inline constexpr std::size_t kBalancedCounterConstant = 320;
inline constexpr double kDecisionThreshold = 0.225;
inline constexpr double kErrorBudget = 0.2;
inline constexpr std::size_t kDefaultReps = 21;

struct PhaseEstimationConfig {
  std::size_t counter_size = 0;  // T, even
  double precision = 0.0;        // delta_p
  double error_budget = kErrorBudget;
  std::size_t reps = kDefaultReps;
  std::uint64_t seed = 0;
  Mode mode = Mode::kExact;
  double threshold = kDecisionThreshold;
  bool balanced_rule = false;  // T = 320 floor(sqrt N)
  double counter_constant = kGeneralCounterConstant;
  double nh = 1.0;
  // Compute the full outcome distribution; when false only the masses at 0
  // and T/2 are produced (enough for an exact-mode decision).
  bool full_distribution = true;

  void validate() const;
};

// Balanced formulas use T = 320 floor(sqrt N); everything else uses the next
// even integer >= C nh sigma_minus sqrt(sigma_plus) with C = 100.
PhaseEstimationConfig default_config(const FormulaStats& stats, double nh);

struct RunResult {
  std::size_t counter_size = 0;
  std::vector<double> distribution;  // P(outcome = k), k = 0..T-1 (if requested)
  double mass_zero = 0.0;            // P(0)
  double mass_half = 0.0;            // P(T/2)
  double acceptance = 0.0;           // P(0) + P(T/2)
  int decision = 0;
  std::vector<std::size_t> samples;  // sampled mode only
  double zero_fraction = 0.0;        // sampled mode only
  std::size_t max_queries = 0;       // T - 1 oracle calls on the longest branch
  double mean_queries = 0.0;         // averaged over counter branches
  double final_norm = 0.0;           // ||U^(T-1) psi_0||
  double wall_seconds = 0.0;
};

// Phase estimation of -iU, U = O_x U_{0^N}, started on |r'', r'>. The counter
// register is never materialised: since -iU is unitary the outcome
// distribution only depends on c(m) = <psi_0|(-iU)^m|psi_0>, which is read
// off one walk step at a time.
RunResult run_phase_estimation(const CoinedWalk& walk, const InputAssignment& x,
                               const PhaseEstimationConfig& cfg);

std::size_t count_queries(const RunResult& result);

struct EvaluatorOptions {
  double beta = kDefaultBeta;
  Mode mode = Mode::kExact;
  std::size_t reps = kDefaultReps;
  std::uint64_t seed = 0;
  std::optional<std::size_t> counter_size;  // override T
  bool full_distribution = true;
};

// Precomputes everything that does not depend on the input: the tree, H_0,
// its quantisation, and the phase-estimation configuration.
class Evaluator {
 public:
  explicit Evaluator(const FormulaAst& ast, EvaluatorOptions options = {});

  const GateTree& tree() const noexcept { return tree_; }
  const FormulaStats& stats() const noexcept { return stats_; }
  const WeightedAdjacency& h0() const noexcept { return h0_; }
  const QuantizedWalk& quantized() const noexcept { return quantized_; }
  const PhaseEstimationConfig& config() const noexcept { return config_; }

  RunResult run(const InputAssignment& x) const;
  int evaluate(const InputAssignment& x) const { return run(x).decision; }

 private:
  FormulaStats stats_;
  GateTree tree_;
  WeightedAdjacency h0_;
  QuantizedWalk quantized_;
  PhaseEstimationConfig config_;
};

int evaluate(const FormulaAst& ast, const InputAssignment& x,
             const EvaluatorOptions& options = {});

}  // namespace nandwalk
