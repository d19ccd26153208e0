#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace nandwalk {

// Raised for malformed formula text. `position` is the 0-based byte offset
// of the offending token.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t position)
      : std::runtime_error(what + " at position " + std::to_string(position)),
        position_(position) {}
  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

// Input length or variable index out of range.
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Problem too large for the requested (dense or exhaustive) treatment.
class SizeError : public std::length_error {
 public:
  using std::length_error::length_error;
};

// ---------------------------------------------------------------------------
// Mixed-gate formulas, as written by users before NAND rewriting.

enum class GateKind { kVar, kNand, kAnd, kOr, kNot };

struct MixedNode {
  GateKind kind = GateKind::kVar;
  std::uint32_t var = 0;  // meaningful for kVar only
  std::vector<MixedNode> children;

  static MixedNode variable(std::uint32_t index);
  static MixedNode gate(GateKind kind, std::vector<MixedNode> children);
};

// ---------------------------------------------------------------------------
// NAND formulas. A node with no children is a leaf carrying a variable index
// >= 1; every other node is a NAND gate over its children (1-ary NAND is NOT).

struct NandNode {
  std::uint32_t var = 0;
  std::vector<NandNode> children;

  bool is_leaf() const noexcept { return children.empty(); }

  static NandNode leaf(std::uint32_t index);
  static NandNode nand(std::vector<NandNode> children);
};

class FormulaAst {
 public:
  // `num_vars` defaults to the largest leaf index.
  explicit FormulaAst(NandNode root, std::uint32_t num_vars = 0);

  const NandNode& root() const noexcept { return root_; }
  // V: inputs are bit vectors of this length (variable indices 1..V).
  std::uint32_t num_vars() const noexcept { return num_vars_; }
  // N: leaf count with multiplicity.
  std::size_t size() const noexcept { return size_; }
  // Edges on the longest root-to-leaf path.
  std::size_t depth() const noexcept { return depth_; }
  std::size_t max_fanin() const noexcept { return max_fanin_; }

  std::string to_string() const;

  friend bool operator==(const FormulaAst& a, const FormulaAst& b);

 private:
  NandNode root_;
  std::uint32_t num_vars_;
  std::size_t size_ = 0;
  std::size_t depth_ = 0;
  std::size_t max_fanin_ = 0;
};

bool operator==(const NandNode& a, const NandNode& b);

// Bit vector x_1..x_V, stored 0-based.
class InputAssignment {
 public:
  InputAssignment() = default;
  explicit InputAssignment(std::vector<std::uint8_t> bits);

  // "00010111" -> x_1 = 0, ..., x_8 = 1.
  static InputAssignment from_string(std::string_view bits);
  // Bit i of `code` becomes x_{i+1}.
  static InputAssignment from_index(std::uint64_t code, std::uint32_t num_vars);
  static InputAssignment zeros(std::uint32_t num_vars);

  std::uint32_t size() const noexcept {
    return static_cast<std::uint32_t>(bits_.size());
  }
  // 1-based access, bounds-checked.
  int at(std::uint32_t index) const;
  std::string to_string() const;

 private:
  std::vector<std::uint8_t> bits_;
};

struct FormulaStats {
  std::size_t leaf_count = 0;  // N
  std::size_t depth = 0;       // d_r
  // Subformula sizes s_v in preorder (root first).
  std::vector<std::size_t> subformula_sizes;
  // Input-independent path maxima: sum of 1/sqrt(s_w) and of s_w over
  // root-to-leaf paths, every vertex on the path counted.
  double sigma_minus = 0.0;
  double sigma_plus = 0.0;
  bool approx_balanced = false;
  bool perfectly_balanced = false;  // full binary, all leaves at one depth
};

// Grammar: expr := VAR | GATE '(' expr (',' expr)* ')' ; GATE in
// {NAND, AND, OR, NOT}; VAR := 'x' [1-9][0-9]*. Whitespace is ignored.
MixedNode parse_mixed(std::string_view text);
FormulaAst parse_formula(std::string_view text);

FormulaAst to_nand(const MixedNode& mixed);
int evaluate_mixed(const MixedNode& mixed, const InputAssignment& x);

int evaluate_classical(const FormulaAst& ast, const InputAssignment& x);
// Value of every node in preorder (root first).
std::vector<int> evaluate_all(const FormulaAst& ast, const InputAssignment& x);

FormulaStats compute_stats(const FormulaAst& ast);
// sigma_minus generalised to sum 1/s_w^(2 beta); beta = 1/4 gives the
// 1/sqrt(s_w) form above.
double sigma_minus_beta(const FormulaAst& ast, double beta);

FormulaAst expand_fanin(const FormulaAst& ast, std::size_t max_fanin);

// Removes NAND(NAND(y)) pairs and restructures so that every gate has fan-in
// at most two and depth <= (9 ln 2) k log2 N. Throws std::logic_error if the
// resulting formula violates either the depth or size bound.
FormulaAst rebalance(const FormulaAst& ast, int k);
// Restructure until depth <= budget (binary fan-in output). Exposed so the
// restructuring step can be exercised with tight budgets.
FormulaAst rebalance_to_depth(const FormulaAst& ast, std::size_t budget);
double rebalance_depth_bound(std::size_t n, int k);
double rebalance_size_bound(std::size_t n, int k);

enum class Family { kBalanced, kChain, kRandom };

struct FamilySpec {
  Family family = Family::kBalanced;
  std::size_t param = 0;  // n for balanced, N otherwise
  std::uint64_t seed = 0;

  // "balanced:3", "chain:8", "random:12" (seed supplied separately).
  static FamilySpec parse(std::string_view text, std::uint64_t seed = 0);
  std::string to_string() const;
};

inline constexpr std::size_t kMaxGeneratedLeaves = std::size_t{1} << 20;

FormulaAst generate(const FamilySpec& spec,
                    std::size_t max_leaves = kMaxGeneratedLeaves);
FormulaAst balanced(std::size_t n);
FormulaAst chain(std::size_t n_leaves);
FormulaAst random_formula(std::size_t n_leaves, std::uint64_t seed);

// True when every gate has fan-in 2 and all leaves share one depth.
bool is_perfectly_balanced(const FormulaAst& ast);

}  // namespace nandwalk
