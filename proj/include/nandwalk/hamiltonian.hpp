#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "nandwalk/formula.hpp"

namespace nandwalk {

enum class VertexRole { kTailOuter, kTailInner, kRoot, kGate, kLeaf };

// The formula tree T(phi) with the two-vertex tail r'' - r' - r attached
// below the root. Vertices are numbered r'' = 0, r' = 1, r = 2, then the
// remaining formula nodes in preorder. A bare-variable formula is a single
// leaf that is also the root.
struct GateTree {
  static constexpr std::size_t kTailOuter = 0;  // r''
  static constexpr std::size_t kTailInner = 1;  // r'
  static constexpr std::size_t kRoot = 2;       // r

  std::vector<VertexRole> role;
  std::vector<std::ptrdiff_t> parent;  // -1 for r''
  std::vector<std::vector<std::size_t>> children;
  std::vector<std::size_t> subformula_size;  // s_v; s_r = s_r' = s_r'' = N
  std::vector<std::uint32_t> var;             // variable index for leaves, else 0
  std::vector<std::size_t> leaves;            // leaf vertices in preorder
  std::size_t leaf_count = 0;                 // N
  std::uint32_t num_vars = 0;                 // V

  std::size_t vertex_count() const noexcept { return role.size(); }
  bool is_leaf(std::size_t v) const noexcept { return var[v] != 0; }

  // NAND value of every vertex; r' holds 1 - phi(x) and r'' holds phi(x).
  std::vector<int> evaluate(const InputAssignment& x) const;
};

GateTree build_tree_with_tail(const FormulaAst& ast);

struct WeightedEdge {
  std::size_t u = 0;  // u < v
  std::size_t v = 0;
  double weight = 0.0;
};

// Symmetric nonnegative weighted adjacency matrix supported on tree edges,
// stored once per undirected edge (sorted by (u, v)).
class WeightedAdjacency {
 public:
  WeightedAdjacency(std::size_t vertex_count, std::vector<WeightedEdge> edges,
                    double beta);

  std::size_t vertex_count() const noexcept { return n_; }
  const std::vector<WeightedEdge>& edges() const noexcept { return edges_; }
  double beta() const noexcept { return beta_; }
  // h_{r'' r'}.
  double tail_weight() const;

  // 0 when (u, v) is not an edge.
  double weight(std::size_t u, std::size_t v) const;
  // Neighbours of v with their weights (zero-weight edges included).
  std::span<const std::size_t> neighbors(std::size_t v) const;
  std::span<const double> neighbor_weights(std::size_t v) const;

  void multiply(std::span<const double> in, std::span<double> out) const;
  Eigen::MatrixXd to_dense() const;

  // Copy with one edge weight multiplied by `factor`; used to build negative
  // controls in verification runs.
  WeightedAdjacency with_scaled_edge(std::size_t u, std::size_t v,
                                     double factor) const;
  WeightedAdjacency with_edge_weight(std::size_t u, std::size_t v,
                                     double weight) const;

 private:
  void build_index();

  std::size_t n_;
  std::vector<WeightedEdge> edges_;
  double beta_;
  std::vector<std::size_t> offsets_;
  std::vector<std::size_t> nbr_;
  std::vector<double> nbr_weight_;
};

inline constexpr double kDefaultBeta = 0.25;
inline constexpr std::size_t kDefaultDenseThreshold = 4096;

// Max over root-to-leaf paths (starting at r) of sum s_w^(-2 beta).
double tree_sigma_minus(const GateTree& tree, double beta);
// Max over root-to-leaf paths of sum s_w.
double tree_sigma_plus(const GateTree& tree);

// H for the all-zero input: h_pv = s_v^beta / s_p^(1/2 - beta) on every tree
// edge including r' - r, and h_{r''r'} = 1 / (sqrt(sigma) N^(1/2 - beta)).
WeightedAdjacency edge_weights(const GateTree& tree, double beta = kDefaultBeta);

// H(x): H_0 with the parent edge of every leaf whose bit is 1 set to zero.
WeightedAdjacency apply_input(const WeightedAdjacency& h0, const GateTree& tree,
                              const InputAssignment& x);

// Max row 1-norm; always >= ||H||.
double norm_upper_bound(const WeightedAdjacency& h);
// Power iteration on H^2 from the all-ones vector; estimates ||H|| from below.
double norm_power_estimate(const WeightedAdjacency& h, int max_iterations = 100000,
                           double tolerance = 1e-14);

// "row col weight" lines, 0-indexed, both orientations of each nonzero edge,
// 17 significant digits, preceded by a "# vertices n" comment.
void write_coordinate(std::ostream& os, const WeightedAdjacency& h);

}  // namespace nandwalk
