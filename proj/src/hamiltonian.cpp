#include "nandwalk/hamiltonian.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

namespace nandwalk {

namespace {

void add_subtree(GateTree& t, const NandNode& node, std::ptrdiff_t parent) {
  const std::size_t id = t.role.size();
  t.role.push_back(parent == GateTree::kTailInner
                       ? VertexRole::kRoot
                       : (node.is_leaf() ? VertexRole::kLeaf : VertexRole::kGate));
  t.parent.push_back(parent);
  t.children.emplace_back();
  t.subformula_size.push_back(0);
  t.var.push_back(node.is_leaf() ? node.var : 0);
  if (parent >= 0) t.children[static_cast<std::size_t>(parent)].push_back(id);
  if (node.is_leaf()) {
    t.subformula_size[id] = 1;
    t.leaves.push_back(id);
    return;
  }
  std::size_t s = 0;
  for (const auto& c : node.children) {
    const std::size_t child = t.role.size();
    add_subtree(t, c, static_cast<std::ptrdiff_t>(id));
    s += t.subformula_size[child];
  }
  t.subformula_size[id] = s;
}

int eval_vertex(const GateTree& t, std::size_t v, const InputAssignment& x,
                std::vector<int>& out) {
  int value;
  if (t.is_leaf(v)) {
    value = x.at(t.var[v]);
  } else {
    int product = 1;
    for (auto c : t.children[v]) product *= eval_vertex(t, c, x, out);
    value = 1 - product;
  }
  out[v] = value;
  return value;
}

double path_max(const GateTree& t, std::size_t v, double exponent, bool inverse) {
  double best = 0.0;
  for (auto c : t.children[v]) best = std::max(best, path_max(t, c, exponent, inverse));
  const double s = static_cast<double>(t.subformula_size[v]);
  return best + (inverse ? std::pow(s, -exponent) : s);
}

}  // namespace

GateTree build_tree_with_tail(const FormulaAst& ast) {
  GateTree t;
  const std::size_t n = ast.size();
  t.role = {VertexRole::kTailOuter, VertexRole::kTailInner};
  t.parent = {-1, 0};
  t.children = {{1}, {}};
  t.subformula_size = {n, n};
  t.var = {0, 0};
  add_subtree(t, ast.root(), GateTree::kTailInner);
  t.leaf_count = n;
  t.num_vars = ast.num_vars();
  return t;
}

std::vector<int> GateTree::evaluate(const InputAssignment& x) const {
  if (x.size() < num_vars) {
    throw DimensionError("input has " + std::to_string(x.size()) +
                         " bits, formula needs " + std::to_string(num_vars));
  }
  std::vector<int> out(vertex_count(), 0);
  const int phi = eval_vertex(*this, kRoot, x, out);
  out[kTailInner] = 1 - phi;
  out[kTailOuter] = phi;
  return out;
}

// ---------------------------------------------------------------------------

WeightedAdjacency::WeightedAdjacency(std::size_t vertex_count,
                                     std::vector<WeightedEdge> edges, double beta)
    : n_(vertex_count), edges_(std::move(edges)), beta_(beta) {
  for (auto& e : edges_) {
    if (e.u == e.v) throw std::invalid_argument("adjacency has a diagonal entry");
    if (e.u > e.v) std::swap(e.u, e.v);
    if (e.v >= n_) throw std::out_of_range("edge endpoint out of range");
    if (!(e.weight >= 0.0)) throw std::invalid_argument("negative edge weight");
  }
  std::sort(edges_.begin(), edges_.end(), [](const auto& a, const auto& b) {
    return a.u != b.u ? a.u < b.u : a.v < b.v;
  });
  for (std::size_t i = 1; i < edges_.size(); ++i) {
    if (edges_[i].u == edges_[i - 1].u && edges_[i].v == edges_[i - 1].v) {
      throw std::invalid_argument("duplicate edge");
    }
  }
  build_index();
}

void WeightedAdjacency::build_index() {
  std::vector<std::size_t> degree(n_, 0);
  for (const auto& e : edges_) {
    ++degree[e.u];
    ++degree[e.v];
  }
  offsets_.assign(n_ + 1, 0);
  for (std::size_t v = 0; v < n_; ++v) offsets_[v + 1] = offsets_[v] + degree[v];
  nbr_.assign(offsets_.back(), 0);
  nbr_weight_.assign(offsets_.back(), 0.0);
  std::vector<std::size_t> fill(offsets_.begin(), offsets_.end() - 1);
  for (const auto& e : edges_) {
    nbr_[fill[e.u]] = e.v;
    nbr_weight_[fill[e.u]++] = e.weight;
    nbr_[fill[e.v]] = e.u;
    nbr_weight_[fill[e.v]++] = e.weight;
  }
}

double WeightedAdjacency::tail_weight() const {
  return weight(GateTree::kTailOuter, GateTree::kTailInner);
}

double WeightedAdjacency::weight(std::size_t u, std::size_t v) const {
  if (u > v) std::swap(u, v);
  auto it = std::lower_bound(edges_.begin(), edges_.end(), std::pair{u, v},
                             [](const WeightedEdge& e, const std::pair<std::size_t, std::size_t>& k) {
                               return e.u != k.first ? e.u < k.first : e.v < k.second;
                             });
  if (it != edges_.end() && it->u == u && it->v == v) return it->weight;
  return 0.0;
}

std::span<const std::size_t> WeightedAdjacency::neighbors(std::size_t v) const {
  return {nbr_.data() + offsets_[v], offsets_[v + 1] - offsets_[v]};
}

std::span<const double> WeightedAdjacency::neighbor_weights(std::size_t v) const {
  return {nbr_weight_.data() + offsets_[v], offsets_[v + 1] - offsets_[v]};
}

void WeightedAdjacency::multiply(std::span<const double> in,
                                 std::span<double> out) const {
  if (in.size() != n_ || out.size() != n_) {
    throw DimensionError("matrix-vector size mismatch");
  }
  for (std::size_t v = 0; v < n_; ++v) {
    double acc = 0.0;
    for (std::size_t k = offsets_[v]; k < offsets_[v + 1]; ++k) {
      acc += nbr_weight_[k] * in[nbr_[k]];
    }
    out[v] = acc;
  }
}

Eigen::MatrixXd WeightedAdjacency::to_dense() const {
  const auto n = static_cast<Eigen::Index>(n_);
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  for (const auto& e : edges_) {
    m(static_cast<Eigen::Index>(e.u), static_cast<Eigen::Index>(e.v)) = e.weight;
    m(static_cast<Eigen::Index>(e.v), static_cast<Eigen::Index>(e.u)) = e.weight;
  }
  return m;
}

WeightedAdjacency WeightedAdjacency::with_scaled_edge(std::size_t u, std::size_t v,
                                                      double factor) const {
  return with_edge_weight(u, v, weight(u, v) * factor);
}

WeightedAdjacency WeightedAdjacency::with_edge_weight(std::size_t u, std::size_t v,
                                                      double w) const {
  if (u > v) std::swap(u, v);
  auto edges = edges_;
  bool found = false;
  for (auto& e : edges) {
    if (e.u == u && e.v == v) {
      e.weight = w;
      found = true;
    }
  }
  if (!found) throw std::invalid_argument("no such edge");
  return WeightedAdjacency(n_, std::move(edges), beta_);
}

// ---------------------------------------------------------------------------

double tree_sigma_minus(const GateTree& tree, double beta) {
  return path_max(tree, GateTree::kRoot, 2.0 * beta, true);
}

double tree_sigma_plus(const GateTree& tree) {
  return path_max(tree, GateTree::kRoot, 0.0, false);
}

WeightedAdjacency edge_weights(const GateTree& tree, double beta) {
  if (!(beta > 0.0 && beta <= 0.5)) {
    throw std::invalid_argument("beta must lie in (0, 1/2]");
  }
  const double n = static_cast<double>(tree.leaf_count);
  std::vector<WeightedEdge> edges;
  edges.reserve(tree.vertex_count() - 1);
  const double sigma = tree_sigma_minus(tree, beta);
  edges.push_back({GateTree::kTailOuter, GateTree::kTailInner,
                   1.0 / (std::sqrt(sigma) * std::pow(n, 0.5 - beta))});
  for (std::size_t v = GateTree::kRoot; v < tree.vertex_count(); ++v) {
    const auto p = static_cast<std::size_t>(tree.parent[v]);
    const double sv = static_cast<double>(tree.subformula_size[v]);
    const double sp = static_cast<double>(tree.subformula_size[p]);
    edges.push_back({p, v, std::pow(sv, beta) / std::pow(sp, 0.5 - beta)});
  }
  return WeightedAdjacency(tree.vertex_count(), std::move(edges), beta);
}

WeightedAdjacency apply_input(const WeightedAdjacency& h0, const GateTree& tree,
                              const InputAssignment& x) {
  if (h0.vertex_count() != tree.vertex_count()) {
    throw DimensionError("adjacency does not match tree");
  }
  if (x.size() < tree.num_vars) {
    throw DimensionError("input has " + std::to_string(x.size()) +
                         " bits, formula needs " + std::to_string(tree.num_vars));
  }
  auto edges = h0.edges();
  for (auto& e : edges) {
    // Tree edges are stored as (parent, child) with parent < child.
    if (tree.is_leaf(e.v) && x.at(tree.var[e.v]) == 1) e.weight = 0.0;
  }
  return WeightedAdjacency(h0.vertex_count(), std::move(edges), h0.beta());
}

double norm_upper_bound(const WeightedAdjacency& h) {
  double best = 0.0;
  for (std::size_t v = 0; v < h.vertex_count(); ++v) {
    double row = 0.0;
    for (double w : h.neighbor_weights(v)) row += w;
    best = std::max(best, row);
  }
  return best;
}

double norm_power_estimate(const WeightedAdjacency& h, int max_iterations,
                           double tolerance) {
  const std::size_t n = h.vertex_count();
  std::vector<double> v(n, 1.0 / std::sqrt(static_cast<double>(n))), w(n), z(n);
  double previous = -1.0;
  double estimate = 0.0;
  for (int it = 0; it < max_iterations; ++it) {
    h.multiply(v, w);
    h.multiply(w, z);
    // Rayleigh quotient of H^2 is ||H v||^2.
    double rq = 0.0, norm = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      rq += w[i] * w[i];
      norm += z[i] * z[i];
    }
    estimate = std::sqrt(rq);
    norm = std::sqrt(norm);
    if (norm == 0.0) return 0.0;
    for (std::size_t i = 0; i < n; ++i) v[i] = z[i] / norm;
    if (std::abs(estimate - previous) <= tolerance * estimate) break;
    previous = estimate;
  }
  return estimate;
}

void write_coordinate(std::ostream& os, const WeightedAdjacency& h) {
  os << "# vertices " << h.vertex_count() << '\n';
  char buf[64];
  for (const auto& e : h.edges()) {
    if (e.weight == 0.0) continue;
    std::snprintf(buf, sizeof buf, "%.17g", e.weight);
    os << e.u << ' ' << e.v << ' ' << buf << '\n';
    os << e.v << ' ' << e.u << ' ' << buf << '\n';
  }
}

}  // namespace nandwalk
