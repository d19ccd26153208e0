#include "nandwalk/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace nandwalk {

EigenSystem eigendecompose(const Eigen::MatrixXd& h, std::size_t dense_threshold) {
  const auto n = static_cast<std::size_t>(h.rows());
  if (n > dense_threshold) {
    throw SizeError("dense eigendecomposition of " + std::to_string(n) +
                    " vertices exceeds the threshold " + std::to_string(dense_threshold));
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(h);
  if (solver.info() != Eigen::Success) throw std::runtime_error("eigensolver failed");
  EigenSystem es;
  es.values = solver.eigenvalues();
  es.vectors = solver.eigenvectors();
  const Eigen::MatrixXd rebuilt =
      es.vectors * es.values.asDiagonal() * es.vectors.transpose();
  es.reconstruction_residual = n ? (rebuilt - h).cwiseAbs().maxCoeff() : 0.0;
  const auto id = Eigen::MatrixXd::Identity(h.rows(), h.cols());
  es.orthonormality_residual =
      n ? (es.vectors.transpose() * es.vectors - id).cwiseAbs().maxCoeff() : 0.0;
  es.norm = n ? es.values.cwiseAbs().maxCoeff() : 0.0;
  return es;
}

EigenSystem eigendecompose(const WeightedAdjacency& h, std::size_t dense_threshold) {
  if (h.vertex_count() > dense_threshold) {
    throw SizeError("dense eigendecomposition of " + std::to_string(h.vertex_count()) +
                    " vertices exceeds the threshold " + std::to_string(dense_threshold));
  }
  return eigendecompose(h.to_dense(), dense_threshold);
}

std::vector<std::pair<std::size_t, std::size_t>> eigenvalue_clusters(
    const Eigen::VectorXd& values, double tolerance) {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  const auto n = static_cast<std::size_t>(values.size());
  std::size_t first = 0;
  for (std::size_t i = 1; i <= n; ++i) {
    if (i == n || values[static_cast<Eigen::Index>(i)] -
                          values[static_cast<Eigen::Index>(i - 1)] >
                      tolerance) {
      out.emplace_back(first, i);
      first = i;
    }
  }
  return out;
}

double projected_amplitude(const EigenSystem& es, std::size_t first, std::size_t last,
                           std::size_t vertex) {
  double s = 0.0;
  for (std::size_t j = first; j < last; ++j) {
    const double a = es.vectors(static_cast<Eigen::Index>(vertex), static_cast<Eigen::Index>(j));
    s += a * a;
  }
  return std::sqrt(s);
}

double spectrum_asymmetry(const Eigen::VectorXd& values) {
  const auto n = values.size();
  double worst = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    worst = std::max(worst, std::abs(values[i] + values[n - 1 - i]));
  }
  return worst;
}

// ---------------------------------------------------------------------------
// Zero-energy eigenvector

namespace {

// Fills a on T_p with a_p = 1; p must evaluate to 0.
void build_zero(const GateTree& tree, const WeightedAdjacency& h,
                const std::vector<int>& value, std::size_t p, std::vector<double>& a) {
  a[p] = 1.0;
  for (auto v : tree.children[p]) {
    const double hpv = h.weight(p, v);
    if (hpv == 0.0) continue;  // 1-leaf cut off by the input
    std::size_t chosen = tree.vertex_count();
    for (auto c : tree.children[v]) {
      if (value[c] == 0) {
        chosen = c;
        break;
      }
    }
    if (chosen == tree.vertex_count()) {
      throw std::logic_error("1-valued vertex without a 0-valued child");
    }
    std::vector<double> sub(a.size(), 0.0);
    build_zero(tree, h, value, chosen, sub);
    const double scale = -hpv / (h.weight(v, chosen) * sub[chosen]);
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (sub[i] != 0.0) a[i] = scale * sub[i];
    }
  }
}

double norm2(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

}  // namespace

ZeroEigenvector construct_zero_eigenvector(const GateTree& tree,
                                           const WeightedAdjacency& h,
                                           const InputAssignment& x) {
  const auto value = tree.evaluate(x);
  if (value[GateTree::kRoot] != 0) {
    throw std::invalid_argument("zero-energy construction needs phi(x) = 0");
  }
  const std::size_t n = tree.vertex_count();
  ZeroEigenvector z;
  z.amplitudes.assign(n, 0.0);
  build_zero(tree, h, value, GateTree::kRoot, z.amplitudes);
  const double tree_norm = norm2(z.amplitudes);
  z.amplitudes[GateTree::kTailInner] = 0.0;
  z.amplitudes[GateTree::kTailOuter] =
      -(h.weight(GateTree::kTailInner, GateTree::kRoot) / h.tail_weight()) *
      z.amplitudes[GateTree::kRoot];
  if (z.amplitudes[GateTree::kTailOuter] < 0.0) {
    for (auto& a : z.amplitudes) a = -a;
  }
  const double total = norm2(z.amplitudes);
  std::vector<double> ha(n);
  h.multiply(z.amplitudes, ha);
  z.residual = norm2(ha) / total;
  z.overlap = z.amplitudes[GateTree::kTailOuter] / total;
  z.tail_inner = z.amplitudes[GateTree::kTailInner];
  z.root_ratio = std::abs(z.amplitudes[GateTree::kRoot]) / tree_norm;
  const double beta = h.beta();
  z.root_bound = 1.0 / (std::sqrt(tree_sigma_minus(tree, beta)) *
                        std::pow(static_cast<double>(tree.leaf_count), 0.5 - beta));
  return z;
}

// ---------------------------------------------------------------------------
// Kernel support and gap

namespace {

std::vector<bool> root_component(const WeightedAdjacency& h) {
  std::vector<bool> seen(h.vertex_count(), false);
  std::vector<std::size_t> stack{GateTree::kTailOuter};
  seen[GateTree::kTailOuter] = true;
  while (!stack.empty()) {
    const std::size_t v = stack.back();
    stack.pop_back();
    const auto nb = h.neighbors(v);
    const auto w = h.neighbor_weights(v);
    for (std::size_t i = 0; i < nb.size(); ++i) {
      if (w[i] > 0.0 && !seen[nb[i]]) {
        seen[nb[i]] = true;
        stack.push_back(nb[i]);
      }
    }
  }
  return seen;
}

}  // namespace

SupportCheck check_zero_support(const GateTree& tree, const EigenSystem& es,
                                const WeightedAdjacency& h, const InputAssignment& x) {
  const auto value = tree.evaluate(x);
  const auto in_root = root_component(h);
  const double threshold = kKernelTolerance * es.norm;
  std::size_t first = 0, last = 0;
  const auto n = static_cast<std::size_t>(es.values.size());
  while (first < n && es.values[static_cast<Eigen::Index>(first)] < -threshold) ++first;
  last = first;
  while (last < n && es.values[static_cast<Eigen::Index>(last)] <= threshold) ++last;

  SupportCheck out;
  out.kernel_dimension = last - first;
  if (out.kernel_dimension == 0) return out;
  const bool phi_one = value[GateTree::kRoot] == 1;
  for (std::size_t v = 0; v < tree.vertex_count(); ++v) {
    const bool gated = in_root[v] && value[v] == 1;
    const bool tail = phi_one && (v == GateTree::kTailOuter || v == GateTree::kTailInner);
    if (!gated && !tail) continue;
    const double amp = projected_amplitude(es, first, last, v);
    out.max_amplitude = std::max(out.max_amplitude, amp);
    if (amp > kSupportTolerance) {
      out.passed = false;
      out.offending_vertices.push_back(v);
    }
  }
  return out;
}

double spectral_gap_bound(const GateTree& tree, double beta) {
  return 1.0 / (9.0 * tree_sigma_minus(tree, beta) * std::sqrt(tree_sigma_plus(tree)));
}

GapCheck check_spectral_gap(const GateTree& tree, const EigenSystem& es,
                            const WeightedAdjacency& h, const InputAssignment& x) {
  const auto value = tree.evaluate(x);
  if (value[GateTree::kRoot] != 1) {
    throw std::invalid_argument("spectral gap check needs phi(x) = 1");
  }
  GapCheck out;
  out.bound = spectral_gap_bound(tree, h.beta());
  out.min_gap = std::numeric_limits<double>::infinity();
  for (const auto& [first, last] : eigenvalue_clusters(es.values)) {
    const double support = projected_amplitude(es, first, last, GateTree::kTailInner) +
                           projected_amplitude(es, first, last, GateTree::kTailOuter);
    if (support <= kSupportTolerance) continue;
    ++out.supported_clusters;
    double e = 0.0;
    for (std::size_t j = first; j < last; ++j) {
      e = std::max(e, std::abs(es.values[static_cast<Eigen::Index>(j)]));
    }
    out.min_gap = std::min(out.min_gap, e);
  }
  out.passed = out.min_gap >= out.bound - kGapTolerance;
  return out;
}

// ---------------------------------------------------------------------------
// Lemma diagnostic

YBoundReport ybound_diagnostic(const GateTree& tree, const WeightedAdjacency& h,
                               const InputAssignment& x, double energy,
                               const Eigen::VectorXd& eigenvector,
                               double zero_tolerance) {
  const double beta = h.beta();
  const double bound = spectral_gap_bound(tree, beta);
  if (!(energy > 0.0 && energy <= bound)) {
    throw std::invalid_argument("energy outside (0, 1/(9 sigma_minus sqrt(sigma_plus))]");
  }
  const std::size_t n = tree.vertex_count();
  if (static_cast<std::size_t>(eigenvector.size()) != n) {
    throw DimensionError("eigenvector size does not match the tree");
  }
  const auto value = tree.evaluate(x);

  // Per-vertex path maxima over the subtree below (and including) v. Children
  // always carry larger indices than their parent.
  std::vector<double> sig_minus(n, 0.0), sig_plus(n, 0.0);
  for (std::size_t v = n; v-- > 0;) {
    double best_minus = 0.0, best_plus = 0.0;
    for (auto c : tree.children[v]) {
      best_minus = std::max(best_minus, sig_minus[c]);
      best_plus = std::max(best_plus, sig_plus[c]);
    }
    const double s = static_cast<double>(tree.subformula_size[v]);
    sig_minus[v] = best_minus + std::pow(s, -2.0 * beta);
    sig_plus[v] = best_plus + s;
  }

  YBoundReport rep;
  rep.energy = energy;
  const double sigma_r = sig_minus[GateTree::kRoot];
  rep.gamma_big = 1.0 / (2.0 * sigma_r);
  rep.gamma_prime = 8.0 * sigma_r;

  std::vector<double> y0(n, 0.0), y1(n, 0.0), gamma(n, 0.0);
  const double inf = std::numeric_limits<double>::infinity();
  for (std::size_t v = n; v-- > 1;) {
    const auto p = static_cast<std::size_t>(tree.parent[v]);
    const double hpv = h.weight(p, v);
    gamma[v] = rep.gamma_big - rep.gamma_big * rep.gamma_big * sig_minus[v] -
               energy * energy * (1.0 + rep.gamma_prime) * sig_plus[v];
    double sum = 0.0;
    for (auto c : tree.children[v]) sum += h.weight(v, c) * y1[c];
    y0[v] = hpv > 0.0 ? (1.0 + sum) / hpv : inf;
    y1[v] = hpv * std::sqrt(static_cast<double>(tree.subformula_size[v])) / gamma[v];
  }

  const double zero = zero_tolerance;
  const double slack = 1e-9;
  for (std::size_t v = 1; v < n; ++v) {
    const auto p = static_cast<std::size_t>(tree.parent[v]);
    YBoundVertex row;
    row.vertex = v;
    row.value = value[v];
    row.y0 = y0[v];
    row.y1 = y1[v];
    row.gamma = gamma[v];
    row.gamma_ok = gamma[v] >= 1.0 / rep.gamma_prime - slack &&
                   gamma[v] <= rep.gamma_big + slack;
    if (!row.gamma_ok) {
      if (v == GateTree::kTailInner) {
        rep.tail_gamma_ok = false;
      } else {
        ++rep.gamma_failures;
      }
    }
    const double av = eigenvector[static_cast<Eigen::Index>(v)];
    const double ap = eigenvector[static_cast<Eigen::Index>(p)];
    if (std::abs(av) > zero || std::abs(ap) > zero) {
      row.checked = true;
      if (value[v] == 0) {
        if (std::abs(av) <= zero) {
          row.ratio = inf;
          row.ratio_ok = false;
        } else {
          row.ratio = ap / av;
          const double cap = y0[v] * energy;
          row.ratio_ok = row.ratio > 0.0 && row.ratio <= cap * (1.0 + slack) + slack;
        }
      } else {
        if (std::abs(ap) <= zero) {
          row.ratio = -inf;
          row.ratio_ok = false;
        } else {
          row.ratio = av / ap;
          const double floor = -y1[v] * energy;
          row.ratio_ok = row.ratio <= slack && row.ratio >= floor * (1.0 + slack) - slack;
        }
      }
      if (!row.ratio_ok) ++rep.ratio_failures;
    }
    rep.vertices.push_back(row);
  }
  rep.tail_zero =
      std::abs(eigenvector[GateTree::kTailInner]) <= zero &&
      std::abs(eigenvector[GateTree::kTailOuter]) <= zero;
  return rep;
}

Eigen::VectorXd partial_eigenvector(const GateTree& tree, const WeightedAdjacency& h,
                                    double energy) {
  const std::size_t n = tree.vertex_count();
  std::vector<double> ratio(n, 0.0);  // alpha_v / alpha_parent
  for (std::size_t v = n; v-- > 1;) {
    const auto p = static_cast<std::size_t>(tree.parent[v]);
    double denom = energy;
    for (auto c : tree.children[v]) denom -= h.weight(v, c) * ratio[c];
    ratio[v] = h.weight(p, v) / denom;
  }
  Eigen::VectorXd alpha(static_cast<Eigen::Index>(n));
  alpha[GateTree::kTailOuter] = 1.0;
  for (std::size_t v = 1; v < n; ++v) {
    alpha[static_cast<Eigen::Index>(v)] =
        ratio[v] * alpha[static_cast<Eigen::Index>(tree.parent[v])];
  }
  return alpha;
}

// ---------------------------------------------------------------------------

SpectralReport analyze(const GateTree& tree, const WeightedAdjacency& h0,
                       const InputAssignment& x, std::size_t dense_threshold) {
  const WeightedAdjacency h = apply_input(h0, tree, x);
  const EigenSystem es = eigendecompose(h, dense_threshold);
  SpectralReport r;
  r.input = x.to_string();
  r.value = tree.evaluate(x)[GateTree::kRoot];
  r.eigenvalues.assign(es.values.data(), es.values.data() + es.values.size());
  r.asymmetry = spectrum_asymmetry(es.values);
  r.symmetry_ok = r.asymmetry <= kSymmetryTolerance;
  r.reconstruction_residual = es.reconstruction_residual;
  r.orthonormality_residual = es.orthonormality_residual;
  r.support = check_zero_support(tree, es, h, x);
  if (r.value == 0) {
    const auto z = construct_zero_eigenvector(tree, h, x);
    r.zero_residual = z.residual;
    r.zero_overlap = z.overlap;
    r.root_ratio = z.root_ratio;
    r.root_bound = z.root_bound;
    r.zero_eigenvector_ok = z.residual <= kResidualTolerance &&
                            z.overlap >= 1.0 / std::sqrt(2.0) - kOverlapTolerance;
  } else {
    const auto g = check_spectral_gap(tree, es, h, x);
    r.min_gap = g.min_gap;
    r.gap_bound = g.bound;
    r.gap_ok = g.passed;
  }
  return r;
}

}  // namespace nandwalk
