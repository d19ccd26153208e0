#include "nandwalk/szegedy.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <stdexcept>

#include <Eigen/Eigenvalues>

namespace nandwalk {

// ---------------------------------------------------------------------------
// Principal eigenvector

PrincipalEigen principal_eigenvector(const WeightedAdjacency& h,
                                     std::size_t max_iterations) {
  const std::size_t n = h.vertex_count();
  PrincipalEigen out;
  out.in_component.assign(n, false);
  if (n == 0) throw std::invalid_argument("empty matrix");

  std::deque<std::size_t> queue{0};
  out.in_component[0] = true;
  while (!queue.empty()) {
    const std::size_t v = queue.front();
    queue.pop_front();
    auto nb = h.neighbors(v);
    auto wt = h.neighbor_weights(v);
    for (std::size_t k = 0; k < nb.size(); ++k) {
      if (wt[k] > 0.0 && !out.in_component[nb[k]]) {
        out.in_component[nb[k]] = true;
        queue.push_back(nb[k]);
      }
    }
  }
  std::size_t members = 0;
  for (bool b : out.in_component) members += b;
  if (members < 2) throw std::invalid_argument("zero matrix on the component of vertex 0");

  // Bipartite graphs have -lambda_max in their spectrum, so iterate on the
  // shifted matrix H + cI whose top eigenvalue is isolated.
  const double shift = 0.5 * norm_upper_bound(h);
  std::vector<double> v(n, 0.0), hv(n, 0.0);
  const double start = 1.0 / std::sqrt(static_cast<double>(members));
  for (std::size_t i = 0; i < n; ++i) {
    if (out.in_component[i]) v[i] = start;
  }

  double rho = 0.0, residual = 0.0;
  std::size_t it = 0;
  for (; it < max_iterations; ++it) {
    h.multiply(v, hv);
    rho = 0.0;
    for (std::size_t i = 0; i < n; ++i) rho += v[i] * hv[i];
    residual = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double r = hv[i] - rho * v[i];
      residual += r * r;
    }
    residual = std::sqrt(residual);
    if (residual <= 1e-13 * rho) break;
    double norm = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      hv[i] += shift * v[i];
      norm += hv[i] * hv[i];
    }
    norm = std::sqrt(norm);
    for (std::size_t i = 0; i < n; ++i) v[i] = hv[i] / norm;
  }
  if (residual > 1e-12 * rho) {
    throw std::runtime_error("power iteration did not converge (residual " +
                             std::to_string(residual / rho) + ")");
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (out.in_component[i] && !(v[i] > 0.0)) {
      throw std::runtime_error("principal eigenvector has a nonpositive entry");
    }
  }
  out.vector = std::move(v);
  out.eigenvalue = rho;
  out.residual = residual;
  out.iterations = it;
  return out;
}

// ---------------------------------------------------------------------------
// Transition factor

TransitionFactor classical_transition(const WeightedAdjacency& h,
                                      std::span<const double> delta, double nh) {
  const std::size_t n = h.vertex_count();
  if (delta.size() != n) throw DimensionError("delta has the wrong length");
  if (!(nh > 0.0)) throw std::invalid_argument("nh must be positive");
  TransitionFactor p;
  p.nh = nh;
  p.rows.resize(n);
  p.row_norm_sq.assign(n, 0.0);
  for (std::size_t v = 0; v < n; ++v) {
    auto nb = h.neighbors(v);
    auto wt = h.neighbor_weights(v);
    bool isolated = true;
    for (double w : wt) isolated &= (w == 0.0);
    if (isolated) {
      p.rows[v].push_back({v, 1.0});
      p.row_norm_sq[v] = 0.0;
      continue;
    }
    if (!(delta[v] > 0.0)) {
      throw std::invalid_argument("delta must be positive on every connected vertex");
    }
    double norm_sq = 0.0;
    for (std::size_t k = 0; k < nb.size(); ++k) {
      if (wt[k] == 0.0) continue;
      if (!(delta[nb[k]] > 0.0)) {
        throw std::invalid_argument("delta must be positive on every connected vertex");
      }
      const double a = std::sqrt(wt[k] / nh * delta[nb[k]] / delta[v]);
      p.rows[v].push_back({nb[k], a});
      norm_sq += a * a;
    }
    p.row_norm_sq[v] = norm_sq;
    const double deficit = 1.0 - norm_sq;
    if (deficit > kRowDeficitTolerance) {
      p.rows[v].push_back({v, std::sqrt(deficit)});
    } else if (deficit < -kRowDeficitTolerance) {
      throw std::invalid_argument("row norm above one: nh is below ||H||");
    } else {
      const double scale = 1.0 / std::sqrt(norm_sq);
      for (auto& e : p.rows[v]) e.amplitude *= scale;
    }
  }
  return p;
}

// ---------------------------------------------------------------------------
// Edge space and walk

std::size_t EdgeSpace::index(std::size_t v, std::size_t w) const {
  for (std::size_t e = offsets.at(v); e < offsets.at(v + 1); ++e) {
    if (pairs[e].second == w) return e;
  }
  throw std::out_of_range("pair (" + std::to_string(v) + "," + std::to_string(w) +
                          ") is not in the edge space");
}

CoinedWalk::CoinedWalk(EdgeSpace space, std::vector<double> coin,
                       std::vector<OracleLeaf> leaves)
    : space_(std::move(space)), coin_(std::move(coin)), leaves_(std::move(leaves)) {
  if (coin_.size() != space_.dimension()) {
    throw DimensionError("coin amplitudes do not match the edge space");
  }
}

void CoinedWalk::apply_swap(std::span<const cplx> in, std::span<cplx> out) const {
  const std::size_t d = dimension();
  if (in.size() != d || out.size() != d) throw DimensionError("state size mismatch");
  for (std::size_t e = 0; e < d; ++e) out[e] = in[space_.swap[e]];
}

void CoinedWalk::apply_coins(std::span<cplx> state) const {
  if (state.size() != dimension()) throw DimensionError("state size mismatch");
  const std::size_t n = space_.vertex_count();
  for (std::size_t v = 0; v < n; ++v) {
    const std::size_t lo = space_.offsets[v], hi = space_.offsets[v + 1];
    cplx overlap = 0.0;
    for (std::size_t e = lo; e < hi; ++e) overlap += coin_[e] * state[e];
    for (std::size_t e = lo; e < hi; ++e) {
      state[e] = 2.0 * coin_[e] * overlap - state[e];
    }
  }
}

void CoinedWalk::apply(std::span<cplx> state, std::span<cplx> scratch) const {
  apply_swap(state, scratch);
  apply_coins(scratch);
  std::copy(scratch.begin(), scratch.end(), state.begin());
}

void CoinedWalk::apply(std::span<cplx> state, std::span<cplx> scratch,
                       const InputAssignment& x) const {
  apply(state, scratch);
  apply_oracle(*this, x, state);
}

void CoinedWalk::step(std::span<const cplx> in, std::span<cplx> out,
                      std::span<const double> vertex_sign) const {
  const std::size_t n = space_.vertex_count();
  const auto* swap = space_.swap.data();
  const auto* coin = coin_.data();
  for (std::size_t v = 0; v < n; ++v) {
    const std::size_t lo = space_.offsets[v], hi = space_.offsets[v + 1];
    cplx overlap = 0.0;
    for (std::size_t e = lo; e < hi; ++e) overlap += coin[e] * in[swap[e]];
    const double sign = vertex_sign[v];
    for (std::size_t e = lo; e < hi; ++e) {
      out[e] = sign * (2.0 * coin[e] * overlap - in[swap[e]]);
    }
  }
}

std::vector<double> CoinedWalk::oracle_signs(const InputAssignment& x) const {
  std::vector<double> sign(space_.vertex_count(), 1.0);
  for (const auto& leaf : leaves_) {
    if (x.at(leaf.var)) sign[leaf.vertex] = -1.0;
  }
  return sign;
}

CoinedWalk CoinedWalk::with_oracle_coins(const InputAssignment& x) const {
  auto coin = coin_;
  for (const auto& leaf : leaves_) {
    if (x.at(leaf.var) == 0) continue;
    for (std::size_t e = space_.offsets[leaf.vertex]; e < space_.offsets[leaf.vertex + 1];
         ++e) {
      coin[e] = space_.pairs[e].second == leaf.vertex ? 1.0 : 0.0;
    }
  }
  return CoinedWalk(space_, std::move(coin), leaves_);
}

Eigen::MatrixXd CoinedWalk::szegedy_matrix() const {
  const auto n = static_cast<Eigen::Index>(space_.vertex_count());
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  for (std::size_t e = 0; e < dimension(); ++e) {
    const auto [v, w] = space_.pairs[e];
    m(static_cast<Eigen::Index>(v), static_cast<Eigen::Index>(w)) +=
        coin_[e] * coin_[space_.swap[e]];
  }
  return m;
}

std::vector<cplx> CoinedWalk::transfer(std::span<const cplx> f) const {
  if (f.size() != space_.vertex_count()) throw DimensionError("vertex vector size mismatch");
  std::vector<cplx> out(dimension());
  for (std::size_t e = 0; e < dimension(); ++e) {
    out[e] = f[space_.pairs[e].first] * coin_[e];
  }
  return out;
}

Eigen::MatrixXcd CoinedWalk::dense(const InputAssignment* x) const {
  const std::size_t d = dimension();
  Eigen::MatrixXcd u(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
  std::vector<cplx> col(d), scratch(d);
  for (std::size_t j = 0; j < d; ++j) {
    std::fill(col.begin(), col.end(), cplx{});
    col[j] = 1.0;
    if (x) {
      apply(col, scratch, *x);
    } else {
      apply(col, scratch);
    }
    for (std::size_t i = 0; i < d; ++i) {
      u(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = col[i];
    }
  }
  return u;
}

std::vector<OracleLeaf> oracle_leaves(const GateTree& tree) {
  std::vector<OracleLeaf> out;
  out.reserve(tree.leaves.size());
  for (auto v : tree.leaves) out.push_back({v, tree.var[v]});
  return out;
}

CoinedWalk build_walk(const TransitionFactor& p, std::vector<OracleLeaf> leaves) {
  const std::size_t n = p.rows.size();
  std::vector<bool> needs_loop(n, false);
  for (const auto& leaf : leaves) {
    if (leaf.vertex >= n) throw DimensionError("leaf vertex out of range");
    needs_loop[leaf.vertex] = true;
  }
  EdgeSpace space;
  std::vector<double> coin;
  space.offsets.assign(n + 1, 0);
  for (std::size_t v = 0; v < n; ++v) {
    space.offsets[v] = space.pairs.size();
    bool has_loop = false;
    for (const auto& e : p.rows[v]) {
      space.pairs.emplace_back(v, e.to);
      coin.push_back(e.amplitude);
      has_loop |= (e.to == v);
    }
    if (needs_loop[v] && !has_loop) {
      space.pairs.emplace_back(v, v);
      coin.push_back(0.0);
    }
  }
  space.offsets[n] = space.pairs.size();
  space.swap.resize(space.pairs.size());
  for (std::size_t e = 0; e < space.pairs.size(); ++e) {
    const auto [v, w] = space.pairs[e];
    space.swap[e] = space.index(w, v);
  }
  return CoinedWalk(std::move(space), std::move(coin), std::move(leaves));
}

std::size_t apply_oracle(const CoinedWalk& walk, const InputAssignment& x,
                         std::span<cplx> state) {
  if (state.size() != walk.dimension()) throw DimensionError("state size mismatch");
  const auto& space = walk.space();
  for (const auto& leaf : walk.leaves()) {
    if (x.at(leaf.var) == 0) continue;
    for (std::size_t e = space.offsets[leaf.vertex]; e < space.offsets[leaf.vertex + 1];
         ++e) {
      state[e] = -state[e];
    }
  }
  return 1;
}

QuantizedWalk quantize(const WeightedAdjacency& h0, const GateTree& tree) {
  PrincipalEigen principal = principal_eigenvector(h0);
  const double nh = principal.eigenvalue;
  TransitionFactor p = classical_transition(h0, principal.vector, nh);
  CoinedWalk walk = build_walk(p, oracle_leaves(tree));
  return {std::move(walk), nh, std::move(principal), std::move(p)};
}

// ---------------------------------------------------------------------------
// Correspondence verifier

namespace {

double norm(std::span<const cplx> v) {
  double s = 0.0;
  for (const auto& z : v) s += std::norm(z);
  return std::sqrt(s);
}

cplx inner(std::span<const cplx> a, std::span<const cplx> b) {
  cplx s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::conj(a[i]) * b[i];
  return s;
}

// ||U y - mu y|| / ||y||.
double eigen_residual(const CoinedWalk& walk, std::span<const cplx> y, cplx mu) {
  std::vector<cplx> uy(y.begin(), y.end()), scratch(y.size());
  walk.apply(uy, scratch);
  double r = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) r += std::norm(uy[i] - mu * y[i]);
  return std::sqrt(r) / norm(y);
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

}  // namespace

CorrespondenceReport verify_correspondence(const CoinedWalk& walk,
                                           const Eigen::MatrixXd& m,
                                           double tolerance) {
  const std::size_t n = walk.space().vertex_count();
  if (static_cast<std::size_t>(m.rows()) != n || m.rows() != m.cols()) {
    throw DimensionError("M does not match the walk's vertex set");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
  if (es.info() != Eigen::Success) throw std::runtime_error("eigensolver failed on M");

  const std::size_t d = walk.dimension();
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> ues(walk.dense());
  const Eigen::VectorXcd walk_spectrum = ues.eigenvalues();

  CorrespondenceReport report;
  std::vector<std::vector<cplx>> t_vecs, st_vecs;
  std::vector<cplx> scratch(d);
  for (std::size_t a = 0; a < n; ++a) {
    const auto ia = static_cast<Eigen::Index>(a);
    CorrespondenceEntry entry;
    entry.lambda = std::clamp(es.eigenvalues()(ia), -1.0, 1.0);
    std::vector<cplx> f(n);
    for (std::size_t v = 0; v < n; ++v) f[v] = es.eigenvectors()(static_cast<Eigen::Index>(v), ia);
    std::vector<cplx> t = walk.transfer(f);
    std::vector<cplx> st(d);
    walk.apply_swap(t, st);

    entry.one_dimensional = 1.0 - std::abs(entry.lambda) < 1e-12;
    if (entry.one_dimensional) entry.lambda = entry.lambda > 0.0 ? 1.0 : -1.0;
    const double lambda = entry.lambda;
    const double s = std::sqrt(std::max(0.0, 1.0 - lambda * lambda));
    entry.b_plus = {-lambda, s};
    entry.b_minus = {-lambda, -s};
    entry.mu_plus = -1.0 / entry.b_plus;
    entry.mu_minus = -1.0 / entry.b_minus;

    if (entry.one_dimensional) {
      // T|lambda> = +-S T|lambda>; U acts on it by lambda.
      entry.mu_plus = entry.mu_minus = lambda;
      entry.residual_plus = entry.residual_minus = eigen_residual(walk, t, lambda);
      entry.coefficient_residual_plus = entry.coefficient_residual_minus =
          eigen_residual(walk, t, entry.b_plus);
    } else {
      std::vector<cplx> yp(d), ym(d);
      for (std::size_t e = 0; e < d; ++e) {
        yp[e] = t[e] + entry.b_plus * st[e];
        ym[e] = t[e] + entry.b_minus * st[e];
      }
      entry.residual_plus = eigen_residual(walk, yp, entry.mu_plus);
      entry.residual_minus = eigen_residual(walk, ym, entry.mu_minus);
      entry.coefficient_residual_plus = eigen_residual(walk, yp, entry.b_plus);
      entry.coefficient_residual_minus = eigen_residual(walk, ym, entry.b_minus);
    }

    double dist = 0.0;
    for (cplx target : {entry.b_plus, entry.b_minus}) {
      double best = INFINITY;
      for (Eigen::Index k = 0; k < walk_spectrum.size(); ++k) {
        best = std::min(best, std::abs(walk_spectrum(k) - target));
      }
      dist = std::max(dist, best);
    }
    entry.spectrum_distance = dist;

    // -iU eigenvalues on R_a against exp(-i asin lambda), -exp(i asin lambda).
    const double theta = std::asin(lambda);
    const cplx minus_i{0.0, -1.0};
    const double arcsin_error =
        std::max(std::abs(minus_i * entry.mu_plus - std::polar(1.0, -theta)),
                 std::abs(minus_i * entry.mu_minus + std::polar(1.0, theta)));
    if (!entry.one_dimensional) {
      report.max_arcsin_error = std::max(report.max_arcsin_error, arcsin_error);
    }

    report.max_residual =
        std::max({report.max_residual, entry.residual_plus, entry.residual_minus});
    report.max_coefficient_residual =
        std::max({report.max_coefficient_residual, entry.coefficient_residual_plus,
                  entry.coefficient_residual_minus});
    report.max_spectrum_distance = std::max(report.max_spectrum_distance, dist);
    if (entry.residual_plus > tolerance || entry.residual_minus > tolerance) {
      report.failures.push_back("eigenvector residual " +
                                fmt(std::max(entry.residual_plus, entry.residual_minus)) +
                                " at lambda=" + fmt(lambda));
    }
    t_vecs.push_back(std::move(t));
    st_vecs.push_back(std::move(st));
    report.entries.push_back(entry);
  }

  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a + 1; b < n; ++b) {
      for (const auto* u : {&t_vecs[a], &st_vecs[a]}) {
        for (const auto* v : {&t_vecs[b], &st_vecs[b]}) {
          report.max_subspace_overlap =
              std::max(report.max_subspace_overlap, std::abs(inner(*u, *v)));
        }
      }
    }
  }
  if (report.max_subspace_overlap > 1e-10) {
    report.failures.push_back("subspaces R_a not orthogonal: overlap " +
                              fmt(report.max_subspace_overlap));
  }
  if (report.max_spectrum_distance > tolerance) {
    report.failures.push_back("-lambda +- i sqrt(1 - lambda^2) missing from spec(U) by " +
                              fmt(report.max_spectrum_distance));
  }
  if (report.max_arcsin_error > tolerance) {
    report.failures.push_back("phase mapping off by " + fmt(report.max_arcsin_error));
  }
  return report;
}

}  // namespace nandwalk
