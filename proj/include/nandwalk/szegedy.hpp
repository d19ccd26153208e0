#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "nandwalk/hamiltonian.hpp"

namespace nandwalk {

using cplx = std::complex<double>;

struct PrincipalEigen {
  std::vector<double> vector;  // unit norm; zero outside `in_component`
  double eigenvalue = 0.0;
  double residual = 0.0;       // ||H d - lambda d||
  std::size_t iterations = 0;
  std::vector<bool> in_component;  // component of vertex 0 (r'')
};

// Shifted power iteration (H + cI, c = half the row-norm bound) from the
// normalised all-ones vector on the component containing vertex 0. Stops
// once ||H d - rho d|| <= 1e-13 rho, or after `max_iterations` provided the
// residual is then below 1e-12 rho.
PrincipalEigen principal_eigenvector(const WeightedAdjacency& h,
                                     std::size_t max_iterations = 1000000);

// Square-root transition amplitudes sqrt(p_vw) for every vertex v. Rows are
// unit vectors: a squared-norm deficit above kRowDeficitTolerance becomes a
// self-loop amplitude, smaller discrepancies are normalised away. Vertices
// with no incident weight get the self-loop coin p_vv = 1.
struct TransitionFactor {
  struct Entry {
    std::size_t to;
    double amplitude;
  };
  std::vector<std::vector<Entry>> rows;  // self-loop, if any, is the last entry
  std::vector<double> row_norm_sq;       // before completion
  double nh = 1.0;
};

inline constexpr double kRowDeficitTolerance = 1e-12;

TransitionFactor classical_transition(const WeightedAdjacency& h,
                                      std::span<const double> delta, double nh);

// Ordered basis of directed pairs, grouped by first vertex. Every leaf also
// owns a self-loop pair (i, i).
struct EdgeSpace {
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  std::vector<std::size_t> offsets;  // pairs leaving v: [offsets[v], offsets[v+1])
  std::vector<std::size_t> swap;     // index of (w, v) for pair (v, w)

  std::size_t dimension() const noexcept { return pairs.size(); }
  std::size_t vertex_count() const noexcept { return offsets.size() - 1; }
  // Throws std::out_of_range when (v, w) is not a basis pair.
  std::size_t index(std::size_t v, std::size_t w) const;
};

struct OracleLeaf {
  std::size_t vertex;
  std::uint32_t var;
};

// U = (2 Pi - 1) S on the edge space, with coin reflections applied per
// vertex. The oracle layer multiplies every pair leaving leaf i by (-1)^x_i.
class CoinedWalk {
 public:
  CoinedWalk(EdgeSpace space, std::vector<double> coin, std::vector<OracleLeaf> leaves);

  const EdgeSpace& space() const noexcept { return space_; }
  std::size_t dimension() const noexcept { return space_.dimension(); }
  // sqrt(p_vw) for each basis pair.
  const std::vector<double>& coin() const noexcept { return coin_; }
  const std::vector<OracleLeaf>& leaves() const noexcept { return leaves_; }

  void apply_swap(std::span<const cplx> in, std::span<cplx> out) const;
  void apply_coins(std::span<cplx> state) const;
  // U_{0^N} = (2 Pi - 1) S. `scratch` must have the state's size.
  void apply(std::span<cplx> state, std::span<cplx> scratch) const;
  // O_x U_{0^N}.
  void apply(std::span<cplx> state, std::span<cplx> scratch,
             const InputAssignment& x) const;

  // Fused O_x U_{0^N}: out = diag(sign) (2 Pi - 1) S in, with sign[v] = -1
  // on leaves whose bit is 1 (see oracle_signs). `in` and `out` must not alias.
  void step(std::span<const cplx> in, std::span<cplx> out,
            std::span<const double> vertex_sign) const;
  std::vector<double> oracle_signs(const InputAssignment& x) const;

  // Same walk with the coin of every leaf i with x_i = 1 replaced by |i, i>.
  CoinedWalk with_oracle_coins(const InputAssignment& x) const;

  // M = P o P^T including diagonal self-loop terms.
  Eigen::MatrixXd szegedy_matrix() const;
  // T|f> = sum_v f_v |v~>.
  std::vector<cplx> transfer(std::span<const cplx> vertex_vector) const;
  // Dense matrix of the map applied by `apply` (small dimensions only).
  Eigen::MatrixXcd dense(const InputAssignment* x = nullptr) const;

 private:
  EdgeSpace space_;
  std::vector<double> coin_;
  std::vector<OracleLeaf> leaves_;
};

// Leaves of a tree as oracle sites.
std::vector<OracleLeaf> oracle_leaves(const GateTree& tree);

CoinedWalk build_walk(const TransitionFactor& p, std::vector<OracleLeaf> leaves);

// Multiplies pairs leaving leaf i by (-1)^x_i. Returns the number of oracle
// invocations (one per call).
std::size_t apply_oracle(const CoinedWalk& walk, const InputAssignment& x,
                         std::span<cplx> state);

// The walk used by the evaluation algorithm: quantise H_{0^N} / nh with nh =
// the principal eigenvalue, so the coins are exact unit vectors.
struct QuantizedWalk {
  CoinedWalk walk;
  double nh;
  PrincipalEigen principal;
  TransitionFactor transition;
};
QuantizedWalk quantize(const WeightedAdjacency& h0, const GateTree& tree);

struct CorrespondenceEntry {
  double lambda = 0.0;
  // Coefficients b = -lambda +- i sqrt(1 - lambda^2) of the vectors
  // (1 + b S) T|lambda>.
  cplx b_plus, b_minus;
  // Walk eigenvalue carried by each vector, -1/b = lambda -+ ... (see below).
  cplx mu_plus, mu_minus;
  double residual_plus = 0.0;   // ||U y - mu y|| / ||y||
  double residual_minus = 0.0;
  // ||U y - b y|| / ||y||: tests b itself as the eigenvalue.
  double coefficient_residual_plus = 0.0;
  double coefficient_residual_minus = 0.0;
  bool one_dimensional = false;  // |lambda| = 1
  // Distance from -lambda +- i sqrt(1 - lambda^2) to the nearest eigenvalue
  // of U (set by the dense spectrum check).
  double spectrum_distance = 0.0;
};

struct CorrespondenceReport {
  std::vector<CorrespondenceEntry> entries;
  double max_residual = 0.0;              // eigenvector residuals vs mu
  double max_coefficient_residual = 0.0;  // residuals vs b
  double max_spectrum_distance = 0.0;     // b-set inside spec(U)
  double max_subspace_overlap = 0.0;      // |<R_a, R_a'>| for a != a'
  double max_arcsin_error = 0.0;          // |-i mu - exp(-+ i arcsin lambda)| family
  std::vector<std::string> failures;
  bool passed() const noexcept { return failures.empty(); }
};

// Checks the eigen-correspondence between M and `walk` (which must already
// contain any oracle coins; see CoinedWalk::with_oracle_coins).
CorrespondenceReport verify_correspondence(const CoinedWalk& walk,
                                           const Eigen::MatrixXd& m,
                                           double tolerance = 1e-9);

}  // namespace nandwalk
