#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "nandwalk/formula.hpp"
#include "nandwalk/hamiltonian.hpp"

namespace nandwalk {

inline constexpr double kKernelTolerance = 1e-9;   // relative to ||H||
inline constexpr double kSupportTolerance = 1e-8;  // tau
inline constexpr double kClusterTolerance = 1e-9;  // degenerate eigenvalues

struct EigenSystem {
  Eigen::VectorXd values;   // ascending
  Eigen::MatrixXd vectors;  // columns, orthonormal
  double reconstruction_residual = 0.0;  // max |H - Q L Q^T|
  double orthonormality_residual = 0.0;  // max |Q^T Q - I|
  double norm = 0.0;                     // max |E|
};

// Dense symmetric eigendecomposition. Throws SizeError above the threshold.
EigenSystem eigendecompose(const WeightedAdjacency& h,
                           std::size_t dense_threshold = kDefaultDenseThreshold);
EigenSystem eigendecompose(const Eigen::MatrixXd& h,
                           std::size_t dense_threshold = kDefaultDenseThreshold);

// Index ranges [first, last) of eigenvalues equal within kClusterTolerance.
std::vector<std::pair<std::size_t, std::size_t>> eigenvalue_clusters(
    const Eigen::VectorXd& values, double tolerance = kClusterTolerance);

// Norm of the projection of |v> onto the span of columns [first, last).
double projected_amplitude(const EigenSystem& es, std::size_t first, std::size_t last,
                           std::size_t vertex);

// Largest deviation between the sorted spectrum and its negation.
double spectrum_asymmetry(const Eigen::VectorXd& values);

struct ZeroEigenvector {
  std::vector<double> amplitudes;  // unnormalised, a_r = 1 before the sign flip
  double residual = 0.0;           // ||H a|| / ||a||
  double overlap = 0.0;            // <r''|a> / ||a||
  double tail_inner = 0.0;         // a_r'
  // a_r / ||a restricted to the formula tree||, and the lower bound
  // 1 / (sqrt(sigma) s_r^(1/2 - beta)) it must meet.
  double root_ratio = 0.0;
  double root_bound = 0.0;
};

// Recursive construction of the zero-energy eigenvector of H(x) for an input
// with phi(x) = 0: a_p = 1 at a 0-vertex, zero on its children, and for each
// child v one 0-grandchild subtree scaled by -h_pv / h_vc. The tail sets
// a_r' = 0 and a_r'' = -(h_r'r / h_r''r') a_r. Throws std::invalid_argument
// when phi(x) = 1.
ZeroEigenvector construct_zero_eigenvector(const GateTree& tree,
                                           const WeightedAdjacency& h,
                                           const InputAssignment& x);

struct SupportCheck {
  bool passed = true;
  std::size_t kernel_dimension = 0;
  // Largest kernel-projector amplitude at a vertex with NAND value 1 in the
  // component of r'' (and at r', r'' when phi = 1).
  double max_amplitude = 0.0;
  std::vector<std::size_t> offending_vertices;
};

// Every zero-energy eigenvector vanishes on 1-valued vertices of the root
// component. Leaves with x_i = 1 are isolated and excluded.
SupportCheck check_zero_support(const GateTree& tree, const EigenSystem& es,
                                const WeightedAdjacency& h, const InputAssignment& x);

struct GapCheck {
  bool passed = true;
  double bound = 0.0;    // 1 / (9 sigma_minus sqrt(sigma_plus))
  double min_gap = 0.0;  // min |E| over tail-supported eigenspaces (inf if none)
  std::size_t supported_clusters = 0;
};

// Requires phi(x) = 1 (std::invalid_argument otherwise). sigma_minus uses the
// weights' beta.
GapCheck check_spectral_gap(const GateTree& tree, const EigenSystem& es,
                            const WeightedAdjacency& h, const InputAssignment& x);
double spectral_gap_bound(const GateTree& tree, double beta);

struct YBoundVertex {
  std::size_t vertex = 0;
  int value = 0;
  double y0 = 0.0, y1 = 0.0, gamma = 0.0;
  double ratio = 0.0;  // alpha_p/alpha_v (value 0) or alpha_v/alpha_p (value 1)
  bool checked = false;
  bool ratio_ok = true;
  bool gamma_ok = true;
};

struct YBoundReport {
  double energy = 0.0;
  double gamma_big = 0.0;        // Gamma = 1/(2 sigma_minus(r))
  double gamma_prime = 0.0;      // Gamma' = 8 sigma_minus(r)
  std::vector<YBoundVertex> vertices;
  std::size_t ratio_failures = 0;
  std::size_t gamma_failures = 0;  // vertices of the formula tree
  // gamma_r' sits outside [1/Gamma', Gamma] whenever the tail terms push
  // sigma(r') past sigma(r); tracked apart from the formula vertices.
  bool tail_gamma_ok = true;
  bool tail_zero = false;        // alpha_r' = alpha_r'' = 0
};

// Alpha with alpha_r'' = 1 and (H alpha)_v = E alpha_v at every vertex
// v != r'', built from the ratios alpha_v / alpha_p = h_pv / (E - sum_c h_vc
// alpha_c / alpha_v). These are the only rows the y-recursion argument uses,
// so the diagnostic can be exercised below the spectral gap, where H has no
// eigenvector.
Eigen::VectorXd partial_eigenvector(const GateTree& tree, const WeightedAdjacency& h,
                                    double energy);

// Bottom-up y_0v, y_1v, gamma_v recursion and the sign/ratio inequalities at
// every vertex below r''. Amplitudes with magnitude <= zero_tolerance count
// as zero. Diagnostic only: failures are counted, not thrown. Throws
// std::invalid_argument if E is outside (0, gap bound].
YBoundReport ybound_diagnostic(const GateTree& tree, const WeightedAdjacency& h,
                               const InputAssignment& x, double energy,
                               const Eigen::VectorXd& eigenvector,
                               double zero_tolerance = 1e-10);

struct SpectralReport {
  std::string input;
  int value = 0;
  std::vector<double> eigenvalues;
  double asymmetry = 0.0;
  double reconstruction_residual = 0.0;
  double orthonormality_residual = 0.0;
  // phi = 0
  double zero_residual = 0.0;
  double zero_overlap = 0.0;
  double root_ratio = 0.0;
  double root_bound = 0.0;
  // phi = 1
  double min_gap = 0.0;
  double gap_bound = 0.0;
  SupportCheck support;
  bool zero_eigenvector_ok = true;  // residual and overlap (phi = 0)
  bool gap_ok = true;               // (phi = 1)
  bool symmetry_ok = true;
  bool passed() const noexcept {
    return zero_eigenvector_ok && gap_ok && symmetry_ok && support.passed;
  }
};

inline constexpr double kResidualTolerance = 1e-10;
inline constexpr double kOverlapTolerance = 1e-9;
inline constexpr double kGapTolerance = 1e-10;
inline constexpr double kSymmetryTolerance = 1e-10;

// All spectral checks for one input.
SpectralReport analyze(const GateTree& tree, const WeightedAdjacency& h0,
                       const InputAssignment& x,
                       std::size_t dense_threshold = kDefaultDenseThreshold);

}  // namespace nandwalk
