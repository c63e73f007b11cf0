#pragma once

#include "cifg/grid.hpp"

#include <Eigen/Dense>

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace cifg {

using cvec = std::vector<cplx>;

// Matrix-free linear operator with an explicit adjoint. When the
// operator is row-orthogonal (A A* = gram_scale * I) the solver's
// affine projection is closed-form; otherwise the normal equations are
// solved by conjugate gradients on A A*.
struct LinearMap {
  int input_dim = 0;
  int output_dim = 0;
  std::function<cvec(const cvec&)> forward;
  std::function<cvec(const cvec&)> adjoint;
  std::optional<double> gram_scale;
};

LinearMap dense_map(const Eigen::MatrixXcd& A);

// Largest relative defect of <Ax, y> = <x, A*y> over `probes` seeded
// random probe pairs; the LinearMap invariant check.
double adjoint_defect(const LinearMap& A, uint64_t seed = 1, int probes = 8);

struct SolverOptions {
  int max_iterations = 2000;
  // Absolute residual target on ||Ax - y||_2; <= 0 means 1e-7 * ||y||_2.
  double residual_tol = 0.0;
  double relative_tol = 1e-9;
  // Douglas-Rachford parameters: soft-threshold level (<= 0 picks
  // 0.5 * rms of the least-norm feasible point) and relaxation in (0, 2).
  double threshold = 0.0;
  double relaxation = 1.0;
  int cg_max_iterations = 64;
  double cg_tol = 1e-12;
};

struct SolverReport {
  int iterations = 0;
  double residual = 0.0;
  double objective = 0.0;
  bool converged = false;

  std::string to_json() const;
};

// Equality-constrained l1 minimization  min ||x||_1  s.t.  Ax = y  by
// Douglas-Rachford splitting: the iterate is projected onto the affine
// constraint set (so it stays feasible) and reflected through the
// complex soft-thresholding prox. Non-convergence within the budget is
// reported, never thrown.
std::pair<cvec, SolverReport> basis_pursuit(const LinearMap& A, const cvec& y,
                                            const SolverOptions& opts = {});

struct BruteForceResult {
  cvec solution;
  double objective = 0.0;
  int support_size = 0;
  bool feasible = false;  // false: no support of size <= k_max fits y
};

// Independent oracle: enumerates every support of size <= k_max, solves
// the constrained least-squares on it, and returns the minimum-l1
// feasible candidate (residual <= 1e-9 * max(1, ||y||)). Guarded to
// dims <= 16 x 32, k_max <= 4.
BruteForceResult brute_force_bp(const Eigen::MatrixXcd& A, const Eigen::VectorXcd& y,
                                int k_max);

// Weighted measurement matrix: row n in `points` (flat storage indices
// into the synthesis spectrum), column lambda, entry
//   F(sigma_lambda)(n) / (N * sqrt(m * p(n)))
// with sigma_lambda the synthesis response of unit coefficient lambda
// and the 1/N factor normalizing the Fourier basis vectors.
Eigen::MatrixXcd weighted_matrix(const std::vector<size_t>& point_indices,
                                 const std::vector<double>& point_probabilities, double m,
                                 int N,
                                 const std::function<ComplexGrid(int)>& synthesis_spectrum,
                                 int num_columns);

struct RipEstimate {
  double delta = 0.0;
  bool exhaustive = true;  // false: randomized supports, value is a lower bound
  size_t supports_checked = 0;
};

// Empirical restricted isometry constant
//   delta_k = max_{|S| <= k} || A_S^* A_S - I ||_2.
// Exhaustive for cols <= 24 and k <= 4; larger instances sample
// `random_supports` supports and label the result a lower bound.
RipEstimate rip_constant(const Eigen::MatrixXcd& A, int k, int random_supports = 2000,
                         uint64_t seed = 7);

}  // namespace cifg
