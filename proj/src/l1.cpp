#include "cifg/l1.hpp"

#include "cifg/sampling.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <cstdio>

namespace cifg {

namespace {

double nrm2(const cvec& v) {
  double s = 0.0;
  for (const cplx& z : v) s += std::norm(z);
  return std::sqrt(s);
}

double nrm1(const cvec& v) {
  double s = 0.0;
  for (const cplx& z : v) s += std::abs(z);
  return s;
}

cvec axpy(const cvec& x, const cvec& y, double a) {
  cvec out(x.size());
  for (size_t i = 0; i < x.size(); ++i) out[i] = x[i] + a * y[i];
  return out;
}

cplx dot(const cvec& a, const cvec& b) {
  cplx s(0.0, 0.0);
  for (size_t i = 0; i < a.size(); ++i) s += std::conj(a[i]) * b[i];
  return s;
}

// Solves (A A*) w = r by conjugate gradients on the matrix-free normal
// operator. A A* is Hermitian positive semidefinite by construction.
cvec solve_gram(const LinearMap& A, const cvec& r, const SolverOptions& opts) {
  cvec w(r.size(), cplx(0.0, 0.0));
  cvec residual = r;
  cvec p = residual;
  double rho = dot(residual, residual).real();
  const double target = opts.cg_tol * std::max(1.0, nrm2(r));
  for (int it = 0; it < opts.cg_max_iterations && std::sqrt(rho) > target; ++it) {
    const cvec Ap = A.forward(A.adjoint(p));
    const double denom = dot(p, Ap).real();
    if (denom <= 0.0) break;
    const double alpha = rho / denom;
    for (size_t i = 0; i < w.size(); ++i) w[i] += alpha * p[i];
    for (size_t i = 0; i < residual.size(); ++i) residual[i] -= alpha * Ap[i];
    const double rho_next = dot(residual, residual).real();
    const double beta = rho_next / rho;
    for (size_t i = 0; i < p.size(); ++i) p[i] = residual[i] + beta * p[i];
    rho = rho_next;
  }
  return w;
}

// Projection onto {x : Ax = y}: x + A*(AA*)^{-1}(y - Ax).
cvec project_affine(const LinearMap& A, const cvec& y, const cvec& x,
                    const SolverOptions& opts) {
  cvec r = A.forward(x);
  for (size_t i = 0; i < r.size(); ++i) r[i] = y[i] - r[i];
  cvec w;
  if (A.gram_scale) {
    w = std::move(r);
    const double inv = 1.0 / *A.gram_scale;
    for (cplx& z : w) z *= inv;
  } else {
    w = solve_gram(A, r, opts);
  }
  const cvec corr = A.adjoint(w);
  return axpy(x, corr, 1.0);
}

void soft_threshold(cvec& v, double t) {
  for (cplx& z : v) {
    const double m = std::abs(z);
    z = m <= t ? cplx(0.0, 0.0) : z * ((m - t) / m);
  }
}

}  // namespace

LinearMap dense_map(const Eigen::MatrixXcd& A) {
  LinearMap op;
  op.input_dim = static_cast<int>(A.cols());
  op.output_dim = static_cast<int>(A.rows());
  op.forward = [A](const cvec& x) {
    Eigen::Map<const Eigen::VectorXcd> xv(x.data(), static_cast<Eigen::Index>(x.size()));
    Eigen::VectorXcd yv = A * xv;
    return cvec(yv.data(), yv.data() + yv.size());
  };
  op.adjoint = [A](const cvec& y) {
    Eigen::Map<const Eigen::VectorXcd> yv(y.data(), static_cast<Eigen::Index>(y.size()));
    Eigen::VectorXcd xv = A.adjoint() * yv;
    return cvec(xv.data(), xv.data() + xv.size());
  };
  return op;
}

double adjoint_defect(const LinearMap& A, uint64_t seed, int probes) {
  RandomStream stream(seed);
  auto randn = [&stream](int n) {
    cvec v(static_cast<size_t>(n));
    for (cplx& z : v) z = cplx(stream.next_unit() - 0.5, stream.next_unit() - 0.5);
    return v;
  };
  double worst = 0.0;
  for (int i = 0; i < probes; ++i) {
    const cvec x = randn(A.input_dim);
    const cvec y = randn(A.output_dim);
    const cplx lhs = dot(y, A.forward(x));
    const cplx rhs = dot(A.adjoint(y), x);
    const double scale = std::max({1.0, std::abs(lhs), std::abs(rhs)});
    worst = std::max(worst, std::abs(lhs - rhs) / scale);
  }
  return worst;
}

std::string SolverReport::to_json() const {
  char buf[192];
  std::snprintf(buf, sizeof(buf),
                "{\"iterations\": %d, \"residual\": %.17g, \"objective\": %.17g, "
                "\"converged\": %s}",
                iterations, residual, objective, converged ? "true" : "false");
  return buf;
}

std::pair<cvec, SolverReport> basis_pursuit(const LinearMap& A, const cvec& y,
                                            const SolverOptions& opts) {
  if (static_cast<int>(y.size()) != A.output_dim)
    throw std::invalid_argument("basis_pursuit: measurement dimension mismatch");
  if (opts.max_iterations < 1 || opts.relative_tol <= 0.0 ||
      !(opts.relaxation > 0.0 && opts.relaxation < 2.0))
    throw std::invalid_argument("basis_pursuit: invalid solver options");

  const double ynorm = nrm2(y);
  const double res_tol = opts.residual_tol > 0.0 ? opts.residual_tol : 1e-7 * ynorm;

  SolverReport report;
  // Least-norm feasible point; also the zero-filled least-squares start.
  cvec zero(static_cast<size_t>(A.input_dim), cplx(0.0, 0.0));
  cvec x = project_affine(A, y, zero, opts);

  double threshold = opts.threshold;
  if (threshold <= 0.0) {
    const double rms = nrm2(x) / std::sqrt(static_cast<double>(std::max(1, A.input_dim)));
    threshold = rms > 0.0 ? 0.5 * rms : 1.0;
  }

  cvec z = x;
  cvec x_prev = x;
  int it = 0;
  bool reached_tol = false;
  for (; it < opts.max_iterations; ++it) {
    // reflect through the constraint, prox the l1 term, relax
    cvec reflected(z.size());
    for (size_t i = 0; i < z.size(); ++i) reflected[i] = 2.0 * x[i] - z[i];
    soft_threshold(reflected, threshold);
    for (size_t i = 0; i < z.size(); ++i)
      z[i] += opts.relaxation * (reflected[i] - x[i]);
    x_prev = x;
    x = project_affine(A, y, z, opts);

    double diff = 0.0, base = 0.0;
    for (size_t i = 0; i < x.size(); ++i) {
      diff += std::norm(x[i] - x_prev[i]);
      base += std::norm(x_prev[i]);
    }
    if (std::sqrt(diff) <= opts.relative_tol * std::max(1.0, std::sqrt(base))) {
      ++it;
      reached_tol = true;
      break;
    }
  }

  cvec final_residual = A.forward(x);
  for (size_t i = 0; i < final_residual.size(); ++i) final_residual[i] -= y[i];
  report.iterations = it;
  report.residual = nrm2(final_residual);
  report.objective = nrm1(x);
  report.converged = reached_tol && report.residual <= res_tol;
  return {std::move(x), report};
}

BruteForceResult brute_force_bp(const Eigen::MatrixXcd& A, const Eigen::VectorXcd& y,
                                int k_max) {
  if (A.rows() > 16 || A.cols() > 32)
    throw std::invalid_argument("brute_force_bp: instance exceeds the 16x32 cap");
  if (k_max < 0 || k_max > 4)
    throw std::invalid_argument("brute_force_bp: k_max must be in [0, 4]");
  if (y.size() != A.rows()) throw std::invalid_argument("brute_force_bp: dimension mismatch");

  const int n = static_cast<int>(A.cols());
  const double feas_tol = 1e-9 * std::max(1.0, y.norm());

  BruteForceResult best;
  best.solution.assign(static_cast<size_t>(n), cplx(0.0, 0.0));
  if (y.norm() <= feas_tol) {
    best.feasible = true;
    return best;
  }

  std::vector<int> support;
  std::function<void(int, int)> scan = [&](int start, int remaining) {
    if (!support.empty()) {
      Eigen::MatrixXcd As(A.rows(), static_cast<Eigen::Index>(support.size()));
      for (size_t j = 0; j < support.size(); ++j) As.col(static_cast<Eigen::Index>(j)) = A.col(support[j]);
      Eigen::VectorXcd xs = As.colPivHouseholderQr().solve(y);
      if ((As * xs - y).norm() <= feas_tol) {
        const double obj = xs.cwiseAbs().sum();
        if (!best.feasible || obj < best.objective) {
          best.feasible = true;
          best.objective = obj;
          best.support_size = static_cast<int>(support.size());
          std::fill(best.solution.begin(), best.solution.end(), cplx(0.0, 0.0));
          for (size_t j = 0; j < support.size(); ++j)
            best.solution[static_cast<size_t>(support[j])] = xs(static_cast<Eigen::Index>(j));
        }
      }
    }
    if (remaining == 0) return;
    for (int c = start; c < n; ++c) {
      support.push_back(c);
      scan(c + 1, remaining - 1);
      support.pop_back();
    }
  };
  scan(0, k_max);
  return best;
}

Eigen::MatrixXcd weighted_matrix(const std::vector<size_t>& point_indices,
                                 const std::vector<double>& point_probabilities, double m,
                                 int N,
                                 const std::function<ComplexGrid(int)>& synthesis_spectrum,
                                 int num_columns) {
  if (point_indices.size() != point_probabilities.size())
    throw std::invalid_argument("weighted_matrix: point/probability length mismatch");
  if (m <= 0.0) throw std::invalid_argument("weighted_matrix: m must be positive");
  for (double p : point_probabilities)
    if (!(p > 0.0))
      throw std::invalid_argument("weighted_matrix: zero density at a sampled point");

  Eigen::MatrixXcd A(static_cast<Eigen::Index>(point_indices.size()), num_columns);
  for (int col = 0; col < num_columns; ++col) {
    const ComplexGrid spec = synthesis_spectrum(col);
    for (size_t row = 0; row < point_indices.size(); ++row) {
      const double w = static_cast<double>(N) * std::sqrt(m * point_probabilities[row]);
      A(static_cast<Eigen::Index>(row), col) = spec.data[point_indices[row]] / w;
    }
  }
  return A;
}

RipEstimate rip_constant(const Eigen::MatrixXcd& A, int k, int random_supports,
                         uint64_t seed) {
  const int n = static_cast<int>(A.cols());
  if (k < 1 || k > n) throw std::invalid_argument("rip_constant: k out of range");
  const Eigen::MatrixXcd gram = A.adjoint() * A;

  auto support_delta = [&gram](const std::vector<int>& support) {
    const Eigen::Index sz = static_cast<Eigen::Index>(support.size());
    Eigen::MatrixXcd gs(sz, sz);
    for (Eigen::Index a = 0; a < sz; ++a)
      for (Eigen::Index b = 0; b < sz; ++b)
        gs(a, b) = gram(support[static_cast<size_t>(a)], support[static_cast<size_t>(b)]);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(gs, Eigen::EigenvaluesOnly);
    const auto& ev = eig.eigenvalues();
    return std::max(std::abs(ev(0) - 1.0), std::abs(ev(sz - 1) - 1.0));
  };

  RipEstimate est;
  // Deviations only grow with the support, so |S| = k suffices.
  const bool exhaustive = n <= 24 && k <= 4;
  est.exhaustive = exhaustive;
  if (exhaustive) {
    std::vector<int> support;
    std::function<void(int, int)> scan = [&](int start, int remaining) {
      if (remaining == 0) {
        est.delta = std::max(est.delta, support_delta(support));
        ++est.supports_checked;
        return;
      }
      for (int c = start; c <= n - remaining; ++c) {
        support.push_back(c);
        scan(c + 1, remaining - 1);
        support.pop_back();
      }
    };
    scan(0, k);
  } else {
    RandomStream stream(seed);
    std::vector<int> pool(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) pool[static_cast<size_t>(i)] = i;
    for (int trial = 0; trial < random_supports; ++trial) {
      for (int j = 0; j < k; ++j) {
        const size_t pick =
            j + static_cast<size_t>(stream.next_unit() * static_cast<double>(n - j));
        std::swap(pool[static_cast<size_t>(j)], pool[std::min(pick, static_cast<size_t>(n - 1))]);
      }
      std::vector<int> support(pool.begin(), pool.begin() + k);
      std::sort(support.begin(), support.end());
      est.delta = std::max(est.delta, support_delta(support));
      ++est.supports_checked;
    }
  }
  return est;
}

}  // namespace cifg
