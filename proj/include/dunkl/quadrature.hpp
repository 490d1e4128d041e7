#pragma once

#include <functional>
#include <span>
#include <vector>

namespace dunkl {

struct QuadResult {
  double value = 0.0;
  double error = 0.0;
};

/// Adaptive Gauss-Kronrod (7/15) integration of f over [a, b], split at the
/// given interior breakpoints (values outside (a, b) are ignored). The error
/// is the sum of per-piece estimates.
QuadResult integrate(const std::function<double(double)>& f, double a, double b,
                     std::span<const double> breakpoints = {}, double rel_tol = 1e-12,
                     unsigned max_depth = 18);

/// Gauss-Jacobi rule for the weight (1-t)^alpha (1+t)^beta on [-1, 1].
struct GaussJacobiRule {
  double alpha = 0.0;
  double beta = 0.0;
  std::vector<double> nodes;
  std::vector<double> log_weights;
};

/// n-point rule; alpha, beta > -1. Nodes from the Jacobi matrix eigenvalues,
/// refined by Newton on the three-term recurrence, weights from the closed
/// Christoffel formula (kept in log form so tiny end weights stay accurate).
GaussJacobiRule gauss_jacobi(int n, double alpha, double beta);

/// Jacobi polynomial P_n^{(alpha,beta)}(x) and its derivative.
struct JacobiEval {
  double p;
  double dp;
};
JacobiEval jacobi_polynomial(int n, double alpha, double beta, double x);

}  // namespace dunkl
