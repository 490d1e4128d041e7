#include "dunkl/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <Eigen/Eigenvalues>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/gamma.hpp>

namespace dunkl {

QuadResult integrate(const std::function<double(double)>& f, double a, double b,
                     std::span<const double> breakpoints, double rel_tol, unsigned max_depth) {
  if (!(a < b)) return {};
  std::vector<double> cuts{a};
  for (double c : breakpoints)
    if (c > a && c < b) cuts.push_back(c);
  cuts.push_back(b);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  using GK = boost::math::quadrature::gauss_kronrod<double, 15>;
  QuadResult out;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    double err = 0.0;
    out.value += GK::integrate(f, cuts[i], cuts[i + 1], max_depth, rel_tol, &err);
    out.error += err;
  }
  return out;
}

JacobiEval jacobi_polynomial(int n, double alpha, double beta, double x) {
  const double ab = alpha + beta;
  double p0 = 1.0;
  if (n == 0) return {1.0, 0.0};
  double p1 = (alpha + 1.0) + 0.5 * (ab + 2.0) * (x - 1.0);
  for (int m = 2; m <= n; ++m) {
    const double c = 2.0 * m + ab;
    const double a1 = 2.0 * m * (m + ab) * (c - 2.0);
    const double a2 = (c - 1.0) * (c * (c - 2.0) * x + alpha * alpha - beta * beta);
    const double a3 = 2.0 * (m + alpha - 1.0) * (m + beta - 1.0) * c;
    const double p2 = (a2 * p1 - a3 * p0) / a1;
    p0 = p1;
    p1 = p2;
  }
  // p1 = P_n, p0 = P_{n-1}
  const double c = 2.0 * n + ab;
  const double dp =
      (n * (alpha - beta - c * x) * p1 + 2.0 * (n + alpha) * (n + beta) * p0) / (c * (1.0 - x * x));
  return {p1, dp};
}

GaussJacobiRule gauss_jacobi(int n, double alpha, double beta) {
  if (n < 1) throw std::invalid_argument("gauss_jacobi: n must be positive");
  if (!(alpha > -1.0) || !(beta > -1.0)) throw std::invalid_argument("gauss_jacobi: alpha, beta must exceed -1");
  const double ab = alpha + beta;

  Eigen::VectorXd diag(n);
  Eigen::VectorXd sub(std::max(n - 1, 1));
  for (int j = 0; j < n; ++j) {
    const double c = 2.0 * j + ab;
    diag(j) = (j == 0) ? (beta - alpha) / (ab + 2.0) : (beta * beta - alpha * alpha) / (c * (c + 2.0));
  }
  for (int j = 1; j < n; ++j) {
    const double c = 2.0 * j + ab;
    const double num = 4.0 * j * (j + alpha) * (j + beta) * (j + ab);
    const double den = c * c * (c + 1.0) * (c - 1.0);
    sub(j - 1) = std::sqrt(num / den);
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  solver.computeFromTridiagonal(diag, sub.head(n - 1), Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw std::runtime_error("gauss_jacobi: eigen solver failed");

  GaussJacobiRule rule;
  rule.alpha = alpha;
  rule.beta = beta;
  rule.nodes.resize(n);
  rule.log_weights.resize(n);

  using boost::math::lgamma;
  const double log_const = lgamma(n + alpha + 1.0) + lgamma(n + beta + 1.0) - lgamma(n + ab + 1.0) -
                           lgamma(n + 1.0) + (ab + 1.0) * std::log(2.0);
  for (int i = 0; i < n; ++i) {
    double x = solver.eigenvalues()(i);
    for (int it = 0; it < 8; ++it) {
      const JacobiEval e = jacobi_polynomial(n, alpha, beta, x);
      const double step = e.p / e.dp;
      x -= step;
      if (std::fabs(step) < 1e-16) break;
    }
    const JacobiEval e = jacobi_polynomial(n, alpha, beta, x);
    rule.nodes[i] = x;
    rule.log_weights[i] = log_const - std::log1p(-x * x) - 2.0 * std::log(std::fabs(e.dp));
  }
  return rule;
}

}  // namespace dunkl
