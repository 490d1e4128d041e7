#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <optional>
#include <vector>

#include "dunkl/log_value.hpp"
#include "dunkl/random.hpp"
#include "dunkl/root_system.hpp"

namespace dunkl {

/// Kernels are exact for Rank1 and ProductZ2 (products of rank-one kernels)
/// and for k = 0 on every kind (E = exp<x, y>, J its Weyl-group average).
bool kernel_supported(const RootSystem& rs);

LogValue dunkl_E_nd(const RootSystem& rs, const Vec& x, const Vec& lambda);
LogValue bessel_J_nd(const RootSystem& rs, const Vec& x, const Vec& lambda);

/// |W|^{-1} sum over g in W of E_k(x, g lambda), by explicit enumeration.
/// Slow; exists to check bessel_J_nd.
LogValue bessel_J_by_orbit_sum(const RootSystem& rs, const Vec& x, const Vec& lambda);

/// Geometric parameter cases realized by Haar integrals over compact groups.
struct GeometricCase {
  RootKind kind = RootKind::A;  ///< A (Hermitian matrices) or B (M x N matrices)
  int d = 1;                    ///< 1 real, 2 complex
  int M = 0;                    ///< B only, M >= N

  /// Multiplicity realized by the case at rank N.
  RootSystem root_system(int N) const;
};

struct HaarEstimate {
  LogValue value;
  double std_error = 0.0;  ///< relative standard error of the mean
  std::int64_t samples = 0;
};

/// Monte Carlo Bessel function of a geometric case via Haar-random unitary
/// conjugation: A averages exp(sum |U_ij|^2 x_j lambda_i); B averages
/// exp(sum_{i,j<=N} x_i lambda_j Re(U_ij conj(V_ij))) over independent Haar
/// U (M x M) and V (N x N).
HaarEstimate haar_bessel_estimate(const GeometricCase& c, const Vec& x, const Vec& lambda, std::int64_t samples,
                                  RandomStream& rng);

/// Haar-distributed orthogonal (d = 1) or unitary (d = 2) n x n matrix.
Eigen::MatrixXcd haar_unitary(int n, int d, RandomStream& rng);

enum class KernelFamily { Dunkl, Bessel };

struct MomentPair {
  Vec m1;
  Vec m2_diag;
  std::optional<Eigen::MatrixXd> m2_full;
};

/// Modified moments m1 = grad_lambda log F(x, lambda) and m2 = Hess_lambda F / F
/// with F = E_k (Dunkl) or J_k (Bessel); Rank1 and ProductZ2 only.
MomentPair moments(const RootSystem& rs, KernelFamily family, const Vec& lambda, const Vec& x);

/// ||m1(t x) - p(t x)|| / t for each t, with p_i(y) = sign(lambda_i) |y_i|.
std::vector<double> m1_limit_check(const RootSystem& rs, const Vec& lambda, const Vec& x,
                                   const std::vector<double>& t_values);

}  // namespace dunkl
