#pragma once

#include "dunkl/log_value.hpp"

namespace dunkl {

/// 1F1(a; b; z) for a, b > 0.
///
/// z >= 0: positive power series (log-rescaled, 1e5-term cap) or, for large
/// z, the Poincare expansion Gamma(b)/Gamma(a) e^z z^(a-b) sum (b-a)_n (1-a)_n
/// / (n! z^n) when its terms stay small. z < 0: Kummer's transformation
/// e^z 1F1(b-a; b; -z).
LogValue kummer_1f1(double a, double b, double z);

/// Series-only evaluation, z >= 0 (no asymptotic shortcut). Used to
/// cross-check the large-argument route.
LogValue kummer_1f1_series(double a, double b, double z);

/// j_alpha(iu) = Gamma(alpha+1) sum (u/2)^(2n) / (n! Gamma(n+alpha+1)).
LogValue sph_bessel_imag(double alpha, double u);

/// d/du log j_alpha(iu); odd in u.
double sph_bessel_imag_logderiv(double alpha, double u);

/// Rank-one Dunkl kernel E_k(x, lambda); depends on x*lambda only.
LogValue dunkl_E_1d(double k, double x, double lambda);

/// Second route: Gamma(k+1/2)/(Gamma(1/2)Gamma(k)) int e^{x lambda t}
/// (1-t)^(k-1) (1+t)^k dt by Gauss-Jacobi quadrature, k > 0.
LogValue dunkl_E_1d_quadrature(double k, double x, double lambda, int nodes = 200);

/// d/dlambda log E_k(x, lambda).
double dunkl_E_1d_dlam(double k, double x, double lambda);

/// (d^2/dlambda^2 E_k(x, lambda)) / E_k(x, lambda).
double dunkl_E_1d_d2lam(double k, double x, double lambda);

/// J_k(x, lambda) = j_{k-1/2}(i x lambda).
LogValue bessel_J_1d(double k, double x, double lambda);

/// Everything the simulator and moment code need from E_k at s = x*lambda,
/// evaluated from one set of series.
struct DunklProfile {
  LogValue value;      ///< E(s)
  LogValue reflected;  ///< E(-s)
  double dlog;         ///< (log E)'(s)
  double d2ratio;      ///< E''(s) / E(s)
};
DunklProfile dunkl_profile(double k, double s);

/// Same for J_k(s) = j_{k-1/2}(is).
struct BesselProfile {
  LogValue value;
  double dlog;
  double d2ratio;
};
BesselProfile bessel_profile(double k, double s);

}  // namespace dunkl
