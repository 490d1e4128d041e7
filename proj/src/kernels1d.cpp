#include "dunkl/kernels1d.hpp"

#include <array>
#include <cmath>
#include <stdexcept>
#include <vector>

#include <boost/math/special_functions/gamma.hpp>

#include "dunkl/quadrature.hpp"
#include "dunkl/root_system.hpp"

namespace dunkl {

namespace {

using boost::math::lgamma;

constexpr int kTermCap = 100000;
constexpr double kTailTol = 1e-17;
constexpr double kRescale = 1e200;
const double kLogRescale = std::log(kRescale);
constexpr double kAsymptoticStart = 40.0;

// Positive hypergeometric-type series sharing one argument: each entry j
// accumulates sum_n t_{j,n} with t_{j,0} = 1 and t_{j,n+1}/t_{j,n} =
// ratio(j, n). Returns the log of each sum. Ratios must be nonnegative and
// eventually decreasing; bound(j, n) must dominate every ratio after n.
template <std::size_t M, class Ratio, class Bound>
std::array<double, M> positive_series(Ratio ratio, Bound bound) {
  std::array<double, M> term, sum, offset{};
  std::array<bool, M> done{};
  term.fill(1.0);
  sum.fill(1.0);
  std::size_t remaining = M;
  for (int n = 0; remaining > 0; ++n) {
    if (n >= kTermCap) throw NumericalError("hypergeometric series exceeded term cap");
    for (std::size_t j = 0; j < M; ++j) {
      if (done[j]) continue;
      term[j] *= ratio(j, n);
      sum[j] += term[j];
      const double r = bound(j, n + 1);
      if (r < 1.0 && term[j] * ratio(j, n + 1) < kTailTol * (1.0 - r) * sum[j]) {
        done[j] = true;
        --remaining;
      } else if (sum[j] > kRescale) {
        sum[j] /= kRescale;
        term[j] /= kRescale;
        offset[j] += kLogRescale;
      }
    }
  }
  std::array<double, M> out;
  for (std::size_t j = 0; j < M; ++j) out[j] = offset[j] + std::log(sum[j]);
  return out;
}

// log 1F1(a; b; z) by its power series, a >= 0, b > 0, z >= 0.
template <std::size_t M>
std::array<double, M> series_1f1(const std::array<double, M>& a, const std::array<double, M>& b, double z) {
  return positive_series<M>(
      [&](std::size_t j, int n) { return (a[j] + n) * z / ((b[j] + n) * (n + 1.0)); },
      [&](std::size_t j, int n) {
        const double q = (a[j] + n) / (b[j] + n);
        return (q > 1.0 ? q : 1.0) * z / (n + 1.0);
      });
}

// Large-z expansion; returns false when the terms do not settle quickly.
bool asymptotic_1f1(double a, double b, double z, double& log_out) {
  if (z < kAsymptoticStart + 4.0 * std::max(0.0, b - 2.0 * a)) return false;
  const double c = b - a;
  const double d = 1.0 - a;
  double term = 1.0;
  double sum = 1.0;
  double prev = 1.0;
  for (int n = 0; n < 400; ++n) {
    term *= (c + n) * (d + n) / ((n + 1.0) * z);
    const double mag = std::fabs(term);
    if (mag > 1e3) return false;
    sum += term;
    if (mag <= kTailTol * std::fabs(sum)) {
      if (sum <= 0.0) return false;
      log_out = lgamma(b) - lgamma(a) + z + (a - b) * std::log(z) + std::log(sum);
      return true;
    }
    if (n > 2 && mag > prev) return false;
    prev = mag;
  }
  return false;
}

// Signed power series for parameter combinations where the positive route
// is unavailable; refuses when cancellation would eat the precision.
LogValue signed_series_1f1(double a, double b, double z) {
  double term = 1.0;
  double sum = 1.0;
  double biggest = 1.0;
  for (int n = 0; n < kTermCap; ++n) {
    term *= (a + n) * z / ((b + n) * (n + 1.0));
    sum += term;
    biggest = std::max(biggest, std::fabs(term));
    if (term == 0.0) break;
    if (n > std::fabs(z) && std::fabs(term) < kTailTol * std::fabs(sum)) break;
    if (n == kTermCap - 1) throw NumericalError("1F1 signed series exceeded term cap");
  }
  if (biggest > 1e8 * std::fabs(sum)) throw NumericalError("1F1 signed series lost precision to cancellation");
  return LogValue::from_double(sum);
}

LogValue positive_1f1(double a, double b, double z) {
  if (z == 0.0 || a == 0.0) return LogValue::one();
  double log_v = 0.0;
  if (asymptotic_1f1(a, b, z, log_v)) return LogValue::from_log(log_v);
  return LogValue::from_log(series_1f1<1>({a}, {b}, z)[0]);
}

// log 1F1 at several (a, b) pairs with common z >= 0, a >= 0.
template <std::size_t M>
std::array<double, M> multi_1f1(const std::array<double, M>& a, const std::array<double, M>& b, double z) {
  std::array<double, M> out;
  bool all_asym = z >= kAsymptoticStart;
  for (std::size_t j = 0; j < M && all_asym; ++j) all_asym = asymptotic_1f1(a[j], b[j], z, out[j]);
  if (all_asym) return out;
  return series_1f1<M>(a, b, z);
}

const GaussJacobiRule& cached_rule(int n, double alpha, double beta) {
  thread_local std::vector<GaussJacobiRule> cache;
  for (const auto& r : cache)
    if (r.alpha == alpha && r.beta == beta && static_cast<int>(r.nodes.size()) == n) return r;
  if (cache.size() > 64) cache.clear();
  cache.push_back(gauss_jacobi(n, alpha, beta));
  return cache.back();
}

double log_cosh(double u) {
  const double a = std::fabs(u);
  return a + std::log1p(std::exp(-2.0 * a)) - std::log(2.0);
}

// log j_{alpha+m}(iu) for m = 0, 1, 2, u >= 0, alpha > -1/2.
std::array<double, 3> log_sph_bessel_triple(double alpha, double u) {
  if (u >= 0.5 * kAsymptoticStart) {
    std::array<double, 3> out;
    for (int m = 0; m < 3; ++m) {
      const double al = alpha + m;
      out[m] = -u + positive_1f1(al + 0.5, 2.0 * al + 1.0, 2.0 * u).log_abs();
    }
    return out;
  }
  const double q = 0.25 * u * u;
  return positive_series<3>(
      [&](std::size_t m, int n) { return q / ((n + 1.0) * (n + 1.0 + alpha + m)); },
      [&](std::size_t m, int n) { return q / ((n + 1.0) * (n + 1.0 + alpha + m)); });
}

void check_alpha(double alpha) {
  if (!(alpha >= -0.5)) throw std::invalid_argument("spherical Bessel index must be >= -1/2");
}

void check_k(double k) {
  if (!(k >= 0.0) || !std::isfinite(k)) throw std::invalid_argument("multiplicity must be finite and >= 0");
}

}  // namespace

LogValue kummer_1f1_series(double a, double b, double z) {
  if (!(b > 0.0)) throw std::invalid_argument("1F1: b must be positive");
  if (!(z >= 0.0)) throw std::invalid_argument("1F1 series route needs z >= 0");
  if (a < 0.0) return signed_series_1f1(a, b, z);
  if (z == 0.0 || a == 0.0) return LogValue::one();
  return LogValue::from_log(series_1f1<1>({a}, {b}, z)[0]);
}

LogValue kummer_1f1(double a, double b, double z) {
  if (!(b > 0.0)) throw std::invalid_argument("1F1: b must be positive");
  if (std::isnan(a) || std::isnan(z)) throw std::invalid_argument("1F1: NaN argument");
  if (z >= 0.0) {
    if (a >= 0.0) return positive_1f1(a, b, z);
    return signed_series_1f1(a, b, z);
  }
  const double c = b - a;
  if (c >= 0.0) return LogValue::from_log(z) * positive_1f1(c, b, -z);
  return signed_series_1f1(a, b, z);
}

LogValue sph_bessel_imag(double alpha, double u) {
  check_alpha(alpha);
  u = std::fabs(u);
  if (u == 0.0) return LogValue::one();
  if (alpha == -0.5) return LogValue::from_log(log_cosh(u));
  if (u >= 0.5 * kAsymptoticStart) return LogValue::from_log(-u) * positive_1f1(alpha + 0.5, 2.0 * alpha + 1.0, 2.0 * u);
  const double q = 0.25 * u * u;
  auto r = [&](std::size_t, int n) { return q / ((n + 1.0) * (n + 1.0 + alpha)); };
  return LogValue::from_log(positive_series<1>(r, r)[0]);
}

double sph_bessel_imag_logderiv(double alpha, double u) {
  check_alpha(alpha);
  if (u == 0.0) return 0.0;
  if (alpha == -0.5) return std::tanh(u);
  const double a = std::fabs(u);
  const auto l = log_sph_bessel_triple(alpha, a);
  const double h = a / (2.0 * (alpha + 1.0)) * std::exp(l[1] - l[0]);
  return u > 0 ? h : -h;
}

BesselProfile bessel_profile(double k, double s) {
  check_k(k);
  if (k == 0.0) return {LogValue::from_log(log_cosh(s)), std::tanh(s), 1.0};
  if (s == 0.0) return {LogValue::one(), 0.0, 1.0 / (2.0 * k + 1.0)};
  const double alpha = k - 0.5;
  const double u = std::fabs(s);
  const auto l = log_sph_bessel_triple(alpha, u);
  const double r1 = std::exp(l[1] - l[0]);
  const double r2 = std::exp(l[2] - l[0]);
  const double h = u / (2.0 * (alpha + 1.0)) * r1;
  const double d2 = (r1 + u * u / (2.0 * (alpha + 2.0)) * r2) / (2.0 * (alpha + 1.0));
  return {LogValue::from_log(l[0]), s > 0 ? h : -h, d2};
}

DunklProfile dunkl_profile(double k, double s) {
  check_k(k);
  if (k == 0.0) return {LogValue::from_log(s), LogValue::from_log(-s), 1.0, 1.0};
  const double u = std::fabs(s);
  const double z = 2.0 * u;
  const double b = 2.0 * k + 1.0;
  if (s >= 0.0) {
    // E(s) = e^{-s} F(k+1, 2k+1; 2s), E(-s) = e^{-s} F(k, 2k+1; 2s)
    const auto l = multi_1f1<4>({k + 1.0, k + 2.0, k + 3.0, k}, {b, b + 1.0, b + 2.0, b}, z);
    const double f2 = (k + 1.0) / b * std::exp(l[1] - l[0]);
    const double f3 = (k + 1.0) * (k + 2.0) / (b * (b + 1.0)) * std::exp(l[2] - l[0]);
    return {LogValue::from_log(l[0] - u), LogValue::from_log(l[3] - u), -1.0 + 2.0 * f2, 1.0 - 4.0 * f2 + 4.0 * f3};
  }
  // E(s) = e^{-u} G(2u) with G = F(k, 2k+1; .), u = -s
  const auto l = multi_1f1<4>({k, k + 1.0, k + 2.0, k + 1.0}, {b, b + 1.0, b + 2.0, b}, z);
  const double g1 = k / b * std::exp(l[1] - l[0]);
  const double g2 = k * (k + 1.0) / (b * (b + 1.0)) * std::exp(l[2] - l[0]);
  return {LogValue::from_log(l[0] - u), LogValue::from_log(l[3] - u), 1.0 - 2.0 * g1, 1.0 - 4.0 * g1 + 4.0 * g2};
}

LogValue dunkl_E_1d(double k, double x, double lambda) {
  check_k(k);
  const double s = x * lambda;
  if (k == 0.0 || s == 0.0) return LogValue::from_log(s);
  return LogValue::from_log(s) * kummer_1f1(k, 2.0 * k + 1.0, -2.0 * s);
}

LogValue dunkl_E_1d_quadrature(double k, double x, double lambda, int nodes) {
  if (!(k > 0.0)) throw std::invalid_argument("quadrature route needs k > 0");
  const double s = x * lambda;
  const GaussJacobiRule& rule = cached_rule(nodes, k - 1.0, k);
  std::vector<double> logs(rule.nodes.size());
  for (std::size_t i = 0; i < logs.size(); ++i) logs[i] = rule.log_weights[i] + s * rule.nodes[i];
  const double norm = lgamma(k + 0.5) - lgamma(0.5) - lgamma(k);
  return LogValue::from_log(norm + log_sum_exp(logs));
}

double dunkl_E_1d_dlam(double k, double x, double lambda) {
  if (x == 0.0) return 0.0;
  return x * dunkl_profile(k, x * lambda).dlog;
}

double dunkl_E_1d_d2lam(double k, double x, double lambda) {
  if (x == 0.0) return 0.0;
  return x * x * dunkl_profile(k, x * lambda).d2ratio;
}

LogValue bessel_J_1d(double k, double x, double lambda) {
  check_k(k);
  return sph_bessel_imag(k - 0.5, x * lambda);
}

}  // namespace dunkl
