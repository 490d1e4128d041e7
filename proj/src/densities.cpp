#include "dunkl/densities.hpp"

#include <cmath>
#include <map>
#include <stdexcept>

#include <boost/math/constants/constants.hpp>

#include "dunkl/kernels1d.hpp"
#include "dunkl/kernels_nd.hpp"

namespace dunkl {

namespace {

constexpr double kPi = boost::math::constants::pi<double>();

LogValue kernel_K(const DensitySpec& ds, const Vec& x, const Vec& y) {
  return ds.family == DriftFamily::Bessel ? bessel_J_nd(ds.system, x, y) : dunkl_E_nd(ds.system, x, y);
}

LogValue kernel_G(const DensitySpec& ds, const Vec& x) {
  return ds.family == DriftFamily::Dunkl ? dunkl_E_nd(ds.system, x, ds.lambda) : bessel_J_nd(ds.system, x, ds.lambda);
}

double log_prefactor(const DensitySpec& ds) {
  double p = ds.system.log_norm_constant();
  if (ds.family == DriftFamily::Bessel) p += std::log(static_cast<double>(ds.system.weyl_order()));
  return p;
}

double log_normal_pdf(double y, double mean, double var) {
  return -0.5 * std::log(2.0 * kPi * var) - (y - mean) * (y - mean) / (2.0 * var);
}

double log_add(double a, double b) {
  const double m = std::max(a, b);
  return m + std::log(std::exp(a - m) + std::exp(b - m));
}

}  // namespace

std::string to_string(DriftFamily f) {
  switch (f) {
    case DriftFamily::Bessel: return "Bessel";
    case DriftFamily::Dunkl: return "Dunkl";
    case DriftFamily::Hybrid: return "Hybrid";
  }
  return "?";
}

DensitySpec::DensitySpec(DriftFamily f, RootSystem rs, Vec lam) : family(f), system(std::move(rs)), lambda(std::move(lam)) {
  if (lambda.size() != system.rank()) throw std::invalid_argument("drift must have the root system's rank");
  if (!kernel_supported(system))
    throw UnsupportedKind("no transition density for " + to_string(system.kind()) + " with k != 0");
  if (family == DriftFamily::Bessel && !system.in_chamber(lambda))
    throw std::invalid_argument("Bessel drift must lie in the closed chamber");
}

LogValue transition_density(const DensitySpec& ds, double t, const Vec& x, const Vec& y) {
  if (!(t > 0.0)) throw std::invalid_argument("transition_density: t must be positive");
  const RootSystem& rs = ds.system;
  if (x.size() != rs.rank() || y.size() != rs.rank()) throw std::invalid_argument("transition_density: dimension");
  if (ds.family == DriftFamily::Bessel) {
    if (!rs.in_chamber(x, 1e-12)) throw std::invalid_argument("Bessel start point must lie in the chamber");
    if (!rs.in_chamber(y)) return LogValue::zero();
  }
  const double lw = rs.log_weight(y);
  if (lw == -INFINITY) return LogValue::zero();
  const double n = rs.rank();
  const double log_p = log_prefactor(ds) - 0.5 * ds.lambda.squaredNorm() * t - (rs.gamma() + 0.5 * n) * std::log(t) -
                       (x.squaredNorm() + y.squaredNorm()) / (2.0 * t) + lw;
  return LogValue::from_log(log_p) * kernel_K(ds, x, y / t) * kernel_G(ds, y) / kernel_G(ds, x);
}

double density_support_radius(const DensitySpec& ds, double t, const Vec& x) {
  const double spread = 12.0 + std::sqrt(2.0 * ds.system.gamma() + ds.system.rank());
  return x.norm() + ds.lambda.norm() * t + spread * std::sqrt(t);
}

QuadResult normalization_check(const DensitySpec& ds, double t, const Vec& x, double rel_tol) {
  const int n = ds.system.rank();
  if (n > 2) throw UnsupportedKind("normalization_check: rank above 2");
  const double R = density_support_radius(ds, t, x);
  const double lo = ds.family == DriftFamily::Bessel ? 0.0 : -R;
  std::vector<double> cuts{0.0};
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double c = std::fabs(x(i)) + std::fabs(ds.lambda(i)) * t;
    cuts.push_back(c);
    cuts.push_back(-c);
  }
  Vec y = Vec::Zero(n);
  if (n == 1) {
    return integrate(
        [&](double v) {
          y(0) = v;
          return transition_density(ds, t, x, y).value();
        },
        lo, R, cuts, rel_tol);
  }
  // Inner integral: fixed Kronrod panels on a grid that depends smoothly on v0,
  // so the outer adaptive rule sees a smooth integrand. Panels are graded
  // toward the walls where the weight has its |y|^{2k} cusp.
  const double h = 0.25 * std::sqrt(t);
  std::vector<double> grid;
  for (double v = lo; v < R; v += h) grid.push_back(v);
  for (int j = 1; j <= 12; ++j) {
    grid.push_back(h * std::ldexp(1.0, -j));
    grid.push_back(-h * std::ldexp(1.0, -j));
  }
  return integrate(
      [&](double v0) {
        y(0) = v0;
        std::vector<double> inner = grid;
        inner.insert(inner.end(), cuts.begin(), cuts.end());
        inner.push_back(v0);
        inner.push_back(-v0);
        return integrate(
                   [&](double v1) {
                     y(1) = v1;
                     return transition_density(ds, t, x, y).value();
                   },
                   lo, R, inner, rel_tol, 0)
            .value;
      },
      lo, R, cuts, rel_tol);
}

double chapman_kolmogorov_check(const DensitySpec& ds, double s, double t, double x, double z, double rel_tol) {
  if (ds.system.rank() != 1) throw UnsupportedKind("chapman_kolmogorov_check: rank 1 only");
  Vec xv(1), zv(1), y(1);
  xv << x;
  zv << z;
  const double R = std::max(density_support_radius(ds, s, xv), density_support_radius(ds, t, zv));
  const double lo = ds.family == DriftFamily::Bessel ? 0.0 : -R;
  const std::vector<double> cuts{0.0, x, -x, z, -z};
  const QuadResult conv = integrate(
      [&](double v) {
        y(0) = v;
        return (transition_density(ds, s, xv, y) * transition_density(ds, t, y, zv)).value();
      },
      lo, R, cuts, rel_tol);
  const double direct = transition_density(ds, s + t, xv, zv).value();
  return std::fabs(conv.value - direct) / direct;
}

double kernel_tail_constant(bool bessel, double k) {
  if (k == 0.0) return 1.0;
  thread_local std::map<std::pair<bool, double>, double> cache;
  const auto key = std::make_pair(bessel, k);
  if (auto it = cache.find(key); it != cache.end()) return it->second;
  // sup_s kernel(s) e^{-|s|} |s|^k; the large-s limit comes from the 1F1 asymptotics
  double log_sup = bessel ? std::lgamma(k + 0.5) + (k - 1.0) * std::log(2.0) - 0.5 * std::log(kPi)
                          : std::lgamma(2.0 * k + 1.0) - std::lgamma(k + 1.0) - k * std::log(2.0);
  for (double u = -3.0; u <= 4.0; u += 0.01) {
    const double s = std::pow(10.0, u);
    const double lk = bessel ? bessel_J_1d(k, s, 1.0).log_abs()
                             : std::max(dunkl_E_1d(k, s, 1.0).log_abs(), dunkl_E_1d(k, -s, 1.0).log_abs());
    log_sup = std::max(log_sup, lk - s + k * std::log(s));
  }
  const double c = std::exp(log_sup) * 1.02;
  cache.emplace(key, c);
  return c;
}

double sample_exact_1d(const DensitySpec& ds, double t, double x, RandomStream& rng, SamplerStats* stats) {
  if (ds.system.rank() != 1) throw UnsupportedKind("sample_exact_1d: rank 1 only");
  if (!(t > 0.0)) throw std::invalid_argument("sample_exact_1d: t must be positive");
  const bool folded = ds.family == DriftFamily::Bessel;
  const double k = ds.system.k();
  const double lam = ds.lambda(0);
  Vec xv(1), yv(1);
  xv << x;

  // With K(s), G(s) <= e^{|s|} min(1, C |s|^{-k}):
  // p(y) <= A r^{2k} min(1, C_K (t/(|x| r))^k) min(1, C_G (|lam| r)^{-k}) e^{-(r-mu)^2/(2t)},  r = |y|.
  // Each choice of branches gives A B e^{-(r-mu)^2/(4t)} with B = const * max_r r^p e^{-(r-mu)^2/(4t)};
  // the smallest B is used.
  const double mu = std::fabs(x) + t * std::fabs(lam);
  const double log_a = log_prefactor(ds) - (k + 0.5) * std::log(t) + std::fabs(x * lam) - kernel_G(ds, xv).log_abs();
  double log_b = 0.0;
  if (k > 0.0) {
    const double log_ck = std::log(kernel_tail_constant(ds.family == DriftFamily::Bessel, k));
    const double log_cg = std::log(kernel_tail_constant(ds.family != DriftFamily::Dunkl, k));
    log_b = INFINITY;
    for (int use_k = 0; use_k <= (x != 0.0 ? 1 : 0); ++use_k)
      for (int use_g = 0; use_g <= (lam != 0.0 ? 1 : 0); ++use_g) {
        double c = 0.0;
        if (use_k) c += log_ck + k * (std::log(t) - std::log(std::fabs(x)));
        if (use_g) c += log_cg - k * std::log(std::fabs(lam));
        const double p = k * (2 - use_k - use_g);
        if (p > 0.0) {
          const double r = 0.5 * (mu + std::sqrt(mu * mu + 8.0 * p * t));
          c += p * std::log(r) - (r - mu) * (r - mu) / (4.0 * t);
        }
        log_b = std::min(log_b, c);
      }
  }
  const double log_m = log_a + log_b + 0.5 * std::log(4.0 * kPi * t) + (folded ? 0.0 : std::log(2.0));
  if (log_m > std::log(1e3)) throw NumericalError("sample_exact_1d: acceptance probability below 1e-3");

  const double sd = std::sqrt(2.0 * t);
  for (int attempt = 0; attempt < 1000000; ++attempt) {
    double y = mu + sd * rng.normal();
    const bool flip = folded ? false : rng.uniform() < 0.5;
    if (folded)
      y = std::fabs(y);
    else if (flip)
      y = -mu + (y - mu);
    const double log_q2 = log_add(log_normal_pdf(y, mu, 2.0 * t), log_normal_pdf(y, -mu, 2.0 * t));
    const double log_q = folded ? log_q2 : log_q2 - std::log(2.0);
    yv(0) = y;
    const LogValue p = transition_density(ds, t, xv, yv);
    if (stats) ++stats->proposals;
    if (p.is_zero()) continue;
    const double log_ratio = p.log_abs() - log_m - log_q;
    if (log_ratio > 1e-9) throw NumericalError("sample_exact_1d: envelope violated");
    if (std::log(rng.uniform()) < log_ratio) {
      if (stats) ++stats->accepted;
      return y;
    }
  }
  throw NumericalError("sample_exact_1d: no acceptance in 1e6 proposals");
}

Vec sample_exact(const DensitySpec& ds, double t, const Vec& x, RandomStream& rng, SamplerStats* stats) {
  const RootKind kind = ds.system.kind();
  if (kind != RootKind::Rank1 && kind != RootKind::ProductZ2) throw UnsupportedKind("sample_exact: Rank1 or ProductZ2");
  Vec y(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    Vec lam(1);
    lam << ds.lambda(i);
    const DensitySpec coord(ds.family, RootSystem::rank1(ds.system.k()), lam);
    y(i) = sample_exact_1d(coord, t, x(i), rng, stats);
  }
  return y;
}

}  // namespace dunkl
