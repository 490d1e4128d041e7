#include "dunkl/kernels_nd.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/QR>

#include "dunkl/kernels1d.hpp"

namespace dunkl {

namespace {

bool is_product(const RootSystem& rs) { return rs.kind() == RootKind::Rank1 || rs.kind() == RootKind::ProductZ2; }

void check_dims(const RootSystem& rs, const Vec& x, const Vec& lambda) {
  if (x.size() != rs.rank() || lambda.size() != rs.rank())
    throw std::invalid_argument("kernel arguments must have the root system's rank");
}

void require_supported(const RootSystem& rs) {
  if (!kernel_supported(rs))
    throw UnsupportedKind("no kernel formula for " + to_string(rs.kind()) + " with k != 0");
}

}  // namespace

bool kernel_supported(const RootSystem& rs) {
  return is_product(rs) || (rs.k1() == 0.0 && rs.k2() == 0.0);
}

LogValue dunkl_E_nd(const RootSystem& rs, const Vec& x, const Vec& lambda) {
  check_dims(rs, x, lambda);
  require_supported(rs);
  if (!is_product(rs)) return LogValue::from_log(x.dot(lambda));
  LogValue out = LogValue::one();
  for (Eigen::Index i = 0; i < x.size(); ++i) out *= dunkl_E_1d(rs.k(), x(i), lambda(i));
  return out;
}

LogValue bessel_J_nd(const RootSystem& rs, const Vec& x, const Vec& lambda) {
  check_dims(rs, x, lambda);
  require_supported(rs);
  if (!is_product(rs)) return bessel_J_by_orbit_sum(rs, x, lambda);
  // The Z_2^N orbit sum factorizes into coordinate symmetrizations.
  LogValue out = LogValue::one();
  for (Eigen::Index i = 0; i < x.size(); ++i) out *= bessel_J_1d(rs.k(), x(i), lambda(i));
  return out;
}

LogValue bessel_J_by_orbit_sum(const RootSystem& rs, const Vec& x, const Vec& lambda) {
  check_dims(rs, x, lambda);
  const auto group = rs.weyl_group();
  std::vector<double> logs;
  logs.reserve(group.size());
  for (const auto& g : group) logs.push_back(dunkl_E_nd(rs, x, g.apply(lambda)).log_abs());
  return LogValue::from_log(log_sum_exp(logs) - std::log(static_cast<double>(group.size())));
}

RootSystem GeometricCase::root_system(int N) const {
  if (d != 1 && d != 2) throw std::invalid_argument("geometric case needs d in {1, 2}");
  if (kind == RootKind::A) return RootSystem::type_a(N, 0.5 * d);
  if (kind == RootKind::B) {
    if (M < N) throw std::invalid_argument("geometric B case needs M >= N");
    return RootSystem::type_b(N, 0.5 * ((M - N + 1) * d - 1), 0.5 * d);
  }
  throw UnsupportedKind("geometric cases exist for A and B only");
}

Eigen::MatrixXcd haar_unitary(int n, int d, RandomStream& rng) {
  Eigen::MatrixXcd z(n, n);
  const double scale = d == 2 ? std::sqrt(0.5) : 1.0;
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      const double re = rng.normal() * scale;
      const double im = d == 2 ? rng.normal() * scale : 0.0;
      z(i, j) = {re, im};
    }
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(z);
  Eigen::MatrixXcd q = qr.householderQ();
  const Eigen::MatrixXcd& r = qr.matrixQR();
  for (int j = 0; j < n; ++j) {
    const std::complex<double> rjj = r(j, j);
    const double a = std::abs(rjj);
    q.col(j) *= a > 0 ? rjj / a : 1.0;
  }
  return q;
}

HaarEstimate haar_bessel_estimate(const GeometricCase& c, const Vec& x, const Vec& lambda, std::int64_t samples,
                                  RandomStream& rng) {
  if (samples < 100) throw std::invalid_argument("haar_bessel_estimate needs at least 100 samples");
  if (x.size() != lambda.size()) throw std::invalid_argument("x and lambda must have equal length");
  const int n = static_cast<int>(x.size());
  c.root_system(n);  // validates the case

  std::vector<double> logs(static_cast<std::size_t>(samples));
  for (auto& l : logs) {
    double s = 0.0;
    if (c.kind == RootKind::A) {
      const Eigen::MatrixXcd u = haar_unitary(n, c.d, rng);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) s += std::norm(u(i, j)) * x(j) * lambda(i);
    } else {
      const Eigen::MatrixXcd u = haar_unitary(c.M, c.d, rng);
      const Eigen::MatrixXcd v = haar_unitary(n, c.d, rng);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) s += x(i) * lambda(j) * std::real(u(i, j) * std::conj(v(i, j)));
    }
    l = s;
  }
  double m = -INFINITY;
  for (double l : logs) m = std::max(m, l);
  double mean = 0.0;
  for (double l : logs) mean += std::exp(l - m);
  mean /= static_cast<double>(samples);
  double var = 0.0;
  for (double l : logs) var += std::pow(std::exp(l - m) - mean, 2);
  var /= static_cast<double>(samples - 1);
  HaarEstimate est;
  est.value = LogValue::from_log(m + std::log(mean));
  est.std_error = std::sqrt(var / static_cast<double>(samples)) / mean;
  est.samples = samples;
  return est;
}

MomentPair moments(const RootSystem& rs, KernelFamily family, const Vec& lambda, const Vec& x) {
  check_dims(rs, x, lambda);
  if (!is_product(rs)) throw UnsupportedKind("moments need Rank1 or ProductZ2");
  const Eigen::Index n = x.size();
  MomentPair mp{Vec::Zero(n), Vec::Zero(n), Eigen::MatrixXd::Zero(n, n)};
  for (Eigen::Index i = 0; i < n; ++i) {
    if (x(i) == 0.0) continue;
    const double s = x(i) * lambda(i);
    double dlog, d2;
    if (family == KernelFamily::Dunkl) {
      const auto p = dunkl_profile(rs.k(), s);
      dlog = p.dlog;
      d2 = p.d2ratio;
    } else {
      const auto p = bessel_profile(rs.k(), s);
      dlog = p.dlog;
      d2 = p.d2ratio;
    }
    mp.m1(i) = x(i) * dlog;
    mp.m2_diag(i) = x(i) * x(i) * d2;
  }
  auto& full = *mp.m2_full;
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) full(i, j) = i == j ? mp.m2_diag(i) : mp.m1(i) * mp.m1(j);
  return mp;
}

std::vector<double> m1_limit_check(const RootSystem& rs, const Vec& lambda, const Vec& x,
                                   const std::vector<double>& t_values) {
  for (Eigen::Index i = 0; i < lambda.size(); ++i)
    if (lambda(i) == 0.0) throw std::invalid_argument("m1_limit_check: lambda lies on a chamber wall");
  std::vector<double> gaps;
  for (double t : t_values) {
    const Vec y = t * x;
    const MomentPair mp = moments(rs, KernelFamily::Dunkl, lambda, y);
    Vec p(y.size());
    for (Eigen::Index i = 0; i < y.size(); ++i) p(i) = (lambda(i) > 0 ? 1.0 : -1.0) * std::fabs(y(i));
    gaps.push_back((mp.m1 - p).norm() / t);
  }
  return gaps;
}

}  // namespace dunkl
