#include <doctest.h>

#include <cmath>
#include <random>

#include "dunkl/kernels1d.hpp"
#include "dunkl/kernels_nd.hpp"

using namespace dunkl;

namespace {

Vec vec(std::initializer_list<double> v) {
  Vec x(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double c : v) x(i++) = c;
  return x;
}

double e1_closed(double x) { return std::exp(x) / x - std::sinh(x) / (x * x); }

}  // namespace

TEST_CASE("product Dunkl kernel") {
  const auto rs = RootSystem::product_z2(2, 1.0);
  CHECK(dunkl_E_nd(rs, vec({0, 0}), vec({1, 2})).value() == 1.0);
  CHECK(dunkl_E_nd(rs, vec({1, 2}), vec({1, 1})).value() == doctest::Approx(e1_closed(1) * e1_closed(2)).epsilon(1e-13));
  CHECK(dunkl_E_nd(RootSystem::rank1(1.7), vec({0.4}), vec({-2})).log_abs() ==
        doctest::Approx(dunkl_E_1d(1.7, 0.4, -2).log_abs()));
  CHECK_THROWS_AS(dunkl_E_nd(RootSystem::type_a(2, 1.0), vec({1, 0}), vec({1, 0})), UnsupportedKind);
  CHECK_THROWS_AS(dunkl_E_nd(rs, vec({1}), vec({1, 0})), std::invalid_argument);
}

TEST_CASE("product Bessel kernel equals the brute-force orbit sum") {
  const auto rs = RootSystem::product_z2(2, 1.0);
  CHECK(bessel_J_nd(rs, vec({1, 2}), vec({0, 0})).value() == 1.0);
  CHECK(bessel_J_nd(rs, vec({1, 2}), vec({1, 1})).value() == doctest::Approx(std::sinh(1.0) * std::sinh(2.0) / 2).epsilon(1e-13));
  CHECK(bessel_J_nd(RootSystem::rank1(1.0), vec({3}), vec({0.5})).value() == doctest::Approx(std::sinh(1.5) / 1.5));
  std::mt19937_64 gen(3);
  std::normal_distribution<double> nd(0.0, 2.0);
  for (int n = 1; n <= 3; ++n) {
    const auto p = RootSystem::product_z2(n, 0.7);
    Vec x(n), l(n);
    for (auto& c : x) c = nd(gen);
    for (auto& c : l) c = nd(gen);
    const LogValue j = bessel_J_nd(p, x, l);
    CHECK(relative_difference(j, bessel_J_by_orbit_sum(p, x, l)) < 1e-9);
    for (const auto& g : p.weyl_group()) CHECK(relative_difference(bessel_J_nd(p, g.apply(x), l), j) < 1e-9);
  }
}

TEST_CASE("k = 0 kernels for coupled root systems") {
  const auto a = RootSystem::type_a(2, 0.0);
  CHECK(dunkl_E_nd(a, vec({1, 2}), vec({3, -1})).log_abs() == doctest::Approx(1.0));
  // (e^{x.l} + e^{x.sl}) / 2
  CHECK(bessel_J_nd(a, vec({1, 2}), vec({3, -1})).value() == doctest::Approx((std::exp(1.0) + std::exp(5.0)) / 2));
  CHECK_THROWS_AS(bessel_J_nd(RootSystem::type_b(2, 0.5, 0.0), vec({1, 2}), vec({1, 1})), UnsupportedKind);
}

TEST_CASE("geometric multiplicities") {
  CHECK(GeometricCase{RootKind::A, 2, 0}.root_system(3).k() == 1.0);
  CHECK(GeometricCase{RootKind::A, 1, 0}.root_system(3).k() == 0.5);
  const auto b = GeometricCase{RootKind::B, 1, 3}.root_system(1);
  CHECK(b.k1() == 1.0);  // sphere S^2 in R^3
  const auto b2 = GeometricCase{RootKind::B, 2, 4}.root_system(2);
  CHECK(b2.k1() == 2.5);
  CHECK(b2.k2() == 1.0);
  CHECK_THROWS(GeometricCase{RootKind::B, 1, 1}.root_system(2));
  CHECK_THROWS(GeometricCase{RootKind::D, 1, 0}.root_system(2));
}

TEST_CASE("Haar matrices are unitary") {
  RandomStream rng(11, 0);
  for (int d : {1, 2}) {
    const Eigen::MatrixXcd u = haar_unitary(4, d, rng);
    CHECK((u.adjoint() * u - Eigen::MatrixXcd::Identity(4, 4)).norm() < 1e-12);
    if (d == 1) CHECK(u.imag().norm() == 0.0);
  }
}

TEST_CASE("Haar estimator: exact cases") {
  RandomStream rng(5, 0);
  const GeometricCase a2{RootKind::A, 2, 0};
  auto zero = haar_bessel_estimate(a2, vec({1, -1}), vec({0, 0}), 200, rng);
  CHECK(zero.value.value() == doctest::Approx(1.0));
  CHECK(zero.std_error == 0.0);
  CHECK_THROWS(haar_bessel_estimate(a2, vec({1.3}), vec({0.7}), 200, rng));
  CHECK_THROWS(haar_bessel_estimate(a2, vec({1.3}), vec({0.7}), 10, rng));
}

TEST_CASE("Haar estimator matches the rank-one reduction of A_1") {
  RandomStream rng(17, 0);
  // x = lambda = (1,-1): mean parts vanish, difference coordinate sqrt(2) each.
  const auto c = haar_bessel_estimate({RootKind::A, 2, 0}, vec({1, -1}), vec({1, -1}), 20000, rng);
  const double exact = sph_bessel_imag(0.5, 2.0).value();  // sinh 2 / 2
  CHECK(std::fabs(c.value.value() / exact - 1.0) < 3 * c.std_error);
  const auto r = haar_bessel_estimate({RootKind::A, 1, 0}, vec({1, -1}), vec({1, -1}), 20000, rng);
  const double exact_real = sph_bessel_imag(0.0, 2.0).value();  // I_0(2)
  CHECK(std::fabs(r.value.value() / exact_real - 1.0) < 3 * r.std_error);
  // with a mean part: exp(<xbar, lbar>) j(...)
  const auto m = haar_bessel_estimate({RootKind::A, 2, 0}, vec({2, 0}), vec({0.5, -0.5}), 20000, rng);
  const double exact_m = sph_bessel_imag(0.5, std::sqrt(2.0) * std::sqrt(0.5)).value();
  CHECK(std::fabs(m.value.value() / exact_m - 1.0) < 3 * m.std_error);
}

TEST_CASE("Haar estimator in the B case at N = 1 is the rank-one Bessel function") {
  RandomStream rng(23, 0);
  for (auto [M, d] : {std::pair{3, 1}, std::pair{2, 2}}) {
    const GeometricCase c{RootKind::B, d, M};
    const double k = c.root_system(1).k1();
    const auto est = haar_bessel_estimate(c, vec({1.5}), vec({1.2}), 20000, rng);
    const double exact = bessel_J_1d(k, 1.5, 1.2).value();
    CHECK(std::fabs(est.value.value() / exact - 1.0) < 3 * est.std_error);
  }
}

TEST_CASE("Haar standard error scales like 1/sqrt(samples)") {
  double ratio = 0.0;
  for (int rep = 0; rep < 10; ++rep) {
    RandomStream r1(100 + rep, 0), r2(200 + rep, 0);
    const auto a = haar_bessel_estimate({RootKind::A, 2, 0}, vec({1, -1, 0}), vec({1, 0, -1}), 2000, r1);
    const auto b = haar_bessel_estimate({RootKind::A, 2, 0}, vec({1, -1, 0}), vec({1, 0, -1}), 4000, r2);
    ratio += b.std_error / a.std_error / 10.0;
  }
  CHECK(std::fabs(ratio / std::sqrt(0.5) - 1.0) < 0.2);
}

TEST_CASE("moment functions: examples") {
  const auto r1 = RootSystem::rank1(1.0);
  auto mp = moments(r1, KernelFamily::Dunkl, vec({1.0}), vec({0.0}));
  CHECK(mp.m1(0) == 0.0);
  CHECK(mp.m2_diag(0) == 0.0);
  for (double x : {0.3, 1.0, 4.0}) {
    const auto b = moments(r1, KernelFamily::Bessel, vec({1.0}), vec({x}));
    CHECK(b.m1(0) == doctest::Approx((x * std::cosh(x) - std::sinh(x)) / std::sinh(x)).epsilon(1e-12));
    const auto z = moments(RootSystem::rank1(0.0), KernelFamily::Dunkl, vec({1.3}), vec({x}));
    CHECK(z.m1(0) == doctest::Approx(x));
    CHECK(z.m2_diag(0) == doctest::Approx(x * x));
  }
  const auto p = moments(RootSystem::product_z2(2, 1.0), KernelFamily::Dunkl, vec({1, 2}), vec({0.5, -1.5}));
  CHECK((*p.m2_full)(0, 1) == doctest::Approx(p.m1(0) * p.m1(1)));
  CHECK_THROWS_AS(moments(RootSystem::type_a(2, 1.0), KernelFamily::Dunkl, vec({1, 0}), vec({1, 0})), UnsupportedKind);
}

TEST_CASE("moment bounds and gradient identity on random grids") {
  std::mt19937_64 gen(9);
  std::normal_distribution<double> nd(0.0, 3.0);
  const double h = 1e-5;
  for (double k : {0.2, 1.0, 2.0})
    for (auto fam : {KernelFamily::Dunkl, KernelFamily::Bessel})
      for (int rep = 0; rep < 20; ++rep) {
        const auto rs = RootSystem::product_z2(2, k);
        Vec x(2), l(2);
        for (auto& c : x) c = nd(gen);
        for (auto& c : l) c = nd(gen) / 3;
        if (fam == KernelFamily::Bessel) {
          x = x.cwiseAbs();
          l = l.cwiseAbs();
        }
        const auto mp = moments(rs, fam, l, x);
        const auto& m2 = *mp.m2_full;
        for (int i = 0; i < 2; ++i) CHECK(mp.m1(i) * mp.m1(i) <= mp.m2_diag(i) * (1 + 1e-12) + 1e-14);
        CHECK(mp.m2_diag.sum() <= x.squaredNorm() * (1 + 1e-12));
        CHECK(mp.m1.norm() <= x.norm() * (1 + 1e-12));
        CHECK(std::fabs(m2(0, 1)) <= std::sqrt(m2(0, 0) * m2(1, 1)) * (1 + 1e-12));
        auto logf = [&](const Vec& lam) {
          return fam == KernelFamily::Dunkl ? dunkl_E_nd(rs, x, lam).log_abs() : bessel_J_nd(rs, x, lam).log_abs();
        };
        for (int i = 0; i < 2; ++i) {
          Vec lp = l, lm = l;
          lp(i) += h;
          lm(i) -= h;
          CHECK(mp.m1(i) == doctest::Approx((logf(lp) - logf(lm)) / (2 * h)).epsilon(1e-6));
        }
      }
}

TEST_CASE("m1 limit gap") {
  const auto rs = RootSystem::rank1(1.0);
  const auto gaps = m1_limit_check(rs, vec({1.0}), vec({1.0}), {1.0, 5.0, 20.0, 50.0});
  for (std::size_t i = 1; i < gaps.size(); ++i) CHECK(gaps[i] < gaps[i - 1]);
  CHECK(gaps.back() < 0.1);
  for (double g : m1_limit_check(RootSystem::product_z2(2, 0.0), vec({1.0, -2.0}), vec({1.0, -3.0}), {1.0, 10.0}))
    CHECK(g == doctest::Approx(0.0).epsilon(1e-15));
  // m1(x)/|x| -> sign(lambda)
  for (double x : {-200.0, 200.0})
    CHECK(moments(rs, KernelFamily::Dunkl, vec({1.0}), vec({x})).m1(0) / std::fabs(x) == doctest::Approx(1.0).epsilon(0.01));
  CHECK_THROWS(m1_limit_check(rs, vec({0.0}), vec({1.0}), {1.0}));
}
