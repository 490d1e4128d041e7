#include <doctest.h>

#include <cmath>

#include "dunkl/kernels1d.hpp"

using namespace dunkl;

namespace {

double rel(double a, double b) { return std::fabs(a - b) / std::max(std::fabs(a), std::fabs(b)); }

// Independent oracle: j_alpha(iu) = Gamma(alpha+1) (u/2)^(-alpha) I_alpha(u).
double log_j_oracle(double alpha, double u) {
  return std::lgamma(alpha + 1) - alpha * std::log(u / 2) + std::log(std::cyl_bessel_i(alpha, u));
}

double e1_closed(double x) { return std::exp(x) / x - std::sinh(x) / (x * x); }

}  // namespace

TEST_CASE("1F1 elementary cases") {
  CHECK(kummer_1f1(2.3, 4.1, 0.0).value() == 1.0);
  for (double z : {0.3, 2.0, 15.0, 39.0, 45.0, 90.0, 250.0}) {
    const double expect = std::log(std::expm1(z) / z);
    CHECK(kummer_1f1(1.0, 2.0, z).log_abs() == doctest::Approx(expect).epsilon(1e-13));
    CHECK(kummer_1f1(1.0, 2.0, -z).value() == doctest::Approx(-std::expm1(-z) / z).epsilon(1e-13));
  }
  // 1F1(a; a; z) = e^z
  CHECK(kummer_1f1(0.7, 0.7, 55.0).log_abs() == doctest::Approx(55.0).epsilon(1e-14));
}

TEST_CASE("1F1 against mpmath reference values") {
  // log 1F1(a; b; z), mpmath hyp1f1 at 40 digits
  struct Row {
    double a, b, z, log_f;
  };
  const Row rows[] = {{0.5, 1.5, 37.0, 32.70993877337612165},
                      {2.0, 5.0, 41.0, 32.961351723257100212},
                      {3.0, 7.0, 120.0, 106.66863117795659852},
                      {1.5, 2.0, -30.0, -5.6477737404087551711},
                      {0.25, 3.0, 800.0, 781.0250278169995367}};
  for (const auto& r : rows) CHECK(kummer_1f1(r.a, r.b, r.z).log_abs() == doctest::Approx(r.log_f).epsilon(1e-13));
}

TEST_CASE("1F1 large-argument expansion agrees with the series") {
  for (double k : {0.1, 0.5, 1.0, 2.5}) {
    for (double z : {40.0, 60.0, 150.0, 700.0}) {
      for (auto [a, b] : {std::pair{k, 2 * k + 1}, std::pair{k + 1, 2 * k + 1}, std::pair{k + 3, 2 * k + 3}}) {
        const double s = kummer_1f1_series(a, b, z).log_abs();
        const double f = kummer_1f1(a, b, z).log_abs();
        CHECK(std::fabs(s - f) < 1e-12 * std::max(1.0, s));
      }
    }
  }
}

TEST_CASE("1F1 example at the Dunkl kernel") {
  const double expect = (std::exp(1.0) - std::sinh(1.0)) * std::exp(-1.0);
  CHECK(kummer_1f1(1.0, 3.0, -2.0).value() == doctest::Approx(expect).epsilon(1e-14));
}

TEST_CASE("spherical Bessel function") {
  CHECK(sph_bessel_imag(1.3, 0.0).value() == 1.0);
  for (double u : {0.01, 0.7, 3.0, 19.9, 20.1, 55.0, 300.0}) {
    CHECK(sph_bessel_imag(0.5, u).log_abs() == doctest::Approx(std::log(std::sinh(u) / u)).epsilon(1e-13));
    CHECK(sph_bessel_imag(-0.5, u).log_abs() == doctest::Approx(std::log(std::cosh(u))).epsilon(1e-13));
    for (double alpha : {0.0, 0.25, 1.5, 3.0})
      CHECK(sph_bessel_imag(alpha, u).log_abs() == doctest::Approx(log_j_oracle(alpha, u)).epsilon(1e-12));
  }
  // the -1/2 series itself sums to cosh
  CHECK(sph_bessel_imag(-0.5 + 1e-15, 2.0).value() == doctest::Approx(std::cosh(2.0)).epsilon(1e-12));
}

TEST_CASE("spherical Bessel log-derivative") {
  CHECK(sph_bessel_imag_logderiv(0.7, 0.0) == 0.0);
  for (double u : {0.05, 1.0, 4.0, 25.0, 80.0}) {
    CHECK(sph_bessel_imag_logderiv(0.5, u) == doctest::Approx(1.0 / std::tanh(u) - 1.0 / u).epsilon(1e-12));
    CHECK(sph_bessel_imag_logderiv(0.5, -u) == doctest::Approx(-(1.0 / std::tanh(u) - 1.0 / u)).epsilon(1e-12));
    // I_{alpha+1} / I_alpha
    for (double alpha : {0.0, 1.2})
      CHECK(sph_bessel_imag_logderiv(alpha, u) ==
            doctest::Approx(std::cyl_bessel_i(alpha + 1, u) / std::cyl_bessel_i(alpha, u)).epsilon(1e-11));
  }
  for (double alpha : {-0.5, 0.0, 0.5, 2.0}) CHECK(std::fabs(sph_bessel_imag_logderiv(alpha, 50.0) - 1.0) < 0.05);
  CHECK(std::fabs(sph_bessel_imag_logderiv(0.5, 5e6) - 1.0) < 1e-6);
}

TEST_CASE("Dunkl kernel closed form for k = 1") {
  CHECK(dunkl_E_1d(1.0, 0.0, 3.0).value() == 1.0);
  for (double x : {0.1, 0.5, 1.0, 2.0, 5.0, 10.0, 25.0}) {
    CHECK(rel(dunkl_E_1d(1.0, x, 1.0).value(), e1_closed(x)) < 1e-13);
    CHECK(rel(dunkl_E_1d(1.0, -x, 1.0).value(), e1_closed(-x)) < 1e-10);
  }
  CHECK(dunkl_E_1d(0.0, 2.0, 1.5).log_abs() == 3.0);
}

TEST_CASE("Dunkl kernel against mpmath reference values") {
  // log E_k(s, 1) = s + log 1F1(k; 2k+1; -2s), mpmath at 40 digits
  struct Row {
    double k, s, log_e;
  };
  const Row rows[] = {{0.3, -7.5, 2.8395704195150752598},   {0.3, 12.0, 11.038334188257408055},
                      {1.7, 2.07, 0.79984073704868610896},  {2.5, -45.0, 33.694153242200012981},
                      {1.0, 300.0, 294.29454946824310192},  {1.0, -300.0, 287.89928787012765257},
                      {0.1, 60.0, 59.485665492510315854},   {3.0, -0.25, -0.031868887612310566021}};
  for (const auto& r : rows) {
    CHECK(dunkl_E_1d(r.k, r.s, 1.0).log_abs() == doctest::Approx(r.log_e).epsilon(1e-13));
    CHECK(dunkl_profile(r.k, r.s).value.log_abs() == doctest::Approx(r.log_e).epsilon(1e-13));
    CHECK(dunkl_profile(r.k, -r.s).reflected.log_abs() == doctest::Approx(r.log_e).epsilon(1e-13));
  }
}

TEST_CASE("Dunkl kernel: series route vs Gauss-Jacobi route") {
  CHECK(rel(dunkl_E_1d(1.7, 2.3, 0.9).value(), dunkl_E_1d_quadrature(1.7, 2.3, 0.9).value()) < 1e-9);
  for (double k : {0.1, 0.5, 1.0, 2.2, 3.0})
    for (double x : {-10.0, -3.0, -0.4, 0.0, 0.7, 4.0, 10.0})
      for (double lam : {0.1, 1.3, 3.0}) {
        const double a = dunkl_E_1d(k, x, lam).log_abs();
        const double b = dunkl_E_1d_quadrature(k, x, lam).log_abs();
        CHECK(std::fabs(a - b) < 1e-10);
      }
}

TEST_CASE("Dunkl kernel symmetry, scaling, bounds") {
  for (double k : {0.2, 1.0, 2.5})
    for (double x : {-4.0, -0.5, 0.8, 3.0})
      for (double lam : {-2.0, 0.3, 1.7}) {
        const LogValue e = dunkl_E_1d(k, x, lam);
        CHECK(e.sign() == 1);
        CHECK(relative_difference(e, dunkl_E_1d(k, lam, x)) < 1e-12);
        CHECK(relative_difference(dunkl_E_1d(k, 2.5 * x, lam), dunkl_E_1d(k, x, 2.5 * lam)) < 1e-12);
        CHECK(e.log_abs() <= std::fabs(x * lam) + 1e-14);
      }
}

TEST_CASE("Dunkl kernel lower bound witness") {
  for (double k : {0.5, 1.0, 3.0}) {
    double c1 = INFINITY;
    for (double x = -50.0; x <= 50.0; x += 0.25) c1 = std::min(c1, std::exp(dunkl_E_1d(k, x, 1.0).log_abs() + x));
    CHECK(c1 > 0.0);
    CHECK(std::isfinite(c1));
  }
}

TEST_CASE("Dunkl kernel asymptotics at x lambda = 50") {
  for (double k : {0.5, 1.0, 2.0}) {
    const double s = 50.0;
    const double pos = dunkl_E_1d(k, s, 1.0).log_abs() + std::lgamma(k + 1) + k * std::log(2.0) -
                       std::lgamma(2 * k + 1) - s + k * std::log(s);
    CHECK(std::fabs(std::exp(pos) - 1.0) < 0.05);
    const double neg = dunkl_E_1d(k, -s, 1.0).log_abs() + std::lgamma(k) + (k + 1) * std::log(2.0) -
                       std::lgamma(2 * k + 1) - s + (k + 1) * std::log(s);
    CHECK(std::fabs(std::exp(neg) - 1.0) < 0.05);
  }
}

TEST_CASE("first modified moment, rank one") {
  CHECK(dunkl_E_1d_dlam(1.3, 0.0, 2.0) == 0.0);
  CHECK(dunkl_E_1d_dlam(0.0, 2.7, 1.1) == 2.7);
  CHECK(dunkl_E_1d_d2lam(0.0, 2.7, 1.1) == doctest::Approx(2.7 * 2.7));
  const double x = 2.0;
  const double m1 = ((x * x - x) * std::exp(x) - x * std::cosh(x) + 2 * std::sinh(x)) / (x * std::exp(x) - std::sinh(x));
  CHECK(dunkl_E_1d_dlam(1.0, x, 1.0) == doctest::Approx(m1).epsilon(1e-13));
  CHECK(dunkl_profile(0.8, 0.0).dlog == doctest::Approx(1.0 / 2.6));
  CHECK(dunkl_profile(0.8, -1e-300).dlog == doctest::Approx(1.0 / 2.6));
}

TEST_CASE("derivatives agree with finite differences of log E") {
  const double h = 1e-4;
  for (double k : {0.3, 1.0, 2.5})
    for (double x : {-12.0, -3.0, -0.6, 0.4, 2.0, 9.0, 30.0})
      for (double lam : {0.5, 1.0, 2.0}) {
        auto le = [&](double l) { return dunkl_E_1d(k, x, l).log_abs(); };
        const double d1 = (le(lam + h) - le(lam - h)) / (2 * h);
        CHECK(std::fabs(dunkl_E_1d_dlam(k, x, lam) - d1) < 1e-6 * std::max(1.0, std::fabs(d1)));
        auto e = [&](double l) { return std::exp(le(l) - le(lam)); };
        const double d2 = (e(lam + h) - 2.0 + e(lam - h)) / (h * h);
        CHECK(std::fabs(dunkl_E_1d_d2lam(k, x, lam) - d2) < 1e-4 * std::max(1.0, std::fabs(d2)));
      }
}

TEST_CASE("moment inequalities m1^2 <= m2 <= x^2") {
  for (double k : {0.1, 0.5, 1.0, 3.0})
    for (double x = -20.0; x <= 20.0; x += 0.7)
      for (double lam : {-1.5, 0.2, 1.0}) {
        const double m1 = dunkl_E_1d_dlam(k, x, lam);
        const double m2 = dunkl_E_1d_d2lam(k, x, lam);
        CHECK(m1 * m1 <= m2 * (1 + 1e-12) + 1e-14);
        CHECK(m2 <= x * x * (1 + 1e-12) + 1e-14);
      }
}

TEST_CASE("Bessel kernel") {
  CHECK(bessel_J_1d(1.0, 0.0, 2.0).value() == 1.0);
  CHECK(bessel_J_1d(1.0, 2.0, 0.0).value() == 1.0);
  for (double x : {0.1, 1.0, 3.0, 10.0})
    CHECK(bessel_J_1d(1.0, x, 1.0).value() == doctest::Approx(std::sinh(x) / x).epsilon(1e-13));
  // symmetrization of E
  for (double k : {0.2, 1.0, 2.7})
    for (double x : {-6.0, -1.0, 0.3, 5.0, 45.0})
      for (double lam : {0.4, 1.9}) {
        const LogValue sym = (dunkl_E_1d(k, x, lam) + dunkl_E_1d(k, -x, lam)) / LogValue::from_double(2.0);
        CHECK(relative_difference(sym, bessel_J_1d(k, x, lam)) < 1e-9);
      }
}

TEST_CASE("Bessel kernel solves the rank-one Bessel equation") {
  const double h = 1e-3;
  for (double k : {0.5, 1.0, 2.0})
    for (double x : {0.5, 1.0, 2.0, 5.0}) {
      const double lam = 1.3;
      auto u = [&](double y) { return bessel_J_1d(k, y, lam).value(); };
      const double u0 = u(x);
      const double d1 = (u(x + h) - u(x - h)) / (2 * h);
      const double d2 = (u(x + h) - 2 * u0 + u(x - h)) / (h * h);
      const double residual = 0.5 * d2 + k / x * d1 - 0.5 * lam * lam * u0;
      CHECK(std::fabs(residual) < 1e-5 * u0);
    }
}

TEST_CASE("Bessel profile second derivative") {
  const double h = 1e-4;
  for (double k : {0.0, 0.5, 1.0, 2.5})
    for (double s : {-7.0, -0.3, 0.0, 0.9, 4.0, 30.0}) {
      const auto p = bessel_profile(k, s);
      auto j = [&](double v) { return std::exp(bessel_profile(k, v).value.log_abs() - p.value.log_abs()); };
      CHECK(p.d2ratio == doctest::Approx((j(s + h) - 2 + j(s - h)) / (h * h)).epsilon(1e-5));
      CHECK(p.dlog == doctest::Approx((j(s + h) - j(s - h)) / (2 * h)).epsilon(1e-6));
    }
}
