#include <doctest.h>

#include <cmath>
#include <random>

#include "dunkl/root_system.hpp"

using namespace dunkl;

namespace {

Vec vec(std::initializer_list<double> v) {
  Vec x(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double c : v) x(i++) = c;
  return x;
}

bool same(const Vec& a, const Vec& b, double tol = 1e-12) { return (a - b).cwiseAbs().maxCoeff() <= tol; }

std::vector<RootSystem> zoo() {
  std::vector<RootSystem> out;
  for (int n = 2; n <= 5; ++n) {
    out.push_back(RootSystem::type_a(n, 0.7));
    out.push_back(RootSystem::type_d(n, 1.3));
  }
  for (int n = 1; n <= 5; ++n) {
    out.push_back(RootSystem::type_b(n, 0.4, 1.1));
    out.push_back(RootSystem::product_z2(n, 0.6));
  }
  out.push_back(RootSystem::rank1(2.0));
  return out;
}

}  // namespace

TEST_CASE("positive roots") {
  const auto a2 = RootSystem::type_a(2, 1.0).positive_roots();
  REQUIRE(a2.size() == 1);
  CHECK(same(a2[0], vec({1, -1})));

  const auto b1 = RootSystem::type_b(1, 1.0, 0.0).positive_roots();
  REQUIRE(b1.size() == 1);
  CHECK(same(b1[0], vec({1})));

  const auto d2 = RootSystem::type_d(2, 1.0).positive_roots();
  REQUIRE(d2.size() == 2);
  CHECK(same(d2[0], vec({1, -1})));
  CHECK(same(d2[1], vec({1, 1})));

  for (int n = 2; n <= 6; ++n) {
    CHECK(RootSystem::type_a(n, 1).positive_roots().size() == std::size_t(n * (n - 1) / 2));
    CHECK(RootSystem::type_b(n, 1, 1).positive_roots().size() == std::size_t(n * n));
    CHECK(RootSystem::type_d(n, 1).positive_roots().size() == std::size_t(n * (n - 1)));
    CHECK(RootSystem::product_z2(n, 1).positive_roots().size() == std::size_t(n));
  }
  CHECK(RootSystem::rank1(1).positive_roots().size() == 1);
}

TEST_CASE("rank and multiplicity validation") {
  CHECK_THROWS_AS(RootSystem::type_a(1, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(RootSystem::type_d(1, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(RootSystem::type_b(0, 1.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(RootSystem::product_z2(0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(RootSystem(RootKind::Rank1, 2, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(RootSystem::rank1(-0.5), std::invalid_argument);
}

TEST_CASE("reflection") {
  CHECK(same(reflect(vec({1, -1}), vec({3, 1})), vec({1, 3})));
  CHECK(same(reflect(vec({1, 0}), vec({2, 5})), vec({-2, 5})));
  CHECK(same(reflect(vec({1, 1}), vec({2, -2})), vec({2, -2})));
  CHECK_THROWS_AS(reflect(vec({0, 0}), vec({1, 1})), std::invalid_argument);
}

TEST_CASE("root system is closed under its reflections") {
  for (const auto& rs : zoo()) {
    if (rs.rank() > 6) continue;
    std::vector<Vec> all;
    for (const auto& a : rs.positive_roots()) {
      all.push_back(a);
      all.push_back(-a);
    }
    for (const auto& a : rs.positive_roots())
      for (const auto& b : all) {
        const Vec r = reflect(a, b);
        bool found = false;
        for (const auto& c : all) found = found || same(r, c);
        CHECK_MESSAGE(found, to_string(rs.kind()) << rs.rank());
      }
  }
}

TEST_CASE("multiplicity is constant on orbits for B") {
  const auto rs = RootSystem::type_b(3, 0.25, 2.0);
  for (std::size_t i = 0; i < rs.positive_roots().size(); ++i) {
    const double len2 = rs.positive_roots()[i].squaredNorm();
    CHECK(rs.multiplicity(i) == (len2 == 1.0 ? 0.25 : 2.0));
  }
}

TEST_CASE("chamber projection examples") {
  CHECK(same(RootSystem::type_a(3, 1).chamber_project(vec({1, 3, 2})), vec({3, 2, 1})));
  CHECK(same(RootSystem::type_b(2, 1, 1).chamber_project(vec({-2, 1})), vec({2, 1})));
  CHECK(same(RootSystem::type_d(2, 1).chamber_project(vec({-1, -3})), vec({3, 1})));
  CHECK(same(RootSystem::type_d(2, 1).chamber_project(vec({1, -3})), vec({3, -1})));
  CHECK(same(RootSystem::rank1(1).chamber_project(vec({-4})), vec({4})));
  CHECK(same(RootSystem::product_z2(2, 1).chamber_project(vec({-4, 2})), vec({4, 2})));
}

TEST_CASE("D2 chamber projection agrees with brute-force orbit search") {
  const auto rs = RootSystem::type_d(2, 1.0);
  for (const Vec& x : {vec({-1, -3}), vec({1, -3}), vec({0.5, 2}), vec({-2, 0.5})}) {
    int hits = 0;
    for (const auto& g : rs.weyl_group()) {
      const Vec y = g.apply(x);
      if (rs.in_chamber(y)) {
        ++hits;
        CHECK(same(y, rs.chamber_project(x)));
      }
    }
    CHECK(hits >= 1);
  }
}

TEST_CASE("Weyl group size, chamber projection invariance, weight invariance") {
  std::mt19937_64 gen(7);
  std::normal_distribution<double> nd;
  for (const auto& rs : zoo()) {
    if (rs.rank() > 5) continue;
    const auto W = rs.weyl_group();
    CHECK(W.size() == rs.weyl_order());
    for (int rep = 0; rep < 3; ++rep) {
      Vec x(rs.rank());
      for (auto& c : x) c = nd(gen);
      const Vec p = rs.chamber_project(x);
      CHECK(rs.in_chamber(p));
      CHECK(same(rs.chamber_project(p), p));
      const double lw = rs.log_weight(x);
      for (const auto& g : W) {
        const Vec gx = g.apply(x);
        CHECK(same(rs.chamber_project(gx), p));
        CHECK(rs.log_weight(gx) == doctest::Approx(lw).epsilon(1e-12));
      }
      // homogeneity of degree 2 gamma
      CHECK(rs.log_weight(2.5 * x) == doctest::Approx(lw + 2 * rs.gamma() * std::log(2.5)).epsilon(1e-12));
    }
  }
}

TEST_CASE("log weight examples") {
  CHECK(RootSystem::type_a(2, 1).log_weight(vec({2, 0})) == doctest::Approx(std::log(4.0)));
  CHECK(RootSystem::rank1(3.3).log_weight(vec({1})) == 0.0);
  CHECK(RootSystem::type_b(2, 1, 1).log_weight(vec({2, 1})) == doctest::Approx(std::log(36.0)));
  CHECK(RootSystem::rank1(1).log_weight(vec({0})) == -INFINITY);
  CHECK(RootSystem::rank1(0).log_weight(vec({0})) == 0.0);
}

TEST_CASE("gamma exponent") {
  CHECK(RootSystem::type_a(3, 1).gamma() == 3.0);
  CHECK(RootSystem::type_b(2, 1, 2).gamma() == 6.0);
  CHECK(RootSystem::rank1(0).gamma() == 0.0);
  CHECK(RootSystem::type_d(3, 0.5).gamma() == 3.0);
  CHECK(RootSystem::product_z2(4, 0.5).gamma() == 2.0);
}

TEST_CASE("normalization constants, closed forms") {
  CHECK(RootSystem::rank1(1).log_norm_constant() == doctest::Approx(-std::log(std::pow(2.0, 1.5) * std::tgamma(1.5))));
  CHECK(RootSystem::type_a(2, 0).log_norm_constant() == doctest::Approx(-std::log(2 * M_PI)));
  CHECK(RootSystem::product_z2(2, 1).log_norm_constant() ==
        doctest::Approx(2 * RootSystem::rank1(1).log_norm_constant()));
  CHECK(RootSystem::type_b(1, 1.7, 0).log_norm_constant() ==
        doctest::Approx(RootSystem::rank1(1.7).log_norm_constant()));
}

TEST_CASE("normalization constants against the defining integral") {
  const std::vector<RootSystem> cases{
      RootSystem::rank1(0.0),          RootSystem::rank1(1.0),          RootSystem::rank1(2.7),
      RootSystem::product_z2(2, 1.0),  RootSystem::type_a(2, 1.0),      RootSystem::type_a(2, 0.35),
      RootSystem::type_a(3, 1.0),      RootSystem::type_a(3, 0.5),      RootSystem::type_b(2, 1.0, 1.0),
      RootSystem::type_b(2, 0.3, 1.6), RootSystem::type_b(3, 0.5, 0.5), RootSystem::type_d(2, 1.0),
      RootSystem::type_d(2, 0.6),      RootSystem::type_d(3, 1.0),      RootSystem::type_d(3, 0.5)};
  for (const auto& rs : cases) {
    const auto I = gaussian_weight_integral(rs, 1e-9);
    const double mass = std::exp(rs.log_norm_constant()) * I.value;
    CHECK_MESSAGE(std::fabs(mass - 1.0) < 1e-6, to_string(rs.kind()) << rs.rank() << " k=" << rs.k() << " mass " << mass);
  }
}

TEST_CASE("sphere constants") {
  CHECK(std::exp(RootSystem::rank1(0).log_sphere_constant()) == doctest::Approx(2.0));
  // B_1 with k1 = 1: int over S^0 of |y|^2 = 2
  CHECK(std::exp(RootSystem::type_b(1, 1, 0).log_sphere_constant()) == doctest::Approx(2.0));
  // k = 0: surface area of S^{N-1}
  CHECK(std::exp(RootSystem::product_z2(2, 0).log_sphere_constant()) == doctest::Approx(2 * M_PI));
  CHECK(std::exp(RootSystem::type_b(3, 0, 0).log_sphere_constant()) == doctest::Approx(4 * M_PI));
  for (const auto& rs : {RootSystem::rank1(1.4), RootSystem::product_z2(2, 0.8), RootSystem::type_a(2, 1.3),
                         RootSystem::type_b(2, 0.5, 1.2), RootSystem::type_d(2, 0.9)}) {
    const auto s = sphere_weight_integral(rs);
    CHECK(std::exp(rs.log_sphere_constant()) == doctest::Approx(s.value).epsilon(1e-8));
  }
}

TEST_CASE("JSON round trip and validation") {
  for (const auto& rs : zoo()) CHECK(RootSystem::from_json(rs.to_json()) == rs);
  const auto b = RootSystem::from_json(nlohmann::json::parse(R"({"kind":"B","rank":2,"k":[1,2]})"));
  CHECK(b.k1() == 1.0);
  CHECK(b.k2() == 2.0);
  CHECK_THROWS(RootSystem::from_json(nlohmann::json::parse(R"({"kind":"B","rank":2,"k":1})")));
  CHECK_THROWS(RootSystem::from_json(nlohmann::json::parse(R"({"kind":"E8","rank":8,"k":1})")));
  CHECK_THROWS(RootSystem::from_json(nlohmann::json::parse(R"({"kind":"A","rank":2,"k":1,"extra":0})")));
}
