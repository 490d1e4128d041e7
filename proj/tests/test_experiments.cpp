#include <doctest.h>

#include "dunkl/experiments.hpp"

using namespace dunkl;

namespace {

Vec v1(double a) { return Vec::Constant(1, a); }

Vec v2(double a, double b) {
  Vec v(2);
  v << a, b;
  return v;
}

RunContext exact_ctx(std::uint64_t seed, int workers = 1) {
  RunContext c;
  c.seed = seed;
  c.workers = workers;
  c.sim.method = SimMethod::Exact;
  return c;
}

}  // namespace

TEST_CASE("verdict rules") {
  McReport r;
  r.estimates["a"] = {1.02, 0.01, 1.0, 0.03};
  r.tests["ks"] = {0.1, 0.5};
  r.decide();
  CHECK(r.verdict == Verdict::Pass);

  r.tests["info"] = {3.0, 1e-9, 0.01, true};
  r.decide();
  CHECK(r.verdict == Verdict::Pass);

  r.estimates["b"] = {5.0, 1.0, 0.0, 0.5};  // std error wider than the band
  r.decide();
  CHECK(r.verdict == Verdict::Inconclusive);

  r.tests["bad"] = {3.0, 0.001};
  r.decide();
  CHECK(r.verdict == Verdict::Fail);

  McReport c;
  c.conditions["monotone"] = false;
  c.decide();
  CHECK(c.verdict == Verdict::Fail);

  McReport f;
  f.decide(true);
  CHECK(f.verdict == Verdict::Inconclusive);

  McReport band;
  band.estimates["x"] = {0.2, 0.01, 0.0, 0.05};
  band.decide();
  CHECK(band.verdict == Verdict::Fail);
}

TEST_CASE("exit codes") {
  McReport p, f, i;
  p.verdict = Verdict::Pass;
  f.verdict = Verdict::Fail;
  i.verdict = Verdict::Inconclusive;
  CHECK(exit_code({}) == 0);
  CHECK(exit_code({p, p}) == 0);
  CHECK(exit_code({p, i}) == 3);
  CHECK(exit_code({i, f, p}) == 2);
}

TEST_CASE("parallel_map is independent of the worker count") {
  auto sq = [](std::int64_t i) { return static_cast<double>(i * i); };
  const auto a = parallel_map<double>(101, 1, sq);
  const auto b = parallel_map<double>(101, 4, sq);
  CHECK(a == b);
  CHECK(a[100] == 10000.0);
  CHECK_THROWS_AS(parallel_map<double>(10, 3,
                                       [](std::int64_t i) -> double {
                                         if (i == 7) throw std::runtime_error("boom");
                                         return 0.0;
                                       }),
                  std::runtime_error);

  const auto ps = ProcessSpec::diffusion(DriftFamily::Dunkl, RootSystem::rank1(1.0), v1(0.5), v1(0.3));
  RunContext c1;
  c1.seed = 11;
  c1.sim.dt0 = 1e-2;
  RunContext c3 = c1;
  c3.workers = 3;
  const auto e1 = simulate_ensemble(ps, c1, {0.5, 1.0}, 30);
  const auto e3 = simulate_ensemble(ps, c3, {0.5, 1.0}, 30);
  REQUIRE(e1.size() == 30);
  for (std::size_t i = 0; i < e1.size(); ++i) {
    CHECK(e1[i][0](0) == e3[i][0](0));
    CHECK(e1[i][1](0) == e3[i][1](0));
  }
}

TEST_CASE("SLLN and CLT at k = 0") {
  const auto ps = ProcessSpec::diffusion(DriftFamily::Dunkl, RootSystem::rank1(0.0), v1(1.0), v1(0.0));
  const auto slln = run_slln(ps, {10.0, 40.0, 160.0}, 400, exact_ctx(3));
  CHECK(slln.verdict == Verdict::Pass);
  CHECK(slln.conditions.at("error_decreases"));
  // E|Z|/sqrt(T) for Z ~ N(0, 1)
  CHECK(slln.estimates.at("error@T=160").value == doctest::Approx(std::sqrt(2.0 / M_PI / 160.0)).epsilon(0.1));

  const auto clt = run_clt(ps, 25.0, 2000, exact_ctx(4));
  CHECK(clt.verdict == Verdict::Pass);
  CHECK(clt.estimates.at("exact_law_ks_distance_to_normal").value < 1e-3);
}

TEST_CASE("CLT fails when a drift coordinate vanishes") {
  const auto ps =
      ProcessSpec::diffusion(DriftFamily::Dunkl, RootSystem::product_z2(2, 1.0), v2(1.0, 0.0), v2(0.0, 0.0));
  const auto r = run_clt(ps, 4.0, 1000, exact_ctx(5));
  CHECK(r.verdict == Verdict::Fail);
  CHECK(r.tests.at("ks_normal[1]").p_value < 0.01);
}

TEST_CASE("moment identities") {
  RunContext ctx;
  ctx.seed = 6;
  ctx.sim.dt0 = 1e-2;
  const auto bm = ProcessSpec::diffusion(DriftFamily::Dunkl, RootSystem::rank1(0.0), v1(1.0), v1(0.0));
  const auto r0 = run_moment_checks(bm, {0.5, 1.0}, 2000, ctx);
  CHECK(r0.verdict == Verdict::Pass);
  CHECK(r0.estimates.count("m2_residual[0,0]@T=1") == 1);

  ctx.sim.method = SimMethod::Exact;
  const auto pz = ProcessSpec::diffusion(DriftFamily::Dunkl, RootSystem::product_z2(2, 1.0), v2(1.0, 2.0), v2(0.0, 0.0));
  const auto r1 = run_moment_checks(pz, {0.5}, 2000, ctx);
  CHECK(r1.verdict == Verdict::Pass);
  CHECK(r1.estimates.count("m2_residual[0,1]@T=0.5") == 1);

  const auto bessel = ProcessSpec::diffusion(DriftFamily::Bessel, RootSystem::rank1(1.0), v1(1.0), v1(0.0));
  CHECK_THROWS(run_moment_checks(bessel, {1.0}, 10, ctx));
}

TEST_CASE("Girsanov consistency") {
  const auto ps = ProcessSpec::diffusion(DriftFamily::Dunkl, RootSystem::rank1(1.0), v1(0.8), v1(0.0));
  const auto r = run_girsanov_check(ps, 1.0,
                                    {Functional::One, Functional::Positive, Functional::First, Functional::BoundedExp},
                                    2000, exact_ctx(7));
  CHECK(r.verdict == Verdict::Pass);
  CHECK(r.estimates.count("positive.reweighted_vs_half") == 1);
  CHECK(r.estimates.at("one.driftless").value == 1.0);
  CHECK(functional_from_string("bounded_exp") == Functional::BoundedExp);
  CHECK_THROWS(functional_from_string("cube"));
  CHECK_THROWS_AS(run_girsanov_check(ProcessSpec::chi(3, 1.0), 1.0, {Functional::One}, 10, exact_ctx(7)),
                  UnsupportedKind);
}

TEST_CASE("radial reduction") {
  const auto bm2 = ProcessSpec::diffusion(DriftFamily::Bessel, RootSystem::product_z2(2, 0.0), v2(0.6, 0.8), v2(0, 0));
  const auto r = run_radial_check(bm2, {0.5, 1.0}, 1000, exact_ctx(8));
  CHECK(r.verdict == Verdict::Pass);
  CHECK(r.estimates.at("radial_multiplicity").value == doctest::Approx(0.5));

  const auto chi = ProcessSpec::chi(4, 1.5);
  CHECK(run_radial_check(chi, {1.0}, 1000, exact_ctx(9)).verdict == Verdict::Pass);
  CHECK_THROWS(run_radial_check(ProcessSpec::diffusion(DriftFamily::Bessel, RootSystem::rank1(1.0), v1(1.0), v1(1.0)),
                                {1.0}, 10, exact_ctx(9)));
}

TEST_CASE("density agreement and report formats") {
  RunContext ctx;
  ctx.seed = 10;
  ctx.sim.dt0 = 1e-2;
  const auto ps = ProcessSpec::diffusion(DriftFamily::Hybrid, RootSystem::rank1(1.0), v1(0.7), v1(0.4));
  const auto r = run_density_agreement(ps, 1.0, 1500, ctx);
  CHECK(r.verdict == Verdict::Pass);
  CHECK(r.tests.count("ks_folded_vs_bessel") == 1);

  const auto j = r.to_json();
  CHECK(j.at("schema_version") == 1);
  CHECK(j.at("verdict") == "pass");
  CHECK(!j.contains("runtime_ms"));
  CHECK(j.at("process").at("family") == to_string(ps.family));
  CHECK(ProcessSpec::from_json(j.at("process")).lambda(0) == 0.7);

  const auto again = run_density_agreement(ps, 1.0, 1500, ctx);
  CHECK(again.to_json().dump() == j.dump());
  CHECK(again.to_csv() == r.to_csv());
  const std::string csv = r.to_csv();
  CHECK(csv.rfind("experiment_id,row,", 0) == 0);
  CHECK(csv.find("density,verdict,pass") != std::string::npos);
}
