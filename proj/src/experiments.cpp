#include "dunkl/experiments.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "dunkl/densities.hpp"
#include "dunkl/kernels_nd.hpp"

namespace dunkl {

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

std::string fmt(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return {buf, res.ptr};
}

std::string label(const std::string& base, double t) { return base + "@T=" + fmt(t); }

Estimate within(const MeanEstimate& m, double target, double sigmas) {
  return {m.mean, m.std_error, target, sigmas * m.std_error};
}

TestEntry entry(const TestResult& r, bool informational = false) { return {r.statistic, r.p_value, 0.01, informational}; }

McReport new_report(const std::string& id, const ProcessSpec& ps, std::int64_t n, const RunContext& ctx) {
  McReport r;
  r.experiment_id = id;
  r.process = ps;
  r.n_paths = n;
  r.seed = ctx.seed;
  r.sim = ctx.sim;
  return r;
}

// CDF of the rank-one transition law p_t(x, .)
TabulatedCdf rank1_cdf(const DensitySpec& ds, double t, double x, int cells = 1000) {
  const Vec xv = Vec::Constant(1, x);
  const double R = density_support_radius(ds, t, xv);
  const double lo = ds.family == DriftFamily::Bessel ? 0.0 : -R;
  const double cuts[] = {0.0, x, -x};
  return TabulatedCdf([&](double y) { return transition_density(ds, t, xv, Vec::Constant(1, y)).value(); }, lo, R, cells,
                      cuts);
}

std::vector<double> column(const std::vector<std::vector<Vec>>& obs, std::size_t t_index, Eigen::Index coord) {
  std::vector<double> out;
  out.reserve(obs.size());
  for (const auto& path : obs) out.push_back(path[t_index](coord));
  return out;
}

void add_stats_note(McReport& r, const PathStats& st) {
  r.notes.push_back("steps=" + std::to_string(st.steps) + " exact_steps=" + std::to_string(st.exact_steps) +
                    " jumps=" + std::to_string(st.jumps));
}

std::vector<std::vector<Vec>> ensemble(const ProcessSpec& ps, const RunContext& ctx, const std::vector<double>& times,
                                       std::int64_t n, std::uint64_t substream, PathStats* stats) {
  struct Out {
    std::vector<Vec> obs;
    PathStats st;
  };
  const auto res = parallel_map<Out>(n, ctx.workers, [&](std::int64_t i) {
    RandomStream rng(ctx.seed, static_cast<std::uint64_t>(i), substream);
    Out o;
    o.obs = simulate_observations(ps, ctx.sim, times, rng, &o.st);
    return o;
  });
  std::vector<std::vector<Vec>> out;
  out.reserve(res.size());
  for (const auto& o : res) {
    out.push_back(o.obs);
    if (stats) {
      stats->steps += o.st.steps;
      stats->exact_steps += o.st.exact_steps;
      stats->jumps += o.st.jumps;
    }
  }
  return out;
}

}  // namespace

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Pass: return "pass";
    case Verdict::Fail: return "fail";
    case Verdict::Inconclusive: return "inconclusive";
  }
  return "?";
}

void McReport::decide(bool force_inconclusive) {
  bool fail = false, unsure = force_inconclusive;
  for (const auto& [_, t] : tests)
    if (!t.informational && !(t.p_value > t.floor)) fail = true;
  for (const auto& [_, e] : estimates) {
    if (!e.target || !e.tolerance) continue;
    if (e.std_error > *e.tolerance)
      unsure = true;
    else if (!(std::fabs(e.value - *e.target) <= *e.tolerance))
      fail = true;
  }
  for (const auto& [_, ok] : conditions)
    if (!ok) fail = true;
  verdict = fail ? Verdict::Fail : unsure ? Verdict::Inconclusive : Verdict::Pass;
}

nlohmann::json McReport::to_json() const {
  nlohmann::json est = nlohmann::json::object(), tst = nlohmann::json::object();
  for (const auto& [name, e] : estimates) {
    nlohmann::json j{{"value", e.value}, {"std_error", e.std_error}};
    if (e.target) j["target"] = *e.target;
    if (e.tolerance) j["tolerance"] = *e.tolerance;
    est[name] = j;
  }
  for (const auto& [name, t] : tests)
    tst[name] = {{"statistic", t.statistic}, {"p_value", t.p_value}, {"floor", t.floor}, {"informational", t.informational}};
  nlohmann::json cfg = sim.to_json();
  cfg.erase("T");
  return {{"schema_version", 1},
          {"experiment_id", experiment_id},
          {"process", process.to_json()},
          {"n_paths", n_paths},
          {"t_grid", t_grid},
          {"seed", seed},
          {"sim", cfg},
          {"estimates", est},
          {"tests", tst},
          {"conditions", conditions},
          {"notes", notes},
          {"verdict", to_string(verdict)}};
}

std::string McReport::to_csv() const {
  std::ostringstream out;
  out << "experiment_id,row,name,value,std_error,target,tolerance,statistic,p_value\n";
  for (const auto& [name, e] : estimates)
    out << experiment_id << ",estimate," << name << ',' << fmt(e.value) << ',' << fmt(e.std_error) << ','
        << (e.target ? fmt(*e.target) : "") << ',' << (e.tolerance ? fmt(*e.tolerance) : "") << ",,\n";
  for (const auto& [name, t] : tests)
    out << experiment_id << (t.informational ? ",info_test," : ",test,") << name << ",,,,," << fmt(t.statistic) << ','
        << fmt(t.p_value) << '\n';
  for (const auto& [name, ok] : conditions) out << experiment_id << ",condition," << name << ',' << (ok ? 1 : 0) << ",,,,,\n";
  out << experiment_id << ",verdict," << to_string(verdict) << ",,,,,,\n";
  return out.str();
}

int exit_code(const std::vector<McReport>& reports) {
  bool fail = false, unsure = false;
  for (const auto& r : reports) {
    fail |= r.verdict == Verdict::Fail;
    unsure |= r.verdict == Verdict::Inconclusive;
  }
  return fail ? 2 : unsure ? 3 : 0;
}

std::vector<std::vector<Vec>> simulate_ensemble(const ProcessSpec& ps, const RunContext& ctx,
                                                const std::vector<double>& times, std::int64_t n_paths,
                                                PathStats* stats) {
  return ensemble(ps, ctx, times, n_paths, 0, stats);
}

McReport run_slln(const ProcessSpec& ps, const std::vector<double>& T_list, std::int64_t n_paths, const RunContext& ctx,
                  double band_cap) {
  const auto t0 = Clock::now();
  if (T_list.empty()) throw std::invalid_argument("run_slln: empty T list");
  McReport r = new_report("slln", ps, n_paths, ctx);
  r.t_grid = T_list;
  PathStats st;
  const auto obs = ensemble(ps, ctx, T_list, n_paths, 0, &st);
  std::vector<MeanEstimate> errs;
  for (std::size_t j = 0; j < T_list.size(); ++j) {
    std::vector<double> e;
    for (const auto& path : obs) e.push_back((path[j] / T_list[j] - ps.lambda).norm());
    errs.push_back(mean_estimate(e));
    r.estimates[label("error", T_list[j])] = {errs.back().mean, errs.back().std_error, std::nullopt, std::nullopt};
  }
  bool decreasing = true;
  for (std::size_t j = 1; j < errs.size(); ++j) decreasing &= errs[j].mean < errs[j - 1].mean;
  r.conditions["error_decreases"] = decreasing;
  const double T = T_list.back();
  const double band = std::min(band_cap, 3.0 * std::sqrt(ps.dim() / T));
  r.estimates[label("final_error", T)] = {errs.back().mean, errs.back().std_error, 0.0, band + 3.0 * errs.back().std_error};
  add_stats_note(r, st);
  r.decide();
  r.runtime_ms = elapsed_ms(t0);
  return r;
}

McReport run_clt(const ProcessSpec& ps, double T, std::int64_t n_paths, const RunContext& ctx) {
  const auto t0 = Clock::now();
  McReport r = new_report("clt", ps, n_paths, ctx);
  r.t_grid = {T};
  PathStats st;
  const auto obs = ensemble(ps, ctx, {T}, n_paths, 0, &st);
  const Eigen::Index n = ps.dim();
  Eigen::MatrixXd z(n_paths, n);
  for (std::int64_t i = 0; i < n_paths; ++i) z.row(i) = ((obs[i][0] - T * ps.lambda) / std::sqrt(T)).transpose();
  for (Eigen::Index c = 0; c < n; ++c) {
    std::vector<double> zc(z.col(c).data(), z.col(c).data() + n_paths);
    r.tests["ks_normal[" + std::to_string(c) + "]"] = entry(ks_test(zc, normal_cdf));
    const auto m = mean_estimate(zc);
    r.estimates["mean[" + std::to_string(c) + "]"] = {m.mean, m.std_error, std::nullopt, std::nullopt};
  }
  const Eigen::MatrixXd cov = sample_covariance(z);
  const double dev = (cov - Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff();
  const double se = std::sqrt(2.0 / static_cast<double>(n_paths));
  r.estimates["cov_max_deviation"] = {dev, se, 0.0, 5.0 * se};

  // How far the exact finite-T law itself is from N(0, 1) (rank one only).
  if (!ps.is_oracle() && ps.dim() == 1) {
    const DensitySpec ds = ps.density_spec();
    const TabulatedCdf cdf = rank1_cdf(ds, T, ps.x0(0), 4000);
    double dist = 0.0;
    for (double y = -6.0; y <= 6.0; y += 0.005)
      dist = std::max(dist, std::fabs(cdf(T * ps.lambda(0) + std::sqrt(T) * y) - normal_cdf(y)));
    r.estimates["exact_law_ks_distance_to_normal"] = {dist, 0.0, std::nullopt, std::nullopt};
    std::vector<double> x(n_paths);
    for (std::int64_t i = 0; i < n_paths; ++i) x[i] = obs[i][0](0);
    r.tests["ks_vs_exact_finite_T"] = entry(ks_test(x, [&](double y) { return cdf(y); }), true);
  }
  add_stats_note(r, st);
  r.decide();
  r.runtime_ms = elapsed_ms(t0);
  return r;
}

McReport run_moment_checks(const ProcessSpec& ps, const std::vector<double>& t_grid, std::int64_t n_paths,
                           const RunContext& ctx) {
  const auto t0 = Clock::now();
  if (ps.family != ProcessFamily::DunklDrift) throw std::invalid_argument("run_moment_checks: Dunkl family only");
  McReport r = new_report("moments", ps, n_paths, ctx);
  r.t_grid = t_grid;
  const RootSystem& rs = ps.system;
  const Eigen::Index n = ps.dim();
  const Vec& lam = ps.lambda;
  const MomentPair m0 = moments(rs, KernelFamily::Dunkl, lam, ps.x0);
  const Eigen::MatrixXd m2x = *m0.m2_full;
  PathStats st;
  const auto obs = ensemble(ps, ctx, t_grid, n_paths, 0, &st);
  for (std::size_t j = 0; j < t_grid.size(); ++j) {
    const double t = t_grid[j];
    std::vector<std::vector<double>> mean_res(n), m1_res(n), m2_res(n * n);
    for (const auto& path : obs) {
      const Vec& x = path[j];
      const MomentPair m = moments(rs, KernelFamily::Dunkl, lam, x);
      for (Eigen::Index i = 0; i < n; ++i) {
        mean_res[i].push_back(x(i) - ps.x0(i) - t * lam(i));
        m1_res[i].push_back(m.m1(i) - m0.m1(i) - t * lam(i));
        for (Eigen::Index l = i; l < n; ++l) {
          const double expect = m2x(i, l) + t * ((i == l ? 1.0 : 0.0) + lam(i) * m0.m1(l) + lam(l) * m0.m1(i)) +
                                t * t * lam(i) * lam(l);
          m2_res[i * n + l].push_back((*m.m2_full)(i, l) - expect);
        }
      }
    }
    for (Eigen::Index i = 0; i < n; ++i) {
      const std::string c = "[" + std::to_string(i) + "]";
      r.estimates[label("mean_residual" + c, t)] = within(mean_estimate(mean_res[i]), 0.0, 3.0);
      r.estimates[label("m1_residual" + c, t)] = within(mean_estimate(m1_res[i]), 0.0, 3.0);
      for (Eigen::Index l = i; l < n; ++l)
        r.estimates[label("m2_residual[" + std::to_string(i) + "," + std::to_string(l) + "]", t)] =
            within(mean_estimate(m2_res[i * n + l]), 0.0, 3.0);
    }
  }
  add_stats_note(r, st);
  r.decide();
  r.runtime_ms = elapsed_ms(t0);
  return r;
}

std::string to_string(Functional f) {
  switch (f) {
    case Functional::One: return "one";
    case Functional::Positive: return "positive";
    case Functional::First: return "first";
    case Functional::BoundedExp: return "bounded_exp";
  }
  return "?";
}

Functional functional_from_string(const std::string& name) {
  for (auto f : {Functional::One, Functional::Positive, Functional::First, Functional::BoundedExp})
    if (to_string(f) == name) return f;
  throw std::invalid_argument("unknown functional '" + name + "'");
}

double apply_functional(Functional f, const Vec& x) {
  switch (f) {
    case Functional::One: return 1.0;
    case Functional::Positive: return x(0) > 0.0 ? 1.0 : 0.0;
    case Functional::First: return x(0);
    case Functional::BoundedExp: return std::exp(-0.5 * x.squaredNorm());
  }
  return 0.0;
}

McReport run_girsanov_check(const ProcessSpec& ps, double T, const std::vector<Functional>& fs, std::int64_t n_paths,
                            const RunContext& ctx) {
  const auto t0 = Clock::now();
  if (ps.is_oracle()) throw UnsupportedKind("run_girsanov_check: diffusion families only");
  McReport r = new_report("girsanov", ps, n_paths, ctx);
  r.t_grid = {T};
  ProcessSpec flat = ps;
  flat.lambda = Vec::Zero(ps.dim());
  PathStats st;
  const auto drifted = ensemble(ps, ctx, {T}, n_paths, 0, &st);
  const auto plain = ensemble(flat, ctx, {T}, n_paths, 1, &st);
  std::vector<double> w;
  for (const auto& p : drifted) w.push_back(girsanov_weight(ps, p[0], T).value());
  const auto mw = mean_estimate(w);
  r.estimates["mean_weight"] = within(mw, 1.0, 3.0);
  double s1 = 0.0, s2 = 0.0;
  for (double v : w) {
    s1 += v;
    s2 += v * v;
  }
  const double ess = s1 * s1 / s2;
  r.estimates["effective_sample_size"] = {ess, 0.0, std::nullopt, std::nullopt};
  const bool collapsed = ess < 0.01 * static_cast<double>(n_paths);
  if (collapsed) r.notes.push_back("importance weights collapsed (ESS < 1% of paths)");

  for (Functional f : fs) {
    std::vector<double> a, b;
    for (std::int64_t i = 0; i < n_paths; ++i) {
      a.push_back(apply_functional(f, drifted[i][0]) * w[i]);
      b.push_back(apply_functional(f, plain[i][0]));
    }
    const auto ma = mean_estimate(a), mb = mean_estimate(b);
    const std::string name = to_string(f);
    r.estimates[name + ".reweighted"] = {ma.mean, ma.std_error, std::nullopt, std::nullopt};
    r.estimates[name + ".driftless"] = {mb.mean, mb.std_error, std::nullopt, std::nullopt};
    const double se = std::hypot(ma.std_error, mb.std_error);
    r.estimates[name + ".difference"] = {ma.mean - mb.mean, se, 0.0, 3.0 * se};
    // The driftless law from 0 is symmetric for the Dunkl and hybrid families.
    if (f == Functional::Positive && ps.x0.isZero() && ps.family != ProcessFamily::BesselDrift)
      r.estimates[name + ".reweighted_vs_half"] = within(ma, 0.5, 3.0);
  }
  add_stats_note(r, st);
  r.decide(collapsed);
  r.runtime_ms = elapsed_ms(t0);
  return r;
}

McReport run_radial_check(const ProcessSpec& ps, const std::vector<double>& T_grid, std::int64_t n_paths,
                          const RunContext& ctx) {
  const auto t0 = Clock::now();
  if (!ps.x0.isZero()) throw std::invalid_argument("run_radial_check: start must be 0");
  const RootKind kind = ps.system.kind();
  if (!ps.is_oracle() && kind != RootKind::ProductZ2 && kind != RootKind::Rank1)
    throw UnsupportedKind("run_radial_check: ProductZ2 or an oracle");
  McReport r = new_report("radial", ps, n_paths, ctx);
  r.t_grid = T_grid;
  const double k_radial = ps.system.gamma() + 0.5 * ps.dim() - 0.5;
  const double drift = ps.lambda.norm();
  r.estimates["radial_multiplicity"] = {k_radial, 0.0, std::nullopt, std::nullopt};
  PathStats st;
  const auto obs = ensemble(ps, ctx, T_grid, n_paths, 0, &st);
  const DensitySpec target(DriftFamily::Bessel, RootSystem::rank1(k_radial), Vec::Constant(1, drift));
  for (std::size_t j = 0; j < T_grid.size(); ++j) {
    std::vector<double> norms;
    for (const auto& path : obs) norms.push_back(path[j].norm());
    const TabulatedCdf cdf = rank1_cdf(target, T_grid[j], 0.0);
    r.tests[label("ks_radial", T_grid[j])] = entry(ks_test(norms, [&](double y) { return cdf(y); }));
  }
  add_stats_note(r, st);
  r.decide();
  r.runtime_ms = elapsed_ms(t0);
  return r;
}

McReport run_density_agreement(const ProcessSpec& ps, double T, std::int64_t n_paths, const RunContext& ctx) {
  const auto t0 = Clock::now();
  if (ps.is_oracle() || ps.dim() != 1) throw UnsupportedKind("run_density_agreement: rank-one diffusions only");
  McReport r = new_report("density", ps, n_paths, ctx);
  r.t_grid = {T};
  PathStats st;
  const auto obs = ensemble(ps, ctx, {T}, n_paths, 0, &st);
  const std::vector<double> sim = column(obs, 0, 0);
  const DensitySpec ds = ps.density_spec();
  const TabulatedCdf cdf = rank1_cdf(ds, T, ps.x0(0));
  auto F = [&](double y) { return cdf(y); };
  r.tests["ks_sim_vs_density"] = entry(ks_test(sim, F));
  r.tests["chi2_sim_vs_density"] = entry(chi2_equiprobable(sim, [&](double p) { return cdf.quantile(p); }, 40));
  const auto exact = parallel_map<double>(n_paths, ctx.workers, [&](std::int64_t i) {
    RandomStream rng(ctx.seed, static_cast<std::uint64_t>(i), 2);
    return sample_exact_1d(ds, T, ps.x0(0), rng);
  });
  r.tests["ks_exact_vs_density"] = entry(ks_test(exact, F));
  r.tests["ks_sim_vs_exact"] = entry(ks_two_sample(sim, exact));
  if (ps.family == ProcessFamily::HybridDrift) {
    const DensitySpec bessel(DriftFamily::Bessel, ps.system, ps.lambda.cwiseAbs());
    // the hybrid law conjugates by J(., lambda), which is even in lambda
    const TabulatedCdf bcdf = rank1_cdf(bessel, T, std::fabs(ps.x0(0)));
    std::vector<double> folded;
    for (double v : sim) folded.push_back(std::fabs(v));
    r.tests["ks_folded_vs_bessel"] = entry(ks_test(folded, [&](double y) { return bcdf(y); }));
  }
  add_stats_note(r, st);
  r.decide();
  r.runtime_ms = elapsed_ms(t0);
  return r;
}

}  // namespace dunkl
