#include "dunkl/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "dunkl/kernels1d.hpp"
#include "dunkl/kernels_nd.hpp"

namespace dunkl {

namespace {

bool is_product(const RootSystem& rs) { return rs.kind() == RootKind::Rank1 || rs.kind() == RootKind::ProductZ2; }

Vec read_vec(const nlohmann::json& j) {
  const auto v = j.get<std::vector<double>>();
  return Eigen::Map<const Vec>(v.data(), static_cast<Eigen::Index>(v.size()));
}

nlohmann::json write_vec(const Vec& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

// Drift and jump intensities at one point, computed together so each rank-one
// kernel profile is evaluated once per coordinate.
struct Local {
  Vec drift;
  Vec rates;
  double total_rate = 0.0;
};

Local local_coefficients(const ProcessSpec& ps, const Vec& x) {
  const RootSystem& rs = ps.system;
  const DriftFamily fam = ps.drift_family();
  const auto& roots = rs.positive_roots();
  Local loc{Vec::Zero(x.size()), Vec::Zero(static_cast<Eigen::Index>(roots.size())), 0.0};

  if (is_product(rs)) {
    const double k = rs.k();
    for (Eigen::Index i = 0; i < x.size(); ++i) {
      const double xi = x(i), li = ps.lambda(i);
      if (k > 0.0 && xi == 0.0) throw BoundaryContact("drift at a wall");
      double g = 0.0, ratio = 1.0;
      if (li != 0.0) {
        if (fam == DriftFamily::Dunkl) {
          const DunklProfile p = dunkl_profile(k, li * xi);
          g = li * p.dlog;
          ratio = (p.reflected / p.value).value();
        } else {
          g = li * bessel_profile(k, li * xi).dlog;
        }
      }
      loc.drift(i) = g + (k > 0.0 ? k / xi : 0.0);
      if (k > 0.0 && fam != DriftFamily::Bessel) loc.rates(i) = 0.5 * k * ratio / (xi * xi);
    }
  } else {
    if (rs.k() != 0.0 || rs.k2() != 0.0) throw UnsupportedKind("simulation needs Rank1, ProductZ2 or k = 0");
    if (fam == DriftFamily::Dunkl) {
      loc.drift = ps.lambda;
    } else {
      // grad log of the Weyl-group average of exp<x, g lambda>
      const auto group = rs.weyl_group();
      std::vector<double> logs;
      std::vector<Vec> images;
      double m = -INFINITY;
      for (const auto& g : group) {
        images.push_back(g.apply(ps.lambda));
        logs.push_back(x.dot(images.back()));
        m = std::max(m, logs.back());
      }
      double z = 0.0;
      for (std::size_t j = 0; j < logs.size(); ++j) {
        const double w = std::exp(logs[j] - m);
        z += w;
        loc.drift += w * images[j];
      }
      loc.drift /= z;
    }
  }
  loc.total_rate = loc.rates.sum();
  return loc;
}

// Keep the continuous move in the closed Weyl chamber containing x
// (coordinate signs for the product systems).
void keep_side(const ProcessSpec& ps, const Vec& x, Vec& y) {
  if (ps.system.k() == 0.0 || !is_product(ps.system)) return;
  for (Eigen::Index i = 0; i < y.size(); ++i) y(i) = std::copysign(std::fabs(y(i)), x(i));
}

double min_wall(const ProcessSpec& ps, const Vec& x) {
  if (ps.system.k() == 0.0 && ps.system.k2() == 0.0) return INFINITY;
  return ps.system.wall_distance(x);
}

bool exact_available(const ProcessSpec& ps) { return is_product(ps.system); }

// k = 0 conjugation by J_0 is a mixture over the orbit of lambda.
Vec exact_k0_step(const ProcessSpec& ps, double h, const Vec& x, RandomStream& rng) {
  Vec drift = ps.lambda;
  if (ps.drift_family() != DriftFamily::Dunkl) {
    const auto group = ps.system.weyl_group();
    std::vector<double> logs;
    double m = -INFINITY;
    for (const auto& g : group) {
      logs.push_back(x.dot(g.apply(ps.lambda)));
      m = std::max(m, logs.back());
    }
    double z = 0.0;
    for (double& l : logs) z += (l = std::exp(l - m));
    double u = rng.uniform() * z;
    std::size_t pick = 0;
    while (pick + 1 < logs.size() && u > logs[pick]) u -= logs[pick++];
    drift = group[pick].apply(ps.lambda);
  }
  Vec y(x.size());
  for (Eigen::Index i = 0; i < y.size(); ++i) y(i) = x(i) + h * drift(i) + std::sqrt(h) * rng.normal();
  if (ps.drift_family() == DriftFamily::Bessel) y = ps.system.chamber_project(y);
  return y;
}

Vec exact_step(const ProcessSpec& ps, double h, const Vec& x, RandomStream& rng) {
  if (is_product(ps.system)) return sample_exact(ps.density_spec(), h, x, rng);
  if (ps.system.k() == 0.0 && ps.system.k2() == 0.0) return exact_k0_step(ps, h, x, rng);
  throw UnsupportedKind("no exact transition for " + to_string(ps.system.kind()));
}

void log_sign_changes(const Vec& before, const Vec& after, double t, std::vector<JumpEvent>* jumps, PathStats& st) {
  for (Eigen::Index i = 0; i < before.size(); ++i)
    if (before(i) * after(i) < 0.0) {
      ++st.jumps;
      if (jumps) jumps->push_back({t, static_cast<int>(i)});
    }
}

// Advances a diffusion-family state from t to t_end.
void advance(const ProcessSpec& ps, const SimConfig& cfg, Vec& x, double& t, double t_end, RandomStream& rng,
             PathStats& st, std::vector<double>* times, std::vector<Vec>* states, std::vector<JumpEvent>* jumps) {
  const bool bessel = ps.drift_family() == DriftFamily::Bessel;
  const auto& roots = ps.system.positive_roots();
  const double tiny = 1e-12 * std::max(1.0, t_end);
  auto record = [&]() {
    if (times) {
      times->push_back(t);
      states->push_back(x);
    }
  };
  while (t_end - t > tiny) {
    const double remaining = t_end - t;
    const double wall = min_wall(ps, x);
    if (wall == 0.0) {
      // Started on (or landed on) a wall: the drift is singular there.
      if (!exact_available(ps)) throw BoundaryContact("path on a wall and no exact transition available");
      const double h = std::min(cfg.dt0, remaining);
      const Vec y = exact_step(ps, h, x, rng);
      log_sign_changes(x, y, t + h, jumps, st);
      x = y;
      t = h == remaining ? t_end : t + h;
      ++st.exact_steps;
      ++st.steps;
      record();
      continue;
    }
    const Local loc = local_coefficients(ps, x);
    double dt = std::min(cfg.dt0, remaining);
    if (cfg.step_rule == StepRule::Adaptive) {
      if (std::isfinite(wall)) dt = std::min(dt, cfg.boundary_eps * wall * wall);
      if (loc.total_rate > 0.0) dt = std::min(dt, 1.0 / (cfg.rate_cap_factor * loc.total_rate));
      if (dt < cfg.min_step_fraction * std::min(cfg.dt0, remaining) && exact_available(ps)) {
        const double h = std::min(cfg.dt0, remaining);
        const Vec y = exact_step(ps, h, x, rng);
        log_sign_changes(x, y, t + h, jumps, st);
        x = y;
        t = h == remaining ? t_end : t + h;
        ++st.exact_steps;
        ++st.steps;
        record();
        continue;
      }
      if (dt < 1e-8 * cfg.dt0) throw NumericalError("step underflow at t = " + std::to_string(t));
    }
    const double sq = std::sqrt(dt);
    Vec y(x.size());
    for (Eigen::Index i = 0; i < y.size(); ++i) y(i) = x(i) + loc.drift(i) * dt + sq * rng.normal();
    if (bessel)
      y = ps.system.chamber_project(y);
    else
      keep_side(ps, x, y);
    const double t_next = dt == remaining ? t_end : t + dt;
    if (loc.total_rate > 0.0 && rng.uniform() < -std::expm1(-loc.total_rate * dt)) {
      double u = rng.uniform() * loc.total_rate;
      Eigen::Index r = 0;
      while (r + 1 < loc.rates.size() && u > loc.rates(r)) u -= loc.rates(r++);
      y = reflect(roots[static_cast<std::size_t>(r)], y);
      ++st.jumps;
      if (jumps) jumps->push_back({t_next, static_cast<int>(r)});
    }
    if (!y.allFinite()) throw NumericalError("non-finite state at step " + std::to_string(st.steps));
    x = std::move(y);
    t = t_next;
    ++st.steps;
    record();
  }
  t = t_end;
}

Eigen::MatrixXcd gaussian_hermitian(int N, int d, double var, RandomStream& rng) {
  Eigen::MatrixXcd g(N, N);
  const double s = std::sqrt(var), so = std::sqrt(var / 2.0);
  for (int i = 0; i < N; ++i) {
    g(i, i) = s * rng.normal();
    for (int j = i + 1; j < N; ++j) {
      const double re = so * rng.normal();
      const double im = d == 2 ? so * rng.normal() : 0.0;
      g(i, j) = {re, im};
      g(j, i) = {re, -im};
    }
  }
  return g;
}

Eigen::MatrixXcd gaussian_rect(int M, int N, int d, double var, RandomStream& rng) {
  Eigen::MatrixXcd g(M, N);
  const double s = std::sqrt(var);
  for (int i = 0; i < M; ++i)
    for (int j = 0; j < N; ++j) {
      const double re = s * rng.normal();
      g(i, j) = {re, d == 2 ? s * rng.normal() : 0.0};
    }
  return g;
}

Vec singular_values(const Eigen::MatrixXcd& a) {
  Vec ev = hermitian_eigenvalues(a.adjoint() * a);
  for (auto& e : ev) e = std::sqrt(std::max(e, 0.0));
  return ev;
}

void check_oracle_dims(int N, int d) {
  if (d != 1 && d != 2) throw std::invalid_argument("oracle d must be 1 or 2");
  if (N < 1 || N > 16) throw std::invalid_argument("oracle N must lie in [1, 16]");
}

}  // namespace

std::string to_string(ProcessFamily f) {
  switch (f) {
    case ProcessFamily::BesselDrift: return "BesselDrift";
    case ProcessFamily::DunklDrift: return "DunklDrift";
    case ProcessFamily::HybridDrift: return "HybridDrift";
    case ProcessFamily::OracleChi: return "OracleChi";
    case ProcessFamily::OracleDysonA: return "OracleDysonA";
    case ProcessFamily::OracleSingularB: return "OracleSingularB";
  }
  return "?";
}

ProcessFamily process_family_from_string(const std::string& name) {
  for (auto f : {ProcessFamily::BesselDrift, ProcessFamily::DunklDrift, ProcessFamily::HybridDrift,
                 ProcessFamily::OracleChi, ProcessFamily::OracleDysonA, ProcessFamily::OracleSingularB})
    if (to_string(f) == name) return f;
  throw std::invalid_argument("unknown process family '" + name + "'");
}

ProcessSpec ProcessSpec::diffusion(DriftFamily f, RootSystem rs, Vec lambda, Vec x0) {
  ProcessSpec ps;
  ps.family = f == DriftFamily::Bessel  ? ProcessFamily::BesselDrift
              : f == DriftFamily::Dunkl ? ProcessFamily::DunklDrift
                                        : ProcessFamily::HybridDrift;
  ps.system = std::move(rs);
  ps.lambda = std::move(lambda);
  ps.x0 = std::move(x0);
  if (ps.x0.size() != ps.system.rank()) throw std::invalid_argument("start point must have the root system's rank");
  if (!ps.x0.allFinite()) throw std::invalid_argument("start point must be finite");
  ps.density_spec();  // validates kind, drift
  if (f == DriftFamily::Bessel && !ps.system.in_chamber(ps.x0, 1e-12))
    throw std::invalid_argument("Bessel start point must lie in the chamber");
  return ps;
}

ProcessSpec ProcessSpec::chi(int n, double lambda) {
  if (n < 1) throw std::invalid_argument("OracleChi needs n >= 1");
  if (!(lambda >= 0.0)) throw std::invalid_argument("OracleChi drift must be nonnegative");
  ProcessSpec ps;
  ps.family = ProcessFamily::OracleChi;
  ps.system = RootSystem::rank1(0.5 * (n - 1));
  ps.lambda = Vec::Constant(1, lambda);
  ps.x0 = Vec::Zero(1);
  ps.n = n;
  return ps;
}

ProcessSpec ProcessSpec::dyson(int N, int d, Vec lambda) {
  check_oracle_dims(N, d);
  if (N < 2) throw std::invalid_argument("OracleDysonA needs N >= 2 (N = 1 has no roots)");
  ProcessSpec ps;
  ps.family = ProcessFamily::OracleDysonA;
  ps.system = RootSystem::type_a(N, 0.5 * d);
  if (lambda.size() != N || !ps.system.in_chamber(lambda)) throw std::invalid_argument("Dyson drift must be a chamber point");
  ps.lambda = std::move(lambda);
  ps.x0 = Vec::Zero(N);
  ps.d = d;
  return ps;
}

ProcessSpec ProcessSpec::singular_b(int M, int N, int d, Vec lambda) {
  check_oracle_dims(N, d);
  if (M < N) throw std::invalid_argument("OracleSingularB needs M >= N");
  ProcessSpec ps;
  ps.family = ProcessFamily::OracleSingularB;
  ps.system = GeometricCase{RootKind::B, d, M}.root_system(N);
  if (lambda.size() != N || !ps.system.in_chamber(lambda)) throw std::invalid_argument("B drift must be a chamber point");
  ps.lambda = std::move(lambda);
  ps.x0 = Vec::Zero(N);
  ps.M = M;
  ps.d = d;
  return ps;
}

bool ProcessSpec::is_oracle() const {
  return family == ProcessFamily::OracleChi || family == ProcessFamily::OracleDysonA ||
         family == ProcessFamily::OracleSingularB;
}

DriftFamily ProcessSpec::drift_family() const {
  switch (family) {
    case ProcessFamily::BesselDrift: return DriftFamily::Bessel;
    case ProcessFamily::DunklDrift: return DriftFamily::Dunkl;
    case ProcessFamily::HybridDrift: return DriftFamily::Hybrid;
    default: throw std::invalid_argument("oracle processes have no drift family");
  }
}

DensitySpec ProcessSpec::density_spec() const {
  if (is_oracle()) return {DriftFamily::Bessel, system, lambda};
  return {drift_family(), system, lambda};
}

nlohmann::json ProcessSpec::to_json() const {
  nlohmann::json j{{"family", to_string(family)}, {"lambda", write_vec(lambda)}};
  switch (family) {
    case ProcessFamily::OracleChi:
      j["n"] = n;
      j["lambda"] = lambda(0);
      break;
    case ProcessFamily::OracleDysonA:
      j["N"] = system.rank();
      j["d"] = d;
      break;
    case ProcessFamily::OracleSingularB:
      j["M"] = M;
      j["N"] = system.rank();
      j["d"] = d;
      break;
    default:
      j["system"] = system.to_json();
      j["x0"] = write_vec(x0);
  }
  return j;
}

ProcessSpec ProcessSpec::from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw std::invalid_argument("process must be a JSON object");
  const ProcessFamily f = process_family_from_string(j.at("family").get<std::string>());
  std::vector<std::string> allowed{"family", "lambda"};
  switch (f) {
    case ProcessFamily::OracleChi: allowed.insert(allowed.end(), {"n"}); break;
    case ProcessFamily::OracleDysonA: allowed.insert(allowed.end(), {"N", "d"}); break;
    case ProcessFamily::OracleSingularB: allowed.insert(allowed.end(), {"M", "N", "d"}); break;
    default: allowed.insert(allowed.end(), {"system", "x0"});
  }
  for (const auto& [key, _] : j.items())
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
      throw std::invalid_argument("unknown process key '" + key + "'");
  switch (f) {
    case ProcessFamily::OracleChi: return chi(j.at("n").get<int>(), j.at("lambda").get<double>());
    case ProcessFamily::OracleDysonA: return dyson(j.at("N").get<int>(), j.value("d", 1), read_vec(j.at("lambda")));
    case ProcessFamily::OracleSingularB:
      return singular_b(j.at("M").get<int>(), j.at("N").get<int>(), j.value("d", 1), read_vec(j.at("lambda")));
    default: {
      const RootSystem rs = RootSystem::from_json(j.at("system"));
      const Vec x0 = j.contains("x0") ? read_vec(j.at("x0")) : Vec::Zero(rs.rank());
      const DriftFamily df = f == ProcessFamily::BesselDrift  ? DriftFamily::Bessel
                             : f == ProcessFamily::DunklDrift ? DriftFamily::Dunkl
                                                              : DriftFamily::Hybrid;
      return diffusion(df, rs, read_vec(j.at("lambda")), x0);
    }
  }
}

void SimConfig::validate() const {
  if (!(dt0 > 0.0)) throw std::invalid_argument("dt0 must be positive");
  if (!(T > 0.0)) throw std::invalid_argument("T must be positive");
  if (!(boundary_eps > 0.0)) throw std::invalid_argument("boundary_eps must be positive");
  if (!(rate_cap_factor > 0.0)) throw std::invalid_argument("rate_cap_factor must be positive");
  if (!(min_step_fraction >= 0.0 && min_step_fraction < 1.0))
    throw std::invalid_argument("min_step_fraction must lie in [0, 1)");
}

nlohmann::json SimConfig::to_json() const {
  return {{"dt0", dt0},
          {"T", T},
          {"step_rule", step_rule == StepRule::Fixed ? "fixed" : "adaptive"},
          {"boundary_eps", boundary_eps},
          {"rate_cap_factor", rate_cap_factor},
          {"method", method == SimMethod::Exact ? "exact" : "euler"},
          {"min_step_fraction", min_step_fraction}};
}

SimConfig SimConfig::from_json(const nlohmann::json& j) { return from_json(j, SimConfig{}); }

SimConfig SimConfig::from_json(const nlohmann::json& j, SimConfig c) {
  if (!j.is_object()) throw std::invalid_argument("sim config must be a JSON object");
  for (const auto& [key, v] : j.items()) {
    if (key == "dt0")
      c.dt0 = v.get<double>();
    else if (key == "T")
      c.T = v.get<double>();
    else if (key == "boundary_eps")
      c.boundary_eps = v.get<double>();
    else if (key == "rate_cap_factor")
      c.rate_cap_factor = v.get<double>();
    else if (key == "min_step_fraction")
      c.min_step_fraction = v.get<double>();
    else if (key == "step_rule") {
      const auto s = v.get<std::string>();
      if (s != "fixed" && s != "adaptive") throw std::invalid_argument("step_rule must be fixed or adaptive");
      c.step_rule = s == "fixed" ? StepRule::Fixed : StepRule::Adaptive;
    } else if (key == "method") {
      const auto s = v.get<std::string>();
      if (s != "exact" && s != "euler") throw std::invalid_argument("method must be euler or exact");
      c.method = s == "exact" ? SimMethod::Exact : SimMethod::Euler;
    } else
      throw std::invalid_argument("unknown sim key '" + key + "'");
  }
  c.validate();
  return c;
}

Vec drift_field(const ProcessSpec& ps, const Vec& x) {
  if (x.size() != ps.dim()) throw std::invalid_argument("drift_field: dimension");
  if (min_wall(ps, x) == 0.0) throw BoundaryContact("drift_field: x on a wall");
  return local_coefficients(ps, x).drift;
}

Vec jump_rates(const ProcessSpec& ps, const Vec& x) {
  if (x.size() != ps.dim()) throw std::invalid_argument("jump_rates: dimension");
  if (min_wall(ps, x) == 0.0) throw BoundaryContact("jump_rates: x on a wall");
  return local_coefficients(ps, x).rates;
}

double jump_rate(const ProcessSpec& ps, const Vec& x, std::size_t root) {
  const Vec r = jump_rates(ps, x);
  if (root >= static_cast<std::size_t>(r.size())) throw std::out_of_range("jump_rate: root index");
  return r(static_cast<Eigen::Index>(root));
}

double generator_on_coordinate(const ProcessSpec& ps, const Vec& x, int i) {
  const Local loc = local_coefficients(ps, x);
  double v = loc.drift(i);
  const auto& roots = ps.system.positive_roots();
  for (std::size_t r = 0; r < roots.size(); ++r) v += loc.rates(static_cast<Eigen::Index>(r)) * (reflect(roots[r], x)(i) - x(i));
  return v;
}

Path simulate_path(const ProcessSpec& ps, const SimConfig& cfg, RandomStream& rng) {
  cfg.validate();
  Path path;
  if (ps.is_oracle()) {
    const int steps = std::max(1, static_cast<int>(std::ceil(cfg.T / cfg.dt0 - 1e-9)));
    std::vector<double> grid;
    for (int s = 1; s <= steps; ++s) grid.push_back(s == steps ? cfg.T : s * cfg.dt0);
    path.times.push_back(0.0);
    path.states.push_back(ps.x0);
    for (auto& v : simulate_observations(ps, cfg, grid, rng, &path.stats)) path.states.push_back(std::move(v));
    path.times.insert(path.times.end(), grid.begin(), grid.end());
  } else if (cfg.method == SimMethod::Exact) {
    const int steps = std::max(1, static_cast<int>(std::ceil(cfg.T / cfg.dt0 - 1e-9)));
    std::vector<double> grid;
    for (int s = 1; s <= steps; ++s) grid.push_back(s == steps ? cfg.T : s * cfg.dt0);
    path.times.push_back(0.0);
    path.states.push_back(ps.x0);
    Vec prev = ps.x0;
    const auto obs = simulate_observations(ps, cfg, grid, rng, &path.stats);
    for (std::size_t s = 0; s < obs.size(); ++s) {
      log_sign_changes(prev, obs[s], grid[s], &path.jumps, path.stats);
      prev = obs[s];
      path.times.push_back(grid[s]);
      path.states.push_back(obs[s]);
    }
  } else {
    Vec x = ps.x0;
    double t = 0.0;
    path.times.push_back(0.0);
    path.states.push_back(x);
    advance(ps, cfg, x, t, cfg.T, rng, path.stats, &path.times, &path.states, &path.jumps);
  }
  if (!ps.is_oracle() && kernel_supported(ps.system)) path.terminal_weight = girsanov_weight(ps, path.states.back(), cfg.T).value();
  return path;
}

std::vector<Vec> simulate_observations(const ProcessSpec& ps, const SimConfig& cfg, const std::vector<double>& times,
                                       RandomStream& rng, PathStats* stats) {
  cfg.validate();
  for (std::size_t i = 0; i < times.size(); ++i)
    if (!(times[i] > (i ? times[i - 1] : 0.0))) throw std::invalid_argument("observation times must increase from 0");
  PathStats local;
  PathStats& st = stats ? *stats : local;
  std::vector<Vec> out;
  out.reserve(times.size());
  double t = 0.0;

  if (ps.is_oracle()) {
    const int N = ps.dim();
    if (ps.family == ProcessFamily::OracleChi) {
      Vec z = Vec::Zero(ps.n);
      for (double s : times) {
        const double sq = std::sqrt(s - t);
        for (auto& c : z) c += sq * rng.normal();
        t = s;
        const double first = z(0) + t * ps.lambda(0);
        out.push_back(Vec::Constant(1, std::sqrt(first * first + z.tail(ps.n - 1).squaredNorm())));
        ++st.exact_steps;
        ++st.steps;
      }
    } else if (ps.family == ProcessFamily::OracleDysonA) {
      Eigen::MatrixXcd g = Eigen::MatrixXcd::Zero(N, N);
      for (double s : times) {
        g += gaussian_hermitian(N, ps.d, s - t, rng);
        t = s;
        Eigen::MatrixXcd h = g;
        for (int i = 0; i < N; ++i) h(i, i) += t * ps.lambda(i);
        out.push_back(hermitian_eigenvalues(h));
        ++st.exact_steps;
        ++st.steps;
      }
    } else {
      Eigen::MatrixXcd g = Eigen::MatrixXcd::Zero(ps.M, N);
      for (double s : times) {
        g += gaussian_rect(ps.M, N, ps.d, s - t, rng);
        t = s;
        Eigen::MatrixXcd a = g;
        for (int i = 0; i < N; ++i) a(i, i) += t * ps.lambda(i);
        out.push_back(singular_values(a));
        ++st.exact_steps;
        ++st.steps;
      }
    }
    return out;
  }

  Vec x = ps.x0;
  for (double s : times) {
    if (cfg.method == SimMethod::Exact) {
      x = exact_step(ps, s - t, x, rng);
      t = s;
      ++st.exact_steps;
      ++st.steps;
    } else {
      advance(ps, cfg, x, t, s, rng, st, nullptr, nullptr, nullptr);
    }
    out.push_back(x);
  }
  return out;
}

double oracle_chi(int n, double lambda, double t, RandomStream& rng) {
  if (n < 1) throw std::invalid_argument("oracle_chi: n >= 1");
  if (!(t > 0.0)) throw std::invalid_argument("oracle_chi: t > 0");
  const double sq = std::sqrt(t);
  const double first = t * lambda + sq * rng.normal();
  double s = first * first;
  for (int i = 1; i < n; ++i) {
    const double z = sq * rng.normal();
    s += z * z;
  }
  return std::sqrt(s);
}

Vec oracle_dyson(int N, int d, const Vec& lambda, double t, RandomStream& rng) {
  check_oracle_dims(N, d);
  if (lambda.size() != N) throw std::invalid_argument("oracle_dyson: drift dimension");
  if (!(t > 0.0)) throw std::invalid_argument("oracle_dyson: t > 0");
  Eigen::MatrixXcd h = gaussian_hermitian(N, d, t, rng);
  for (int i = 0; i < N; ++i) h(i, i) += t * lambda(i);
  return hermitian_eigenvalues(h);
}

Vec oracle_singular_b(int M, int N, int d, const Vec& lambda, double t, RandomStream& rng) {
  check_oracle_dims(N, d);
  if (M < N) throw std::invalid_argument("oracle_singular_b: M >= N");
  if (lambda.size() != N) throw std::invalid_argument("oracle_singular_b: drift dimension");
  if (!(t > 0.0)) throw std::invalid_argument("oracle_singular_b: t > 0");
  Eigen::MatrixXcd a = gaussian_rect(M, N, d, t, rng);
  for (int i = 0; i < N; ++i) a(i, i) += t * lambda(i);
  return singular_values(a);
}

Vec symmetric_eigenvalues(Eigen::MatrixXd a, int sweep_cap) {
  const Eigen::Index n = a.rows();
  if (a.cols() != n) throw std::invalid_argument("symmetric_eigenvalues: square matrix needed");
  const double scale = std::max(a.norm(), std::numeric_limits<double>::min());
  for (int sweep = 0;; ++sweep) {
    double off = 0.0;
    for (Eigen::Index p = 0; p < n; ++p)
      for (Eigen::Index q = p + 1; q < n; ++q) off += a(p, q) * a(p, q);
    if (std::sqrt(off) <= 1e-15 * scale) break;
    if (sweep == sweep_cap) throw NumericalError("Jacobi eigenvalues: no convergence");
    for (Eigen::Index p = 0; p < n; ++p)
      for (Eigen::Index q = p + 1; q < n; ++q) {
        if (a(p, q) == 0.0) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * a(p, q));
        const double tn = std::copysign(1.0, theta) / (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(tn * tn + 1.0), s = tn * c;
        for (Eigen::Index r = 0; r < n; ++r) {
          const double arp = a(r, p), arq = a(r, q);
          a(r, p) = c * arp - s * arq;
          a(r, q) = s * arp + c * arq;
        }
        for (Eigen::Index r = 0; r < n; ++r) {
          const double apr = a(p, r), aqr = a(q, r);
          a(p, r) = c * apr - s * aqr;
          a(q, r) = s * apr + c * aqr;
        }
      }
  }
  Vec ev = a.diagonal();
  std::sort(ev.begin(), ev.end(), std::greater<>());
  return ev;
}

Vec hermitian_eigenvalues(const Eigen::MatrixXcd& h, int sweep_cap) {
  const Eigen::Index n = h.rows();
  if (h.imag().isZero(0.0)) return symmetric_eigenvalues(h.real(), sweep_cap);
  // [[Re, -Im], [Im, Re]] has every eigenvalue of h twice.
  Eigen::MatrixXd e(2 * n, 2 * n);
  e << h.real(), -h.imag(), h.imag(), h.real();
  const Vec all = symmetric_eigenvalues(e, sweep_cap);
  Vec ev(n);
  for (Eigen::Index i = 0; i < n; ++i) ev(i) = 0.5 * (all(2 * i) + all(2 * i + 1));
  return ev;
}

LogValue girsanov_weight(const ProcessSpec& ps, const Vec& xT, double T) {
  if (ps.is_oracle()) throw UnsupportedKind("girsanov_weight: oracle processes");
  if (!kernel_supported(ps.system)) throw UnsupportedKind("girsanov_weight: kernel not available");
  const LogValue g = ps.drift_family() == DriftFamily::Dunkl ? dunkl_E_nd(ps.system, xT, ps.lambda)
                                                             : bessel_J_nd(ps.system, xT, ps.lambda);
  return LogValue::from_log(0.5 * ps.lambda.squaredNorm() * T) / g;
}

}  // namespace dunkl
