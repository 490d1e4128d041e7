// dunklsim: kernels, densities, path simulation and verification experiments.

#include <CLI11.hpp>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include "dunkl/config.hpp"
#include "dunkl/densities.hpp"
#include "dunkl/kernels1d.hpp"
#include "dunkl/kernels_nd.hpp"

using namespace dunkl;

namespace {

/// Option values from a JSON object. Nested objects address subcommands.
class JsonConfig : public CLI::Config {
 public:
  std::string to_config(const CLI::App* app, bool default_also, bool, std::string) const override {
    return dump(app, default_also).dump(2) + "\n";
  }

  std::vector<CLI::ConfigItem> from_config(std::istream& in) const override {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
      throw CLI::ConversionError("config", e.what());
    }
    if (!j.is_object()) throw CLI::ConversionError("config", "top level must be a JSON object");
    std::vector<CLI::ConfigItem> items;
    collect(j, {}, items);
    return items;
  }

 private:
  static std::string scalar(const nlohmann::json& v) {
    if (v.is_string()) return v.get<std::string>();
    return v.dump();
  }

  static void collect(const nlohmann::json& j, const std::vector<std::string>& parents,
                      std::vector<CLI::ConfigItem>& out) {
    for (const auto& [key, v] : j.items()) {
      if (v.is_object()) {
        auto p = parents;
        p.push_back(key);
        out.push_back({p, "++", {}});
        collect(v, p, out);
        out.push_back({p, "--", {}});
        continue;
      }
      CLI::ConfigItem item{parents, key, {}};
      if (v.is_array())
        for (const auto& e : v) item.inputs.push_back(scalar(e));
      else
        item.inputs.push_back(scalar(v));
      out.push_back(item);
    }
  }

  static nlohmann::json dump(const CLI::App* app, bool default_also) {
    nlohmann::json j = nlohmann::json::object();
    for (const CLI::Option* opt : app->get_options()) {
      if (opt->get_lnames().empty() || !opt->get_configurable()) continue;
      const std::string name = opt->get_lnames().front();
      if (opt->count() > 0) {
        const auto& r = opt->results();
        j[name] = r.size() == 1 ? nlohmann::json(r[0]) : nlohmann::json(r);
      } else if (default_also && !opt->get_default_str().empty()) {
        j[name] = opt->get_default_str();
      }
    }
    for (const CLI::App* sub : app->get_subcommands({}))
      if (sub->parsed()) j[sub->get_name()] = dump(sub, default_also);
    return j;
  }
};

std::string num(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  return {buf, std::to_chars(buf, buf + sizeof buf, v).ptr};
}

std::string joined(const Vec& v) {
  std::string s;
  for (Eigen::Index i = 0; i < v.size(); ++i) s += (i ? ";" : "") + num(v(i));
  return s;
}

Vec to_vec(const std::vector<double>& v) { return Eigen::Map<const Vec>(v.data(), static_cast<Eigen::Index>(v.size())); }

std::vector<double> grid_points(const std::vector<double>& g) {
  if (g.size() != 3 || !(g[2] >= 2) || g[2] != std::floor(g[2]) || !(g[1] > g[0]))
    throw std::invalid_argument("grid must be lo,hi,n with lo < hi and integer n >= 2");
  std::vector<double> out;
  const int n = static_cast<int>(g[2]);
  for (int i = 0; i < n; ++i) out.push_back(g[0] + (g[1] - g[0]) * i / (n - 1));
  return out;
}

/// Rows of CSV cells, or the same rows as a JSON array of objects.
struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  void write(std::ostream& out, OutputFormat f) const {
    if (f == OutputFormat::Csv) {
      for (std::size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << header[i];
      out << '\n';
      for (const auto& r : rows) {
        for (std::size_t i = 0; i < r.size(); ++i) out << (i ? "," : "") << r[i];
        out << '\n';
      }
      return;
    }
    nlohmann::json j = nlohmann::json::array();
    for (const auto& r : rows) {
      nlohmann::json o = nlohmann::json::object();
      for (std::size_t i = 0; i < r.size(); ++i) {
        double v = 0.0;
        const auto res = std::from_chars(r[i].data(), r[i].data() + r[i].size(), v);
        if (res.ec == std::errc() && res.ptr == r[i].data() + r[i].size())
          o[header[i]] = v;
        else
          o[header[i]] = r[i];
      }
      j.push_back(o);
    }
    out << j.dump(2) << '\n';
  }
};

struct Global {
  std::uint64_t seed = 0;
  int workers = 1;
  std::string output = "-";
  std::string format;
};

void emit(const Global& g, const std::function<void(std::ostream&)>& write) {
  if (g.output == "-") {
    write(std::cout);
    return;
  }
  std::ofstream f(g.output, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open " + g.output);
  write(f);
}

OutputFormat format_or(const Global& g, OutputFormat fallback) {
  if (g.format.empty()) return fallback;
  return g.format == "csv" ? OutputFormat::Csv : OutputFormat::Json;
}

struct SystemOpts {
  std::string kind = "Rank1";
  int rank = 1;
  double k = 0.0;
  double k2 = 0.0;

  void add(CLI::App* app) {
    app->add_option("--kind", kind, "root system: Rank1, ProductZ2, A, B, D")->capture_default_str();
    app->add_option("--rank", rank, "rank N")->capture_default_str()->check(CLI::PositiveNumber);
    app->add_option("--k", k, "multiplicity (k1 for B)")->capture_default_str()->check(CLI::NonNegativeNumber);
    app->add_option("--k2", k2, "second multiplicity for B")->capture_default_str()->check(CLI::NonNegativeNumber);
  }

  RootSystem build() const {
    const RootKind rk = root_kind_from_string(kind);
    return {rk, rk == RootKind::Rank1 ? 1 : rank, k, k2};
  }
};

// ---- constants

int cmd_constants(const Global& g, const SystemOpts& s) {
  const RootSystem rs = s.build();
  Table t{{"kind", "rank", "k", "k2", "gamma", "weyl_order", "log_c_k", "c_k", "log_d_k", "d_k"}, {}};
  t.rows.push_back({to_string(rs.kind()), std::to_string(rs.rank()), num(rs.k1()), num(rs.k2()), num(rs.gamma()),
                    std::to_string(rs.weyl_order()), num(rs.log_norm_constant()), num(std::exp(rs.log_norm_constant())),
                    num(rs.log_sphere_constant()), num(std::exp(rs.log_sphere_constant()))});
  emit(g, [&](std::ostream& o) { t.write(o, format_or(g, OutputFormat::Csv)); });
  return 0;
}

// ---- kernel

struct KernelOpts {
  std::string family = "dunkl";
  std::vector<double> lambda{1.0};
  std::vector<std::vector<double>> x;
  std::vector<double> grid{-10.0, 10.0, 41};
};

/// Quadrature-route value of the same kernel; NaN where no second route exists.
LogValue second_route(const RootSystem& rs, bool bessel, const Vec& x, const Vec& lam) {
  if (rs.kind() != RootKind::Rank1 && rs.kind() != RootKind::ProductZ2) return LogValue::from_log(NAN);
  LogValue v = LogValue::one();
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    LogValue e = dunkl_E_1d_quadrature(rs.k(), x(i), lam(i));
    if (bessel) e = LogValue::from_double(0.5) * (e + dunkl_E_1d_quadrature(rs.k(), -x(i), lam(i)));
    v *= e;
  }
  return v;
}

int cmd_kernel(const Global& g, const SystemOpts& s, const KernelOpts& o) {
  const RootSystem rs = s.build();
  const Vec lam = to_vec(o.lambda);
  if (lam.size() != rs.rank()) throw std::invalid_argument("--lambda needs " + std::to_string(rs.rank()) + " values");
  std::vector<Vec> points;
  for (const auto& p : o.x) points.push_back(to_vec(p));
  if (points.empty()) {
    if (rs.rank() != 1) throw std::invalid_argument("--grid is rank one only; pass --x");
    for (double v : grid_points(o.grid)) points.push_back(Vec::Constant(1, v));
  }
  Table t;
  const bool moments_mode = o.family == "m1" || o.family == "m2";
  if (moments_mode)
    t.header = {"x", "lambda", "m1", "m2_diag"};
  else if (o.family == "dunkl" || o.family == "bessel")
    t.header = {"x", "lambda", "sign", "log_value", "value", "route_residual"};
  else
    throw std::invalid_argument("--family must be dunkl, bessel, m1 or m2");
  for (const Vec& x : points) {
    if (x.size() != rs.rank()) throw std::invalid_argument("--x needs " + std::to_string(rs.rank()) + " values");
    if (moments_mode) {
      const MomentPair m = moments(rs, KernelFamily::Dunkl, lam, x);
      t.rows.push_back({joined(x), joined(lam), joined(m.m1), joined(m.m2_diag)});
      continue;
    }
    const bool bessel = o.family == "bessel";
    const LogValue v = bessel ? bessel_J_nd(rs, x, lam) : dunkl_E_nd(rs, x, lam);
    const LogValue w = second_route(rs, bessel, x, lam);
    const double resid = std::fabs(std::expm1(w.log_abs() - v.log_abs()));
    t.rows.push_back({joined(x), joined(lam), std::to_string(v.sign()), num(v.log_abs()), num(v.value()), num(resid)});
  }
  emit(g, [&](std::ostream& out) { t.write(out, format_or(g, OutputFormat::Csv)); });
  return 0;
}

// ---- density

struct DensityOpts {
  std::string family = "dunkl";
  std::vector<double> lambda{1.0};
  std::vector<double> x{0.0};
  double t = 1.0;
  std::vector<std::vector<double>> y;
  std::vector<double> grid;
};

DriftFamily drift_family_arg(const std::string& s) {
  if (s == "dunkl") return DriftFamily::Dunkl;
  if (s == "bessel") return DriftFamily::Bessel;
  if (s == "hybrid") return DriftFamily::Hybrid;
  throw std::invalid_argument("--family must be dunkl, bessel or hybrid");
}

int cmd_density(const Global& g, const SystemOpts& s, const DensityOpts& o) {
  const DensitySpec ds(drift_family_arg(o.family), s.build(), to_vec(o.lambda));
  const Vec x = to_vec(o.x);
  std::vector<Vec> ys;
  for (const auto& p : o.y) ys.push_back(to_vec(p));
  if (ys.empty()) {
    if (x.size() != 1) throw std::invalid_argument("--grid is rank one only; pass --y");
    std::vector<double> grid = o.grid;
    if (grid.empty()) {
      const double r = density_support_radius(ds, o.t, x);
      grid = {ds.family == DriftFamily::Bessel ? 0.0 : -r, r, 201};
    }
    for (double v : grid_points(grid)) ys.push_back(Vec::Constant(1, v));
  }
  Table tab{{"t", "x", "y", "log_density", "density"}, {}};
  for (const Vec& y : ys) {
    const LogValue p = transition_density(ds, o.t, x, y);
    tab.rows.push_back({num(o.t), joined(x), joined(y), num(p.log_abs()), num(p.value())});
  }
  emit(g, [&](std::ostream& out) { tab.write(out, format_or(g, OutputFormat::Csv)); });
  return 0;
}

// ---- simulate

struct ProcessOpts {
  std::string family = "dunkl";
  std::vector<double> lambda{1.0};
  std::vector<double> x0;
  int n = 3;
  int M = 0;
  int d = 1;

  void add(CLI::App* app) {
    app->add_option("--family", family, "dunkl, bessel, hybrid, chi, dyson or singular-b")->capture_default_str();
    app->add_option("--lambda", lambda, "drift vector")->delimiter(',');
    app->add_option("--x0", x0, "start point (diffusions; default 0)")->delimiter(',');
    app->add_option("--n", n, "chi: Euclidean dimension")->capture_default_str()->check(CLI::PositiveNumber);
    app->add_option("--M", M, "singular-b: row count")->check(CLI::PositiveNumber);
    app->add_option("--d", d, "matrix oracles: 1 real, 2 complex")->capture_default_str()->check(CLI::IsMember({1, 2}));
  }

  ProcessSpec build(const SystemOpts& s) const {
    const Vec lam = to_vec(lambda);
    if (family == "chi") return ProcessSpec::chi(n, lambda.at(0));
    if (family == "dyson") return ProcessSpec::dyson(static_cast<int>(lam.size()), d, lam);
    if (family == "singular-b") return ProcessSpec::singular_b(M, static_cast<int>(lam.size()), d, lam);
    const RootSystem rs = s.build();
    const Vec start = x0.empty() ? Vec::Zero(rs.rank()) : to_vec(x0);
    return ProcessSpec::diffusion(drift_family_arg(family), rs, lam, start);
  }
};

struct SimOpts {
  double T = 1.0;
  double dt0 = 1e-3;
  std::string method = "euler";
  std::string step_rule = "adaptive";
  std::int64_t paths = 1;

  SimConfig build() const {
    return SimConfig::from_json({{"T", T}, {"dt0", dt0}, {"method", method}, {"step_rule", step_rule}});
  }
};

int cmd_simulate(const Global& g, const SystemOpts& s, const ProcessOpts& p, const SimOpts& so) {
  const ProcessSpec ps = p.build(s);
  SimConfig cfg = so.build();
  Table tab;
  const Eigen::Index n = ps.dim();
  if (so.paths == 1) {
    tab.header = {"time"};
    for (Eigen::Index i = 0; i < n; ++i) tab.header.push_back("x" + std::to_string(i + 1));
    tab.header.push_back("jump");
    cfg.seed = g.seed;
    RandomStream rng(g.seed, 0);
    const Path path = simulate_path(ps, cfg, rng);
    std::size_t next_jump = 0;
    for (std::size_t i = 0; i < path.times.size(); ++i) {
      int jumped = 0;
      while (next_jump < path.jumps.size() && path.jumps[next_jump].time <= path.times[i]) {
        jumped = 1;
        ++next_jump;
      }
      std::vector<std::string> row{num(path.times[i])};
      for (Eigen::Index c = 0; c < n; ++c) row.push_back(num(path.states[i](c)));
      row.push_back(std::to_string(jumped));
      tab.rows.push_back(std::move(row));
    }
  } else {
    tab.header = {"path"};
    for (Eigen::Index i = 0; i < n; ++i) tab.header.push_back("x" + std::to_string(i + 1));
    const RunContext ctx{g.seed, g.workers, cfg};
    const auto obs = simulate_ensemble(ps, ctx, {cfg.T}, so.paths);
    for (std::size_t i = 0; i < obs.size(); ++i) {
      std::vector<std::string> row{std::to_string(i)};
      for (Eigen::Index c = 0; c < n; ++c) row.push_back(num(obs[i][0](c)));
      tab.rows.push_back(std::move(row));
    }
  }
  emit(g, [&](std::ostream& out) { tab.write(out, format_or(g, OutputFormat::Csv)); });
  return 0;
}

// ---- experiment

struct ExperimentOpts {
  std::string kind;
  std::string preset;
  std::string group;
  std::string spec;
  std::int64_t paths = 0;
  std::vector<double> times;
  double dt0 = 0.0;
  std::string method;
  bool list = false;
  bool emit_config = false;
};

RunConfig resolve(const Global& g, const ExperimentOpts& o) {
  RunConfig rc;
  if (!o.spec.empty()) {
    std::ifstream in(o.spec);
    if (!in) throw std::invalid_argument("cannot read " + o.spec);
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
      throw std::invalid_argument(o.spec + ": " + e.what());
    }
    rc = RunConfig::from_json(j);
  }
  if (o.kind == "all") {
    if (o.group.empty()) throw std::invalid_argument("'all' needs --presets <group>");
    for (const auto& e : preset_group(o.group)) rc.experiments.push_back(e.experiment);
  } else if (!o.kind.empty()) {
    if (o.preset.empty()) throw std::invalid_argument("--preset is required");
    rc.experiments.push_back(make_experiment(experiment_kind_from_string(o.kind), find_preset(o.preset)));
  }
  if (rc.experiments.empty()) throw std::invalid_argument("nothing to run: give a kind with --preset, 'all' or --spec");
  for (auto& e : rc.experiments) {
    if (o.paths > 0) e.n_paths = o.paths;
    if (!o.times.empty()) e.times = o.times;
    if (o.dt0 > 0.0) e.sim.dt0 = o.dt0;
    if (!o.method.empty()) e.sim.method = SimConfig::from_json({{"method", o.method}}).method;
  }
  // explicit flags win over the spec file
  rc.seed = g.seed;
  rc.workers = g.workers;
  rc.output = g.output;
  rc.format = format_or(g, rc.format);
  rc.validate();
  return rc;
}

int cmd_experiment(const Global& g, const ExperimentOpts& o) {
  if (o.list) {
    for (const auto& p : presets()) std::cout << p.name << "  " << p.description << '\n';
    for (const auto& n : preset_group_names()) std::cout << "group " << n << '\n';
    return 0;
  }
  const RunConfig rc = resolve(g, o);
  if (o.emit_config) {
    emit(g, [&](std::ostream& out) { out << rc.to_json().dump(2) << '\n'; });
    return 0;
  }
  std::vector<McReport> reports;
  for (const auto& e : rc.experiments) {
    reports.push_back(run_experiment(e, rc.seed, rc.workers));
    const auto& r = reports.back();
    std::cerr << r.experiment_id << ": " << to_string(r.verdict) << " (" << std::lround(r.runtime_ms) << " ms)\n";
  }
  emit(g, [&](std::ostream& out) {
    if (rc.format == OutputFormat::Csv) {
      for (std::size_t i = 0; i < reports.size(); ++i) {
        std::string csv = reports[i].to_csv();
        if (i > 0) csv.erase(0, csv.find('\n') + 1);
        out << csv;
      }
    } else {
      nlohmann::json j = nlohmann::json::array();
      for (const auto& r : reports) j.push_back(r.to_json());
      out << j.dump(2) << '\n';
    }
  });
  return exit_code(reports);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dunkl and Bessel processes with drift: kernels, densities, simulation, experiments"};
  app.require_subcommand(1);
  app.fallthrough();
  app.config_formatter(std::make_shared<JsonConfig>());
  app.set_config("--config", "", "JSON file of option values; explicit flags take precedence");
  app.allow_config_extras(CLI::config_extras_mode::error);

  Global g;
  try {
    g.workers = default_workers();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  app.add_option("--seed", g.seed, "64-bit seed")->capture_default_str();
  app.add_option("--workers", g.workers, "worker threads (default DUNKLSIM_WORKERS or all cores)")
      ->check(CLI::PositiveNumber);
  app.add_option("--output", g.output, "output file, - for stdout")->capture_default_str();
  app.add_option("--format", g.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));

  SystemOpts sys;

  auto* constants = app.add_subcommand("constants", "gamma, |W|, c_k and d_k of a root system");
  sys.add(constants);

  KernelOpts ko;
  auto* kernel = app.add_subcommand("kernel", "E_k, J_k or the moment functions on points or a grid");
  sys.add(kernel);
  kernel->add_option("--family", ko.family, "dunkl, bessel, m1 or m2")->capture_default_str();
  kernel->add_option("--lambda", ko.lambda, "spectral argument")->delimiter(',');
  kernel->add_option("--x", ko.x, "point (comma separated); repeatable")->delimiter(',')->allow_extra_args(false);
  kernel->add_option("--grid", ko.grid, "lo,hi,n for rank one x")->delimiter(',')->expected(3);

  DensityOpts dopt;
  auto* density = app.add_subcommand("density", "transition density p_t(x, y)");
  sys.add(density);
  density->add_option("--family", dopt.family, "dunkl, bessel or hybrid")->capture_default_str();
  density->add_option("--lambda", dopt.lambda, "drift")->delimiter(',');
  density->add_option("--x", dopt.x, "start point")->delimiter(',');
  density->add_option("--t", dopt.t, "time")->capture_default_str()->check(CLI::PositiveNumber);
  density->add_option("--y", dopt.y, "end point; repeatable")->delimiter(',')->allow_extra_args(false);
  density->add_option("--grid", dopt.grid, "lo,hi,n for rank one y")->delimiter(',')->expected(3);

  ProcessOpts po;
  SimOpts so;
  auto* simulate = app.add_subcommand("simulate", "one path (time, x1..xN, jump) or terminal states of many");
  sys.add(simulate);
  po.add(simulate);
  simulate->add_option("--T", so.T, "horizon")->capture_default_str()->check(CLI::PositiveNumber);
  simulate->add_option("--dt0", so.dt0, "base step")->capture_default_str()->check(CLI::PositiveNumber);
  simulate->add_option("--method", so.method, "euler or exact")->capture_default_str()->check(
      CLI::IsMember({"euler", "exact"}));
  simulate->add_option("--step-rule", so.step_rule, "fixed or adaptive")->capture_default_str()->check(
      CLI::IsMember({"fixed", "adaptive"}));
  simulate->add_option("--paths", so.paths, "1 for a full path, more for terminal states")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);

  ExperimentOpts eo;
  auto* experiment = app.add_subcommand("experiment", "run verification experiments and emit reports");
  experiment->add_option("kind", eo.kind, "slln, clt, moments, girsanov, radial, density or all");
  experiment->add_option("--preset", eo.preset, "named scenario");
  experiment->add_option("--presets", eo.group, "preset group for 'all'");
  experiment->add_option("--spec", eo.spec, "run config JSON with an experiments list");
  experiment->add_option("--paths", eo.paths, "override path count")->check(CLI::PositiveNumber);
  experiment->add_option("--times", eo.times, "override horizons")->delimiter(',');
  experiment->add_option("--dt0", eo.dt0, "override base step")->check(CLI::PositiveNumber);
  experiment->add_option("--method", eo.method, "override method")->check(CLI::IsMember({"euler", "exact"}));
  experiment->add_flag("--list", eo.list, "list presets and groups");
  experiment->add_flag("--emit-config", eo.emit_config, "print the resolved run config and exit");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*constants) return cmd_constants(g, sys);
    if (*kernel) return cmd_kernel(g, sys, ko);
    if (*density) return cmd_density(g, sys, dopt);
    if (*simulate) return cmd_simulate(g, sys, po, so);
    if (*experiment) return cmd_experiment(g, eo);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
