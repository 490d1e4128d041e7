#include "dunkl/config.hpp"

#include <algorithm>
#include <cstdlib>
#include <stdexcept>
#include <thread>

namespace dunkl {

namespace {

Vec vec(std::initializer_list<double> v) {
  Vec out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double a : v) out(i++) = a;
  return out;
}

void reject_unknown(const nlohmann::json& j, std::initializer_list<const char*> allowed, const std::string& where) {
  if (!j.is_object()) throw std::invalid_argument(where + " must be a JSON object");
  for (const auto& [key, _] : j.items())
    if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; }))
      throw std::invalid_argument("unknown " + where + " key '" + key + "'");
}

ProcessSpec rank1(DriftFamily f, double k, double lam) {
  return ProcessSpec::diffusion(f, RootSystem::rank1(k), vec({lam}), vec({0.0}));
}

ProcessSpec product(DriftFamily f, double k, double l1, double l2) {
  return ProcessSpec::diffusion(f, RootSystem::product_z2(2, k), vec({l1, l2}), vec({0.0, 0.0}));
}

}  // namespace

std::string to_string(ExperimentKind k) {
  switch (k) {
    case ExperimentKind::Slln: return "slln";
    case ExperimentKind::Clt: return "clt";
    case ExperimentKind::Moments: return "moments";
    case ExperimentKind::Girsanov: return "girsanov";
    case ExperimentKind::Radial: return "radial";
    case ExperimentKind::Density: return "density";
  }
  return "?";
}

ExperimentKind experiment_kind_from_string(const std::string& name) {
  for (auto k : {ExperimentKind::Slln, ExperimentKind::Clt, ExperimentKind::Moments, ExperimentKind::Girsanov,
                 ExperimentKind::Radial, ExperimentKind::Density})
    if (to_string(k) == name) return k;
  throw std::invalid_argument("unknown experiment '" + name + "'");
}

void ExperimentConfig::validate() const {
  if (n_paths < 2) throw std::invalid_argument(id + ": n_paths must be at least 2");
  if (times.empty()) throw std::invalid_argument(id + ": empty time list");
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (!(times[i] > 0.0)) throw std::invalid_argument(id + ": times must be positive");
    if (i > 0 && !(times[i] > times[i - 1])) throw std::invalid_argument(id + ": times must increase");
  }
  const bool single = kind == ExperimentKind::Clt || kind == ExperimentKind::Girsanov || kind == ExperimentKind::Density;
  if (single && times.size() != 1) throw std::invalid_argument(id + ": " + to_string(kind) + " takes one horizon");
  if (kind == ExperimentKind::Girsanov && functionals.empty())
    throw std::invalid_argument(id + ": girsanov needs at least one functional");
  if (!(band_cap > 0.0)) throw std::invalid_argument(id + ": band_cap must be positive");
  sim.validate();
}

nlohmann::json ExperimentConfig::to_json() const {
  nlohmann::json sj = sim.to_json();
  sj.erase("T");
  nlohmann::json j{{"id", id},
                   {"kind", to_string(kind)},
                   {"process", process.to_json()},
                   {"times", times},
                   {"n_paths", n_paths},
                   {"sim", sj}};
  if (kind == ExperimentKind::Girsanov) {
    std::vector<std::string> fs;
    for (auto f : functionals) fs.push_back(to_string(f));
    j["functionals"] = fs;
  }
  if (kind == ExperimentKind::Slln) j["band_cap"] = band_cap;
  return j;
}

ExperimentConfig ExperimentConfig::from_json(const nlohmann::json& j) {
  reject_unknown(j, {"id", "kind", "process", "times", "n_paths", "sim", "functionals", "band_cap"}, "experiment");
  ExperimentConfig c;
  c.kind = experiment_kind_from_string(j.at("kind").get<std::string>());
  c.id = j.value("id", to_string(c.kind));
  c.process = ProcessSpec::from_json(j.at("process"));
  c.times = j.at("times").get<std::vector<double>>();
  c.n_paths = j.value("n_paths", c.n_paths);
  if (j.contains("sim")) {
    if (j.at("sim").contains("T")) throw std::invalid_argument("experiment sim: horizons go in 'times'");
    c.sim = SimConfig::from_json(j.at("sim"));
  }
  if (j.contains("functionals"))
    for (const auto& f : j.at("functionals")) c.functionals.push_back(functional_from_string(f.get<std::string>()));
  c.band_cap = j.value("band_cap", c.band_cap);
  c.validate();
  return c;
}

McReport run_experiment(const ExperimentConfig& cfg, std::uint64_t seed, int workers) {
  cfg.validate();
  RunContext ctx{seed, workers, cfg.sim};
  McReport r;
  switch (cfg.kind) {
    case ExperimentKind::Slln: r = run_slln(cfg.process, cfg.times, cfg.n_paths, ctx, cfg.band_cap); break;
    case ExperimentKind::Clt: r = run_clt(cfg.process, cfg.times[0], cfg.n_paths, ctx); break;
    case ExperimentKind::Moments: r = run_moment_checks(cfg.process, cfg.times, cfg.n_paths, ctx); break;
    case ExperimentKind::Girsanov:
      r = run_girsanov_check(cfg.process, cfg.times[0], cfg.functionals, cfg.n_paths, ctx);
      break;
    case ExperimentKind::Radial: r = run_radial_check(cfg.process, cfg.times, cfg.n_paths, ctx); break;
    case ExperimentKind::Density: r = run_density_agreement(cfg.process, cfg.times[0], cfg.n_paths, ctx); break;
  }
  r.experiment_id = cfg.id;
  return r;
}

int default_workers() {
  if (const char* env = std::getenv("DUNKLSIM_WORKERS")) {
    char* end = nullptr;
    const long w = std::strtol(env, &end, 10);
    if (end == env || *end != '\0' || w < 1) throw std::invalid_argument("DUNKLSIM_WORKERS must be a positive integer");
    return static_cast<int>(w);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

void RunConfig::validate() const {
  if (workers < 1) throw std::invalid_argument("workers must be positive");
  if (output.empty()) throw std::invalid_argument("output must not be empty");
  for (const auto& e : experiments) e.validate();
}

nlohmann::json RunConfig::to_json() const {
  nlohmann::json ex = nlohmann::json::array();
  for (const auto& e : experiments) ex.push_back(e.to_json());
  return {{"seed", seed},
          {"workers", workers},
          {"output", output},
          {"format", format == OutputFormat::Csv ? "csv" : "json"},
          {"experiments", ex}};
}

RunConfig RunConfig::from_json(const nlohmann::json& j) {
  reject_unknown(j, {"seed", "workers", "output", "format", "experiments"}, "run config");
  RunConfig c;
  c.seed = j.value("seed", c.seed);
  c.workers = j.value("workers", c.workers);
  c.output = j.value("output", c.output);
  const std::string f = j.value("format", std::string("json"));
  if (f != "json" && f != "csv") throw std::invalid_argument("format must be json or csv");
  c.format = f == "csv" ? OutputFormat::Csv : OutputFormat::Json;
  if (j.contains("experiments"))
    for (const auto& e : j.at("experiments")) c.experiments.push_back(ExperimentConfig::from_json(e));
  c.validate();
  return c;
}

const std::vector<Preset>& presets() {
  static const std::vector<Preset> list = {
      {"rank1-dunkl-k1", "Rank1 Dunkl process, k=1, drift 1, from 0", rank1(DriftFamily::Dunkl, 1.0, 1.0)},
      {"rank1-dunkl-k0", "Rank1 Dunkl process, k=0 (Brownian motion), drift 1", rank1(DriftFamily::Dunkl, 0.0, 1.0)},
      {"rank1-bessel-k1", "Rank1 Bessel process, k=1, drift 1", rank1(DriftFamily::Bessel, 1.0, 1.0)},
      {"rank1-bessel-k0.5", "Rank1 Bessel process, k=1/2, drift 1", rank1(DriftFamily::Bessel, 0.5, 1.0)},
      {"rank1-hybrid-k1", "Rank1 hybrid process, k=1, drift 1", rank1(DriftFamily::Hybrid, 1.0, 1.0)},
      {"productz2-dunkl-k1", "ProductZ2 N=2 Dunkl process, k=1, drift (1,2)",
       product(DriftFamily::Dunkl, 1.0, 1.0, 2.0)},
      {"boundary-counterexample", "ProductZ2 N=2 Dunkl process, k=1, boundary drift (1,0)",
       product(DriftFamily::Dunkl, 1.0, 1.0, 0.0)},
      {"boundary-bessel", "ProductZ2 N=2 Bessel process, k=1, boundary drift (1,0)",
       product(DriftFamily::Bessel, 1.0, 1.0, 0.0)},
      {"boundary-hybrid", "ProductZ2 N=2 hybrid process, k=1, boundary drift (1,0)",
       product(DriftFamily::Hybrid, 1.0, 1.0, 0.0)},
      {"dyson-n2-complex", "Hermitian 2x2 eigenvalues (A, k=1), drift (1,-1)",
       ProcessSpec::dyson(2, 2, vec({1.0, -1.0}))},
      {"chi3", "norm of 3-dim Brownian motion with drift 1 (Rank1 Bessel k=1)", ProcessSpec::chi(3, 1.0)},
  };
  return list;
}

const Preset& find_preset(const std::string& name) {
  for (const auto& p : presets())
    if (p.name == name) return p;
  throw std::invalid_argument("unknown preset '" + name + "'");
}

ExperimentConfig make_experiment(ExperimentKind kind, const Preset& p) {
  ExperimentConfig c;
  c.id = to_string(kind) + "/" + p.name;
  c.kind = kind;
  c.process = p.process;
  c.n_paths = p.n_paths;
  // Long horizons use exact transitions; short ones exercise the Euler scheme.
  c.sim.method = SimMethod::Exact;
  switch (kind) {
    case ExperimentKind::Slln:
      c.times = {10.0, 40.0, 160.0};
      break;
    case ExperimentKind::Clt: c.times = {100.0}; break;
    case ExperimentKind::Moments:
      c.times = {0.5, 1.0, 2.0};
      c.sim.method = SimMethod::Euler;
      break;
    case ExperimentKind::Girsanov:
      c.times = {1.0};
      c.functionals = {Functional::Positive, Functional::First, Functional::BoundedExp};
      break;
    case ExperimentKind::Radial:
      c.times = p.process.family == ProcessFamily::OracleChi ? std::vector{1.0} : std::vector{0.5, 1.0};
      if (!p.process.is_oracle()) c.sim.method = SimMethod::Euler;
      break;
    case ExperimentKind::Density:
      c.times = {1.0};
      c.sim.method = SimMethod::Euler;
      break;
  }
  return c;
}

std::vector<std::string> preset_group_names() { return {"acceptance", "quick"}; }

std::vector<GroupEntry> preset_group(const std::string& name) {
  using K = ExperimentKind;
  auto e = [](K k, const char* preset) { return make_experiment(k, find_preset(preset)); };
  if (name == "acceptance") {
    return {
        {5, e(K::Radial, "chi3")},
        {5, e(K::Density, "rank1-dunkl-k1")},
        {6, e(K::Moments, "rank1-dunkl-k1")},
        {6, e(K::Moments, "productz2-dunkl-k1")},
        {7, e(K::Girsanov, "rank1-dunkl-k0")},
        {7, e(K::Girsanov, "rank1-dunkl-k1")},
        {8, e(K::Radial, "boundary-counterexample")},
        {8, e(K::Radial, "boundary-bessel")},
        {8, e(K::Radial, "boundary-hybrid")},
        {8, e(K::Radial, "dyson-n2-complex")},
        {9, e(K::Slln, "rank1-dunkl-k1")},
        {9, e(K::Slln, "rank1-bessel-k1")},
        {9, e(K::Slln, "dyson-n2-complex")},
        {10, e(K::Clt, "rank1-dunkl-k1")},
        {10, e(K::Clt, "rank1-bessel-k0.5")},
        {10, e(K::Clt, "rank1-bessel-k1")},
        {10, e(K::Clt, "dyson-n2-complex")},
        {10, e(K::Clt, "boundary-counterexample"), Verdict::Fail},
    };
  }
  if (name == "quick") {
    std::vector<GroupEntry> out;
    for (auto [k, p] : {std::pair{K::Density, "rank1-dunkl-k0"}, {K::Girsanov, "rank1-dunkl-k0"},
                        {K::Slln, "rank1-dunkl-k0"}, {K::Radial, "chi3"}}) {
      GroupEntry g{0, e(k, p)};
      g.experiment.n_paths = 1000;
      g.experiment.sim.dt0 = 1e-2;
      out.push_back(g);
    }
    return out;
  }
  throw std::invalid_argument("unknown preset group '" + name + "'");
}

}  // namespace dunkl
