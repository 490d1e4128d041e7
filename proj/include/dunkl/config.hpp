#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "dunkl/experiments.hpp"

namespace dunkl {

enum class ExperimentKind { Slln, Clt, Moments, Girsanov, Radial, Density };
std::string to_string(ExperimentKind k);
ExperimentKind experiment_kind_from_string(const std::string& name);

/// One experiment run. `times` is the T list (slln), the t grid (moments,
/// radial) or a single horizon (clt, girsanov, density).
struct ExperimentConfig {
  std::string id;
  ExperimentKind kind = ExperimentKind::Density;
  ProcessSpec process;
  std::vector<double> times;
  std::int64_t n_paths = 10000;
  std::vector<Functional> functionals;  ///< girsanov only
  double band_cap = 0.25;               ///< slln only
  SimConfig sim;

  void validate() const;
  nlohmann::json to_json() const;
  static ExperimentConfig from_json(const nlohmann::json& j);
};

McReport run_experiment(const ExperimentConfig& cfg, std::uint64_t seed, int workers);

/// Worker count from DUNKLSIM_WORKERS, else the available parallelism.
int default_workers();

enum class OutputFormat { Json, Csv };

struct RunConfig {
  std::uint64_t seed = 0;
  int workers = 1;
  std::string output = "-";  ///< "-" is stdout
  OutputFormat format = OutputFormat::Json;
  std::vector<ExperimentConfig> experiments;

  void validate() const;
  nlohmann::json to_json() const;
  /// Unknown keys are rejected; missing ones keep their defaults.
  static RunConfig from_json(const nlohmann::json& j);
};

/// A named scenario: process plus sizing. Turned into an experiment by kind.
struct Preset {
  std::string name;
  std::string description;
  ProcessSpec process;
  std::int64_t n_paths = 10000;
};

const std::vector<Preset>& presets();
const Preset& find_preset(const std::string& name);

/// Default horizons, method and step for a kind applied to a preset.
ExperimentConfig make_experiment(ExperimentKind kind, const Preset& p);

/// Experiments of a named group. "acceptance" holds one entry per simulated
/// acceptance scenario; `expected` marks intended failures.
struct GroupEntry {
  int criterion = 0;
  ExperimentConfig experiment;
  Verdict expected = Verdict::Pass;
};

std::vector<GroupEntry> preset_group(const std::string& name);
std::vector<std::string> preset_group_names();

}  // namespace dunkl
