#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <optional>
#include <vector>

#include <json.hpp>

#include "dunkl/densities.hpp"
#include "dunkl/log_value.hpp"
#include "dunkl/random.hpp"
#include "dunkl/root_system.hpp"

namespace dunkl {

enum class ProcessFamily { BesselDrift, DunklDrift, HybridDrift, OracleChi, OracleDysonA, OracleSingularB };

std::string to_string(ProcessFamily f);
ProcessFamily process_family_from_string(const std::string& name);

/// A process to simulate. Diffusion families carry a root system, drift and
/// start point. Oracles start at 0 and carry matrix dimensions; their
/// `system` is the root system whose Bessel process they realize.
struct ProcessSpec {
  ProcessFamily family = ProcessFamily::DunklDrift;
  RootSystem system = RootSystem::rank1(0.0);
  Vec lambda;
  Vec x0;
  int n = 0;  ///< OracleChi: Euclidean dimension
  int M = 0;  ///< OracleSingularB: row count
  int d = 1;  ///< oracles with matrices: 1 real, 2 complex

  static ProcessSpec diffusion(DriftFamily f, RootSystem rs, Vec lambda, Vec x0);
  static ProcessSpec chi(int n, double lambda);
  static ProcessSpec dyson(int N, int d, Vec lambda);
  static ProcessSpec singular_b(int M, int N, int d, Vec lambda);

  bool is_oracle() const;
  int dim() const { return system.rank(); }
  /// Throws for oracles.
  DriftFamily drift_family() const;
  DensitySpec density_spec() const;

  nlohmann::json to_json() const;
  static ProcessSpec from_json(const nlohmann::json& j);
};

enum class StepRule { Fixed, Adaptive };
enum class SimMethod { Euler, Exact };

struct SimConfig {
  double dt0 = 1e-3;
  double T = 1.0;
  StepRule step_rule = StepRule::Adaptive;
  double boundary_eps = 0.05;
  double rate_cap_factor = 10.0;
  std::uint64_t seed = 0;
  std::uint64_t path_index = 0;
  /// Exact: chain exact transition draws between observation times (Rank1,
  /// ProductZ2 and oracles). Euler: the discretized scheme.
  SimMethod method = SimMethod::Euler;
  /// Adaptive steps shorter than this fraction of dt0 are replaced by one exact
  /// transition of length dt0 (only near walls).
  double min_step_fraction = 1e-2;

  void validate() const;

  /// Scheme fields only (seed and path_index belong to the run).
  nlohmann::json to_json() const;
  /// Overrides the fields present in j; unknown keys are rejected.
  static SimConfig from_json(const nlohmann::json& j, SimConfig base);
  static SimConfig from_json(const nlohmann::json& j);
};

struct JumpEvent {
  double time;
  int root;
};

struct PathStats {
  std::int64_t steps = 0;
  std::int64_t exact_steps = 0;
  std::int64_t jumps = 0;
};

struct Path {
  std::vector<double> times;
  std::vector<Vec> states;
  std::vector<JumpEvent> jumps;
  std::optional<double> terminal_weight;
  PathStats stats;
};

/// Singular part sum k(alpha) alpha/<alpha, x> plus grad_x log G(x, lambda).
Vec drift_field(const ProcessSpec& ps, const Vec& x);

/// Intensity of the jump x -> sigma_alpha x for the given positive root.
double jump_rate(const ProcessSpec& ps, const Vec& x, std::size_t root);
Vec jump_rates(const ProcessSpec& ps, const Vec& x);

/// (L f)(x) for f = i-th coordinate: drift_i + sum_alpha rate_alpha (sigma_alpha x - x)_i.
double generator_on_coordinate(const ProcessSpec& ps, const Vec& x, int i);

/// One path on [0, cfg.T], every step recorded.
Path simulate_path(const ProcessSpec& ps, const SimConfig& cfg, RandomStream& rng);

/// States at the given increasing times (cfg.T is ignored), without storing
/// the intermediate grid.
std::vector<Vec> simulate_observations(const ProcessSpec& ps, const SimConfig& cfg, const std::vector<double>& times,
                                       RandomStream& rng, PathStats* stats = nullptr);

/// |Z|, Z ~ N((t lambda, 0, ..., 0), t I_n).
double oracle_chi(int n, double lambda, double t, RandomStream& rng);

/// Ordered (descending) eigenvalues of G + t diag(lambda), G Gaussian Hermitian
/// at time t under the trace inner product.
Vec oracle_dyson(int N, int d, const Vec& lambda, double t, RandomStream& rng);

/// Descending singular values of G + t Lambda, G an M x N Gaussian matrix with
/// real coordinates of variance t.
Vec oracle_singular_b(int M, int N, int d, const Vec& lambda, double t, RandomStream& rng);

/// Eigenvalues (descending) of a Hermitian matrix by cyclic Jacobi rotations
/// on its real symmetric embedding. Throws NumericalError after sweep_cap sweeps.
Vec hermitian_eigenvalues(const Eigen::MatrixXcd& h, int sweep_cap = 100);
Vec symmetric_eigenvalues(Eigen::MatrixXd a, int sweep_cap = 100);

/// e^{|lambda|^2 T/2} / G(X_T, lambda), G = E_k for Dunkl, J_k otherwise.
LogValue girsanov_weight(const ProcessSpec& ps, const Vec& xT, double T);

}  // namespace dunkl
