#pragma once

#include <cstdint>
#include <exception>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "dunkl/simulate.hpp"
#include "dunkl/stats.hpp"

namespace dunkl {

enum class Verdict { Pass, Fail, Inconclusive };
std::string to_string(Verdict v);

/// Estimate with an optional acceptance band |value - target| <= tolerance.
struct Estimate {
  double value = 0.0;
  double std_error = 0.0;
  std::optional<double> target;
  std::optional<double> tolerance;
};

/// A test passes when p_value > floor. Informational tests never affect the verdict.
struct TestEntry {
  double statistic = 0.0;
  double p_value = 0.0;
  double floor = 0.01;
  bool informational = false;
};

struct McReport {
  std::string experiment_id;
  ProcessSpec process;
  std::int64_t n_paths = 0;
  std::vector<double> t_grid;
  std::map<std::string, Estimate> estimates;
  std::map<std::string, TestEntry> tests;
  std::map<std::string, bool> conditions;
  std::vector<std::string> notes;
  Verdict verdict = Verdict::Inconclusive;
  std::uint64_t seed = 0;
  SimConfig sim;
  double runtime_ms = 0.0;  ///< measured, never serialized

  /// Fail if any test, band or condition fails; otherwise inconclusive if an
  /// estimate's std error exceeds its band or `force_inconclusive`; else pass.
  void decide(bool force_inconclusive = false);

  nlohmann::json to_json() const;
  std::string to_csv() const;
};

/// 0 if every verdict passes, 2 if any fails, 3 if some are inconclusive and none fail.
int exit_code(const std::vector<McReport>& reports);

struct RunContext {
  std::uint64_t seed = 0;
  int workers = 1;
  SimConfig sim;
};

/// results[i] = f(i) for i < n, spread over `workers` threads. The result is
/// independent of the worker count when f depends only on i.
template <class T>
std::vector<T> parallel_map(std::int64_t n, int workers, const std::function<T(std::int64_t)>& f) {
  std::vector<T> out(static_cast<std::size_t>(n));
  workers = std::max(1, std::min<int>(workers, static_cast<int>(std::max<std::int64_t>(n, 1))));
  std::exception_ptr error;
  std::mutex error_mutex;
  auto work = [&](int w) {
    try {
      for (std::int64_t i = w; i < n; i += workers) out[static_cast<std::size_t>(i)] = f(i);
    } catch (...) {
      std::lock_guard<std::mutex> lock(error_mutex);
      if (!error) error = std::current_exception();
    }
  };
  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::thread> threads;
    for (int w = 0; w < workers; ++w) threads.emplace_back(work, w);
    for (auto& t : threads) t.join();
  }
  if (error) std::rethrow_exception(error);
  return out;
}

/// Observations of n independent paths (path i uses stream (seed, i)).
std::vector<std::vector<Vec>> simulate_ensemble(const ProcessSpec& ps, const RunContext& ctx, const std::vector<double>& times,
                                                std::int64_t n_paths, PathStats* stats = nullptr);

/// E|X_T/T - lambda| along T_list: must decrease, and the last value must lie
/// below min(band_cap, 3 sqrt(N/T)) + 3 std errors.
McReport run_slln(const ProcessSpec& ps, const std::vector<double>& T_list, std::int64_t n_paths, const RunContext& ctx,
                  double band_cap = 0.25);

/// KS of (X_T - T lambda)/sqrt T per coordinate against N(0, 1), and the
/// sample covariance against I within 5 std errors.
McReport run_clt(const ProcessSpec& ps, double T, std::int64_t n_paths, const RunContext& ctx);

/// Residuals of E[X_t] - x - t lambda, E[m1(X_t)] - m1(x) - t lambda and the
/// m2 identity, each within 3 std errors (Dunkl family).
McReport run_moment_checks(const ProcessSpec& ps, const std::vector<double>& t_grid, std::int64_t n_paths,
                           const RunContext& ctx);

enum class Functional { One, Positive, First, BoundedExp };
std::string to_string(Functional f);
Functional functional_from_string(const std::string& name);
double apply_functional(Functional f, const Vec& x);

/// E_drift[f(X_T) w] against E_0[f(X_T)] for each functional.
McReport run_girsanov_check(const ProcessSpec& ps, double T, const std::vector<Functional>& fs, std::int64_t n_paths,
                            const RunContext& ctx);

/// KS of |X_T| against the rank-one Bessel density at multiplicity
/// gamma + N/2 - 1/2 and drift |lambda|, start 0.
McReport run_radial_check(const ProcessSpec& ps, const std::vector<double>& T_grid, std::int64_t n_paths,
                          const RunContext& ctx);

/// Simulated terminal law vs transition density vs exact sampler (Rank1).
McReport run_density_agreement(const ProcessSpec& ps, double T, std::int64_t n_paths, const RunContext& ctx);

}  // namespace dunkl
