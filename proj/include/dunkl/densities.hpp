#pragma once

#include "dunkl/log_value.hpp"
#include "dunkl/quadrature.hpp"
#include "dunkl/random.hpp"
#include "dunkl/root_system.hpp"

namespace dunkl {

/// The three families of drifted processes with explicit transition densities.
enum class DriftFamily { Bessel, Dunkl, Hybrid };

std::string to_string(DriftFamily f);

/// Bessel lives on the closed chamber and needs lambda in it; the other two
/// live on R^N and accept any lambda.
struct DensitySpec {
  DriftFamily family;
  RootSystem system;
  Vec lambda;

  DensitySpec(DriftFamily f, RootSystem rs, Vec lam);
};

/// Transition density p_t(x, y) w.r.t. Lebesgue measure on the state space:
/// pref e^{-|lambda|^2 t/2} t^{-(gamma+N/2)} e^{-(|x|^2+|y|^2)/(2t)}
///   K(x/sqrt t, y/sqrt t) G(y, lambda)/G(x, lambda) w_k(y)
/// with (K, G) = (J, J), (E, E), (E, J) and pref = |W| c_k for Bessel, c_k
/// otherwise. Zero outside the state space.
LogValue transition_density(const DensitySpec& ds, double t, const Vec& x, const Vec& y);

/// Mass of p_t(x, .) over the state space (rank <= 2).
QuadResult normalization_check(const DensitySpec& ds, double t, const Vec& x, double rel_tol = 1e-10);

/// |int p_s(x, y) p_t(y, z) dy - p_{s+t}(x, z)| / p_{s+t}(x, z), rank 1.
double chapman_kolmogorov_check(const DensitySpec& ds, double s, double t, double x, double z,
                                double rel_tol = 1e-11);

/// Half-width of the window carrying all but ~1e-10 of the mass of p_t(x, .).
double density_support_radius(const DensitySpec& ds, double t, const Vec& x);

struct SamplerStats {
  std::int64_t proposals = 0;
  std::int64_t accepted = 0;
  double acceptance_rate() const { return proposals ? double(accepted) / double(proposals) : 0.0; }
};

/// Numerical sup over s of K(s) e^{-|s|} |s|^k for the rank-one kernel
/// (J_k if bessel, else E_k), padded by 2%. Cached per thread.
double kernel_tail_constant(bool bessel, double k);

/// Exact draw from p_t(x, .) in rank one by rejection from a two-component
/// Gaussian envelope (folded for Bessel). Throws NumericalError if the
/// envelope is ever violated or the acceptance probability is below 1e-3.
double sample_exact_1d(const DensitySpec& ds, double t, double x, RandomStream& rng, SamplerStats* stats = nullptr);

/// Coordinatewise exact draw for Rank1 and ProductZ2 (independent coordinates).
Vec sample_exact(const DensitySpec& ds, double t, const Vec& x, RandomStream& rng, SamplerStats* stats = nullptr);

}  // namespace dunkl
