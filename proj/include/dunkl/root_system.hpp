#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

namespace dunkl {

using Vec = Eigen::VectorXd;

/// Requested (kind, rank, multiplicity) combination has no implementation.
class UnsupportedKind : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A series, quadrature or eigen-iteration failed to converge.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A state touches a wall <alpha, x> = 0 where a singular term is needed.
class BoundaryContact : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

enum class RootKind { A, B, D, Rank1, ProductZ2 };

std::string to_string(RootKind kind);
RootKind root_kind_from_string(const std::string& name);

/// Element of a hyperoctahedral group: x -> (signs[i] * x[perm[i]])_i.
struct SignedPermutation {
  std::vector<int> perm;
  std::vector<int> signs;

  Vec apply(const Vec& x) const;
};

/// Root system of type A_{N-1}, B_N, D_N, the rank-one system or Z_2^N,
/// together with a Weyl-invariant multiplicity.
///
/// A_{N-1} acts on R^N (N coordinates, N-1 independent roots) so that the
/// A-type state space is the full space of ordered eigenvalues. For B the
/// multiplicity is the pair (k1 on +-e_i, k2 on e_i +- e_j); every other kind
/// carries a single value.
class RootSystem {
 public:
  RootSystem(RootKind kind, int rank, double k, double k2 = 0.0);

  static RootSystem rank1(double k) { return {RootKind::Rank1, 1, k}; }
  static RootSystem product_z2(int n, double k) { return {RootKind::ProductZ2, n, k}; }
  static RootSystem type_a(int n, double k) { return {RootKind::A, n, k}; }
  static RootSystem type_b(int n, double k1, double k2) { return {RootKind::B, n, k1, k2}; }
  static RootSystem type_d(int n, double k) { return {RootKind::D, n, k}; }

  RootKind kind() const { return kind_; }
  int rank() const { return rank_; }
  /// The single multiplicity, or k1 for B.
  double k() const { return k1_; }
  double k1() const { return k1_; }
  /// k2 for B; equals k() for every other kind.
  double k2() const { return kind_ == RootKind::B ? k2_ : k1_; }

  /// Positive roots, "+" sign choice.
  const std::vector<Vec>& positive_roots() const { return roots_; }
  /// Multiplicity of the i-th positive root.
  double multiplicity(std::size_t i) const { return mult_[i]; }

  /// gamma = sum over positive roots of k(alpha).
  double gamma() const;

  /// log w_k(x) = sum 2 k(alpha) log|<alpha, x>|.
  double log_weight(const Vec& x) const;

  /// Unique Weyl-orbit representative in the closed chamber.
  Vec chamber_project(const Vec& x) const;
  bool in_chamber(const Vec& x, double tol = 0.0) const;

  /// min over roots with k(alpha) > 0 of |<alpha, x>| / |alpha|; +inf if none.
  double wall_distance(const Vec& x) const;

  /// log c_k with c_k * int exp(-|y|^2/2) w_k(y) dy = 1.
  double log_norm_constant() const;
  /// log d_k with d_k = int over the unit sphere of w_k.
  double log_sphere_constant() const;

  std::uint64_t weyl_order() const;
  /// Explicit enumeration of W; rejects rank above 8.
  std::vector<SignedPermutation> weyl_group() const;

  nlohmann::json to_json() const;
  static RootSystem from_json(const nlohmann::json& j);

  friend bool operator==(const RootSystem& a, const RootSystem& b) {
    return a.kind_ == b.kind_ && a.rank_ == b.rank_ && a.k1_ == b.k1_ && a.k2() == b.k2();
  }

 private:
  RootKind kind_;
  int rank_;
  double k1_;
  double k2_;
  std::vector<Vec> roots_;
  std::vector<double> mult_;
};

/// x - 2 <alpha, x>/<alpha, alpha> alpha.
Vec reflect(const Vec& alpha, const Vec& x);

/// Numerical value of int exp(-|y|^2/2) w_k(y) dy by nested adaptive
/// quadrature, for rank at most 3.
struct IntegralEstimate {
  double value;
  double error;
};
IntegralEstimate gaussian_weight_integral(const RootSystem& rs, double tol = 1e-10);

/// Numerical value of the sphere integral of w_k, rank at most 3.
IntegralEstimate sphere_weight_integral(const RootSystem& rs, double tol = 1e-10);

}  // namespace dunkl
