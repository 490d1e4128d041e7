#include "dunkl/root_system.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>

#include <boost/math/constants/constants.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "dunkl/quadrature.hpp"

namespace dunkl {

namespace {

using boost::math::lgamma;
constexpr double kInf = std::numeric_limits<double>::infinity();

int min_rank(RootKind kind) {
  switch (kind) {
    case RootKind::A:
    case RootKind::D:
      return 2;
    default:
      return 1;
  }
}

Vec unit(int n, int i) {
  Vec v = Vec::Zero(n);
  v(i) = 1.0;
  return v;
}

// log c for B_N with (k1, k2); Rank1 and D reduce to it.
double log_c_b(int n, double k1, double k2) {
  double s = -n * (k1 + (n - 1) * k2 + 0.5) * std::log(2.0);
  for (int j = 1; j <= n; ++j)
    s += lgamma(1.0 + k2) - lgamma(1.0 + j * k2) - lgamma(0.5 + k1 + (j - 1) * k2);
  return s;
}

double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

}  // namespace

std::string to_string(RootKind kind) {
  switch (kind) {
    case RootKind::A: return "A";
    case RootKind::B: return "B";
    case RootKind::D: return "D";
    case RootKind::Rank1: return "Rank1";
    case RootKind::ProductZ2: return "ProductZ2";
  }
  return "?";
}

RootKind root_kind_from_string(const std::string& name) {
  if (name == "A") return RootKind::A;
  if (name == "B") return RootKind::B;
  if (name == "D") return RootKind::D;
  if (name == "Rank1") return RootKind::Rank1;
  if (name == "ProductZ2") return RootKind::ProductZ2;
  throw std::invalid_argument("unknown root system kind '" + name + "'");
}

Vec SignedPermutation::apply(const Vec& x) const {
  Vec y(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) y(i) = signs[i] * x(perm[i]);
  return y;
}

RootSystem::RootSystem(RootKind kind, int rank, double k, double k2)
    : kind_(kind), rank_(rank), k1_(k), k2_(k2) {
  if (rank < min_rank(kind))
    throw std::invalid_argument("rank " + std::to_string(rank) + " below minimum for kind " + to_string(kind));
  if (kind == RootKind::Rank1 && rank != 1) throw std::invalid_argument("Rank1 root system has rank 1");
  if (!(k >= 0.0) || !(k2 >= 0.0) || !std::isfinite(k) || !std::isfinite(k2))
    throw std::invalid_argument("multiplicities must be finite and nonnegative");
  if (kind != RootKind::B) k2_ = k1_;

  const int n = rank;
  auto add = [&](Vec v, double m) {
    roots_.push_back(std::move(v));
    mult_.push_back(m);
  };
  switch (kind) {
    case RootKind::A:
      for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) add(unit(n, i) - unit(n, j), k1_);
      break;
    case RootKind::B:
      for (int i = 0; i < n; ++i) add(unit(n, i), k1_);
      for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
          add(unit(n, i) - unit(n, j), k2_);
          add(unit(n, i) + unit(n, j), k2_);
        }
      break;
    case RootKind::D:
      for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
          add(unit(n, i) - unit(n, j), k1_);
          add(unit(n, i) + unit(n, j), k1_);
        }
      break;
    case RootKind::Rank1:
    case RootKind::ProductZ2:
      for (int i = 0; i < n; ++i) add(unit(n, i), k1_);
      break;
  }
}

double RootSystem::gamma() const { return std::accumulate(mult_.begin(), mult_.end(), 0.0); }

double RootSystem::log_weight(const Vec& x) const {
  double s = 0.0;
  for (std::size_t i = 0; i < roots_.size(); ++i) {
    if (mult_[i] == 0.0) continue;
    const double p = std::fabs(roots_[i].dot(x));
    if (p == 0.0) return -kInf;
    s += 2.0 * mult_[i] * std::log(p);
  }
  return s;
}

Vec RootSystem::chamber_project(const Vec& x) const {
  Vec y = x;
  auto sort_desc = [](Vec& v) { std::sort(v.data(), v.data() + v.size(), std::greater<>()); };
  switch (kind_) {
    case RootKind::A:
      sort_desc(y);
      break;
    case RootKind::B:
      y = y.cwiseAbs();
      sort_desc(y);
      break;
    case RootKind::D: {
      bool negative = false;
      for (Eigen::Index i = 0; i < x.size(); ++i)
        if (x(i) < 0) negative = !negative;
      y = y.cwiseAbs();
      sort_desc(y);
      if (negative) y(y.size() - 1) = -y(y.size() - 1);
      break;
    }
    case RootKind::Rank1:
    case RootKind::ProductZ2:
      y = y.cwiseAbs();
      break;
  }
  return y;
}

bool RootSystem::in_chamber(const Vec& x, double tol) const {
  return std::all_of(roots_.begin(), roots_.end(), [&](const Vec& a) { return a.dot(x) >= -tol; });
}

double RootSystem::wall_distance(const Vec& x) const {
  double d = kInf;
  for (std::size_t i = 0; i < roots_.size(); ++i)
    if (mult_[i] > 0.0) d = std::min(d, std::fabs(roots_[i].dot(x)) / roots_[i].norm());
  return d;
}

double RootSystem::log_norm_constant() const {
  const int n = rank_;
  switch (kind_) {
    case RootKind::A: {
      double s = -0.5 * n * std::log(2.0 * boost::math::constants::pi<double>());
      for (int j = 1; j <= n; ++j) s += lgamma(1.0 + k1_) - lgamma(1.0 + j * k1_);
      return s;
    }
    case RootKind::B:
      return log_c_b(n, k1_, k2_);
    case RootKind::D:
      // w^D_k coincides with w^B_{(0,k)}.
      return log_c_b(n, 0.0, k1_);
    case RootKind::Rank1:
      return log_c_b(1, k1_, 0.0);
    case RootKind::ProductZ2:
      return n * log_c_b(1, k1_, 0.0);
  }
  return 0.0;
}

double RootSystem::log_sphere_constant() const {
  const double a = gamma() + 0.5 * rank_;
  return (1.0 - a) * std::log(2.0) - log_norm_constant() - lgamma(a);
}

std::uint64_t RootSystem::weyl_order() const {
  const int n = rank_;
  const auto fact = static_cast<std::uint64_t>(factorial(n));
  switch (kind_) {
    case RootKind::A: return fact;
    case RootKind::B: return fact << n;
    case RootKind::D: return fact << (n - 1);
    case RootKind::Rank1: return 2;
    case RootKind::ProductZ2: return std::uint64_t{1} << n;
  }
  return 0;
}

std::vector<SignedPermutation> RootSystem::weyl_group() const {
  if (rank_ > 8) throw UnsupportedKind("Weyl group enumeration limited to rank 8");
  const int n = rank_;
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  const bool permute = kind_ == RootKind::A || kind_ == RootKind::B || kind_ == RootKind::D;
  const bool flip = kind_ != RootKind::A;

  std::vector<SignedPermutation> out;
  out.reserve(weyl_order());
  do {
    const int masks = flip ? (1 << n) : 1;
    for (int m = 0; m < masks; ++m) {
      if (kind_ == RootKind::D && __builtin_popcount(static_cast<unsigned>(m)) % 2 != 0) continue;
      SignedPermutation g{perm, std::vector<int>(n, 1)};
      for (int i = 0; i < n; ++i)
        if (m & (1 << i)) g.signs[i] = -1;
      out.push_back(std::move(g));
    }
  } while (permute && std::next_permutation(perm.begin(), perm.end()));
  return out;
}

nlohmann::json RootSystem::to_json() const {
  nlohmann::json j{{"kind", to_string(kind_)}, {"rank", rank_}};
  if (kind_ == RootKind::B)
    j["k"] = {k1_, k2_};
  else
    j["k"] = k1_;
  return j;
}

RootSystem RootSystem::from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw std::invalid_argument("root system must be a JSON object");
  for (const auto& [key, _] : j.items())
    if (key != "kind" && key != "rank" && key != "k")
      throw std::invalid_argument("unknown root system key '" + key + "'");
  const RootKind kind = root_kind_from_string(j.at("kind").get<std::string>());
  const int rank = j.contains("rank") ? j.at("rank").get<int>() : 1;
  const auto& k = j.at("k");
  if (kind == RootKind::B) {
    if (!k.is_array() || k.size() != 2) throw std::invalid_argument("B root system needs k = [k1, k2]");
    return {kind, rank, k[0].get<double>(), k[1].get<double>()};
  }
  if (!k.is_number()) throw std::invalid_argument("multiplicity k must be a number");
  return {kind, rank, k.get<double>()};
}

Vec reflect(const Vec& alpha, const Vec& x) {
  const double aa = alpha.squaredNorm();
  if (aa == 0.0) throw std::invalid_argument("reflect: zero root");
  return x - (2.0 * alpha.dot(x) / aa) * alpha;
}

IntegralEstimate gaussian_weight_integral(const RootSystem& rs, double tol) {
  const int n = rs.rank();
  if (n > 3) throw UnsupportedKind("gaussian_weight_integral: rank above 3");
  const double L = std::sqrt(2.0 * rs.gamma() + n) + 10.0;

  // Integrate over the closed chamber and multiply by |W|; the chamber is
  // cut out by ordered bounds, so the singular factors only sit at endpoints.
  auto bounds = [&](int j, const Vec& y) -> std::pair<double, double> {
    switch (rs.kind()) {
      case RootKind::A:
        return {-L, j == 0 ? L : y(j - 1)};
      case RootKind::B:
        return {0.0, j == 0 ? L : y(j - 1)};
      case RootKind::D:
        if (j == 0) return {0.0, L};
        if (j == n - 1) return {-y(j - 1), y(j - 1)};
        return {0.0, y(j - 1)};
      default:
        return {0.0, L};
    }
  };

  Vec y = Vec::Zero(n);
  double err_total = 0.0;
  std::function<double(int)> level = [&](int j) -> double {
    if (j == n) return std::exp(rs.log_weight(y) - 0.5 * y.squaredNorm());
    const auto [a, b] = bounds(j, y);
    QuadResult r = integrate(
        [&](double t) {
          y(j) = t;
          return level(j + 1);
        },
        a, b, {}, tol, 12);
    if (j == 0) err_total = r.error;
    return r.value;
  };
  const double inner = level(0);
  const double order = static_cast<double>(rs.weyl_order());
  return {order * inner, order * err_total};
}

IntegralEstimate sphere_weight_integral(const RootSystem& rs, double tol) {
  const int n = rs.rank();
  if (n == 1) {
    Vec p(1), m(1);
    p << 1.0;
    m << -1.0;
    return {std::exp(rs.log_weight(p)) + std::exp(rs.log_weight(m)), 0.0};
  }
  if (n != 2) throw UnsupportedKind("sphere_weight_integral: rank above 2");
  const double pi = boost::math::constants::pi<double>();
  std::vector<double> cuts;
  for (int i = 1; i < 8; ++i) cuts.push_back(i * pi / 4.0);
  Vec y(2);
  QuadResult r = integrate(
      [&](double th) {
        y << std::cos(th), std::sin(th);
        return std::exp(rs.log_weight(y));
      },
      0.0, 2.0 * pi, cuts, tol, 15);
  return {r.value, r.error};
}

}  // namespace dunkl
