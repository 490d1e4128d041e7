#include "dunkl/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <boost/math/constants/constants.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "dunkl/quadrature.hpp"

namespace dunkl {

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

double kolmogorov_pvalue(double lambda) {
  if (lambda <= 0.0) return 1.0;
  constexpr double pi = boost::math::constants::pi<double>();
  if (lambda < 1.18) {
    // P(K <= lambda) = sqrt(2 pi)/lambda sum exp(-(2j-1)^2 pi^2 / (8 lambda^2))
    double s = 0.0;
    for (int j = 1; j <= 50; ++j) {
      const double a = (2.0 * j - 1.0) * pi / lambda;
      s += std::exp(-a * a / 8.0);
    }
    return std::clamp(1.0 - std::sqrt(2.0 * pi) / lambda * s, 0.0, 1.0);
  }
  double s = 0.0;
  for (int j = 1; j <= 100; ++j) {
    const double term = std::exp(-2.0 * j * j * lambda * lambda);
    s += (j % 2 ? 1.0 : -1.0) * term;
    if (term < 1e-300) break;
  }
  return std::clamp(2.0 * s, 0.0, 1.0);
}

TestResult ks_test(std::vector<double> samples, const std::function<double(double)>& cdf) {
  if (samples.empty()) throw std::invalid_argument("ks_test: no samples");
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double d = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double f = cdf(samples[i]);
    d = std::max({d, (i + 1) / n - f, f - i / n});
  }
  return {d, kolmogorov_pvalue(std::sqrt(n) * d)};
}

TestResult ks_two_sample(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) throw std::invalid_argument("ks_two_sample: empty sample");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double v = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= v) ++i;
    while (j < b.size() && b[j] <= v) ++j;
    d = std::max(d, std::fabs(i / na - j / nb));
  }
  return {d, kolmogorov_pvalue(std::sqrt(na * nb / (na + nb)) * d)};
}

double chi2_pvalue(double statistic, double df) {
  if (statistic <= 0.0) return 1.0;
  return boost::math::gamma_q(0.5 * df, 0.5 * statistic);
}

TestResult chi2_equiprobable(std::span<const double> samples, const std::function<double(double)>& quantile, int bins) {
  if (bins < 2) throw std::invalid_argument("chi2_equiprobable: need at least 2 bins");
  std::vector<double> edges;
  for (int b = 1; b < bins; ++b) edges.push_back(quantile(static_cast<double>(b) / bins));
  std::vector<double> counts(bins, 0.0);
  for (double s : samples) {
    const auto it = std::upper_bound(edges.begin(), edges.end(), s);
    counts[static_cast<std::size_t>(it - edges.begin())] += 1.0;
  }
  const double expected = static_cast<double>(samples.size()) / bins;
  double stat = 0.0;
  for (double c : counts) stat += (c - expected) * (c - expected) / expected;
  return {stat, chi2_pvalue(stat, bins - 1.0)};
}

MeanEstimate mean_estimate(std::span<const double> v) {
  if (v.size() < 2) throw std::invalid_argument("mean_estimate: need at least 2 values");
  double m = 0.0;
  for (double x : v) m += x;
  m /= static_cast<double>(v.size());
  return {m, std::sqrt(sample_variance(v) / static_cast<double>(v.size()))};
}

double sample_variance(std::span<const double> v) {
  if (v.size() < 2) throw std::invalid_argument("sample_variance: need at least 2 values");
  double m = 0.0;
  for (double x : v) m += x;
  m /= static_cast<double>(v.size());
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return s / static_cast<double>(v.size() - 1);
}

Eigen::MatrixXd sample_covariance(const Eigen::MatrixXd& rows) {
  if (rows.rows() < 2) throw std::invalid_argument("sample_covariance: need at least 2 rows");
  const Eigen::RowVectorXd mean = rows.colwise().mean();
  const Eigen::MatrixXd c = rows.rowwise() - mean;
  return c.transpose() * c / static_cast<double>(rows.rows() - 1);
}

TabulatedCdf::TabulatedCdf(const std::function<double(double)>& density, double lo, double hi, int cells,
                           std::span<const double> breakpoints) {
  if (!(lo < hi) || cells < 1) throw std::invalid_argument("TabulatedCdf: bad grid");
  grid_.resize(cells + 1);
  for (int i = 0; i <= cells; ++i) grid_[i] = lo + (hi - lo) * i / cells;
  cum_.assign(cells + 1, 0.0);
  dens_.resize(cells + 1);
  for (int i = 0; i <= cells; ++i) dens_[i] = density(grid_[i]);
  for (int i = 0; i < cells; ++i)
    cum_[i + 1] = cum_[i] + integrate(density, grid_[i], grid_[i + 1], breakpoints, 1e-12, 10).value;
  mass_ = cum_.back();
  if (!(mass_ > 0.0)) throw std::invalid_argument("TabulatedCdf: density has no mass");
}

double TabulatedCdf::operator()(double x) const {
  if (x <= grid_.front()) return 0.0;
  if (x >= grid_.back()) return 1.0;
  const std::size_t i = std::min<std::size_t>(
      static_cast<std::size_t>(std::upper_bound(grid_.begin(), grid_.end(), x) - grid_.begin()) - 1, grid_.size() - 2);
  const double h = grid_[i + 1] - grid_[i];
  const double s = (x - grid_[i]) / h;
  const double h00 = 2 * s * s * s - 3 * s * s + 1, h10 = s * s * s - 2 * s * s + s;
  const double h01 = -2 * s * s * s + 3 * s * s, h11 = s * s * s - s * s;
  double f = h00 * cum_[i] + h10 * h * dens_[i] + h01 * cum_[i + 1] + h11 * h * dens_[i + 1];
  // Keep monotone where the Hermite interpolant overshoots near kinks.
  f = std::clamp(f, cum_[i], cum_[i + 1]);
  return f / mass_;
}

double TabulatedCdf::quantile(double p) const {
  if (p <= 0.0) return grid_.front();
  if (p >= 1.0) return grid_.back();
  double a = grid_.front(), b = grid_.back();
  for (int it = 0; it < 100 && b - a > 1e-13 * (1 + std::fabs(a)); ++it) {
    const double m = 0.5 * (a + b);
    ((*this)(m) < p ? a : b) = m;
  }
  return 0.5 * (a + b);
}

}  // namespace dunkl
