#pragma once

#include <Eigen/Core>
#include <functional>
#include <span>
#include <vector>

namespace dunkl {

struct TestResult {
  double statistic = 0.0;
  double p_value = 0.0;
};

struct MeanEstimate {
  double mean = 0.0;
  double std_error = 0.0;
};

double normal_cdf(double z);

/// P(sup |B_bridge| > lambda), the asymptotic Kolmogorov tail.
double kolmogorov_pvalue(double lambda);

/// One-sample two-sided KS test; p-value from the asymptotic law of sqrt(n) D.
TestResult ks_test(std::vector<double> samples, const std::function<double(double)>& cdf);

/// Two-sample two-sided KS test; p-value at the effective size n m/(n+m).
TestResult ks_two_sample(std::vector<double> a, std::vector<double> b);

/// Pearson chi-squared test on bins that are equiprobable under the target,
/// given through its quantile function. df = bins - 1.
TestResult chi2_equiprobable(std::span<const double> samples, const std::function<double(double)>& quantile, int bins);

/// Upper tail of the chi-squared law.
double chi2_pvalue(double statistic, double df);

MeanEstimate mean_estimate(std::span<const double> v);
double sample_variance(std::span<const double> v);

/// Sample covariance of the rows of a (samples x dim) matrix.
Eigen::MatrixXd sample_covariance(const Eigen::MatrixXd& rows);

/// CDF of a density on [lo, hi], tabulated by adaptive quadrature per cell and
/// interpolated by cubic Hermite splines (the density is the derivative).
/// Normalized by the total tabulated mass, which is reported separately.
class TabulatedCdf {
 public:
  TabulatedCdf(const std::function<double(double)>& density, double lo, double hi, int cells = 2000,
               std::span<const double> breakpoints = {});

  double operator()(double x) const;
  double quantile(double p) const;
  double mass() const { return mass_; }

 private:
  std::vector<double> grid_, cum_, dens_;
  double mass_ = 0.0;
};

}  // namespace dunkl
