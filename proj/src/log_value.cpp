#include "dunkl/log_value.hpp"

#include <algorithm>
#include <ostream>
#include <stdexcept>

namespace dunkl {

namespace {
constexpr double kNegInf = -std::numeric_limits<double>::infinity();
}

LogValue LogValue::from_log(double log_abs, int sign) {
  if (std::isnan(log_abs)) throw std::domain_error("LogValue: NaN log-magnitude");
  LogValue v;
  if (sign == 0 || log_abs == kNegInf) return v;
  v.sign_ = sign > 0 ? 1 : -1;
  v.log_abs_ = log_abs;
  return v;
}

LogValue LogValue::from_double(double x) {
  if (std::isnan(x)) throw std::domain_error("LogValue: NaN value");
  if (x == 0.0) return {};
  return from_log(std::log(std::fabs(x)), x > 0 ? 1 : -1);
}

double LogValue::value() const {
  if (sign_ == 0) return 0.0;
  return sign_ * std::exp(log_abs_);
}

LogValue LogValue::operator-() const {
  LogValue v = *this;
  v.sign_ = -v.sign_;
  return v;
}

LogValue& LogValue::operator*=(const LogValue& o) {
  if (sign_ == 0 || o.sign_ == 0) {
    *this = LogValue{};
    return *this;
  }
  sign_ *= o.sign_;
  log_abs_ += o.log_abs_;
  return *this;
}

LogValue& LogValue::operator/=(const LogValue& o) {
  if (o.sign_ == 0) throw std::domain_error("LogValue: division by zero");
  if (sign_ == 0) return *this;
  sign_ *= o.sign_;
  log_abs_ -= o.log_abs_;
  return *this;
}

LogValue& LogValue::operator+=(const LogValue& o) {
  if (o.sign_ == 0) return *this;
  if (sign_ == 0) {
    *this = o;
    return *this;
  }
  const bool this_larger = log_abs_ >= o.log_abs_;
  const LogValue& big = this_larger ? *this : o;
  const LogValue& small = this_larger ? o : *this;
  const double r = std::exp(small.log_abs_ - big.log_abs_);
  LogValue out;
  if (big.sign_ == small.sign_) {
    out = from_log(big.log_abs_ + std::log1p(r), big.sign_);
  } else if (r == 1.0) {
    out = LogValue{};
  } else {
    out = from_log(big.log_abs_ + std::log1p(-r), big.sign_);
  }
  *this = out;
  return *this;
}

double log_sum_exp(std::span<const double> logs) {
  if (logs.empty()) return kNegInf;
  const double m = *std::max_element(logs.begin(), logs.end());
  if (m == kNegInf) return kNegInf;
  if (std::isinf(m)) return m;
  double s = 0.0;
  for (double l : logs) s += std::exp(l - m);
  return m + std::log(s);
}

double relative_difference(const LogValue& a, const LogValue& b) {
  if (a.is_zero() && b.is_zero()) return 0.0;
  if (a.sign() != b.sign()) return a.is_zero() || b.is_zero() ? 1.0 : 2.0;
  const double d = std::fabs(a.log_abs() - b.log_abs());
  return -std::expm1(-d);
}

std::ostream& operator<<(std::ostream& os, const LogValue& v) {
  return os << (v.sign() < 0 ? "-" : (v.sign() == 0 ? "0*" : "")) << "exp(" << v.log_abs() << ")";
}

}  // namespace dunkl
