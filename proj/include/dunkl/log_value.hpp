#pragma once

#include <cmath>
#include <iosfwd>
#include <limits>
#include <span>

namespace dunkl {

/// Signed log-magnitude scalar, representing sign * exp(log_abs).
///
/// Kernels such as E_k(x, y) grow like exp(<x, y>) and overflow a double
/// long before the arguments used by the limit experiments. Every kernel and
/// density in this library is carried as a LogValue and only converted to
/// linear scale at the edges.
class LogValue {
 public:
  /// Zero.
  constexpr LogValue() = default;

  static LogValue from_log(double log_abs, int sign = 1);
  static LogValue from_double(double v);
  static LogValue one() { return from_log(0.0); }
  static LogValue zero() { return {}; }

  int sign() const { return sign_; }
  double log_abs() const { return log_abs_; }
  bool is_zero() const { return sign_ == 0; }

  /// Linear value; +-inf on overflow, 0 on underflow.
  double value() const;

  LogValue operator-() const;
  LogValue& operator*=(const LogValue& o);
  LogValue& operator/=(const LogValue& o);
  LogValue& operator+=(const LogValue& o);
  LogValue& operator-=(const LogValue& o) { return *this += -o; }

  friend LogValue operator*(LogValue a, const LogValue& b) { return a *= b; }
  friend LogValue operator/(LogValue a, const LogValue& b) { return a /= b; }
  friend LogValue operator+(LogValue a, const LogValue& b) { return a += b; }
  friend LogValue operator-(LogValue a, const LogValue& b) { return a -= b; }

  friend bool operator==(const LogValue&, const LogValue&) = default;

 private:
  int sign_ = 0;
  double log_abs_ = -std::numeric_limits<double>::infinity();
};

/// log(sum exp(v)) over a range of log-magnitudes, -inf for empty input.
double log_sum_exp(std::span<const double> logs);

/// Relative difference |a - b| / max(|a|, |b|) computed in log scale.
double relative_difference(const LogValue& a, const LogValue& b);

std::ostream& operator<<(std::ostream& os, const LogValue& v);

}  // namespace dunkl
