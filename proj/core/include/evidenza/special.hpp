#pragma once

#include <compare>
#include <cmath>
#include <limits>
#include <span>

namespace evidenza {

/// Nonnegative quantity stored as its natural log; -inf is zero.
///
/// Evidence values of order 1e-29 and the products leading up to them are carried in this
/// form and only converted with linear() when a report needs linear scale.
struct LogValue {
  double log_magnitude = -std::numeric_limits<double>::infinity();

  static LogValue zero() { return {}; }
  static LogValue from_linear(double x) { return {std::log(x)}; }

  double linear() const { return std::exp(log_magnitude); }
  bool is_zero() const { return log_magnitude == -std::numeric_limits<double>::infinity(); }

  friend LogValue operator*(LogValue a, LogValue b) {
    return {a.log_magnitude + b.log_magnitude};
  }
  friend LogValue operator/(LogValue a, LogValue b) {
    return {a.log_magnitude - b.log_magnitude};
  }
  friend LogValue operator+(LogValue a, LogValue b);

  friend auto operator<=>(const LogValue&, const LogValue&) = default;
};

// Standard normal distribution. |cdf error| <= 1e-12 on |x| <= 8.
double std_normal_cdf(double x);
/// Upper tail 1 - Phi(x), accurate where Phi(x) rounds to 1.
double std_normal_sf(double x);
/// Inverse of std_normal_cdf on (0,1); DomainError otherwise.
double std_normal_quantile(double p);

/// Exponential integral E1(x) = int_x^inf e^{-t}/t dt for x > 0.
/// Power series for x <= 1, modified Lentz continued fraction above.
double exp_integral_e1(double x);

/// Regularized lower incomplete gamma P(a, x).
double reg_lower_gamma(double a, double x);
/// x such that P(a, x) = p, for p in [0, 1].
double reg_lower_gamma_inv(double a, double p);

/// log U(a, b, s), Tricomi's confluent hypergeometric function, from
///   U(a,b,s) = Gamma(a)^{-1} int_0^inf e^{-s t} t^{a-1} (1+t)^{b-a-1} dt
/// by double-exponential quadrature of the peak-normalized integrand.
/// Requires a > 0 and s > 0; throws ConvergenceError if the quadrature error estimate
/// exceeds 1e-9 relative.
LogValue kummer_u(double a, double b, double s);

/// log sum_i exp(v_i), stable for any finite inputs. Empty input or all -inf gives -inf.
double log_sum_exp(std::span<const double> log_values);
LogValue log_sum_exp(std::span<const LogValue> values);

/// log sum_i w_i (exp(a_i) + exp(b_i)) / 2, with the widths given in linear scale.
/// Throws DomainError on length mismatch or empty input.
LogValue log_trapezoid(std::span<const double> widths, std::span<const double> log_left,
                       std::span<const double> log_right);

}  // namespace evidenza
