#ifndef OSSP_SPECIALFN_HPP
#define OSSP_SPECIALFN_HPP

// Log-space special functions: rising factorials, binomials and the
// generalized factorial coefficients that drive the laws of K_n and K_m^(n).
//
// Every quantity handled here is nonnegative, so values are carried as a
// natural log only; -infinity encodes an exact zero.

#include <cmath>
#include <limits>
#include <span>
#include <vector>

namespace ossp {

inline constexpr double kLogZero = -std::numeric_limits<double>::infinity();

/// A nonnegative real stored as its natural logarithm.
struct LogValue {
  double log_magnitude = kLogZero;

  static constexpr LogValue zero() { return {kLogZero}; }
  static constexpr LogValue one() { return {0.0}; }
  static LogValue from_linear(double x);

  double value() const { return std::exp(log_magnitude); }
  bool is_zero() const { return log_magnitude == kLogZero; }

  friend LogValue operator*(LogValue a, LogValue b) {
    return {a.log_magnitude + b.log_magnitude};
  }
  friend LogValue operator/(LogValue a, LogValue b) {
    return {a.log_magnitude - b.log_magnitude};
  }
  friend LogValue operator+(LogValue a, LogValue b);
};

/// log(exp(a) + exp(b)), exact when either side is -inf.
double log_add(double a, double b);

/// log(sum_i exp(xs[i])).
double log_sum_exp(std::span<const double> xs);

/// Thread-safe log Gamma for x > 0.
double log_gamma(double x);

double log_factorial(int n);
double log_binomial(int n, int k);

/// log of n! / (parts[0]! ... parts[r-1]! (n - sum parts)!).
double log_multinomial(int n, std::span<const int> parts);

/// log (a)_(r) = log a(a+1)...(a+r-1). Direct product for r <= 20, log Gamma
/// difference above. Throws DomainError if some factor is <= 0.
LogValue log_rising(double a, int r);

/// log C(n,k;alpha), the generalized factorial coefficient, for alpha in (0,1).
LogValue log_gen_factorial(int n, int k, double alpha);

/// log[C(m,s;alpha,gamma) / alpha^s] for alpha in [0,1) and gamma < 0. At
/// alpha == 0 this is the shifted Stirling limit.
LogValue log_noncentral_gf_scaled(int m, int s, double alpha, double gamma);

/// Row-by-row evaluation of D(n,s) = C(n,s;alpha,gamma)/alpha^s through
///   D(n+1,s) = (n - s*alpha - gamma) D(n,s) + D(n,s-1),  D(0,0) = 1.
/// With gamma == 0 this is the centered coefficient C(n,s;alpha)/alpha^s,
/// which at alpha == 0 reduces to the unsigned Stirling numbers of the
/// first kind. Only the current row is stored.
class ScaledFactorialRows {
 public:
  ScaledFactorialRows(double alpha, double gamma);

  int n() const { return n_; }
  /// log D(n, s) for s = 0..n.
  const std::vector<double>& row() const { return row_; }
  void advance();
  void advance_to(int n);

 private:
  double alpha_;
  double gamma_;
  int n_ = 0;
  std::vector<double> row_;
  std::vector<double> next_;
};

}  // namespace ossp

#endif  // OSSP_SPECIALFN_HPP
