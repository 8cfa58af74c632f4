#include "ossp/specialfn.hpp"

#include <algorithm>
#include <string>

#include "ossp/error.hpp"

namespace ossp {

LogValue LogValue::from_linear(double x) {
  if (!(x >= 0.0)) throw DomainError("LogValue of a negative number");
  return {x == 0.0 ? kLogZero : std::log(x)};
}

LogValue operator+(LogValue a, LogValue b) {
  return {log_add(a.log_magnitude, b.log_magnitude)};
}

double log_add(double a, double b) {
  if (a == kLogZero) return b;
  if (b == kLogZero) return a;
  if (a < b) std::swap(a, b);
  return a + std::log1p(std::exp(b - a));
}

double log_sum_exp(std::span<const double> xs) {
  double hi = kLogZero;
  for (double x : xs) hi = std::max(hi, x);
  if (hi == kLogZero) return kLogZero;
  double acc = 0.0;
  for (double x : xs) acc += std::exp(x - hi);
  return hi + std::log(acc);
}

double log_gamma(double x) {
  if (!(x > 0.0)) throw DomainError("log_gamma requires x > 0");
  int sign = 0;
  return ::lgamma_r(x, &sign);
}

double log_factorial(int n) {
  if (n < 0) throw DomainError("log_factorial of a negative integer");
  return log_gamma(n + 1.0);
}

double log_binomial(int n, int k) {
  if (k < 0 || k > n) return kLogZero;
  return log_factorial(n) - log_factorial(k) - log_factorial(n - k);
}

double log_multinomial(int n, std::span<const int> parts) {
  double out = log_factorial(n);
  int used = 0;
  for (int p : parts) {
    if (p < 0) throw DomainError("negative multinomial part");
    used += p;
    out -= log_factorial(p);
  }
  if (used > n) throw DomainError("multinomial parts exceed the total");
  return out - log_factorial(n - used);
}

LogValue log_rising(double a, int r) {
  if (r < 0) throw DomainError("log_rising: negative length");
  if (r == 0) return LogValue::one();
  if (!(a > 0.0)) {
    throw DomainError("log_rising: factor a+i <= 0 (a = " + std::to_string(a) + ")");
  }
  if (r <= 20) {
    double prod = 1.0;
    for (int i = 0; i < r; ++i) prod *= a + i;
    return {std::log(prod)};
  }
  return {log_gamma(a + r) - log_gamma(a)};
}

ScaledFactorialRows::ScaledFactorialRows(double alpha, double gamma)
    : alpha_(alpha), gamma_(gamma), row_{0.0} {
  if (!(alpha >= 0.0 && alpha < 1.0)) {
    throw DomainError("generalized factorial coefficients need alpha in [0,1)");
  }
  if (!(gamma <= 0.0)) throw DomainError("shift gamma must be <= 0");
}

void ScaledFactorialRows::advance() {
  next_.assign(n_ + 2, kLogZero);
  for (int s = 0; s <= n_ + 1; ++s) {
    double stay = kLogZero;
    if (s <= n_ && row_[s] != kLogZero) {
      const double coef = n_ - s * alpha_ - gamma_;
      if (coef > 0.0) stay = std::log(coef) + row_[s];
    }
    const double open = s >= 1 ? row_[s - 1] : kLogZero;
    next_[s] = log_add(stay, open);
  }
  row_.swap(next_);
  ++n_;
}

void ScaledFactorialRows::advance_to(int n) {
  while (n_ < n) advance();
}

LogValue log_gen_factorial(int n, int k, double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw DomainError("log_gen_factorial requires alpha in (0,1)");
  }
  if (n < 0 || k < 0 || k > n) throw DomainError("log_gen_factorial requires 0 <= k <= n");
  ScaledFactorialRows rows(alpha, 0.0);
  rows.advance_to(n);
  const double scaled = rows.row()[k];
  if (scaled == kLogZero) return LogValue::zero();
  return {scaled + k * std::log(alpha)};
}

LogValue log_noncentral_gf_scaled(int m, int s, double alpha, double gamma) {
  if (!(gamma < 0.0)) throw DomainError("log_noncentral_gf_scaled requires gamma < 0");
  if (m < 0 || s < 0 || s > m) throw DomainError("log_noncentral_gf_scaled requires 0 <= s <= m");
  ScaledFactorialRows rows(alpha, gamma);
  rows.advance_to(m);
  return {rows.row()[s]};
}

}  // namespace ossp
