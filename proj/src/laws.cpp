#include "ossp/laws.hpp"

#include <cmath>
#include <numeric>

#include "ossp/error.hpp"

namespace ossp {
namespace {

int checked_total(std::span<const int> freqs) {
  if (freqs.empty()) throw DomainError("empty frequency vector");
  int n = 0;
  for (int m : freqs) {
    if (m < 1) throw DomainError("frequencies must be >= 1");
    n += m;
  }
  return n;
}

// log Pr[K_N = k] for every k = 0..N, from a row of scaled coefficients.
std::vector<double> log_k_law_from_row(const std::vector<double>& row, int N, double alpha,
                                       double theta) {
  std::vector<double> out(N + 1, kLogZero);
  const double norm = log_rising(theta, N).log_magnitude;
  double prefix = 0.0;  // log prod_{i<k} (theta + i alpha)
  for (int k = 0; k <= N; ++k) {
    if (row[k] != kLogZero) out[k] = prefix + row[k] - norm;
    prefix += std::log(theta + k * alpha);
  }
  return out;
}

}  // namespace

LogValue log_eppf(std::span<const int> freqs, const PypParams& params) {
  const int n = checked_total(freqs);
  const double a = params.alpha();
  const double t = params.theta();
  double out = -log_rising(t, n).log_magnitude;
  for (std::size_t i = 0; i < freqs.size(); ++i) {
    out += std::log(t + static_cast<double>(i) * a);
    out += log_rising(1.0 - a, freqs[i] - 1).log_magnitude;
  }
  return {out};
}

LogValue log_ordered_eppf(std::span<const int> freqs, const PypParams& params) {
  const int n = checked_total(freqs);
  const double a = params.alpha();
  const double t = params.theta();
  double out = -log_rising(t, n).log_magnitude;
  int tail = n;
  for (int m : freqs) {
    const int rest = tail - m;
    out += std::log(t * m + a * rest) - std::log(tail);
    out += log_rising(1.0 - a, m - 1).log_magnitude;
    tail = rest;
  }
  return {out};
}

std::vector<double> dist_Kn(int n, const PypParams& params) {
  if (n < 1) throw DomainError("dist_Kn needs n >= 1");
  ScaledFactorialRows rows(params.alpha(), 0.0);
  rows.advance_to(n);
  const auto logs = log_k_law_from_row(rows.row(), n, params.alpha(), params.theta());
  std::vector<double> out(n);
  for (int k = 1; k <= n; ++k) out[k - 1] = std::exp(logs[k]);
  return out;
}

double log_prob_Kn(int n, int k, const PypParams& params) {
  if (n < 0 || k < 0) throw DomainError("log_prob_Kn needs n, k >= 0");
  if (n == 0) return k == 0 ? 0.0 : kLogZero;
  if (k == 0 || k > n) return kLogZero;
  ScaledFactorialRows rows(params.alpha(), 0.0);
  rows.advance_to(n);
  return log_k_law_from_row(rows.row(), n, params.alpha(), params.theta())[k];
}

std::vector<double> dist_Kmn(int m, int n, int k, const PypParams& params) {
  if (m < 0) throw DomainError("dist_Kmn needs m >= 0");
  if (n < 1 || k < 1 || k > n) throw DomainError("dist_Kmn needs 1 <= k <= n");
  if (m == 0) return {1.0};
  const double a = params.alpha();
  const double t = params.theta();
  ScaledFactorialRows rows(a, -n + k * a);
  rows.advance_to(m);
  const double norm = log_rising(t + n, m).log_magnitude;
  std::vector<double> out(m + 1);
  double prefix = 0.0;  // log prod_{i<s} (theta + (k+i) alpha) = log alpha^s (k + theta/alpha)_(s)
  for (int s = 0; s <= m; ++s) {
    out[s] = std::exp(prefix + rows.row()[s] - norm);
    prefix += std::log(t + (k + s) * a);
  }
  return out;
}

double expected_Kn(int n, const PypParams& params) {
  if (n < 0) throw DomainError("expected_Kn needs n >= 0");
  const double a = params.alpha();
  const double t = params.theta();
  if (a == 0.0) {
    double s = 0.0;
    for (int i = 0; i < n; ++i) s += t / (t + i);
    return s;
  }
  // (theta/alpha) [(theta+alpha)_(n)/(theta)_(n) - 1]
  double log_ratio = 0.0;
  for (int i = 0; i < n; ++i) log_ratio += std::log1p(a / (t + i));
  return t / a * std::expm1(log_ratio);
}

double expected_Kmn(int m, int n, int k, const PypParams& params) {
  if (m < 0 || n < 1 || k < 1 || k > n) throw DomainError("expected_Kmn needs m >= 0, 1 <= k <= n");
  const double a = params.alpha();
  const double t = params.theta();
  if (a == 0.0) {
    double s = 0.0;
    for (int i = 0; i < m; ++i) s += t / (t + n + i);
    return s;
  }
  // (k + theta/alpha) [(theta+n+alpha)_(m)/(theta+n)_(m) - 1]
  double log_ratio = 0.0;
  for (int i = 0; i < m; ++i) log_ratio += std::log1p(a / (t + n + i));
  return (k + t / a) * std::expm1(log_ratio);
}

namespace {

double oldest_prefactor(int i, int n, double a, double t) {
  return (a * n + i * (t - a)) / n;
}

// E[1/(theta + alpha K)] from a row of log Pr[K = k].
double mean_inverse(const std::vector<double>& log_law, double a, double t) {
  double acc = 0.0;
  for (std::size_t k = 0; k < log_law.size(); ++k) {
    if (log_law[k] != kLogZero) acc += std::exp(log_law[k]) / (t + a * static_cast<double>(k));
  }
  return acc;
}

}  // namespace

double prob_oldest(int i, int n, const PypParams& params, OldestFormula formula) {
  if (n < 1 || i < 1 || i > n) throw DomainError("prob_oldest needs 1 <= i <= n");
  const double a = params.alpha();
  const double t = params.theta();
  if (a == 0.0) return static_cast<double>(i) / n;
  if (i == n) return 1.0;
  const double law_theta = formula == OldestFormula::Exact ? t + a : t;
  const int rest = n - i;
  ScaledFactorialRows rows(a, 0.0);
  rows.advance_to(rest);
  const auto law = log_k_law_from_row(rows.row(), rest, a, law_theta);
  return oldest_prefactor(i, n, a, t) * mean_inverse(law, a, t);
}

std::vector<double> prob_oldest_curve(int n, const PypParams& params, OldestFormula formula) {
  if (n < 1) throw DomainError("prob_oldest_curve needs n >= 1");
  const double a = params.alpha();
  const double t = params.theta();
  std::vector<double> out(n);
  if (a == 0.0) {
    for (int i = 1; i <= n; ++i) out[i - 1] = static_cast<double>(i) / n;
    return out;
  }
  const double law_theta = formula == OldestFormula::Exact ? t + a : t;
  ScaledFactorialRows rows(a, 0.0);
  for (int rest = 0; rest < n; ++rest) {
    rows.advance_to(rest);
    const auto law = log_k_law_from_row(rows.row(), rest, a, law_theta);
    const int i = n - rest;
    out[i - 1] = i == n ? 1.0 : oldest_prefactor(i, n, a, t) * mean_inverse(law, a, t);
  }
  return out;
}

double log_first_r_constant(int n, std::span<const int> prefix, const PypParams& params) {
  const double a = params.alpha();
  const double t = params.theta();
  double out = 0.0;
  int used = 0;
  for (int m : prefix) {
    const int before = n - used;
    used += m;
    out += std::log(a * (n - used) + t * m) - std::log(before);
    out += log_rising(1.0 - a, m - 1).log_magnitude;
  }
  return out;
}

namespace {

int checked_prefix(int n, std::span<const int> prefix) {
  if (prefix.empty()) throw DomainError("frequency prefix must have r >= 1 entries");
  int s = 0;
  for (int m : prefix) {
    if (m < 1) throw DomainError("prefix frequencies must be >= 1");
    s += m;
  }
  if (s > n) throw DomainError("prefix frequencies exceed the sample size");
  return s;
}

}  // namespace

LogValue prior_first_r(int n, std::span<const int> prefix, const PypParams& params) {
  const int s = checked_prefix(n, prefix);
  return {log_multinomial(n, prefix) + log_first_r_constant(n, prefix, params) -
          log_rising(params.theta() + n - s, s).log_magnitude};
}

LogValue prior_first_r_given_k(int n, std::span<const int> prefix, int k,
                               const PypParams& params) {
  const int s = checked_prefix(n, prefix);
  const int r = static_cast<int>(prefix.size());
  if (k < r || k > n) throw DomainError("prior_first_r_given_k needs r <= k <= n");
  if (s > n - k + r) throw DomainError("prefix inadmissible for the given k");
  const double rest = log_prob_Kn(n - s, k - r, params);
  if (rest == kLogZero) return LogValue::zero();
  return {prior_first_r(n, prefix, params).log_magnitude + rest - log_prob_Kn(n, k, params)};
}

std::vector<double> prior_M1(int n, const PypParams& params) {
  if (n < 1) throw DomainError("prior_M1 needs n >= 1");
  const double a = params.alpha();
  const double t = params.theta();
  auto lead = [&](int m1) { return a * (n - m1) + t * m1; };
  std::vector<double> out(n);
  // Pr[M_1 = 1] = L(1)/(theta+n-1); successive ratios avoid log Gamma calls.
  double log_p = std::log(lead(1)) - std::log(t + n - 1);
  out[0] = std::exp(log_p);
  for (int m1 = 1; m1 < n; ++m1) {
    log_p += std::log(static_cast<double>(n - m1) / (m1 + 1)) + std::log(lead(m1 + 1)) -
             std::log(lead(m1)) + std::log(m1 - a) - std::log(t + n - m1 - 1);
    out[m1] = std::exp(log_p);
  }
  return out;
}

double expected_M1(int n, const PypParams& params) {
  const auto law = prior_M1(n, params);
  double e = 0.0;
  for (int m1 = 1; m1 <= n; ++m1) e += m1 * law[m1 - 1];
  return e;
}

}  // namespace ossp
