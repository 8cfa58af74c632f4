#include "ossp/posterior.hpp"

#include <cmath>
#include <limits>
#include <numeric>

#include "ossp/error.hpp"
#include "ossp/laws.hpp"

namespace ossp {
namespace {

void check_sizes(int n, int m, int k) {
  if (n < 1) throw DomainError("posterior laws need n >= 1");
  if (m < 0) throw DomainError("posterior laws need m >= 0");
  if (k < 1 || k > n) throw DomainError("posterior laws need 1 <= k <= n");
}

// log[(a)_(m) / (b)_(m)], summed term by term to keep small differences exact.
double log_rising_ratio(double a, double b, int m) {
  double out = 0.0;
  for (int i = 0; i < m; ++i) out += std::log1p((a - b) / (b + i));
  return out;
}

// log of C_{1,N}(w) / (theta + N - w)_(w), the r = 1 kernel shared by both events.
double log_kernel(int N, int w, double a, double t) {
  return std::log(a * (N - w) + t * w) - std::log(N) + log_rising(1.0 - a, w - 1).log_magnitude -
         log_rising(t + N - w, w).log_magnitude;
}

}  // namespace

LogValue posterior_first_r_new(int n, int m, int k, std::span<const int> w,
                               const PypParams& params) {
  check_sizes(n, m, k);
  if (w.empty()) throw DomainError("need r >= 1");
  int s = 0;
  for (int x : w) {
    if (x < 1) throw DomainError("new-event frequencies must be >= 1");
    s += x;
  }
  if (s > m) throw DomainError("new-event frequencies exceed m");
  return {log_multinomial(m, w) + log_first_r_constant(n + m, w, params) -
          log_rising(params.theta() + n + m - s, s).log_magnitude};
}

LogValue posterior_first_r_old(int n, int m, int k, std::span<const int> prefix,
                               std::span<const int> increments, const PypParams& params) {
  check_sizes(n, m, k);
  const std::size_t r = prefix.size();
  if (r == 0 || increments.size() != r) throw DomainError("prefix and increments need equal r >= 1");
  if (static_cast<int>(r) > k) throw DomainError("old-event law needs r <= k");
  int used = 0;
  int grown_total = 0;
  std::vector<int> grown(r);
  for (std::size_t j = 0; j < r; ++j) {
    if (prefix[j] < 1) throw DomainError("prefix frequencies must be >= 1");
    if (increments[j] < 0) throw DomainError("increments must be >= 0");
    used += prefix[j];
    grown[j] = prefix[j] + increments[j];
    grown_total += grown[j];
  }
  if (used > n) throw DomainError("prefix frequencies exceed n");
  if (grown_total - used > m) throw DomainError("increments exceed m");
  const double t = params.theta();
  const double after = log_first_r_constant(n + m, grown, params) -
                       log_rising(t + n + m - grown_total, grown_total).log_magnitude;
  const double before =
      log_first_r_constant(n, prefix, params) - log_rising(t + n - used, used).log_magnitude;
  return {log_multinomial(m, increments) + after - before};
}

double PosteriorW1::prob_A1() const {
  return std::accumulate(support_new.begin(), support_new.end(), 0.0);
}

double PosteriorW1::prob_B1() const {
  return std::accumulate(support_old.begin(), support_old.end(), 0.0);
}

PosteriorW1 posterior_W1(int n, int m, int k, int m1, const PypParams& params) {
  check_sizes(n, m, k);
  if (m1 < 1 || m1 > n - k + 1) throw DomainError("posterior_W1 needs 1 <= m1 <= n-k+1");
  PosteriorW1 out;
  out.n = n;
  out.m = m;
  out.m1 = m1;
  out.marginal.assign(m1 + m, 0.0);
  if (m == 0) {
    out.support_old = {1.0};
    out.marginal[m1 - 1] = 1.0;
    return out;
  }
  const double a = params.alpha();
  const double t = params.theta();
  const int N = n + m;
  out.support_new.resize(m);
  for (int w = 1; w <= m; ++w) {
    out.support_new[w - 1] = std::exp(log_binomial(m, w) + log_kernel(N, w, a, t));
    out.marginal[w - 1] += out.support_new[w - 1];
  }
  const double base = log_kernel(n, m1, a, t);
  out.support_old.resize(m + 1);
  for (int w = 0; w <= m; ++w) {
    // (1-alpha)_(m1+w-1) / (1-alpha)_(m1-1) = (m1-alpha)_(w) is carried by the two kernels.
    out.support_old[w] = std::exp(log_binomial(m, w) + log_kernel(N, m1 + w, a, t) - base);
    out.marginal[m1 + w - 1] += out.support_old[w];
  }
  return out;
}

EventProbs prob_A1_B1(int n, int m, const PypParams& params) {
  if (n < 1 || m < 0) throw DomainError("prob_A1_B1 needs n >= 1, m >= 0");
  if (m == 0) return {0.0, 1.0};
  const double a = params.alpha();
  const double t = params.theta();
  const double log_b = std::log(static_cast<double>(n) / (n + m)) +
                       log_rising_ratio(t + n + 1 - a, t + n, m);
  return {-std::expm1(log_b), std::exp(log_b)};
}

W1Moments expected_W1(int n, int m, int k, int m1, const PypParams& params) {
  check_sizes(n, m, k);
  if (m1 < 1 || m1 > n - k + 1) throw DomainError("expected_W1 needs 1 <= m1 <= n-k+1");
  W1Moments out;
  const auto events = prob_A1_B1(n, m, params);
  out.prob_A1 = events.prob_A1;
  out.prob_B1 = events.prob_B1;
  if (m == 0) {
    out.expected = out.on_B1 = out.given_B1 = m1;
    out.given_A1 = std::numeric_limits<double>::quiet_NaN();
    return out;
  }
  const double a = params.alpha();
  const double t = params.theta();
  const double nm = n + m;
  out.on_A1 = m / nm * (t + n * a) / (t + n + 1 - a) *
              std::exp(log_rising_ratio(t + n + 1 - a, t + n, m));
  const double lead = a * (n + m - m1) + t * m1;
  const double q1 = (m1 - a) / (t + n - a);
  const double q2 = (m1 + 1 - a) / (t + n + 1 - a);
  const double c = lead * (m1 + m * q1) + m * (t - a) * q1 * ((m1 + 1) + (m - 1) * q2);
  out.on_B1 = n / nm * std::exp(log_rising_ratio(t + n - a, t + n, m)) * c /
              (a * (n - m1) + t * m1);
  out.expected = out.on_A1 + out.on_B1;
  out.given_A1 = out.on_A1 / out.prob_A1;
  out.given_B1 = out.on_B1 / out.prob_B1;
  return out;
}

double predict_K(int n, int k, int m, const PypParams& params) {
  return k + expected_Kmn(m, n, k, params);
}

}  // namespace ossp
