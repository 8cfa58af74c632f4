#ifndef OSSP_LAWS_HPP
#define OSSP_LAWS_HPP

// Exact prior laws of the ordered Pitman-Yor random partition.

#include <span>
#include <vector>

#include "ossp/partition.hpp"
#include "ossp/specialfn.hpp"

namespace ossp {

/// Probability of one partition of [n] with block sizes `freqs` (any order).
LogValue log_eppf(std::span<const int> freqs, const PypParams& params);

/// Probability of one ordered partition of [n] with block sizes (m_1..m_k),
/// listed by order. Summing over the k! block orders recovers log_eppf.
LogValue log_ordered_eppf(std::span<const int> freqs, const PypParams& params);

/// Pr[K_n = k] for k = 1..n (index k-1).
std::vector<double> dist_Kn(int n, const PypParams& params);

/// log Pr[K_n = k]; K_0 = 0 with probability one.
double log_prob_Kn(int n, int k, const PypParams& params);

/// Pr[K_m^(n) = s | K_n = k] for s = 0..m (index s).
std::vector<double> dist_Kmn(int m, int n, int k, const PypParams& params);

double expected_Kn(int n, const PypParams& params);
/// E[K_m^(n) | K_n = k].
double expected_Kmn(int m, int n, int k, const PypParams& params);

enum class OldestFormula {
  /// Expectation over the other blocks' count under PYP(alpha, theta+alpha),
  /// the law of the rest of the partition given a block of size i.
  Exact,
  /// Expectation over K_{n-i} under PYP(alpha, theta), without the shift.
  /// Agrees with Exact at alpha = 0 and at i = n.
  Unshifted,
};

/// Probability that a species of frequency i in a sample of size n has
/// order 1. Equals i/n exactly when alpha == 0.
double prob_oldest(int i, int n, const PypParams& params,
                   OldestFormula formula = OldestFormula::Exact);

/// prob_oldest for i = 1..n (index i-1), sharing one coefficient triangle.
std::vector<double> prob_oldest_curve(int n, const PypParams& params,
                                      OldestFormula formula = OldestFormula::Exact);

/// log C_{r,n}(alpha, theta, m) =
///   sum_j log{[alpha(n - |m|_{1:j}) + theta m_j] / (n - |m|_{1:j-1}) (1-alpha)_(m_j - 1)}.
double log_first_r_constant(int n, std::span<const int> prefix, const PypParams& params);

/// log Pr[M_{1,n} = m_1, ..., M_{r,n} = m_r, K_n >= r]. Requires m_j >= 1 and
/// |m|_{1:r} <= n.
LogValue prior_first_r(int n, std::span<const int> prefix, const PypParams& params);

/// log Pr[M_{1,n} = m_1, ..., M_{r,n} = m_r | K_n = k]. Requires r <= k <= n
/// and |m|_{1:r} <= n - k + r.
LogValue prior_first_r_given_k(int n, std::span<const int> prefix, int k,
                               const PypParams& params);

/// Pr[M_{1,n} = m_1] for m_1 = 1..n (index m_1 - 1).
std::vector<double> prior_M1(int n, const PypParams& params);
double expected_M1(int n, const PypParams& params);

}  // namespace ossp

#endif  // OSSP_LAWS_HPP
