#ifndef OSSP_POSTERIOR_HPP
#define OSSP_POSTERIOR_HPP

// Posterior laws of the leading order frequencies after m further draws.
// Every law here depends on the conditioning partition only through n, k and
// the leading frequencies; k is taken for validation.

#include <span>
#include <vector>

#include "ossp/partition.hpp"
#include "ossp/specialfn.hpp"

namespace ossp {

/// log Pr[A_r, W_j = w_j (j <= r), K_m^(n) >= r | K_n = k, M_n = m].
/// Requires w_j >= 1 and |w| <= m.
LogValue posterior_first_r_new(int n, int m, int k, std::span<const int> w,
                               const PypParams& params);

/// log Pr[B_r, W_j = w_j + m_j (j <= r) | K_n = k, M_n = m]. `prefix` holds
/// m_1..m_r, `increments` holds w_1..w_r >= 0 with |w| <= m, and r <= k.
LogValue posterior_first_r_old(int n, int m, int k, std::span<const int> prefix,
                               std::span<const int> increments, const PypParams& params);

struct PosteriorW1 {
  int n = 0;
  int m = 0;
  int m1 = 0;
  /// Pr[A_1, W_1 = w] for w = 1..m (index w-1).
  std::vector<double> support_new;
  /// Pr[B_1, W_1 = m1 + w] for w = 0..m (index w).
  std::vector<double> support_old;
  /// Pr[W_1 = w] for w = 1..m1+m (index w-1); overlapping cells add.
  std::vector<double> marginal;

  double prob_A1() const;
  double prob_B1() const;
};

PosteriorW1 posterior_W1(int n, int m, int k, int m1, const PypParams& params);

struct W1Moments {
  double expected = 0.0;   ///< E[W_1]
  double on_A1 = 0.0;      ///< E[W_1 1{A_1}]
  double on_B1 = 0.0;      ///< E[W_1 1{B_1}]
  double prob_A1 = 0.0;
  double prob_B1 = 0.0;
  double given_A1 = 0.0;   ///< E[W_1 | A_1]; NaN when Pr[A_1] = 0
  double given_B1 = 0.0;   ///< E[W_1 | B_1]
};

/// Closed-form posterior moments of W_1. m = 0 gives expected = m1.
W1Moments expected_W1(int n, int m, int k, int m1, const PypParams& params);

struct EventProbs {
  double prob_A1 = 0.0;
  double prob_B1 = 1.0;
};

/// Pr[A_1 | data] and Pr[B_1 | data]; free of k and of the frequencies.
EventProbs prob_A1_B1(int n, int m, const PypParams& params);

/// k + E[K_m^(n) | K_n = k].
double predict_K(int n, int k, int m, const PypParams& params);

}  // namespace ossp

#endif  // OSSP_POSTERIOR_HPP
