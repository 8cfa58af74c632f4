#ifndef OSSP_ORACLE_HPP
#define OSSP_ORACLE_HPP

// Independent checks: exhaustive enumeration of small ordered partitions and
// acceptance-rejection Monte Carlo over the ordered CRP.

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "ossp/partition.hpp"

namespace ossp {

inline constexpr int kEnumerationCap = 9;

struct EnumeratedComposition {
  std::vector<int> freqs;
  /// Number of ordered set partitions of [n] with these ordered block sizes,
  /// n! / (m_1! ... m_k!).
  std::uint64_t multiplicity;
};

/// Every composition of n with its multiplicity. Throws CapExceeded for n > 9.
std::vector<EnumeratedComposition> enumerate_ordered_partitions(int n);

/// Statistic the first n draws must match.
struct McCondition {
  int n = 1;
  std::optional<int> k;
  /// Leading frequencies M_1..M_r (empty: no constraint).
  std::vector<int> prefix;
};

struct ConditionalMc {
  std::uint64_t attempts = 0;
  std::uint64_t accepted = 0;
  double acceptance_rate() const {
    return attempts == 0 ? 0.0 : static_cast<double>(accepted) / static_cast<double>(attempts);
  }
  /// K_m^(n) = s for s = 0..m.
  std::vector<std::uint64_t> kmn;
  /// W_1 = w for w = 1..n+m (index w-1), overall and jointly with A_1 / B_1.
  std::vector<std::uint64_t> w1;
  std::vector<std::uint64_t> w1_new;
  std::vector<std::uint64_t> w1_old;
  std::uint64_t a1 = 0;
  std::uint64_t b1 = 0;
  /// Joint tallies of the first r enlarged-sample frequencies under A_r and B_r.
  std::map<std::vector<int>, std::uint64_t> new_prefix;
  std::map<std::vector<int>, std::uint64_t> old_prefix;
  /// Leading r frequencies of the accepted size-n partitions.
  std::map<std::vector<int>, std::uint64_t> prior_prefix;

  /// Frequency and binomial standard error of a count.
  double freq(std::uint64_t count) const;
  double se(std::uint64_t count) const;
};

/// Runs ordered-CRP restaurants to size n, keeps those matching `condition`,
/// continues each for m more draws and tallies the results until `replicates`
/// runs are accepted. Attempt i uses stream i of `seed`, so the output does
/// not depend on the thread count. `prefix_depth` sets r for the joint prefix
/// tallies. Throws AcceptanceTooLow if the acceptance rate drops below 1e-4.
ConditionalMc conditional_mc(const McCondition& condition, int m, const PypParams& params,
                             std::uint64_t replicates, std::uint64_t seed, int prefix_depth = 2);

struct OldestMc {
  std::uint64_t accepted = 0;
  std::uint64_t oldest = 0;
  double freq() const;
  double se() const;
};

/// Among size-n runs where the first customer's species has frequency i, the
/// fraction in which that species has order 1.
OldestMc oldest_mc(int i, int n, const PypParams& params, std::uint64_t replicates,
                   std::uint64_t seed);

}  // namespace ossp

#endif  // OSSP_ORACLE_HPP
