#ifndef OSSP_OCRP_HPP
#define OSSP_OCRP_HPP

// Generative side: classical and ordered Chinese Restaurant Processes, and
// the misspecified generators used by the synthetic studies.

#include <cstdint>
#include <span>
#include <unordered_map>
#include <vector>

#include "ossp/partition.hpp"
#include "ossp/rng.hpp"

namespace ossp {

/// Seating probabilities of the next customer in the ordered CRP.
/// new_probs[j-1]: opens a new table that takes order j (j = 1..k+1).
/// old_probs[j-1]: joins the existing table of order j (j = 1..k).
struct StepProbs {
  std::vector<double> new_probs;
  std::vector<double> old_probs;
};

StepProbs ordered_step_probs(const OrderedPartition& partition, const PypParams& params);

/// Same as ordered_step_probs but admits theta == 0 (the ordered alpha-stable
/// process) for a nonempty partition. The theta factors that cancel in the
/// last-order terms are cancelled analytically, so the limit is exact.
StepProbs ordered_step_probs_raw(const OrderedPartition& partition, double alpha, double theta);

/// Classical CRP: p_new = (theta + k alpha)/(theta + n),
/// p_old[j] = (n_j - alpha)/(theta + n).
struct UnorderedStepProbs {
  double p_new;
  std::vector<double> p_old;
};

UnorderedStepProbs unordered_step_probs(std::span<const int> freqs, const PypParams& params);

/// A table of an ordered restaurant. `id` is the creation index; `old` marks
/// tables that existed when mark_all_old() was last called.
struct Table {
  int count = 0;
  int id = 0;
  bool old = false;
  double weight = 0.0;  // only used by the arrival-weighted generator
};

/// Ordered tables plus the seating history, shared by all generators.
class OrderedTables {
 public:
  const OrderedPartition& partition() const { return partition_; }
  std::span<const Table> tables() const { return tables_; }
  /// Table id of every customer, in arrival order.
  std::span<const int> seating() const { return seating_; }
  int n() const { return partition_.n(); }
  int k() const { return partition_.k(); }

  void mark_all_old();
  /// Number of tables not marked old.
  int new_table_count() const;

  /// Records with rank-consistent synthetic weights (order j gets weight
  /// k+1-j) and species labels "s<id>", in arrival order.
  ObservedSample to_sample() const;

 protected:
  void open_table(int order, double weight = 0.0);  // order is 1-based
  void join_table(int order);

  OrderedPartition partition_;
  std::vector<Table> tables_;
  std::vector<int> seating_;
  int next_id_ = 0;
};

/// Ordered CRP driven by ordered_step_probs.
class OrderedRestaurant : public OrderedTables {
 public:
  explicit OrderedRestaurant(const PypParams& params);
  /// Starts from an existing ordered partition; its tables are marked old.
  /// Seating history is synthesized in order-major sequence.
  OrderedRestaurant(const OrderedPartition& start, const PypParams& params);

  const PypParams& params() const { return params_; }

  struct Event {
    bool opened_new;
    int order;  // 1-based order of the table that received the customer
  };
  Event step(Rng& rng);
  void run(int steps, Rng& rng);

 private:
  PypParams params_;
};

/// n sequential ordered-CRP steps from the empty restaurant.
ObservedSample simulate(int n, const PypParams& params, std::uint64_t seed);

/// Monte Carlo estimate of the order taken by a new species after n
/// observations, conditional on K_n.
struct OrderingDistribution {
  int n = 0;
  std::uint64_t replicates = 0;
  /// rows[k-1][j-1]: mean over runs with K_n = k of q_new_j / sum_i q_new_i.
  std::vector<std::vector<double>> mean;
  std::vector<std::vector<double>> se;
  std::vector<std::uint64_t> visits;
  /// Marginal over K_n, indexed by j = 1..n+1 (zero beyond k+1).
  std::vector<double> marginal;
  std::vector<double> marginal_se;
  /// K_n values that were never visited (InsufficientReplicates report).
  std::vector<int> unvisited;
};

OrderingDistribution ordering_distribution(int n, const PypParams& params,
                                           std::uint64_t replicates, std::uint64_t seed);

enum class ClusteringKind { DP, PYP, Zipf };
enum class OrderingKind { AlphaStable, ArrivalWeighted };

struct ClusteringSpec {
  ClusteringKind kind = ClusteringKind::DP;
  double alpha = 0.0;   // PYP discount
  double theta = 1.0;   // DP / PYP concentration
  double zipf_s = 2.0;  // Zipf exponent, > 1
};

struct OrderingSpec {
  OrderingKind kind = OrderingKind::AlphaStable;
  double alpha = 0.5;  // alpha-stable ordering parameter, in (0,1)
};

/// Zeta(s) variate on {1, 2, ...} (Devroye's rejection sampler), s > 1.
std::uint64_t sample_zipf(double s, Rng& rng);

/// Clusters from a classical CRP or Zipf labels; each new cluster receives an
/// order independently of the clustering.
///  alpha_stable: order drawn from the theta = 0 new-table predictive.
///  arrival_weighted: weight ~ Exponential(mean = arrival index); species are
///  ranked by increasing weight, so early arrivals tend to be oldest.
class MisspecProcess : public OrderedTables {
 public:
  MisspecProcess(const ClusteringSpec& clustering, const OrderingSpec& ordering);

  void step(Rng& rng);
  void run(int steps, Rng& rng);

 private:
  int place_new(Rng& rng);

  ClusteringSpec clustering_;
  OrderingSpec ordering_;
  std::unordered_map<std::uint64_t, int> zipf_ids_;  // Zipf label -> table id
};

ObservedSample misspec_simulate(int n, const ClusteringSpec& clustering,
                                const OrderingSpec& ordering, std::uint64_t seed);

}  // namespace ossp

#endif  // OSSP_OCRP_HPP
