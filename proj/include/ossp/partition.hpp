#ifndef OSSP_PARTITION_HPP
#define OSSP_PARTITION_HPP

#include <span>
#include <string>
#include <vector>

namespace ossp {

/// Ordered Pitman-Yor parameters: 0 <= alpha < 1, theta > 0.
///
/// theta > -alpha is a valid PYP but the ordered posterior formulas need
/// theta > 0, and every estimator feeds the posterior module, so the
/// narrower domain applies everywhere.
class PypParams {
 public:
  PypParams(double alpha, double theta);

  double alpha() const { return alpha_; }
  double theta() const { return theta_; }
  bool is_dp() const { return alpha_ == 0.0; }

  friend bool operator==(const PypParams&, const PypParams&) = default;

 private:
  double alpha_;
  double theta_;
};

/// Frequencies (m_1, ..., m_k) of species listed by order (index 0 holds the
/// species with the largest weight). The default-constructed value is the
/// empty partition of n = 0, the state before the first customer.
class OrderedPartition {
 public:
  OrderedPartition() = default;
  explicit OrderedPartition(std::vector<int> freqs);

  std::span<const int> freqs() const { return freqs_; }
  int n() const { return n_; }
  int k() const { return static_cast<int>(freqs_.size()); }
  bool empty() const { return freqs_.empty(); }
  /// Frequency of the species of order j (1-based).
  int freq(int j) const { return freqs_.at(j - 1); }

  /// Tail sums r_1..r_{k+1} with r_j = m_j + ... + m_k and r_{k+1} = 0.
  std::vector<int> tails() const;

  /// New species inserted with order j (1-based, j in 1..k+1); species at
  /// orders j..k shift down by one.
  void insert_new(int j);
  /// One more observation of the species of order j (1-based).
  void add_to(int j);

  friend bool operator==(const OrderedPartition&, const OrderedPartition&) = default;

 private:
  std::vector<int> freqs_;
  int n_ = 0;
};

struct Record {
  double weight;
  std::string species;
};

/// Raw (weight, species) records with the derived ordered statistics.
struct ObservedSample {
  std::vector<Record> records;
  OrderedPartition partition;
  /// arrival_order[j] = first-appearance index of the species of order j+1.
  std::vector<int> arrival_order;
  /// record_order[i] = order (0-based) of the species of records[i].
  std::vector<int> record_order;

  int n() const { return partition.n(); }
  int k() const { return partition.k(); }
  int m1() const { return partition.freq(1); }
};

/// K_{n_i} and M_{1,n_i} over an equally spaced grid of prefix sizes.
struct PrefixStats {
  std::vector<int> grid;
  std::vector<int> k_at;
  std::vector<int> m1_at;
};

/// Groups records by species and orders species by decreasing weight. Ties
/// between distinct species go to the earlier first appearance (older).
/// Throws EmptyInput, WeightConflict, or ParseError for non-finite weights.
ObservedSample reduce(std::vector<Record> records);

/// Same statistics recomputed on the prefixes records[0, n_i).
PrefixStats prefix_stats(const ObservedSample& sample, int d);

/// Same statistics at arbitrary sorted prefix sizes in 1..n.
PrefixStats prefix_stats_at(const ObservedSample& sample, std::vector<int> sizes);

/// The grid {round(i*n/d)}_{i=1..d}, deduplicated; always ends at n.
std::vector<int> prefix_grid(int n, int d);

}  // namespace ossp

#endif  // OSSP_PARTITION_HPP
