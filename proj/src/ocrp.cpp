#include "ossp/ocrp.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ossp/error.hpp"
#include "ossp/parallel.hpp"

namespace ossp {

StepProbs ordered_step_probs_raw(const OrderedPartition& partition, double alpha, double theta) {
  if (!(alpha >= 0.0 && alpha < 1.0) || !(theta >= 0.0)) {
    throw DomainError("ordered_step_probs: need alpha in [0,1), theta >= 0");
  }
  const int k = partition.k();
  const int n = partition.n();
  StepProbs out;
  if (k == 0) {
    if (theta == 0.0) throw DomainError("ordered_step_probs: theta = 0 needs a nonempty partition");
    out.new_probs = {1.0};
    return out;
  }
  const auto m = partition.freqs();
  const auto r = partition.tails();  // r[j-1] = r_j
  const double log_denom = std::log(theta + n);
  out.new_probs.resize(k + 1);
  out.old_probs.resize(k);

  // prefix = log prod_{i<j} r_i (a r_{i+1} + a + t m_i) / ((r_i + 1)(a r_{i+1} + t m_i))
  double prefix = 0.0;
  for (int j = 1; j <= k; ++j) {
    const double rj = r[j - 1];
    const double rnext = r[j];
    const double mj = m[j - 1];
    out.new_probs[j - 1] =
        std::exp(std::log(theta + alpha * rj) - std::log1p(rj) - log_denom + prefix);
    // For j == k, r_{k+1} = 0 and the theta in (t m_k + t)/(t m_k) cancels.
    const double hold = j < k ? std::log(alpha * rnext + theta * mj + theta) -
                                    std::log(alpha * rnext + theta * mj)
                              : std::log(mj + 1.0) - std::log(mj);
    out.old_probs[j - 1] = std::exp(std::log(rj) + std::log(mj - alpha) + hold -
                                    std::log1p(rj) - log_denom + prefix);
    if (j < k) {
      prefix += std::log(rj) + std::log(alpha * rnext + alpha + theta * mj) - std::log1p(rj) -
                std::log(alpha * rnext + theta * mj);
    }
  }
  // Order k+1: theta * [r_k (a + t m_k)] / [(r_k + 1) t m_k], with theta cancelled.
  const double rk = r[k - 1];
  const double mk = m[k - 1];
  out.new_probs[k] = std::exp(prefix + std::log(rk) + std::log(alpha + theta * mk) -
                              std::log1p(rk) - std::log(mk) - log_denom);
  return out;
}

StepProbs ordered_step_probs(const OrderedPartition& partition, const PypParams& params) {
  return ordered_step_probs_raw(partition, params.alpha(), params.theta());
}

UnorderedStepProbs unordered_step_probs(std::span<const int> freqs, const PypParams& params) {
  const double a = params.alpha();
  const double t = params.theta();
  int n = 0;
  for (int f : freqs) {
    if (f < 1) throw DomainError("cluster sizes must be >= 1");
    n += f;
  }
  UnorderedStepProbs out;
  const auto k = static_cast<double>(freqs.size());
  out.p_new = (t + k * a) / (t + n);
  out.p_old.reserve(freqs.size());
  for (int f : freqs) out.p_old.push_back((f - a) / (t + n));
  return out;
}

void OrderedTables::mark_all_old() {
  for (auto& t : tables_) t.old = true;
}

int OrderedTables::new_table_count() const {
  return static_cast<int>(std::count_if(tables_.begin(), tables_.end(),
                                        [](const Table& t) { return !t.old; }));
}

void OrderedTables::open_table(int order, double weight) {
  Table t;
  t.count = 1;
  t.id = next_id_++;
  t.weight = weight;
  tables_.insert(tables_.begin() + (order - 1), t);
  partition_.insert_new(order);
  seating_.push_back(t.id);
}

void OrderedTables::join_table(int order) {
  Table& t = tables_.at(order - 1);
  ++t.count;
  partition_.add_to(order);
  seating_.push_back(t.id);
}

ObservedSample OrderedTables::to_sample() const {
  std::vector<int> rank_of(next_id_, 0);
  for (int j = 0; j < k(); ++j) rank_of[tables_[j].id] = j;
  std::vector<Record> records;
  records.reserve(seating_.size());
  for (int id : seating_) {
    records.push_back({static_cast<double>(k() - rank_of[id]), "s" + std::to_string(id)});
  }
  return reduce(std::move(records));
}

OrderedRestaurant::OrderedRestaurant(const PypParams& params) : params_(params) {}

OrderedRestaurant::OrderedRestaurant(const OrderedPartition& start, const PypParams& params)
    : params_(params) {
  for (int j = 1; j <= start.k(); ++j) {
    open_table(j);
    for (int c = 1; c < start.freq(j); ++c) join_table(j);
  }
  mark_all_old();
}

OrderedRestaurant::Event OrderedRestaurant::step(Rng& rng) {
  const StepProbs probs = ordered_step_probs(partition_, params_);
  double total = 0.0;
  for (double p : probs.new_probs) total += p;
  for (double p : probs.old_probs) total += p;
  double u = rng.uniform() * total;
  for (std::size_t j = 0; j < probs.new_probs.size(); ++j) {
    u -= probs.new_probs[j];
    if (u < 0.0) {
      open_table(static_cast<int>(j) + 1);
      return {true, static_cast<int>(j) + 1};
    }
  }
  for (std::size_t j = 0; j < probs.old_probs.size(); ++j) {
    u -= probs.old_probs[j];
    if (u < 0.0) {
      join_table(static_cast<int>(j) + 1);
      return {false, static_cast<int>(j) + 1};
    }
  }
  // Rounding left u marginally nonnegative: take the last positive outcome.
  if (!probs.old_probs.empty()) {
    join_table(static_cast<int>(probs.old_probs.size()));
    return {false, static_cast<int>(probs.old_probs.size())};
  }
  open_table(static_cast<int>(probs.new_probs.size()));
  return {true, static_cast<int>(probs.new_probs.size())};
}

void OrderedRestaurant::run(int steps, Rng& rng) {
  for (int i = 0; i < steps; ++i) step(rng);
}

ObservedSample simulate(int n, const PypParams& params, std::uint64_t seed) {
  if (n < 1) throw DomainError("simulate needs n >= 1");
  Rng rng(seed);
  OrderedRestaurant restaurant(params);
  restaurant.run(n, rng);
  return restaurant.to_sample();
}

namespace {

struct OrderingAccumulator {
  std::vector<std::vector<double>> sum, sum_sq;
  std::vector<std::uint64_t> visits;
  std::vector<double> msum, msum_sq;

  explicit OrderingAccumulator(int n)
      : sum(n), sum_sq(n), visits(n, 0), msum(n + 1, 0.0), msum_sq(n + 1, 0.0) {
    for (int k = 1; k <= n; ++k) {
      sum[k - 1].assign(k + 1, 0.0);
      sum_sq[k - 1].assign(k + 1, 0.0);
    }
  }

  void merge(const OrderingAccumulator& o) {
    for (std::size_t k = 0; k < sum.size(); ++k) {
      visits[k] += o.visits[k];
      for (std::size_t j = 0; j < sum[k].size(); ++j) {
        sum[k][j] += o.sum[k][j];
        sum_sq[k][j] += o.sum_sq[k][j];
      }
    }
    for (std::size_t j = 0; j < msum.size(); ++j) {
      msum[j] += o.msum[j];
      msum_sq[j] += o.msum_sq[j];
    }
  }
};

void mean_and_se(double s, double s2, std::uint64_t count, double& mean, double& se) {
  if (count == 0) {
    mean = se = std::nan("");
    return;
  }
  const double c = static_cast<double>(count);
  mean = s / c;
  const double var = count > 1 ? std::max(0.0, (s2 - c * mean * mean) / (c - 1.0)) : 0.0;
  se = std::sqrt(var / c);
}

}  // namespace

OrderingDistribution ordering_distribution(int n, const PypParams& params,
                                           std::uint64_t replicates, std::uint64_t seed) {
  if (n < 1 || replicates < 1) throw DomainError("ordering_distribution needs n, replicates >= 1");
  // Fixed chunking keeps the floating-point summation order independent of
  // the thread count.
  const std::size_t chunks = std::min<std::uint64_t>(replicates, 64);
  std::vector<OrderingAccumulator> parts(chunks, OrderingAccumulator(n));
  parallel_for(chunks, [&](std::size_t c) {
    OrderingAccumulator& acc = parts[c];
    for (std::uint64_t rep = c; rep < replicates; rep += chunks) {
      Rng rng(seed, rep);
      OrderedRestaurant restaurant(params);
      restaurant.run(n, rng);
      const auto probs = ordered_step_probs(restaurant.partition(), params);
      double total = 0.0;
      for (double p : probs.new_probs) total += p;
      const int k = restaurant.k();
      ++acc.visits[k - 1];
      for (int j = 0; j <= k; ++j) {
        const double q = probs.new_probs[j] / total;
        acc.sum[k - 1][j] += q;
        acc.sum_sq[k - 1][j] += q * q;
        acc.msum[j] += q;
        acc.msum_sq[j] += q * q;
      }
    }
  });
  for (std::size_t c = 1; c < chunks; ++c) parts[0].merge(parts[c]);
  const OrderingAccumulator& acc = parts[0];

  OrderingDistribution out;
  out.n = n;
  out.replicates = replicates;
  out.visits = acc.visits;
  out.mean.resize(n);
  out.se.resize(n);
  for (int k = 1; k <= n; ++k) {
    out.mean[k - 1].resize(k + 1);
    out.se[k - 1].resize(k + 1);
    if (acc.visits[k - 1] == 0) out.unvisited.push_back(k);
    for (int j = 0; j <= k; ++j) {
      mean_and_se(acc.sum[k - 1][j], acc.sum_sq[k - 1][j], acc.visits[k - 1],
                  out.mean[k - 1][j], out.se[k - 1][j]);
    }
  }
  out.marginal.resize(n + 1);
  out.marginal_se.resize(n + 1);
  for (int j = 0; j <= n; ++j) {
    mean_and_se(acc.msum[j], acc.msum_sq[j], replicates, out.marginal[j], out.marginal_se[j]);
  }
  return out;
}

std::uint64_t sample_zipf(double s, Rng& rng) {
  if (!(s > 1.0)) throw DomainError("Zipf exponent must exceed 1");
  const double b = std::pow(2.0, s - 1.0);
  for (;;) {
    const double u = rng.uniform_pos();
    const double v = rng.uniform();
    const double x = std::floor(std::pow(u, -1.0 / (s - 1.0)));
    if (!(x < 9.0e18)) continue;
    const double t = std::pow(1.0 + 1.0 / x, s - 1.0);
    if (v * x * (t - 1.0) / (b - 1.0) <= t / b) return static_cast<std::uint64_t>(x);
  }
}

MisspecProcess::MisspecProcess(const ClusteringSpec& clustering, const OrderingSpec& ordering)
    : clustering_(clustering), ordering_(ordering) {
  switch (clustering.kind) {
    case ClusteringKind::DP:
      PypParams(0.0, clustering.theta);
      break;
    case ClusteringKind::PYP:
      PypParams(clustering.alpha, clustering.theta);
      break;
    case ClusteringKind::Zipf:
      if (!(clustering.zipf_s > 1.0)) throw DomainError("Zipf exponent must exceed 1");
      break;
  }
  if (ordering.kind == OrderingKind::AlphaStable &&
      !(ordering.alpha > 0.0 && ordering.alpha < 1.0)) {
    throw DomainError("alpha-stable ordering needs alpha in (0,1)");
  }
}

int MisspecProcess::place_new(Rng& rng) {
  if (k() == 0) return 1;
  if (ordering_.kind == OrderingKind::AlphaStable) {
    const auto probs = ordered_step_probs_raw(partition_, ordering_.alpha, 0.0);
    double total = 0.0;
    for (double p : probs.new_probs) total += p;
    double u = rng.uniform() * total;
    for (std::size_t j = 0; j < probs.new_probs.size(); ++j) {
      u -= probs.new_probs[j];
      if (u < 0.0) return static_cast<int>(j) + 1;
    }
    return static_cast<int>(probs.new_probs.size());
  }
  return 0;  // arrival-weighted placement is resolved by the caller
}

void MisspecProcess::step(Rng& rng) {
  // Decide which cluster the observation joins; -1 means a new cluster.
  int target_id = -1;
  if (clustering_.kind == ClusteringKind::Zipf) {
    const std::uint64_t label = sample_zipf(clustering_.zipf_s, rng);
    auto it = zipf_ids_.find(label);
    if (it != zipf_ids_.end()) {
      target_id = it->second;
    } else {
      zipf_ids_.emplace(label, next_id_);
    }
  } else {
    const double a = clustering_.kind == ClusteringKind::PYP ? clustering_.alpha : 0.0;
    const double t = clustering_.theta;
    const double kk = k();
    double u = rng.uniform() * (t + n());
    u -= t + kk * a;
    if (u >= 0.0) {
      // Tables are scanned in order; the classical CRP is order-blind.
      for (const Table& tab : tables_) {
        u -= tab.count - a;
        if (u < 0.0) {
          target_id = tab.id;
          break;
        }
      }
      if (target_id < 0) target_id = tables_.back().id;
    }
  }

  if (target_id >= 0) {
    for (int j = 0; j < k(); ++j) {
      if (tables_[j].id == target_id) {
        join_table(j + 1);
        return;
      }
    }
    throw DomainError("internal: cluster id not found");
  }

  if (ordering_.kind == OrderingKind::ArrivalWeighted) {
    const double w = rng.exponential(static_cast<double>(next_id_ + 1));
    const auto pos = std::upper_bound(tables_.begin(), tables_.end(), w,
                                      [](double x, const Table& t) { return x < t.weight; });
    open_table(static_cast<int>(pos - tables_.begin()) + 1, w);
  } else {
    open_table(place_new(rng));
  }
}

void MisspecProcess::run(int steps, Rng& rng) {
  for (int i = 0; i < steps; ++i) step(rng);
}

ObservedSample misspec_simulate(int n, const ClusteringSpec& clustering,
                                const OrderingSpec& ordering, std::uint64_t seed) {
  if (n < 1) throw DomainError("misspec_simulate needs n >= 1");
  Rng rng(seed);
  MisspecProcess process(clustering, ordering);
  process.run(n, rng);
  return process.to_sample();
}

}  // namespace ossp
