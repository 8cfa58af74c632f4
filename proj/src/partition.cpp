#include "ossp/partition.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <unordered_map>
#include <utility>

#include "ossp/error.hpp"

namespace ossp {

PypParams::PypParams(double alpha, double theta) : alpha_(alpha), theta_(theta) {
  if (!(alpha >= 0.0 && alpha < 1.0)) {
    throw DomainError("alpha must lie in [0, 1), got " + std::to_string(alpha));
  }
  if (!(theta > 0.0) || !std::isfinite(theta)) {
    throw DomainError("theta must be positive and finite, got " + std::to_string(theta));
  }
}

OrderedPartition::OrderedPartition(std::vector<int> freqs) : freqs_(std::move(freqs)) {
  for (int m : freqs_) {
    if (m < 1) throw DomainError("ordered frequencies must be >= 1");
    n_ += m;
  }
}

std::vector<int> OrderedPartition::tails() const {
  std::vector<int> r(freqs_.size() + 1, 0);
  for (int j = k() - 1; j >= 0; --j) r[j] = r[j + 1] + freqs_[j];
  return r;
}

void OrderedPartition::insert_new(int j) {
  if (j < 1 || j > k() + 1) throw DomainError("new species order out of range");
  freqs_.insert(freqs_.begin() + (j - 1), 1);
  ++n_;
}

void OrderedPartition::add_to(int j) {
  if (j < 1 || j > k()) throw DomainError("species order out of range");
  ++freqs_[j - 1];
  ++n_;
}

ObservedSample reduce(std::vector<Record> records) {
  if (records.empty()) throw EmptyInput();

  struct Species {
    double weight;
    int first_seen;
    int count;
  };
  std::unordered_map<std::string, int> index;
  std::vector<Species> species;
  std::vector<int> record_species(records.size());
  for (std::size_t i = 0; i < records.size(); ++i) {
    const Record& rec = records[i];
    if (!std::isfinite(rec.weight)) {
      throw ParseError("non-finite weight for species '" + rec.species + "'");
    }
    auto [it, inserted] = index.try_emplace(rec.species, static_cast<int>(species.size()));
    if (inserted) {
      species.push_back({rec.weight, static_cast<int>(species.size()), 0});
    } else if (species[it->second].weight != rec.weight) {
      throw WeightConflict(rec.species);
    }
    ++species[it->second].count;
    record_species[i] = it->second;
  }

  std::vector<int> by_order(species.size());
  std::iota(by_order.begin(), by_order.end(), 0);
  std::stable_sort(by_order.begin(), by_order.end(), [&](int a, int b) {
    if (species[a].weight != species[b].weight) return species[a].weight > species[b].weight;
    return species[a].first_seen < species[b].first_seen;
  });

  std::vector<int> order_of(species.size());
  std::vector<int> freqs(species.size());
  ObservedSample out;
  out.arrival_order.resize(species.size());
  for (std::size_t j = 0; j < by_order.size(); ++j) {
    order_of[by_order[j]] = static_cast<int>(j);
    freqs[j] = species[by_order[j]].count;
    out.arrival_order[j] = species[by_order[j]].first_seen;
  }
  out.record_order.resize(records.size());
  for (std::size_t i = 0; i < records.size(); ++i) {
    out.record_order[i] = order_of[record_species[i]];
  }
  out.partition = OrderedPartition(std::move(freqs));
  out.records = std::move(records);
  return out;
}

std::vector<int> prefix_grid(int n, int d) {
  if (n < 1) throw DomainError("prefix grid needs n >= 1");
  if (d < 1 || d > n) throw DomainError("prefix grid needs 1 <= d <= n");
  std::vector<int> grid;
  grid.reserve(d);
  for (int i = 1; i <= d; ++i) {
    const int v = std::max(1, static_cast<int>(std::llround(static_cast<double>(i) * n / d)));
    if (grid.empty() || v > grid.back()) grid.push_back(v);
  }
  return grid;
}

PrefixStats prefix_stats(const ObservedSample& sample, int d) {
  return prefix_stats_at(sample, prefix_grid(sample.n(), d));
}

PrefixStats prefix_stats_at(const ObservedSample& sample, std::vector<int> sizes) {
  if (!std::is_sorted(sizes.begin(), sizes.end()) || sizes.empty() || sizes.front() < 1 ||
      sizes.back() > sample.n())
    throw DomainError("prefix sizes must be sorted within 1..n");
  PrefixStats stats;
  stats.grid = std::move(sizes);
  std::vector<int> counts(sample.k(), 0);
  int distinct = 0;
  int oldest = sample.k();  // smallest order seen so far
  std::size_t next = 0;
  for (int i = 0; i < sample.n(); ++i) {
    const int j = sample.record_order[i];
    if (counts[j]++ == 0) ++distinct;
    oldest = std::min(oldest, j);
    while (next < stats.grid.size() && stats.grid[next] == i + 1) {
      stats.k_at.push_back(distinct);
      stats.m1_at.push_back(counts[oldest]);
      ++next;
    }
  }
  return stats;
}

}  // namespace ossp
