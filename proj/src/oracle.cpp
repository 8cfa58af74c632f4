#include "ossp/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "ossp/error.hpp"
#include "ossp/ocrp.hpp"
#include "ossp/parallel.hpp"
#include "ossp/rng.hpp"

namespace ossp {

std::vector<EnumeratedComposition> enumerate_ordered_partitions(int n) {
  if (n < 1) throw DomainError("enumeration needs n >= 1");
  if (n > kEnumerationCap) throw CapExceeded("ordered partition enumeration is capped at n = 9");
  std::vector<std::uint64_t> fact(n + 1, 1);
  for (int i = 1; i <= n; ++i) fact[i] = fact[i - 1] * i;
  std::vector<EnumeratedComposition> out;
  std::vector<int> parts;
  std::function<void(int, std::uint64_t)> rec = [&](int rest, std::uint64_t denom) {
    if (rest == 0) {
      out.push_back({parts, fact[n] / denom});
      return;
    }
    for (int m = rest; m >= 1; --m) {
      parts.push_back(m);
      rec(rest - m, denom * fact[m]);
      parts.pop_back();
    }
  };
  rec(n, 1);
  return out;
}

double ConditionalMc::freq(std::uint64_t count) const {
  return accepted == 0 ? 0.0 : static_cast<double>(count) / static_cast<double>(accepted);
}

double ConditionalMc::se(std::uint64_t count) const {
  if (accepted == 0) return 0.0;
  const double p = freq(count);
  return std::sqrt(p * (1.0 - p) / static_cast<double>(accepted));
}

namespace {

constexpr double kMinAcceptance = 1e-4;
constexpr std::uint64_t kBatch = 1 << 14;

bool matches(const OrderedPartition& p, const McCondition& c) {
  if (c.k && p.k() != *c.k) return false;
  if (c.prefix.size() > static_cast<std::size_t>(p.k())) return false;
  for (std::size_t j = 0; j < c.prefix.size(); ++j)
    if (p.freqs()[j] != c.prefix[j]) return false;
  return true;
}

struct Outcome {
  bool accepted = false;
  int kmn = 0;
  int w1 = 0;
  bool a1 = false;
  std::vector<int> prior_prefix;
  // Leading r frequencies and whether all r leading tables are new / old.
  std::vector<int> lead;
  bool all_new = false;
  bool all_old = false;
};

void check_acceptance(std::uint64_t accepted, std::uint64_t attempts, std::uint64_t target) {
  if (attempts >= 100000 && static_cast<double>(accepted) < kMinAcceptance * attempts)
    throw AcceptanceTooLow("conditional Monte Carlo acceptance rate below 1e-4");
  // Enough attempts that a rate of 1e-4 would have produced the target.
  if (static_cast<double>(attempts) >= static_cast<double>(target) / kMinAcceptance + 100000 &&
      accepted < target)
    throw AcceptanceTooLow("conditional Monte Carlo acceptance rate below 1e-4");
}

}  // namespace

ConditionalMc conditional_mc(const McCondition& condition, int m, const PypParams& params,
                             std::uint64_t replicates, std::uint64_t seed, int prefix_depth) {
  if (condition.n < 1 || m < 0) throw DomainError("conditional_mc needs n >= 1, m >= 0");
  if (prefix_depth < 1) throw DomainError("prefix depth must be >= 1");
  const int n = condition.n;
  ConditionalMc out;
  out.kmn.assign(m + 1, 0);
  out.w1.assign(n + m, 0);
  out.w1_new.assign(n + m, 0);
  out.w1_old.assign(n + m, 0);

  std::vector<Outcome> batch(kBatch);
  while (out.accepted < replicates) {
    const std::uint64_t base = out.attempts;
    parallel_for(kBatch, [&](std::size_t i) {
      Rng rng(seed, base + i);
      OrderedRestaurant rest(params);
      rest.run(n, rng);
      Outcome& o = batch[i];
      o = Outcome{};
      if (!matches(rest.partition(), condition)) return;
      o.accepted = true;
      const int r = std::min(prefix_depth, rest.k());
      o.prior_prefix.assign(rest.partition().freqs().begin(), rest.partition().freqs().begin() + r);
      rest.mark_all_old();
      rest.run(m, rng);
      o.kmn = rest.new_table_count();
      const auto tables = rest.tables();
      o.w1 = tables[0].count;
      o.a1 = !tables[0].old;
      const int rr = std::min<int>(prefix_depth, static_cast<int>(tables.size()));
      o.all_new = o.all_old = rr == prefix_depth;
      for (int j = 0; j < rr; ++j) {
        o.lead.push_back(tables[j].count);
        o.all_new = o.all_new && !tables[j].old;
        o.all_old = o.all_old && tables[j].old;
      }
    });
    for (std::uint64_t i = 0; i < kBatch && out.accepted < replicates; ++i) {
      ++out.attempts;
      const Outcome& o = batch[i];
      if (!o.accepted) continue;
      ++out.accepted;
      ++out.kmn[o.kmn];
      ++out.w1[o.w1 - 1];
      if (o.a1) {
        ++out.a1;
        ++out.w1_new[o.w1 - 1];
      } else {
        ++out.b1;
        ++out.w1_old[o.w1 - 1];
      }
      ++out.prior_prefix[o.prior_prefix];
      if (o.all_new) ++out.new_prefix[o.lead];
      if (o.all_old) ++out.old_prefix[o.lead];
    }
    check_acceptance(out.accepted, out.attempts, replicates);
  }
  return out;
}

double OldestMc::freq() const {
  return accepted == 0 ? 0.0 : static_cast<double>(oldest) / static_cast<double>(accepted);
}

double OldestMc::se() const {
  if (accepted == 0) return 0.0;
  const double p = freq();
  return std::sqrt(p * (1.0 - p) / static_cast<double>(accepted));
}

OldestMc oldest_mc(int i, int n, const PypParams& params, std::uint64_t replicates,
                   std::uint64_t seed) {
  if (n < 1 || i < 1 || i > n) throw DomainError("oldest_mc needs 1 <= i <= n");
  OldestMc out;
  std::uint64_t attempts = 0;
  std::vector<signed char> batch(kBatch);  // -1 rejected, 0 not oldest, 1 oldest
  while (out.accepted < replicates) {
    const std::uint64_t base = attempts;
    parallel_for(kBatch, [&](std::size_t b) {
      Rng rng(seed, base + b);
      OrderedRestaurant rest(params);
      rest.run(n, rng);
      const int id = rest.seating()[0];
      const auto tables = rest.tables();
      const auto it = std::find_if(tables.begin(), tables.end(),
                                   [&](const Table& t) { return t.id == id; });
      batch[b] = it->count != i ? -1 : (it == tables.begin() ? 1 : 0);
    });
    for (std::uint64_t b = 0; b < kBatch && out.accepted < replicates; ++b) {
      ++attempts;
      if (batch[b] < 0) continue;
      ++out.accepted;
      out.oldest += static_cast<std::uint64_t>(batch[b]);
    }
    check_acceptance(out.accepted, attempts, replicates);
  }
  return out;
}

}  // namespace ossp
