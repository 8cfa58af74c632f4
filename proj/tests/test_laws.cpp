#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <random>

#include "exact.hpp"
#include "ossp/error.hpp"
#include "ossp/laws.hpp"
#include "ossp/ocrp.hpp"
#include "ossp/oracle.hpp"

using namespace ossp;
using exact::Q;

namespace {

double sum(const std::vector<double>& v) { return std::accumulate(v.begin(), v.end(), 0.0); }

double rel_err(double got, double want) { return std::abs(got - want) / std::max(std::abs(want), 1e-300); }

// Exact Pr[M_1..M_r = prefix, K_n >= r] (and jointly with K_n = k when k > 0).
Q exact_prefix_law(int n, const std::vector<int>& prefix, const Q& a, const Q& t, int k = 0) {
  Q s = 0;
  for (const auto& c : exact::compositions(n)) {
    if (c.size() < prefix.size()) continue;
    if (k > 0 && static_cast<int>(c.size()) != k) continue;
    if (!std::equal(prefix.begin(), prefix.end(), c.begin())) continue;
    s += exact::multiplicity(c) * exact::ordered_eppf(c, a, t);
  }
  return s;
}

// Restricted-growth enumeration of every set partition of [n]; calls f(block sizes).
template <class F>
void for_each_set_partition(int n, F f) {
  std::vector<int> label(n, 0);
  auto rec = [&](auto&& self, int i, int blocks) -> void {
    if (i == n) {
      std::vector<int> sizes(blocks, 0);
      for (int l : label) ++sizes[l];
      f(sizes);
      return;
    }
    for (int b = 0; b <= blocks; ++b) {
      label[i] = b;
      self(self, i + 1, std::max(blocks, b + 1));
    }
  };
  rec(rec, 0, 0);
}

bool within_3se(std::uint64_t count, std::uint64_t total, double p) {
  const double f = static_cast<double>(count) / total;
  return std::abs(f - p) <= 3 * std::sqrt(p * (1 - p) / total) + 1e-12;
}

}  // namespace

TEST_CASE("EPPF examples") {
  const std::vector<int> one{1}, two{2}, pair{1, 1};
  CHECK(log_eppf(one, PypParams(0.4, 3.0)).log_magnitude == doctest::Approx(0.0));
  CHECK(log_eppf(two, PypParams(0.0, 1.0)).log_magnitude == doctest::Approx(std::log(0.5)));
  CHECK(log_ordered_eppf(one, PypParams(0.7, 0.2)).log_magnitude == doctest::Approx(0.0));
  CHECK(log_ordered_eppf(pair, PypParams(0.0, 1.0)).log_magnitude == doctest::Approx(std::log(0.25)));
}

TEST_CASE("EPPF sums to one over the set partitions of [6]") {
  const PypParams p(0.5, 2.0);
  double total = 0.0;
  for_each_set_partition(6, [&](const std::vector<int>& sizes) {
    total += std::exp(log_eppf(sizes, p).log_magnitude);
  });
  CHECK(std::abs(total - 1.0) < 1e-10);
}

TEST_CASE("EPPF and ordered EPPF agree with exact rationals") {
  std::mt19937_64 gen(4);
  std::uniform_int_distribution<int> kd(1, 6), md(1, 5);
  const std::pair<Q, Q> params[] = {{Q(0), Q(3, 2)}, {Q(1, 3), Q(1)}, {Q(4, 5), Q(7)}};
  for (const auto& [a, t] : params) {
    const PypParams p(exact::to_double(a), exact::to_double(t));
    for (int rep = 0; rep < 30; ++rep) {
      std::vector<int> ms(kd(gen));
      for (int& m : ms) m = md(gen);
      CHECK(rel_err(std::exp(log_eppf(ms, p).log_magnitude), exact::to_double(exact::eppf(ms, a, t))) < 1e-12);
      CHECK(rel_err(std::exp(log_ordered_eppf(ms, p).log_magnitude),
                    exact::to_double(exact::ordered_eppf(ms, a, t))) < 1e-12);
    }
  }
}

TEST_CASE("summing the ordered EPPF over block orders gives the EPPF") {
  std::mt19937_64 gen(11);
  std::uniform_int_distribution<int> kd(1, 7), md(1, 9);
  std::uniform_real_distribution<double> ad(0.0, 0.99), td(0.01, 20.0);
  for (int rep = 0; rep < 60; ++rep) {
    std::vector<int> ms(kd(gen));
    for (int& m : ms) m = md(gen);
    const PypParams p(ad(gen), td(gen));
    std::vector<int> perm(ms.size());
    std::iota(perm.begin(), perm.end(), 0);
    double s = 0.0;
    do {
      std::vector<int> v;
      for (int i : perm) v.push_back(ms[i]);
      s += std::exp(log_ordered_eppf(v, p).log_magnitude);
    } while (std::next_permutation(perm.begin(), perm.end()));
    CHECK(rel_err(s, std::exp(log_eppf(ms, p).log_magnitude)) < 1e-10);
  }
}

TEST_CASE("permutation identity behind the marginalization") {
  std::mt19937_64 gen(12);
  std::uniform_int_distribution<int> kd(1, 7), md(1, 12);
  std::uniform_real_distribution<double> ad(0.0, 0.99), td(0.01, 20.0);
  for (int rep = 0; rep < 60; ++rep) {
    std::vector<int> ms(kd(gen));
    for (int& m : ms) m = md(gen);
    const double a = ad(gen), t = td(gen);
    std::vector<int> perm(ms.size());
    std::iota(perm.begin(), perm.end(), 0);
    double lhs = 0.0;
    do {
      double prod = 1.0 / t;
      for (std::size_t j = 0; j < perm.size(); ++j) {
        double tail = 0.0, after = 0.0;
        for (std::size_t l = j; l < perm.size(); ++l) tail += ms[perm[l]];
        after = tail - ms[perm[j]];
        prod *= (a * after + t * ms[perm[j]]) / tail;
      }
      lhs += prod;
    } while (std::next_permutation(perm.begin(), perm.end()));
    double rhs = 1.0;
    for (std::size_t i = 1; i < ms.size(); ++i) rhs *= t + i * a;
    CHECK(rel_err(lhs, rhs) < 1e-10);
  }
}

TEST_CASE("K_n law") {
  CHECK(dist_Kn(1, PypParams(0.3, 1.0)) == std::vector<double>{1.0});
  for (int n : {2, 17, 60, 200}) {
    for (const auto& p : {PypParams(0.0, 0.5), PypParams(0.25, 10.0), PypParams(0.9, 0.01)}) {
      const auto d = dist_Kn(n, p);
      CHECK(d.size() == static_cast<std::size_t>(n));
      CHECK(std::abs(sum(d) - 1.0) < 1e-10);
    }
  }
  for (int n = 1; n <= 9; ++n) {
    for (const auto& [a, t] : {std::pair<Q, Q>{Q(0), Q(2)}, {Q(1, 2), Q(1)}, {Q(3, 4), Q(1, 10)}}) {
      const auto want = exact::k_law(n, a, t);
      const auto got = dist_Kn(n, PypParams(exact::to_double(a), exact::to_double(t)));
      for (int k = 1; k <= n; ++k) CHECK(got[k - 1] == doctest::Approx(exact::to_double(want[k])).epsilon(1e-12));
    }
  }
  CHECK(log_prob_Kn(0, 0, PypParams(0.5, 1.0)) == 0.0);
}

TEST_CASE("K_5 law matches ordered-CRP frequencies") {
  const PypParams p(0.5, 1.0);
  const auto law = dist_Kn(5, p);
  std::vector<std::uint64_t> counts(5, 0);
  for (std::uint64_t i = 0; i < 100000; ++i) {
    Rng rng(516, i);
    OrderedRestaurant r(p);
    r.run(5, rng);
    ++counts[r.k() - 1];
  }
  for (int k = 1; k <= 5; ++k) CHECK(within_3se(counts[k - 1], 100000, law[k - 1]));
}

TEST_CASE("K_m^(n) law") {
  CHECK(dist_Kmn(0, 5, 2, PypParams(0.5, 1.0)) == std::vector<double>{1.0});
  CHECK(dist_Kmn(1, 5, 3, PypParams(0.0, 2.0))[1] == doctest::Approx(2.0 / 7.0));
  for (const auto& p : {PypParams(0.0, 0.3), PypParams(0.4, 5.0), PypParams(0.95, 0.05)})
    for (int m : {1, 10, 150}) CHECK(std::abs(sum(dist_Kmn(m, 40, 7, p)) - 1.0) < 1e-10);

  // Exact law given K_5 = 3: average the continuation law over every ordered
  // configuration with three blocks. The law given the full configuration is
  // not a function of (n, k) alone.
  for (const auto& [a, t] : {std::pair<Q, Q>{Q(0), Q(3, 2)}, {Q(2, 5), Q(1)}, {Q(7, 8), Q(1, 4)}}) {
    const int m = 4;
    std::vector<Q> want(m + 1, Q(0));
    Q total = 0;
    for (const auto& c : exact::compositions(5)) {
      if (c.size() != 3) continue;
      const Q w = exact::multiplicity(c) * exact::ordered_eppf(c, a, t);
      total += w;
      for (const auto& [s, pr] : exact::continuation_law(c, m, a, t))
        want[std::count(s.old.begin(), s.old.end(), false)] += w * pr;
    }
    const auto got = dist_Kmn(m, 5, 3, PypParams(exact::to_double(a), exact::to_double(t)));
    for (int s = 0; s <= m; ++s)
      CHECK(got[s] == doctest::Approx(exact::to_double(want[s] / total)).epsilon(1e-11));
  }
}

TEST_CASE("K_4^(6) given K_6 = 2 matches conditional Monte Carlo") {
  const PypParams p(0.5, 1.0);
  const auto mc = conditional_mc(McCondition{6, 2, {}}, 4, p, 100000, 6402);
  const auto law = dist_Kmn(4, 6, 2, p);
  for (int s = 0; s <= 4; ++s) CHECK(within_3se(mc.kmn[s], mc.accepted, law[s]));
}

TEST_CASE("expected number of species") {
  CHECK(expected_Kn(1, PypParams(0.6, 3.0)) == doctest::Approx(1.0));
  CHECK(expected_Kn(3, PypParams(0.0, 1.0)) == doctest::Approx(11.0 / 6.0));
  const auto check_kn = [](int n, const PypParams& p) {
    const auto d = dist_Kn(n, p);
    double e = 0.0;
    for (int k = 1; k <= n; ++k) e += k * d[k - 1];
    CHECK(rel_err(expected_Kn(n, p), e) < 1e-9);
  };
  check_kn(50, PypParams(0.5, 2.0));
  check_kn(300, PypParams(0.1, 0.02));
  check_kn(120, PypParams(0.0, 7.0));
  check_kn(80, PypParams(1e-9, 3.0));
  for (const auto& p : {PypParams(0.5, 2.0), PypParams(0.0, 4.0), PypParams(0.9, 0.1), PypParams(1e-9, 1.0)}) {
    const auto d = dist_Kmn(60, 25, 6, p);
    double e = 0.0;
    for (int s = 0; s <= 60; ++s) e += s * d[s];
    CHECK(rel_err(expected_Kmn(60, 25, 6, p), e) < 1e-9);
  }
  CHECK(expected_Kmn(0, 10, 3, PypParams(0.5, 1.0)) == 0.0);
}

TEST_CASE("probability that a species is the oldest") {
  for (const auto& p : {PypParams(0.0, 1.0), PypParams(0.5, 3.0), PypParams(0.9, 0.2)})
    for (int n : {1, 7, 300}) CHECK(prob_oldest(n, n, p) == doctest::Approx(1.0));
  CHECK(prob_oldest(250, 1000, PypParams(0.0, 10.0)) == 0.25);
  for (int i = 1; i <= 40; ++i) {
    CHECK(prob_oldest(i, 40, PypParams(0.0, 3.7)) == static_cast<double>(i) / 40);
    CHECK(prob_oldest(i, 40, PypParams(0.0, 3.7), OldestFormula::Unshifted) ==
          static_cast<double>(i) / 40);
  }
  for (int n = 2; n <= 8; ++n) {
    for (const auto& [a, t] : {std::pair<Q, Q>{Q(1, 2), Q(1)}, {Q(1, 5), Q(3)}, {Q(9, 10), Q(1, 2)}}) {
      const PypParams p(exact::to_double(a), exact::to_double(t));
      const auto curve = prob_oldest_curve(n, p);
      for (int i = 1; i <= n; ++i) {
        const double want = exact::to_double(exact::oldest_given_size(i, n, a, t));
        CHECK(prob_oldest(i, n, p) == doctest::Approx(want).epsilon(1e-11));
        CHECK(curve[i - 1] == doctest::Approx(want).epsilon(1e-11));
      }
    }
  }
}

TEST_CASE("oldest-species probability at n = 8, i = 3 matches Monte Carlo") {
  const PypParams p(0.5, 1.0);
  const auto mc = oldest_mc(3, 8, p, 100000, 803);
  const double want = prob_oldest(3, 8, p);
  CHECK(std::abs(mc.freq() - want) <= 3 * mc.se());
}

TEST_CASE("unshifted oldest-species formula differs from the exact law for alpha > 0") {
  const PypParams p(0.5, 1.0);
  CHECK(prob_oldest(3, 8, p, OldestFormula::Unshifted) == doctest::Approx(0.26725).epsilon(1e-4));
  CHECK(prob_oldest(3, 8, p) == doctest::Approx(0.25397).epsilon(1e-4));
  const auto curve = prob_oldest_curve(30, p, OldestFormula::Unshifted);
  for (int i = 1; i <= 30; ++i)
    CHECK(curve[i - 1] == doctest::Approx(prob_oldest(i, 30, p, OldestFormula::Unshifted)).epsilon(1e-12));
}

TEST_CASE("first-order law: sole species and the closed form for r = 1") {
  const std::vector<int> one{1};
  CHECK(prior_first_r(1, one, PypParams(0.4, 2.0)).log_magnitude == doctest::Approx(0.0));
  const double a = 0.3, t = 1.5;
  const int n = 7;
  for (int m1 = 1; m1 <= n; ++m1) {
    double rising = 1.0, lower = 1.0;
    for (int i = 0; i < m1; ++i) rising *= t + n - m1 + i;
    for (int i = 0; i < m1 - 1; ++i) lower *= 1 - a + i;
    const double binom = std::exp(std::lgamma(n + 1.0) - std::lgamma(m1 + 1.0) - std::lgamma(n - m1 + 1.0));
    const double closed = binom * (a * (n - m1) + t * m1) / (n * rising) * lower;
    const std::vector<int> pre{m1};
    CHECK(rel_err(std::exp(prior_first_r(n, pre, PypParams(a, t)).log_magnitude), closed) < 1e-10);
  }
}

TEST_CASE("first-order law normalizes for every n up to 100") {
  for (const auto& p : {PypParams(0.0, 1.0), PypParams(0.5, 0.5), PypParams(0.95, 30.0)}) {
    for (int n = 1; n <= 100; ++n) {
      const auto d = prior_M1(n, p);
      CHECK(std::abs(sum(d) - 1.0) < 1e-10);
      double direct = 0.0;
      for (int m1 = 1; m1 <= n; ++m1) {
        const std::vector<int> pre{m1};
        direct += std::exp(prior_first_r(n, pre, p).log_magnitude);
      }
      CHECK(std::abs(direct - 1.0) < 1e-10);
    }
  }
  const auto d = prior_M1(40, PypParams(0.3, 2.0));
  double e = 0.0;
  for (int m1 = 1; m1 <= 40; ++m1) e += m1 * d[m1 - 1];
  CHECK(rel_err(expected_M1(40, PypParams(0.3, 2.0)), e) < 1e-10);
}

TEST_CASE("two-order law sums to Pr[K_6 >= 2]") {
  const PypParams p(0.35, 1.7);
  double s = 0.0;
  for (int a = 1; a <= 5; ++a)
    for (int b = 1; a + b <= 6; ++b) {
      const std::vector<int> pre{a, b};
      s += std::exp(prior_first_r(6, pre, p).log_magnitude);
    }
  CHECK(std::abs(s - (1.0 - dist_Kn(6, p)[0])) < 1e-10);
}

TEST_CASE("first-r law matches exact enumeration") {
  const Q a(2, 5), t(3, 2);
  const PypParams p(0.4, 1.5);
  const std::vector<std::vector<int>> prefixes{{1}, {3}, {2, 2}, {1, 4}, {1, 1, 1}, {2, 1, 3}};
  for (const auto& pre : prefixes) {
    const double want = exact::to_double(exact_prefix_law(7, pre, a, t));
    CHECK(std::exp(prior_first_r(7, pre, p).log_magnitude) == doctest::Approx(want).epsilon(1e-11));
  }
  const std::vector<int> too_big{5, 3};
  CHECK_THROWS_AS(prior_first_r(7, too_big, p), DomainError);
}

TEST_CASE("first-r law given K_n") {
  const std::vector<int> one{1};
  CHECK(std::exp(prior_first_r_given_k(6, one, 6, PypParams(0.2, 1.0)).log_magnitude) ==
        doctest::Approx(1.0));
  double s = 0.0;
  for (int m1 = 1; m1 <= 4; ++m1) {
    const std::vector<int> pre{m1};
    s += std::exp(prior_first_r_given_k(5, pre, 2, PypParams(0.5, 1.0)).log_magnitude);
  }
  CHECK(std::abs(s - 1.0) < 1e-10);

  for (const auto& [a, t] : {std::pair<Q, Q>{Q(0), Q(2)}, {Q(1, 2), Q(1)}, {Q(4, 5), Q(1, 3)}}) {
    const PypParams p(exact::to_double(a), exact::to_double(t));
    for (int k = 2; k <= 5; ++k) {
      const Q pk = exact::k_law(7, a, t)[k];
      for (const auto& pre : std::vector<std::vector<int>>{{1}, {2}, {1, 1}, {3, 1}, {2, 2}}) {
        if (std::accumulate(pre.begin(), pre.end(), 0) > 7 - k + static_cast<int>(pre.size())) continue;
        const double want = exact::to_double(exact_prefix_law(7, pre, a, t, k) / pk);
        CHECK(std::exp(prior_first_r_given_k(7, pre, k, p).log_magnitude) ==
              doctest::Approx(want).epsilon(1e-11));
      }
    }
  }
}

TEST_CASE("first-two law given K_6 = 3 matches conditional Monte Carlo") {
  const PypParams p(0.5, 1.0);
  const auto mc = conditional_mc(McCondition{6, 3, {}}, 0, p, 100000, 6302, 2);
  for (int a = 1; a <= 4; ++a)
    for (int b = 1; a + b <= 5; ++b) {
      const std::vector<int> pre{a, b};
      const double want = std::exp(prior_first_r_given_k(6, pre, 3, p).log_magnitude);
      const auto it = mc.prior_prefix.find(pre);
      const std::uint64_t c = it == mc.prior_prefix.end() ? 0 : it->second;
      CHECK(within_3se(c, mc.accepted, want));
    }
}
