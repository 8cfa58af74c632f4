#include <doctest.h>

#include <cmath>
#include <numeric>

#include "ossp/error.hpp"
#include "ossp/laws.hpp"
#include "ossp/oracle.hpp"
#include "ossp/posterior.hpp"

using namespace ossp;

namespace {

double mass(int n, const PypParams& p) {
  double s = 0.0;
  for (const auto& c : enumerate_ordered_partitions(n))
    s += c.multiplicity * std::exp(log_ordered_eppf(c.freqs, p).log_magnitude);
  return s;
}

}  // namespace

TEST_CASE("enumeration of small ordered partitions") {
  const auto one = enumerate_ordered_partitions(1);
  REQUIRE(one.size() == 1);
  CHECK(one[0].freqs == std::vector<int>{1});
  CHECK(one[0].multiplicity == 1);

  const auto two = enumerate_ordered_partitions(2);
  REQUIRE(two.size() == 2);
  for (const auto& c : two) CHECK(c.multiplicity == (c.freqs.size() == 1 ? 1u : 2u));
  CHECK(mass(2, PypParams(0.0, 1.0)) == doctest::Approx(1.0));

  // Ordered Bell (Fubini) numbers count the ordered set partitions.
  const std::uint64_t fubini[] = {1, 3, 13, 75, 541, 4683, 47293, 545835, 7087261};
  for (int n = 1; n <= 9; ++n) {
    const auto all = enumerate_ordered_partitions(n);
    CHECK(all.size() == (std::size_t{1} << (n - 1)));
    std::uint64_t total = 0;
    for (const auto& c : all) total += c.multiplicity;
    CHECK(total == fubini[n - 1]);
  }
  CHECK_THROWS_AS(enumerate_ordered_partitions(10), CapExceeded);
  CHECK_THROWS_AS(enumerate_ordered_partitions(0), DomainError);
}

TEST_CASE("enumerated mass is one and reproduces the K_n law") {
  CHECK(std::abs(mass(6, PypParams(0.5, 2.0)) - 1.0) < 1e-10);
  for (const auto& p : {PypParams(0.0, 0.3), PypParams(0.8, 0.05), PypParams(0.3, 12.0)}) {
    for (int n = 1; n <= 9; ++n) CHECK(std::abs(mass(n, p) - 1.0) < 1e-10);
    std::vector<double> k_law(9, 0.0);
    for (const auto& c : enumerate_ordered_partitions(9))
      k_law[c.freqs.size() - 1] += c.multiplicity * std::exp(log_ordered_eppf(c.freqs, p).log_magnitude);
    const auto d = dist_Kn(9, p);
    for (int k = 1; k <= 9; ++k) CHECK(k_law[k - 1] == doctest::Approx(d[k - 1]).epsilon(1e-10));
  }
}

TEST_CASE("conditional Monte Carlo: degenerate and reproducible") {
  const auto trivial = conditional_mc(McCondition{1, 1, {}}, 0, PypParams(0.5, 1.0), 1000, 1);
  CHECK(trivial.accepted == 1000);
  CHECK(trivial.attempts == 1000);
  CHECK(trivial.kmn[0] == 1000);
  CHECK(trivial.w1[0] == 1000);
  CHECK(trivial.b1 == 1000);
  CHECK(trivial.a1 == 0);

  const McCondition c{5, 2, {3}};
  const auto a = conditional_mc(c, 3, PypParams(0.5, 1.0), 5000, 9);
  const auto b = conditional_mc(c, 3, PypParams(0.5, 1.0), 5000, 9);
  CHECK(a.attempts == b.attempts);
  CHECK(a.w1 == b.w1);
  CHECK(a.kmn == b.kmn);
  CHECK(a.acceptance_rate() > 0.0);
  CHECK(a.acceptance_rate() < 1.0);

  CHECK_THROWS_AS(conditional_mc(McCondition{9, 9, {}}, 0, PypParams(0.0, 0.001), 10, 1), AcceptanceTooLow);
}

TEST_CASE("conditional Monte Carlo agrees with the event probability and posterior mean") {
  const PypParams p(0.5, 1.0);
  const auto mc = conditional_mc(McCondition{5, 2, {3}}, 3, p, 100000, 523);
  const auto ev = prob_A1_B1(5, 3, p);
  CHECK(std::abs(mc.freq(mc.b1) - ev.prob_B1) <= 3 * mc.se(mc.b1));

  double mean = 0.0, sq = 0.0;
  for (std::size_t w = 1; w <= mc.w1.size(); ++w) {
    mean += static_cast<double>(w) * mc.w1[w - 1];
    sq += static_cast<double>(w * w) * mc.w1[w - 1];
  }
  mean /= mc.accepted;
  const double var = sq / mc.accepted - mean * mean;
  const double se = std::sqrt(var / mc.accepted);
  CHECK(std::abs(mean - expected_W1(5, 3, 2, 3, p).expected) <= 3 * se);
}

TEST_CASE("oldest-species Monte Carlo") {
  const auto one = oldest_mc(1, 1, PypParams(0.5, 1.0), 100, 3);
  CHECK(one.accepted == 100);
  CHECK(one.freq() == 1.0);
  const auto dp = oldest_mc(2, 6, PypParams(0.0, 2.0), 50000, 4);
  CHECK(std::abs(dp.freq() - 2.0 / 6.0) <= 3 * dp.se());
  CHECK_THROWS_AS(oldest_mc(7, 6, PypParams(0.0, 2.0), 10, 1), DomainError);
}
