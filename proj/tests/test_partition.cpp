#include <doctest.h>

#include <algorithm>
#include <random>
#include <sstream>

#include "ossp/csv.hpp"
#include "ossp/error.hpp"
#include "ossp/ocrp.hpp"
#include "ossp/partition.hpp"

using namespace ossp;

TEST_CASE("PypParams domain") {
  CHECK_NOTHROW(PypParams(0.0, 1e-9));
  CHECK_NOTHROW(PypParams(0.999, 5.0));
  CHECK_THROWS_AS(PypParams(1.0, 1.0), DomainError);
  CHECK_THROWS_AS(PypParams(-0.1, 1.0), DomainError);
  CHECK_THROWS_AS(PypParams(0.5, 0.0), DomainError);
  CHECK_THROWS_AS(PypParams(0.5, -0.3), DomainError);
}

TEST_CASE("OrderedPartition tails and updates") {
  OrderedPartition p({3, 1, 2});
  CHECK(p.n() == 6);
  CHECK(p.k() == 3);
  CHECK(p.tails() == std::vector<int>{6, 3, 2, 0});
  p.insert_new(2);
  CHECK(std::vector<int>(p.freqs().begin(), p.freqs().end()) == std::vector<int>{3, 1, 1, 2});
  p.add_to(4);
  CHECK(std::vector<int>(p.freqs().begin(), p.freqs().end()) == std::vector<int>{3, 1, 1, 3});
  CHECK(p.n() == 8);
  CHECK_THROWS_AS(p.insert_new(6), DomainError);
  CHECK_THROWS_AS(p.add_to(0), DomainError);
  CHECK_THROWS_AS(OrderedPartition({2, 0}), DomainError);
  CHECK(OrderedPartition().n() == 0);
}

TEST_CASE("reduce examples") {
  const auto one = reduce({{5.0, "a"}});
  CHECK(one.partition == OrderedPartition({1}));
  const auto two = reduce({{5.0, "a"}, {9.0, "b"}, {5.0, "a"}});
  CHECK(two.partition == OrderedPartition({1, 2}));
  CHECK(two.arrival_order == std::vector<int>{1, 0});
  CHECK(two.record_order == std::vector<int>{1, 0, 1});
}

TEST_CASE("reduce errors") {
  CHECK_THROWS_AS(reduce({}), EmptyInput);
  CHECK_THROWS_AS(reduce({{1.0, "a"}, {2.0, "a"}}), WeightConflict);
  CHECK_THROWS_AS(reduce({{std::nan(""), "a"}}), ParseError);
}

TEST_CASE("weight ties go to the earlier first appearance") {
  const auto s = reduce({{1.0, "late"}, {4.0, "x"}, {4.0, "y"}, {4.0, "x"}});
  // x appeared before y, so x is older.
  CHECK(s.partition == OrderedPartition({2, 1, 1}));
  CHECK(s.arrival_order == std::vector<int>{1, 2, 0});
}

TEST_CASE("reduce is invariant to record permutation with distinct weights") {
  const auto base = simulate(300, PypParams(0.4, 3.0), 11);
  std::mt19937_64 gen(5);
  for (int rep = 0; rep < 5; ++rep) {
    auto recs = base.records;
    std::shuffle(recs.begin(), recs.end(), gen);
    const auto again = reduce(recs);
    CHECK(again.partition == base.partition);
    CHECK(again.n() == static_cast<int>(recs.size()));
  }
}

TEST_CASE("simulate, serialize, re-reduce round trip") {
  const auto s = simulate(1000, PypParams(0.5, 2.0), 3);
  std::stringstream buf;
  write_records(buf, s.records);
  const auto back = reduce(read_records(buf));
  CHECK(back.partition == s.partition);
  CHECK(back.record_order == s.record_order);
}

TEST_CASE("prefix grid and statistics") {
  CHECK(prefix_grid(10, 1) == std::vector<int>{10});
  CHECK(prefix_grid(10, 5) == std::vector<int>{2, 4, 6, 8, 10});
  CHECK(prefix_grid(3, 3) == std::vector<int>{1, 2, 3});
  CHECK_THROWS_AS(prefix_grid(5, 6), DomainError);

  const auto s = simulate(400, PypParams(0.3, 5.0), 8);
  const auto ps = prefix_stats(s, 20);
  CHECK(ps.grid.size() == 20);
  CHECK(ps.k_at.back() == s.k());
  CHECK(ps.m1_at.back() == s.m1());
  CHECK(std::is_sorted(ps.k_at.begin(), ps.k_at.end()));

  // Independent recomputation on each prefix.
  for (std::size_t g = 0; g < ps.grid.size(); ++g) {
    const auto prefix = reduce({s.records.begin(), s.records.begin() + ps.grid[g]});
    CHECK(ps.k_at[g] == prefix.k());
    CHECK(ps.m1_at[g] == prefix.m1());
  }
}

TEST_CASE("csv parsing") {
  std::istringstream ok("\xEF\xBB\xBFweight,species\n1.5,a\n2,\"b,c\"\r\n1.5,a\n");
  const auto recs = read_records(ok);
  REQUIRE(recs.size() == 3);
  CHECK(recs[1].species == "b,c");
  CHECK(recs[1].weight == 2.0);

  std::istringstream no_header("1.5,a\n");
  CHECK_THROWS_AS(read_records(no_header), ParseError);
  std::istringstream bad_weight("weight,species\nabc,a\n");
  CHECK_THROWS_AS(read_records(bad_weight), ParseError);
  std::istringstream extra("weight,species\n1,a,b\n");
  CHECK_THROWS_AS(read_records(extra), ParseError);
  std::istringstream after_quote("weight,species\n1,\"a\"b\n");
  CHECK_THROWS_AS(read_records(after_quote), ParseError);
  CHECK_THROWS_AS(read_records_file("/nonexistent/file.csv"), ParseError);

  CHECK(format_double(0.1) == "0.1");
  CHECK(format_double(2.0) == "2");
  CHECK(csv_field("a\"b") == "\"a\"\"b\"");
}
