#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "uts/error.hpp"
#include "uts/multiindex.hpp"

using namespace uts;

TEST_CASE("graded-lex unrank in one and two variables") {
  CHECK(Enumeration::graded_lex(1).unrank(3) == MultiIndex{3});
  const Enumeration e = Enumeration::graded_lex(2);
  const std::vector<MultiIndex> expected = {{0, 0}, {0, 1}, {1, 0}, {0, 2}, {1, 1}, {2, 0}};
  for (std::size_t k = 0; k < expected.size(); ++k) CHECK(e.unrank(k) == expected[k]);
}

TEST_CASE("graded-lex agrees with a brute-force sorted listing") {
  for (std::size_t d : {1u, 2u, 3u, 4u}) {
    const auto list = oracle::graded_lex_list(d, 8);
    const Enumeration e = Enumeration::graded_lex(d);
    for (std::size_t k = 0; k < list.size(); ++k) {
      REQUIRE(e.unrank(k) == MultiIndex(list[k]));
      REQUIRE(e.rank(MultiIndex(list[k])) == k);
    }
  }
}

TEST_CASE("every scheme is a bijection on the first 10^4 indices") {
  for (std::size_t d : {1u, 2u, 3u}) {
    for (const auto& e : {Enumeration::graded_lex(d), Enumeration::graded_revlex(d), Enumeration::diagonal_cantor(d)}) {
      for (std::uint64_t k = 0; k < 10'000; ++k) REQUIRE(e.rank(e.unrank(k)) == k);
    }
  }
}

TEST_CASE("graded schemes are degree-monotone, diagonal-cantor is not graded") {
  for (const auto& e : {Enumeration::graded_lex(3), Enumeration::graded_revlex(3)}) {
    CHECK(e.graded());
    int prev = 0;
    for (std::uint64_t k = 0; k < 5000; ++k) {
      const int t = e.unrank(k).total();
      REQUIRE(t >= prev);
      prev = t;
    }
  }
  CHECK_FALSE(Enumeration::diagonal_cantor(2).graded());
}

TEST_CASE("graded-revlex is graded-lex of the reversed tuple") {
  const Enumeration lex = Enumeration::graded_lex(3);
  const Enumeration rev = Enumeration::graded_revlex(3);
  for (std::uint64_t k = 0; k < 500; ++k) {
    const MultiIndex m = rev.unrank(k);
    CHECK(lex.unrank(k) == MultiIndex{m[2], m[1], m[0]});
  }
}

TEST_CASE("explicit tables") {
  const Enumeration t = Enumeration::explicit_table({{0, 0}, {1, 0}, {0, 1}}, true);
  CHECK(t.unrank(1) == MultiIndex{1, 0});
  CHECK(t.unrank(3) == Enumeration::graded_lex(2).unrank(3));
  CHECK(t.rank(MultiIndex{0, 1}) == 2);
  CHECK(t.graded());
  CHECK(t.tag() == "explicit-table");
  const Enumeration closed = Enumeration::explicit_table({{2}, {0}}, false);
  CHECK_THROWS_AS(closed.unrank(2), DomainError);
  CHECK_THROWS_AS(closed.rank(MultiIndex{1}), DomainError);
  CHECK_THROWS_AS(Enumeration::explicit_table({{0, 0}, {2, 0}}, true), DomainError);
  CHECK_THROWS_AS(Enumeration::explicit_table({{0}, {0}}, false), DomainError);
}

TEST_CASE("enumeration tags round trip") {
  for (const char* tag : {"graded-lex", "graded-revlex", "diagonal-cantor"})
    CHECK(Enumeration::from_tag(tag, 2).tag() == tag);
  CHECK_THROWS_AS(Enumeration::from_tag("lex", 2), SchemaError);
}

TEST_CASE("capture index examples") {
  CHECK(capture_index(Enumeration::graded_lex(1), MultiIndex{5}) == 5);
  CHECK(capture_index(Enumeration::graded_lex(2), MultiIndex{1, 1}) == 4);
  CHECK(capture_index(Enumeration::graded_lex(2), MultiIndex{0, 0}) == 0);
}

TEST_CASE("capture index matches a brute-force scan") {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> deg(0, 4);
  for (std::size_t d : {1u, 2u, 3u}) {
    const auto list = oracle::graded_lex_list(d, 12);
    for (int trial = 0; trial < 40; ++trial) {
      std::vector<int> l(d);
      for (auto& v : l) v = deg(rng);
      CHECK(capture_index(Enumeration::graded_lex(d), MultiIndex(l)) == oracle::brute_capture(list, l));
    }
  }
}

TEST_CASE("family F_l") {
  const auto f1 = family_Fl(0, 1, 1);
  REQUIRE(f1.size() == 2);
  CHECK(f1.front().is_identity());
  CHECK(f1[1].exponents == MultiIndex{1});
  CHECK(family_Fl(1, 1, 2).size() == 6);
  for (int l = 1; l <= 4; ++l) {
    const auto f = family_Fl(2, 2, l);
    CHECK(f.front().is_identity());
    CHECK(f.size() == binomial(4 + l, l));
    for (const auto& op : f) CHECK(op.order() <= l);
  }
  CHECK_THROWS_AS(family_Fl(1, 1, 0), DomainError);
}

TEST_CASE("index sets") {
  CHECK(IndexSet::all().contains(17));
  const IndexSet even = IndexSet::from_tag("mu:arith:0,2");
  CHECK(even.contains(40));
  CHECK_FALSE(even.contains(41));
  CHECK(*even.first_at_or_after(41) == 42);
  CHECK(even.tag() == "mu:arith:0,2");
  const IndexSet listed = IndexSet::from_tag("mu:list:3,7,20+");
  CHECK(listed.contains(7));
  CHECK_FALSE(listed.contains(8));
  CHECK(listed.contains(25));
  CHECK(*listed.first_at_or_after(8) == 20);
  CHECK(listed.tag() == "mu:list:3,7,20+");
  CHECK_THROWS_AS(IndexSet::from_tag("mu:list:3,7"), SchemaError);
  CHECK_THROWS_AS(IndexSet::from_tag("mu:arith:1,0"), DomainError);
  CHECK_THROWS_AS(IndexSet::from_tag("mu:odd"), SchemaError);
}

TEST_CASE("cantor pairing and binomials") {
  for (std::uint64_t k = 0; k < 2000; ++k) {
    const auto [x, y] = cantor_unpair(k);
    CHECK(cantor_pair(x, y) == k);
  }
  CHECK(binomial(10, 3) == 120);
  CHECK(binomial(5, 7) == 0);
  CHECK(binomial(200, 100) == UINT64_MAX);
}
