#include <gtest/gtest.h>

#include <zkpcp/oracle.hpp>
#include <zkpcp/random.hpp>

using namespace zkpcp;

TEST(Oracle, DenseLookup) {
  auto o = Oracle::dense("A", {{5}, {7}, {9}});
  EXPECT_EQ(o.query({1}), Symbol{7});
  EXPECT_EQ(o.kind(), Backing::Dense);
}

TEST(Oracle, BudgetFiresBeforeServing) {
  Transcript t;
  auto o = Oracle::dense("A", {{5}, {7}, {9}});
  o.set_budget(2);
  o.record_to(&t);
  o.query({0});
  o.query({1});
  try {
    o.query({2});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::BudgetExceeded);
  }
  EXPECT_EQ(t.size(), 2u);
  EXPECT_EQ(o.served(), 2u);
}

TEST(Oracle, LazyFunction) {
  Field F(FieldSpec::prime(5));
  Oracle o("sq", {5}, 1, [&](const Index& i) { return Symbol{F.mul(i[0], i[0])}; });
  EXPECT_EQ(o.query({3}), Symbol{4});
  try {
    o.query({5});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::OutOfDomain);
  }
}

TEST(Oracle, ConcatDispatchAndAggregate) {
  auto a = Oracle::dense("A", {{1}, {2}});
  auto b = Oracle::dense("B", {{3}, {4}});
  auto s = OracleSet::concat({&a, &b});
  EXPECT_EQ(s.query("B", {0}), Symbol{3});
  s.query("A", {1});
  s.query("A", {0});
  EXPECT_EQ(s.aggregate_served(), a.served() + b.served());
  try {
    s.query("C", {0});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::OutOfDomain);
  }
  auto a2 = Oracle::dense("A", {{1}});
  try {
    s.add(&a2);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::DuplicateId);
  }
  s.set_aggregate_budget(3);
  try {
    s.query("B", {1});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::BudgetExceeded);
  }
}

TEST(Oracle, TranscriptJsonLines) {
  Transcript t;
  auto o = Oracle::dense("A", {{5, 6}});
  o.record_to(&t);
  o.query({0});
  auto line = nlohmann::json::parse(t.to_jsonl());
  EXPECT_EQ(line["oracle"], "A");
  EXPECT_EQ(line["seq"], 0);
  EXPECT_EQ(line["answer"], (std::vector<Fe>{5, 6}));
}

TEST(Oracle, ViewDistanceMetric) {
  EXPECT_EQ(view_distance({{1}, {2}, {3}}, {{1}, {2}, {3}}), Rational(0));
  EXPECT_EQ(view_distance({{1}, {2}, {3}}, {{1}, {0}, {3}}), Rational(1, 3));
  try {
    view_distance({{1}}, {{1}, {2}});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::LengthMismatch);
  }
  Rng rng(Seed::from_u64(3));
  for (int t = 0; t < 200; ++t) {
    std::vector<Symbol> a(6), b(6), c(6);
    for (int i = 0; i < 6; ++i) {
      a[i] = {Fe(rng.below(3))};
      b[i] = {Fe(rng.below(3))};
      c[i] = {Fe(rng.below(3))};
    }
    ASSERT_EQ(view_distance(a, b), view_distance(b, a));
    ASSERT_FALSE(view_distance(a, b) + view_distance(b, c) < view_distance(a, c));
  }
}

TEST(Oracle, DistanceToAccepting) {
  std::vector<std::vector<Symbol>> alpha(3, {{0}, {1}, {2}});
  auto sum_zero = [](const std::vector<Symbol>& v) { return (v[0][0] + v[1][0] + v[2][0]) % 3 == 0; };
  EXPECT_EQ(distance_to_accepting_exhaustive({{0}, {1}, {2}}, alpha, sum_zero).value, Rational(0));
  EXPECT_EQ(distance_to_accepting_exhaustive({{0}, {1}, {1}}, alpha, sum_zero).value, Rational(1, 3));
  auto never = [](const std::vector<Symbol>&) { return false; };
  EXPECT_EQ(distance_to_accepting_exhaustive({{0}, {1}, {1}}, alpha, never).value, Rational(1));
  auto pinned = [](const std::vector<Symbol>& v) { return v[0][0] == 2 && v[1][0] == 2 && v[2][0] == 2; };
  EXPECT_EQ(distance_to_accepting_exhaustive({{0}, {2}, {1}}, alpha, pinned).value, Rational(2, 3));
  std::vector<std::vector<Symbol>> huge(30, {{0}, {1}, {2}});
  try {
    distance_to_accepting_exhaustive(std::vector<Symbol>(30, {0}), huge, never);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::SearchSpaceTooLarge);
  }
}
