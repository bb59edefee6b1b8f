#include <gtest/gtest.h>

#include <map>

#include <zkpcp/poly.hpp>
#include <zkpcp/random.hpp>

using namespace zkpcp;

namespace {

// X1*X2 + X1 with individual degree bounds (1,1)
MultiPoly x1x2_plus_x1() {
  MultiPoly p = MultiPoly::zero(DegreeBounds::uniform(2, 1));
  p.c[p.index({1, 1})] = 1;
  p.c[p.index({1, 0})] = 1;
  return p;
}

MultiPoly monomial(const DegreeBounds& b, std::vector<uint32_t> e, Fe c = 1) {
  MultiPoly p = MultiPoly::zero(b);
  p.c[p.index(e)] = c;
  return p;
}

}  // namespace

TEST(Poly, EvalBasics) {
  Field F(FieldSpec::prime(17));
  EXPECT_EQ(eval(F, x1x2_plus_x1(), {1, 1}), 2u);
  EXPECT_EQ(eval(F, MultiPoly::zero(DegreeBounds::uniform(3, 2)), {4, 5, 6}), 0u);
  try {
    eval(F, x1x2_plus_x1(), {1});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::ArityMismatch);
  }
}

TEST(Poly, LagrangeBasisExamples) {
  Field F5(FieldSpec::prime(5));
  auto L = lagrange_basis(F5, {{0, 1}}, {1});
  EXPECT_EQ(L.c, (Vec{0, 1}));
  auto L2 = lagrange_basis(F5, {{0, 1}, {0, 1}}, {1, 1});
  EXPECT_EQ(L2.c, monomial(DegreeBounds::uniform(2, 1), {1, 1}).c);
  Field F7(FieldSpec::prime(7));
  auto L3 = lagrange_basis(F7, {{0, 1, 2}}, {0});
  EXPECT_EQ(eval(F7, L3, {0}), 1u);
  EXPECT_EQ(eval(F7, L3, {1}), 0u);
  EXPECT_EQ(eval(F7, L3, {2}), 0u);
  EXPECT_EQ(L3.bounds.per_var[0], 2u);
  // (X-1)(X-2)/2 = 4X^2 + 2X + 1 over GF(7)
  EXPECT_EQ(L3.c, (Vec{1, 2, 4}));
  try {
    lagrange_basis(F7, {{0, 1}}, {3});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::PointNotInGrid);
  }
}

TEST(Poly, LagrangeIndicatorExhaustive) {
  Field F(FieldSpec::binary(4));
  Grid S = {{0, 1, 5, 9}, {2, 3, 4, 15}, {0, 7, 11, 13}};
  std::vector<Fe> a = {5, 3, 13};
  auto L = lagrange_basis(F, S, a);
  for (Fe x : S[0])
    for (Fe y : S[1])
      for (Fe z : S[2]) {
        bool hit = x == a[0] && y == a[1] && z == a[2];
        ASSERT_EQ(eval(F, L, {x, y, z}), hit ? 1u : 0u);
      }
}

TEST(Poly, VanishingPolynomial) {
  Field F(FieldSpec::prime(7));
  auto Z = vanishing_poly(F, {0, 1});
  EXPECT_EQ(Z.c, (Vec{0, 6, 1}));
  EXPECT_EQ(eval(F, Z, {3}), 6u);
  auto Z3 = vanishing_poly(F, {0, 1, 2});
  EXPECT_EQ(eval(F, Z3, {3}), 6u);
  for (Fe h : {0u, 1u, 2u}) EXPECT_EQ(eval(F, Z3, {h}), 0u);
}

TEST(Poly, PartialSumExamples) {
  Field F(FieldSpec::prime(17));
  auto g1 = partial_sum(F, x1x2_plus_x1(), {0, 1}, 1);
  EXPECT_EQ(g1.c, (Vec{0, 3}));
  auto c = MultiPoly::constant(DegreeBounds::uniform(3, 1), 5);
  auto g = partial_sum(F, c, {0, 1, 2}, 1);
  for (Fe x = 0; x < 17; ++x) EXPECT_EQ(eval(F, g, {x}), F.mul(5, 9));
  // X1 - X2 summed over H^2
  MultiPoly anti = MultiPoly::zero(DegreeBounds::uniform(2, 1));
  anti.c[anti.index({1, 0})] = 1;
  anti.c[anti.index({0, 1})] = 16;
  EXPECT_EQ(sum_over_grid(F, anti, {0, 1, 5}), 0u);
  try {
    partial_sum(F, anti, {0, 1}, 2);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::BadIndex);
  }
}

TEST(Poly, PartialSumTelescopes) {
  Field F(FieldSpec::prime(31));
  Rng rng(Seed::from_u64(11));
  std::vector<Fe> H = {0, 1, 4};
  auto p = random_poly(F, DegreeBounds::uniform(4, 3), rng);
  for (size_t i = 1; i + 1 < 4; ++i) {
    auto gi = partial_sum(F, p, H, i);
    auto gn = partial_sum(F, p, H, i + 1);
    for (int t = 0; t < 20; ++t) {
      std::vector<Fe> x(i);
      for (auto& v : x) v = F.random(rng);
      Fe s = 0;
      for (Fe b : H) {
        auto y = x;
        y.push_back(b);
        s = F.add(s, eval(F, gn, y));
      }
      ASSERT_EQ(s, eval(F, gi, x));
    }
  }
  Fe s = 0;
  auto g1 = partial_sum(F, p, H, 1);
  for (Fe b : H) s = F.add(s, eval(F, g1, {b}));
  EXPECT_EQ(s, sum_over_grid(F, p, H));
}

TEST(Poly, LdeFromTableExamples) {
  Field F5(FieldSpec::prime(5));
  auto X = lde_from_table(F5, {0, 1}, {0, 1}, 1);
  EXPECT_EQ(X.c, (Vec{0, 1}));
  auto AND = lde_from_table(F5, {0, 0, 0, 1}, {0, 1}, 2);
  EXPECT_EQ(AND.c, monomial(DegreeBounds::uniform(2, 1), {1, 1}).c);
  Field F7(FieldSpec::prime(7));
  auto ind = lde_from_table(F7, {1, 0, 0}, {0, 1, 2}, 1);
  EXPECT_EQ(ind.c, lagrange_basis(F7, {{0, 1, 2}}, {0}).c);
  try {
    lde_from_table(F7, {1, 0}, {0, 1, 2}, 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::IncompleteTable);
  }
}

TEST(Poly, LdeAgreesOnGridExhaustive) {
  Field F(FieldSpec::binary(4, 2));
  auto H = F.subfield_elements();
  Rng rng(Seed::from_u64(3));
  Vec vals(64);
  for (auto& v : vals) v = F.random(rng);
  auto p = lde_from_table(F, vals, H, 3);
  EXPECT_EQ(p.bounds.per_var, (std::vector<uint32_t>{3, 3, 3}));
  size_t i = 0;
  for (Fe a : H)
    for (Fe b : H)
      for (Fe c : H) ASSERT_EQ(eval(F, p, {a, b, c}), vals[i++]);
}

TEST(Poly, RandomUniformChiSquare) {
  Field F(FieldSpec::prime(3));
  Rng rng(Seed::from_u64(99));
  std::map<Vec, int> counts;
  const int N = 100000;
  for (int i = 0; i < N; ++i) counts[random_poly(F, DegreeBounds::uniform(1, 1), rng).c]++;
  ASSERT_EQ(counts.size(), 9u);
  double chi = 0, e = N / 9.0;
  for (auto& [k, v] : counts) chi += (v - e) * (v - e) / e;
  EXPECT_LT(chi, 26.12);  // chi2(8) at p = 0.001
  auto c = random_poly(F, DegreeBounds::total_degree(1, 0), rng);
  EXPECT_EQ(c.c.size(), 1u);
}

TEST(Poly, RandomRespectsTotalDegree) {
  Field F(FieldSpec::prime(7));
  Rng rng(Seed::from_u64(1));
  auto p = random_poly(F, DegreeBounds::total_degree(3, 2), rng);
  EXPECT_LE(total_degree(p), 2);
}

TEST(Poly, ReverseVars) {
  Field F(FieldSpec::prime(17));
  auto x1 = monomial(DegreeBounds::uniform(2, 1), {1, 0});
  EXPECT_EQ(reverse_vars(x1).c, monomial(DegreeBounds::uniform(2, 1), {0, 1}).c);
  auto sym = monomial(DegreeBounds::uniform(2, 1), {1, 1});
  EXPECT_EQ(reverse_vars(sym).c, sym.c);
  Rng rng(Seed::from_u64(2));
  for (int t = 0; t < 100; ++t) {
    auto p = random_poly(F, DegreeBounds::individual({1, 2, 3}), rng);
    auto r = reverse_vars(p);
    ASSERT_EQ(reverse_vars(r).c, p.c);
    std::vector<Fe> x = {F.random(rng), F.random(rng), F.random(rng)};
    ASSERT_EQ(eval(F, r, x), eval(F, p, {x[2], x[1], x[0]}));
  }
}

TEST(Poly, UnivariateFitCheck) {
  Field F17(FieldSpec::prime(17));
  Vec t(17);
  for (Fe x = 0; x < 17; ++x) t[x] = F17.mul(3, x);
  auto r = univariate_fit_check(F17, t, 3);
  EXPECT_TRUE(r.is_degree_le_d);
  EXPECT_EQ(r.distance, Rational(0));
  EXPECT_EQ(r.nearest, (Vec{0, 3, 0, 0}));

  Field F5(FieldSpec::prime(5));
  Vec sq = {0, 1, 4, 4, 1};
  auto r2 = univariate_fit_check(F5, sq, 1);
  EXPECT_FALSE(r2.is_degree_le_d);
  // independent oracle: all 25 lines
  size_t best = 6;
  for (Fe a = 0; a < 5; ++a)
    for (Fe b = 0; b < 5; ++b) {
      size_t d = 0;
      for (Fe x = 0; x < 5; ++x) d += F5.add(a, F5.mul(b, x)) != sq[x];
      best = std::min(best, d);
    }
  EXPECT_EQ(r2.distance, Rational(best, 5));
  EXPECT_TRUE(Rational(0) < r2.distance);

  auto r3 = univariate_fit_check(F5, Vec(5, 3), 0);
  EXPECT_TRUE(r3.is_degree_le_d);
}

TEST(Poly, BerlekampWelchMatchesEnumeration) {
  Field F(FieldSpec::prime(17));
  Rng rng(Seed::from_u64(8));
  for (int t = 0; t < 20; ++t) {
    Vec c = {F.random(rng), F.random(rng), F.random(rng)};
    Vec tab(17);
    for (Fe x = 0; x < 17; ++x) tab[x] = uni_eval(F, c, x);
    for (int k = 0; k < 5; ++k) tab[rng.below(17)] = F.random(rng);
    auto bw = univariate_fit_check(F, tab, 2, 0);
    ASSERT_TRUE(bw.exact);
    size_t best = 18;
    for (Fe a = 0; a < 17; ++a)
      for (Fe b = 0; b < 17; ++b)
        for (Fe c2 = 0; c2 < 17; ++c2) {
          size_t d = 0;
          for (Fe x = 0; x < 17; ++x) d += uni_eval(F, {a, b, c2}, x) != tab[x];
          best = std::min(best, d);
        }
    ASSERT_EQ(bw.distance, Rational(best, 17));
  }
}

TEST(Poly, SumOverGridExamples) {
  Field F(FieldSpec::prime(17));
  MultiPoly p = MultiPoly::zero(DegreeBounds::uniform(2, 1));
  p.c[p.index({1, 0})] = 1;
  p.c[p.index({0, 1})] = 1;
  auto s = sum_over_vars(F, p, {0, 1}, {1});
  EXPECT_EQ(s.c, (Vec{1, 2}));
  Rng rng(Seed::from_u64(4));
  std::vector<Fe> H = {0, 1};
  auto Z = embed(vanishing_poly(F, H), 2, {0});
  auto prod = mul(F, Z, random_poly(F, DegreeBounds::uniform(2, 2), rng));
  EXPECT_EQ(sum_over_grid(F, prod, H), 0u);
  for (int t = 0; t < 100; ++t) {
    size_t m = 1 + t % 3;
    auto q = random_poly(F, DegreeBounds::uniform(m, 2), rng);
    std::vector<Fe> H3 = {0, 2, 9};
    Fe brute = grid_sum(F, m, H3, [&](const std::vector<Fe>& x) { return eval(F, q, x); });
    ASSERT_EQ(brute, sum_over_grid(F, q, H3));
  }
}

TEST(Poly, InterpolateFromEvaluatorAndEvalTable) {
  Field F(FieldSpec::prime(11));
  Rng rng(Seed::from_u64(6));
  auto p = random_poly(F, DegreeBounds::individual({2, 3}), rng);
  auto q = interpolate_from_evaluator(F, {2, 3}, [&](const std::vector<Fe>& x) { return eval(F, p, x); });
  EXPECT_EQ(q.c, p.c);
  auto tab = eval_table(F, p);
  for (Fe x = 0; x < 11; ++x)
    for (Fe y = 0; y < 11; ++y) ASSERT_EQ(tab[x * 11 + y], eval(F, p, {x, y}));
}

TEST(Poly, LineCachedEvalMatchesDirect) {
  Field F(FieldSpec::binary(6));
  Rng rng(Seed::from_u64(12));
  auto p = random_poly(F, DegreeBounds::total_degree(3, 4), rng);
  auto r = random_poly(F, DegreeBounds::uniform(3, 2), rng);
  LineCachedEval ev(F, {&p, &r});
  std::vector<Fe> base = {1, 2, 3}, dir = {5, 0, 7};
  for (Fe t = 0; t < 64; ++t) {
    std::vector<Fe> x(3);
    for (int j = 0; j < 3; ++j) x[j] = F.add(base[j], F.mul(t, dir[j]));
    auto v = ev.eval(x);
    ASSERT_EQ(v[0], eval(F, p, x));
    ASSERT_EQ(v[1], eval(F, r, x));
  }
  std::vector<Fe> off = {9, 9, 9};
  EXPECT_EQ(ev.eval(off)[0], eval(F, p, off));
}

TEST(Poly, JsonRoundTrip) {
  Field F(FieldSpec::prime(13));
  Rng rng(Seed::from_u64(1));
  auto p = random_poly(F, DegreeBounds::individual({1, 2}), rng);
  auto q = poly_from_json(poly_to_json(p));
  EXPECT_EQ(q.c, p.c);
  EXPECT_EQ(q.bounds, p.bounds);
}

TEST(GridFile, RoundTripAndRejectsDamage) {
  for (auto spec : {FieldSpec::prime(17), FieldSpec::binary(8, 1), FieldSpec::prime(257)}) {
    Field F(spec);
    Rng rng(Seed::from_u64(spec.p + spec.e));
    Vec v(F.order() * F.order());
    for (auto& x : v) x = F.random(rng);
    auto bytes = grid_to_bytes(F, 2, v);
    auto g = grid_from_bytes(bytes);
    EXPECT_EQ(g.m, 2u);
    EXPECT_EQ(g.values, v);
    EXPECT_EQ(nlohmann::json(g.field), nlohmann::json(spec));
    bytes.pop_back();
    EXPECT_THROW(grid_from_bytes(bytes), Error);
  }
  Field F(FieldSpec::prime(5));
  EXPECT_THROW(grid_to_bytes(F, 1, Vec{1, 2}), Error);
  std::vector<uint8_t> junk{'n', 'o', 'p', 'e', 0, 0, 0, 0, 0, 0, 0, 0};
  EXPECT_THROW(grid_from_bytes(junk), Error);
}
