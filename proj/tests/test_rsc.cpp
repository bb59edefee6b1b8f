#include <gtest/gtest.h>

#include <zkpcp/rsc.hpp>

using namespace zkpcp;

namespace {

MultiPoly x1x2_plus_x1(uint32_t cap = 1) {
  MultiPoly p = MultiPoly::zero(DegreeBounds::uniform(2, cap));
  p.c[p.index({1, 1})] = 1;
  p.c[p.index({1, 0})] = 1;
  return p;
}

Oracle poly_oracle(const Field& F, const MultiPoly& p) {
  auto sp = std::make_shared<MultiPoly>(p);
  const Field* Fp = &F;
  return Oracle("F", std::vector<uint32_t>(p.m(), F.order()), 1,
                [sp, Fp](const Index& i) { return Symbol{eval(*Fp, *sp, std::vector<Fe>(i.begin(), i.end()))}; });
}

SumInstance micro(const Field& F, Fe gamma = 3) {
  SumInstance s;
  s.F = &F;
  s.m = 2;
  s.d = 3;
  s.H = {0, 1};
  s.gamma = gamma;
  s.delta = Rational(1, 2);
  return s;
}

}  // namespace

TEST(Rsc, InstanceValidation) {
  Field F(FieldSpec::prime(17));
  auto s = micro(F);
  EXPECT_NO_THROW(s.validate());
  s.m = 1;
  EXPECT_THROW(s.validate(), Error);
  s = micro(F);
  s.d = 2;
  EXPECT_THROW(s.validate(), Error);
  s = micro(F);
  s.delta = Rational(1, 3);
  EXPECT_THROW(s.validate(), Error);
}

TEST(Rsc, ProveExamples) {
  Field F(FieldSpec::prime(17));
  auto inst = micro(F);
  auto pr = rsc_prove(inst, x1x2_plus_x1());
  for (Fe a = 0; a < 17; ++a) EXPECT_EQ(pr.symbol({a}), Symbol{F.mul(3, a)});
  auto z = rsc_prove(micro(F, 0), MultiPoly::zero(DegreeBounds::uniform(2, 1)));
  for (Fe a = 0; a < 17; ++a) EXPECT_EQ(z.symbol({a}), Symbol{0});
  auto one = rsc_prove(micro(F, 4), MultiPoly::constant(DegreeBounds::uniform(2, 0), 1));
  for (Fe a = 0; a < 17; ++a) EXPECT_EQ(one.symbol({a}), Symbol{2});
  MultiPoly high = MultiPoly::zero(DegreeBounds::uniform(2, 4));
  high.c[high.index({4, 0})] = 1;
  try {
    rsc_prove(inst, high);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::DegreeTooHigh);
  }
}

TEST(Rsc, CompletenessAllCoins) {
  Field F(FieldSpec::prime(17));
  auto inst = micro(F);
  auto pr = rsc_prove(inst, x1x2_plus_x1());
  auto pi = pr.oracle("pi");
  auto f = poly_oracle(F, x1x2_plus_x1());
  for (Fe c = 0; c < 17; ++c)
    for (uint64_t seed = 0; seed < 10; ++seed) {
      Rng rng(Seed::from_u64(seed));
      auto r = rsc_verify(inst, f, pi, {c}, rng);
      ASSERT_TRUE(r.accept) << rsc_step_name(r.step);
    }
}

TEST(Rsc, CompletenessLargerInstance) {
  Field F(FieldSpec::prime(97));
  Rng rng(Seed::from_u64(3));
  SumInstance inst{&F, 4, 3, {0, 1}, 0, Rational(1, 2)};
  auto p = random_poly(F, DegreeBounds::uniform(4, 3), rng);
  inst.gamma = sum_over_grid(F, p, inst.H);
  auto pr = rsc_prove(inst, p);
  auto pi = pr.oracle("pi");
  auto f = poly_oracle(F, p);
  for (int t = 0; t < 40; ++t) ASSERT_TRUE(rsc_verify(inst, f, pi, random_coins(F, 3, rng), rng).accept);
}

TEST(Rsc, ZeroProofRejectedAtFirstSum) {
  Field F(FieldSpec::prime(17));
  auto inst = micro(F);
  RscProof zero{&F, 2, {MultiPoly::zero(DegreeBounds::uniform(1, 0))}};
  auto pi = zero.oracle("pi");
  auto f = poly_oracle(F, x1x2_plus_x1());
  for (Fe c = 0; c < 17; ++c) {
    Rng rng(Seed::from_u64(c));
    auto r = rsc_verify(inst, f, pi, {c}, rng);
    ASSERT_FALSE(r.accept);
    ASSERT_EQ(r.step, RscStep::FirstSum);
  }
}

TEST(Rsc, CascadeForgeryCaughtAtFinalStep) {
  Field F(FieldSpec::prime(17));
  auto honest_inst = micro(F);
  auto pr = rsc_prove(honest_inst, x1x2_plus_x1());
  auto forged = rsc_cascade_forgery(honest_inst, pr, 4, 0);
  auto inst = micro(F, 4);
  auto pi = forged.oracle("pi");
  auto f = poly_oracle(F, x1x2_plus_x1());
  int rejected = 0;
  for (Fe c = 0; c < 17; ++c) {
    Rng rng(Seed::from_u64(c));
    auto r = rsc_verify(inst, f, pi, {c}, rng);
    if (!r.accept) {
      ++rejected;
      EXPECT_EQ(r.step, RscStep::Final);
    }
  }
  EXPECT_EQ(rejected, 16);  // only c = 1 (root of L_{H,0}) escapes
}

TEST(Rsc, CascadeForgeryDeepInstance) {
  Field F(FieldSpec::prime(101));
  Rng rng(Seed::from_u64(5));
  SumInstance inst{&F, 4, 4, {0, 1, 2}, 0, Rational(1, 2)};
  auto p = random_poly(F, DegreeBounds::uniform(4, 4), rng);
  inst.gamma = sum_over_grid(F, p, inst.H);
  auto pr = rsc_prove(inst, p);
  auto forged = rsc_cascade_forgery(inst, pr, F.add(inst.gamma, 1), 1);
  auto finst = inst;
  finst.gamma = F.add(inst.gamma, 1);
  auto pi = forged.oracle("pi");
  auto f = poly_oracle(F, p);
  for (int t = 0; t < 200; ++t) {
    auto c = random_coins(F, 3, rng);
    auto r = rsc_verify(finst, f, pi, c, rng);
    bool escapes = false;
    for (Fe x : c) escapes = escapes || x == 0 || x == 2;
    ASSERT_EQ(r.accept, escapes);
    if (!r.accept) ASSERT_EQ(r.step, RscStep::Final);
  }
}

TEST(Rsc, AxisDistanceStructuredMatchesExhaustive) {
  Field F(FieldSpec::prime(5));
  SumInstance inst{&F, 2, 2, {0}, 1, Rational(9, 10)};
  inst.validate();
  Rng rng(Seed::from_u64(7));
  for (int t = 0; t < 6; ++t) {
    RscAxisView v;
    for (int a = 0; a < 5; ++a) v.pi.push_back({Fe(rng.below(5))});
    for (int a = 0; a < 5; ++a) v.f.push_back(Fe(rng.below(5)));
    Fe c = Fe(rng.below(5));
    auto ex = rsc_axis_distance_exhaustive(inst, {c}, v);
    auto st = rsc_axis_distance_structured(inst, {c}, v);
    ASSERT_EQ(ex.value, st.value);
  }
}

TEST(Rsc, AxisDistanceHonestZeroAndFarPositive) {
  Field F(FieldSpec::prime(11));
  SumInstance inst{&F, 2, 3, {0, 1}, 3, Rational(6, 10)};
  auto pr = rsc_prove(inst, x1x2_plus_x1());
  auto pi = pr.oracle("pi");
  auto f = poly_oracle(F, x1x2_plus_x1());
  RscProof zero{&F, 2, {MultiPoly::zero(DegreeBounds::uniform(1, 0))}};
  auto zpi = zero.oracle("z");
  Rational sum(0);
  for (Fe c = 0; c < 11; ++c) {
    InputFn in = [&](const std::vector<Fe>& x) { return f.query1(to_index(x)); };
    auto hv = rsc_read_axes(inst, in, pi, {c});
    EXPECT_EQ(rsc_axis_distance_structured(inst, {c}, hv).value, Rational(0));
    auto zv = rsc_read_axes(inst, in, zpi, {c});
    sum = sum + rsc_axis_distance_structured(inst, {c}, zv).value;
  }
  EXPECT_TRUE(Rational(0) < sum);
}
