#include <gtest/gtest.h>

#include <zkpcp/linalg.hpp>
#include <zkpcp/random.hpp>

using namespace zkpcp;

TEST(Linalg, SolveAffineUnique) {
  Field F(FieldSpec::prime(7));
  Mat A = {{1, 1}, {1, 6}};
  Vec b = {3, 1};  // x+y=3, x-y=1 -> x=2, y=1
  auto s = solve_affine(F, A, b, 2);
  EXPECT_EQ(s.particular, (Vec{2, 1}));
  EXPECT_TRUE(s.kernel.empty());
}

TEST(Linalg, SolveAffineKernelAndInconsistency) {
  Field F(FieldSpec::prime(5));
  Mat A = {{1, 2, 0}};
  auto s = solve_affine(F, A, Vec{4}, 3);
  EXPECT_EQ(s.kernel.size(), 2u);
  for (auto& k : s.kernel) EXPECT_EQ(dot(F, A[0], k), 0u);
  EXPECT_EQ(dot(F, A[0], s.particular), 4u);
  Mat B = {{1, 1}, {2, 2}};
  try {
    solve_affine(F, B, Vec{1, 3}, 2);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::InconsistentConstraints);
  }
}

TEST(Linalg, EchelonCoefficientsReconstruct) {
  Field F(FieldSpec::binary(4));
  Rng rng(Seed::from_u64(5));
  EchelonBasis E(F, 6);
  std::vector<Vec> inserted;
  for (int i = 0; i < 4; ++i) {
    Vec v(6);
    for (auto& x : v) x = F.random(rng);
    if (E.insert(v)) inserted.push_back(v);
  }
  Vec combo(6, 0);
  std::vector<Fe> w = {3, 0, 7, 1};
  for (size_t i = 0; i < inserted.size(); ++i) axpy(F, combo, w[i], inserted[i]);
  Vec coef;
  Vec r = E.reduce(combo, &coef);
  EXPECT_TRUE(EchelonBasis::is_zero(r));
  Vec back(6, 0);
  for (size_t i = 0; i < inserted.size(); ++i) axpy(F, back, coef[i], inserted[i]);
  EXPECT_EQ(back, combo);
}
