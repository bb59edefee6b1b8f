#include <gtest/gtest.h>

#include <set>

#include <zkpcp/harness/exact_checks.hpp>
#include <zkpcp/osat_sim.hpp>

using namespace zkpcp;

namespace {

OSatInstance micro_instance(bool satisfiable) {
  OSatInstance in;
  in.B.nvars = 3;
  if (satisfiable)
    in.B.clauses = {{1, 2, 3}};
  else
    in.B.clauses = {{1, 2}, {-1, -2}};
  return in;
}

Cnf random_3cnf(Rng& rng, size_t nvars, size_t nclauses) {
  Cnf c;
  c.nvars = nvars;
  for (size_t j = 0; j < nclauses; ++j) {
    std::vector<int> cl;
    for (int t = 0; t < 3; ++t) {
      int v = int(rng.below(nvars)) + 1;
      cl.push_back(rng.below(2) ? v : -v);
    }
    c.clauses.push_back(cl);
  }
  return c;
}

std::vector<Fe> random_point(const Field& F, size_t n, Rng& rng) { return random_coins(F, n, rng); }

}  // namespace

TEST(OSat, EncodeSingleClauseAllTrue) {
  Cnf phi{3, {{1, 2, 3}}};
  auto e = osat_encode_from_3sat(phi);
  std::vector<uint8_t> A(size_t(1) << e.inst.s, 1);
  EXPECT_TRUE(osat_check_direct(e.inst, A));
}

TEST(OSat, EncodeContradictionHasNoOracle) {
  Cnf phi{1, {{1}, {-1}}};
  auto e = osat_encode_from_3sat(phi, 2);
  ASSERT_EQ(e.inst.s, 2u);
  for (uint32_t a = 0; a < 16; ++a) {
    std::vector<uint8_t> A(4);
    for (int i = 0; i < 4; ++i) A[i] = (a >> i) & 1;
    EXPECT_FALSE(osat_check_direct(e.inst, A));
  }
}

TEST(OSat, EncodeRoundTripAgreesWithBruteForce) {
  Rng rng(7);
  for (int t = 0; t < 40; ++t) {
    Cnf phi = random_3cnf(rng, 4, 1 + rng.below(10));
    auto e = osat_encode_from_3sat(phi);
    bool phi_sat = false, any_A = false;
    for (uint32_t a = 0; a < 16; ++a) {
      std::vector<uint8_t> x(4);
      for (int i = 0; i < 4; ++i) x[i] = (a >> i) & 1;
      if (phi.eval(x)) {
        phi_sat = true;
        EXPECT_TRUE(osat_check_direct(e.inst, e.translate(x)));
      }
      if (osat_check_direct(e.inst, e.translate(x))) any_A = true;
    }
    EXPECT_EQ(phi_sat, any_A);
  }
  EXPECT_THROW(osat_encode_from_3sat(Cnf{5, {{1, 2, 5}}}, 2), Error);
}

TEST(OSat, CheckDirectTrivialCases) {
  OSatInstance all;
  all.B.nvars = 3;
  EXPECT_TRUE(osat_check_direct(all, {0}));
  EXPECT_TRUE(osat_check_direct(all, {1}));
  OSatInstance contra;
  contra.B.nvars = 3;
  contra.B.clauses = {{1}, {-1}};
  EXPECT_FALSE(osat_check_direct(contra, {0}));
  EXPECT_FALSE(osat_check_direct(contra, {1}));
  EXPECT_THROW(osat_check_direct(contra, {0, 1}), Error);
}

TEST(OSat, ArithmetizationModes) {
  Field F(FieldSpec::binary(8, 1));
  Cnf tru{3, {}};
  BHat t(F, tru, Arith::Multilinear);
  for (Fe a = 0; a < 8; ++a) EXPECT_EQ(t.eval({Fe(a & 1), Fe((a >> 1) & 1), Fe(a >> 2)}), 0u);

  Cnf one{3, {{1, 2, 3}}};
  BHat ml(F, one, Arith::Multilinear);
  Rng rng(3);
  for (int i = 0; i < 100; ++i) {
    auto v = random_point(F, 3, rng);
    Fe want = F.mul(F.sub(1, v[0]), F.mul(F.sub(1, v[1]), F.sub(1, v[2])));
    EXPECT_EQ(ml.eval(v), want);
  }
  for (int t2 = 0; t2 < 10; ++t2) {
    Cnf B = random_3cnf(rng, 7, 6);
    BHat a(F, B, Arith::Multilinear), b(F, B, Arith::Formula);
    for (uint32_t x = 0; x < 128; ++x) {
      std::vector<Fe> v(7);
      for (int j = 0; j < 7; ++j) v[j] = (x >> j) & 1;
      std::vector<uint8_t> bits(v.begin(), v.end());
      EXPECT_EQ(a.eval(v), B.eval(bits) ? 0u : 1u);
      EXPECT_EQ(b.eval(v), a.eval(v));
    }
    EXPECT_EQ(b.total_degree(), 18u);
  }
}

TEST(OSat, LexMap) {
  Field F(FieldSpec::binary(4, 2));
  LexMap g(F, {0, 1}, 2);
  EXPECT_EQ(g.bits({0, 1}), (std::vector<uint8_t>{0, 1}));
  auto H = F.subfield_elements();
  ASSERT_EQ(H.size(), 4u);
  LexMap g4(F, H, 1);
  std::set<std::vector<uint8_t>> seen;
  for (Fe h : H) {
    auto b = g4.bits({h});
    seen.insert(b);
    auto e = g4.ext({h});
    EXPECT_EQ(std::vector<Fe>(b.begin(), b.end()), e);
  }
  EXPECT_EQ(seen.size(), 4u);
  EXPECT_THROW(LexMap::checked(F, H, 2, 3), Error);
}

TEST(OSat, SummandG) {
  Field F(FieldSpec::binary(8, 1));
  OSatSystem sys(micro_instance(true), OSatParams::make(F, micro_instance(true), 1, Arith::Multilinear));
  PointFn one = [](const std::vector<Fe>&) { return Fe(1); };
  PointFn zero = [](const std::vector<Fe>&) { return Fe(0); };
  EXPECT_EQ(sys.g_A(one, {1, 0, 0}), 0u);     // B true
  EXPECT_EQ(sys.g_A(zero, {0, 1, 0}), 0u);    // B true
  EXPECT_NE(sys.g_A(zero, {0, 0, 0}), 0u);    // the failing row of a falsifying oracle
  EXPECT_EQ(sys.g_A(one, {0, 0, 0}), 0u);     // A(b_i) = 1 - a_i
  Fe s = 0;
  for (auto& w : osat_grid(sys)) s = F.add(s, sys.g_A(one, w));
  EXPECT_EQ(s, 0u);
}

TEST(OSat, SumGHIdentityRandomPoints) {
  Field F(FieldSpec::binary(4, 2));
  Rng rng(11);
  OSatInstance in;
  in.r = 0;
  in.s = 2;
  in.B = random_3cnf(rng, 9, 4);
  auto p = OSatParams::make(F, in, 1, Arith::Multilinear);
  OSatSystem sys(in, p);
  for (int t = 0; t < 5; ++t) {
    MultiPoly C = random_poly(F, p.c_bounds(), rng);
    PointFn chat = poly_fn(F, C);
    PointFn ahat = [&](const std::vector<Fe>& b) {
      Fe s = 0;
      for (auto& c : hk_points(p.H, p.k)) {
        auto x = b;
        x.insert(x.end(), c.begin(), c.end());
        s = F.add(s, chat(x));
      }
      return s;
    };
    for (int i = 0; i < 20; ++i) {
      auto w = random_point(F, p.tau_len(), rng);
      EXPECT_EQ(h_sum_over_c(sys, chat, w), sys.g_A(ahat, w));
    }
  }
}

TEST(OSat, SummandHLagrangeCorrection) {
  Field F(FieldSpec::binary(8, 1));
  auto in = micro_instance(true);
  OSatSystem sys(in, OSatParams::make(F, in, 1, Arith::Multilinear));
  Fe c0 = 7, c1 = 9;
  PointFn chat = [&](const std::vector<Fe>& x) { return x[0] == 0 ? c0 : c1; };
  std::vector<Fe> w{0, 0, 5};
  Fe bh = sys.bhat().eval(w);
  // c = (0, 1, 0): slot 1 and 3 carry (a_i - 1)
  Fe want = F.mul(bh, F.mul(F.add(c0, F.sub(w[0], 1)), F.mul(c1, F.add(c0, F.sub(w[2], 1)))));
  EXPECT_EQ(sys.h_C(chat, {0, 0, 5, 0, 1, 0}), want);
  EXPECT_EQ(sys.h_C(chat, {1, 0, 0, 0, 1, 0}), 0u);
}

TEST(OSat, CommitmentDecommitsAndVaries) {
  Field F(FieldSpec::binary(8, 1));
  auto in = micro_instance(true);
  OSatSystem sys(in, OSatParams::make(F, in, 1, Arith::Multilinear));
  Rng r1(1), r2(2);
  auto C1 = sys.commit_witness({1}, r1), C2 = sys.commit_witness({1}, r2);
  EXPECT_NE(C1.c, C2.c);
  for (auto* C : {&C1, &C2}) EXPECT_EQ(F.add(eval(F, *C, {0}), eval(F, *C, {1})), 1u);
}

TEST(OSat, CommitmentMarginalUniformGF4) {
  Field F(FieldSpec::binary(2, 1));
  OSatInstance in;
  in.s = 1;
  in.B.nvars = 6;
  auto p = OSatParams::make(F, in, 1, Arith::Multilinear);
  OSatSystem sys(in, p);
  auto tgt = sys.decommitment_targets({0, 1});
  auto sol = solve_affine(F, sys.commit_rows().first, tgt, p.c_bounds().box_size());
  ASSERT_EQ(sol.kernel.size(), 7u);
  std::map<Fe, size_t> count;
  std::vector<Fe> q{2, 3};
  size_t total = 1;
  for (size_t i = 0; i < sol.kernel.size(); ++i) total *= 4;
  for (size_t t = 0; t < total; ++t) {
    MultiPoly C = MultiPoly::zero(p.c_bounds());
    C.c = sol.particular;
    size_t x = t;
    for (auto& kv : sol.kernel) {
      axpy(F, C.c, Fe(x % 4), kv);
      x /= 4;
    }
    ASSERT_EQ(F.add(eval(F, C, {0, 0}), eval(F, C, {0, 1})), 0u);
    ASSERT_EQ(F.add(eval(F, C, {1, 0}), eval(F, C, {1, 1})), 1u);
    count[eval(F, C, q)]++;
  }
  ASSERT_EQ(count.size(), 4u);
  for (auto& [v, n] : count) EXPECT_EQ(n, total / 4);
}

TEST(OSat, SummandTotalSumZeroForHonestCommitment) {
  Field F(FieldSpec::binary(8, 1));
  auto in = micro_instance(true);
  OSatSystem sys(in, OSatParams::make(F, in, 1, Arith::Multilinear));
  Rng rng(5);
  auto C = sys.commit_witness({1}, rng);
  auto H = sys.params().H;
  for (int t = 0; t < 50; ++t) {
    auto tau = random_point(F, 3, rng);
    auto S = sys.summand_poly(tau, poly_fn(F, C));
    EXPECT_EQ(sum_over_grid(F, S, H), 0u);
  }
}

TEST(OSat, GridTauSelectsOneTerm) {
  Field F(FieldSpec::binary(8, 1));
  auto in = micro_instance(true);
  OSatSystem sys(in, OSatParams::make(F, in, 1, Arith::Multilinear));
  for (auto& tau : osat_grid(sys))
    for (auto& w : osat_grid(sys)) EXPECT_EQ(sys.selector(tau, w), tau == w ? 1u : 0u);
}

TEST(OSat, UnsatisfiableHasNonzeroGridSum) {
  Field F(FieldSpec::binary(8, 1));
  auto in = micro_instance(false);
  OSatSystem sys(in, OSatParams::make(F, in, 1, Arith::Multilinear));
  Rng rng(9);
  for (Fe v = 0; v < F.order(); v += 17) {
    auto C = sys.commit_values({v}, rng);
    bool nonzero = false;
    for (auto& tau : osat_grid(sys)) {
      auto S = sys.summand_poly(tau, poly_fn(F, C));
      nonzero = nonzero || sum_over_grid(F, S, sys.params().H) != 0;
    }
    EXPECT_TRUE(nonzero);
  }
}

TEST(OSat, ProveDeterministicAndRejectsBadWitness) {
  Field F(FieldSpec::binary(8, 1));
  auto in = micro_instance(true);
  OSatSystem sys(in, OSatParams::make(F, in, 1, Arith::Multilinear));
  auto p1 = osat_prove(sys, {1}, Seed::from_u64(3)), p2 = osat_prove(sys, {1}, Seed::from_u64(3));
  EXPECT_EQ(*p1.pi_C, *p2.pi_C);
  std::vector<Fe> tau{3, 4, 5};
  EXPECT_EQ(p1.tau_proof(tau)->mask.Q.c, p2.tau_proof(tau)->mask.Q.c);
  auto bad = micro_instance(false);
  OSatSystem sb(bad, OSatParams::make(F, bad, 1, Arith::Multilinear));
  EXPECT_THROW(osat_prove(sb, {1}, Seed::from_u64(1)), Error);
}

TEST(OSat, HonestProofAccepts) {
  Field F(FieldSpec::binary(8, 1));
  auto in = micro_instance(true);
  OSatSystem sys(in, OSatParams::make(F, in, 1, Arith::Multilinear));
  auto bal = osat_balance(sys);
  EXPECT_EQ(bal.ldt_reps, 5u);
  EXPECT_EQ(bal.sc_reps, 1u);
  for (uint64_t s = 0; s < 10; ++s) {
    auto pr = osat_prove(sys, {1}, Seed::from_u64(100 + s));
    auto o = osat_oracles(pr);
    Rng rng(s);
    auto r = osat_verify(sys, o, rng);
    EXPECT_TRUE(r.accept) << osat_fail_name(r.fail) << " " << rsc_step_name(r.step);
  }
}

TEST(OSat, RandomCommitmentTableRejectedByLdt) {
  Field F(FieldSpec::binary(4, 2));
  OSatInstance in;
  in.s = 2;
  in.B.nvars = 9;
  OSatSystem sys(in, OSatParams::make(F, in, 1, Arith::Multilinear));
  size_t rej = 0, N = 200;
  for (uint64_t s = 0; s < N; ++s) {
    Rng rng(s);
    std::vector<Symbol> t(256);
    for (auto& x : t) x = {F.random(rng)};
    auto o = Oracle::dense_grid("pi_C", 16, 2, std::make_shared<const std::vector<Symbol>>(t));
    rej += !osat_ldt_c(sys, o, 1, rng).accept;
  }
  EXPECT_GE(rej, size_t(0.9 * N));
}

TEST(OSat, WrongWitnessRejected) {
  Field F(FieldSpec::binary(8, 1));
  auto in = micro_instance(false);
  OSatSystem sys(in, OSatParams::make(F, in, 1, Arith::Multilinear));
  size_t rej = 0, N = 40;
  for (uint64_t s = 0; s < N; ++s) {
    Rng cr(s);
    auto pr = osat_proof_from_commitment(sys, sys.commit_witness({uint8_t(s & 1)}, cr), Seed::from_u64(s));
    auto o = osat_oracles(pr);
    Rng rng(1000 + s);
    rej += !osat_verify(sys, o, rng).accept;
  }
  EXPECT_GE(rej, N / 2);
}

TEST(OSat, ClaimEquivalence) {
  Field F(FieldSpec::binary(8, 1));
  for (bool sat : {true, false}) {
    auto in = micro_instance(sat);
    OSatSystem sys(in, OSatParams::make(F, in, 1, Arith::Multilinear));
    auto rep = claim_equivalence_bruteforce(sys);
    EXPECT_TRUE(rep.holds);
    EXPECT_EQ(rep.satisfiable, sat);
    EXPECT_EQ(rep.commitment_found, sat);
  }
}

namespace {

struct Probe {
  bool sigma;
  std::vector<Fe> at;
};

// Answers of the honest masked proof for explicit mask coefficients.
Vec real_answers(const SumInstance& inst, const MultiPoly& Fp, const MaskSet& M, const std::vector<Probe>& script) {
  const Field& F = *inst.F;
  MultiPoly R = assemble_mask(F, M, inst.H);
  ZkscProof pr{rsc_prove(inst, add(F, Fp, R)), M, R};
  auto so = pr.sigma_oracle();
  auto po = pr.mask_oracle();
  Vec out;
  for (auto& q : script) {
    auto s = q.sigma ? so.query(to_index(q.at)) : po.query(to_index(q.at));
    out.insert(out.end(), s.begin(), s.end());
  }
  return out;
}

checks::Dist real_distribution(const SumInstance& inst, const MultiPoly& Fp, uint32_t md,
                               const std::vector<Probe>& script) {
  const Field& F = *inst.F;
  auto mb = mask_bounds(inst.m, md, inst.H.size());
  auto mask_of = [&](const Vec& flat) {
    MaskSet M;
    size_t off = 0;
    for (size_t b = 0; b < mb.size(); ++b) {
      MultiPoly p = MultiPoly::zero(mb[b]);
      std::copy(flat.begin() + off, flat.begin() + off + p.c.size(), p.c.begin());
      off += p.c.size();
      (b == 0 ? M.Q : M.T.emplace_back()) = p;
    }
    return M;
  };
  size_t n = 0;
  for (auto& b : mb) n += b.box_size();
  Vec base = real_answers(inst, Fp, mask_of(Vec(n, 0)), script);
  Mat cols;
  for (size_t i = 0; i < n; ++i) {
    Vec e(n, 0);
    e[i] = 1;
    Vec y = real_answers(inst, Fp, mask_of(e), script);
    for (size_t j = 0; j < y.size(); ++j) y[j] = F.sub(y[j], base[j]);
    cols.push_back(y);
  }
  auto rr = rref(F, cols, base.size());
  Mat basis(rr.r.begin(), rr.r.begin() + rr.pivots.size());
  checks::Dist d;
  size_t total = 1;
  for (size_t i = 0; i < basis.size(); ++i) total *= F.order();
  for (size_t t = 0; t < total; ++t) {
    Vec y = base;
    size_t x = t;
    for (auto& b : basis) {
      axpy(F, y, Fe(x % F.order()), b);
      x /= F.order();
    }
    checks::accumulate(d, y, Rational(1, total));
  }
  return d;
}

checks::Dist sim_distribution(const SumInstance& inst, const MultiPoly& Fp, uint32_t md,
                              const std::vector<Probe>& script, size_t* dense_checks = nullptr) {
  const Field& F = *inst.F;
  checks::Dist d;
  enumerate_branches(
      [&](RandomSource& rs) {
        MaskedSumcheckSim sim(inst, individual_degrees(Fp), md,
                              [&](const std::vector<Fe>& x) { return eval(F, Fp, x); });
        sim.set_rng(&rs);
        Vec out;
        for (auto& q : script) {
          auto s = q.sigma ? sim.sigma(q.at) : sim.mask_point(q.at);
          out.insert(out.end(), s.begin(), s.end());
        }
        if (dense_checks) *dense_checks = std::max(*dense_checks, sim.dense_checks());
        return out;
      },
      [&](const Vec& v, const Rational& w) { checks::accumulate(d, v, w); });
  return d;
}

}  // namespace

TEST(OSatSim, MaskedSamplerMatchesRealExactly) {
  Field F(FieldSpec::prime(5));
  Rng rng(4);
  auto make = [&](size_t m) {
    SumInstance inst;
    inst.F = &F;
    inst.m = m;
    inst.d = 3;
    inst.H = {0, 1};
    inst.delta = Rational(4);  // exactness check only; soundness slack is irrelevant here
    inst.ldt_degree = 4;
    return inst;
  };
  struct Case {
    size_t m;
    uint32_t md;
    std::vector<Probe> script;
  };
  std::vector<Case> cases = {
      // sum probes and a repeated symbol
      {3, 3, {{true, {4, 0}}, {true, {4, 1}}, {true, {4, 0}}}},
      // a reversed pair
      {2, 3, {{false, {2, 3}}, {false, {3, 2}}}},
      // a palindromic point, then partial sums through it
      {2, 3, {{false, {4, 4}}, {true, {4}}, {true, {2}}}},
      // mask degree below the summand degree: dependent answers need summand evaluations
      {2, 2, {{true, {2}}, {true, {3}}, {true, {4}}, {true, {0}}}},
  };
  size_t dc = 0;
  for (auto& c : cases) {
    auto inst = make(c.m);
    MultiPoly Fp = random_poly(F, DegreeBounds::uniform(c.m, 3), rng);
    inst.gamma = sum_over_grid(F, Fp, inst.H);
    auto real = real_distribution(inst, Fp, c.md, c.script);
    auto sim = sim_distribution(inst, Fp, c.md, c.script, &dc);
    EXPECT_EQ(checks::tv_distance(real, sim), Rational(0));
  }
  EXPECT_GT(dc, 0u);
}

TEST(OSatSim, BudgetAndZeroQuery) {
  Field F(FieldSpec::binary(8, 1));
  auto in = micro_instance(true);
  OSatSystem sys(in, OSatParams::make(F, in, 1, Arith::Multilinear));
  Rng rng(1);
  OSatSimulator sim(sys, rng);
  EXPECT_EQ(sim.budget_limit(), 2u);
  EXPECT_EQ(sim.c_points(), 0u);
  auto o = sim.oracles();
  o.pi_C.query(Index{9});
  EXPECT_THROW(o.pi_C.query(Index{10}), Error);
}

TEST(OSatSim, SumProbeAndFullLayerAreConsistent) {
  Field F(FieldSpec::binary(8, 1));
  auto in = micro_instance(true);
  OSatSystem sys(in, OSatParams::make(F, in, 1, Arith::Multilinear));
  Rng rng(2);
  OSatSimulator sim(sys, rng);
  auto o = sim.oracles();
  Index i0{7, 8, 9, 1, 2, 3, 4, 0}, i1{7, 8, 9, 1, 2, 3, 4, 1};
  auto a = o.pi_sigma.query(i0), b = o.pi_sigma.query(i1);
  EXPECT_EQ(F.add(a[0], b[0]), 0u);
  EXPECT_EQ(a[6], 0u);
  EXPECT_EQ(a[5], 0u);
  // the whole first layer is a low-degree polynomial with zero sum, without reading pi_C
  Vec g1(256), ts = field_elements(F);
  for (Fe x = 0; x < 256; ++x) g1[x] = o.pi_sigma.query(Index{7, 8, 9, 1, 2, 3, 4, x})[0];
  EXPECT_TRUE(uni_fit(F, ts, g1, sys.sc_degree()));
  EXPECT_EQ(F.add(g1[0], g1[1]), 0u);
  EXPECT_EQ(sim.c_points(), 0u);
}

TEST(OSatSim, HybridPolySimEqualsUniformPolynomialGF4) {
  Field F(FieldSpec::binary(2, 1));
  OSatInstance in;
  in.s = 1;
  in.B.nvars = 6;
  auto p = OSatParams::make(F, in, 1, Arith::Multilinear);
  OSatSystem sys(in, p);
  auto b = p.c_bounds();
  ASSERT_EQ(b.box_size(), 9u);
  // H1: every uniform Z of the same bounds
  std::map<std::vector<Fe>, std::map<Fe, size_t>> h1;
  MultiPoly Z = MultiPoly::zero(b);
  size_t total = 1 << 18;
  for (size_t t = 0; t < total; ++t) {
    size_t x = t;
    for (auto& c : Z.c) {
      c = x % 4;
      x /= 4;
    }
    for (Fe u = 0; u < 4; ++u)
      for (Fe v = 0; v < 4; ++v) h1[{u, v}][eval(F, Z, {u, v})]++;
  }
  for (Fe u = 0; u < 4; ++u)
    for (Fe v = 0; v < 4; ++v) {
      checks::Dist h0, hh1;
      enumerate_branches(
          [&](RandomSource& rs) {
            OSatSimulator sim(sys, rs);
            auto o = sim.oracles();
            return Vec{o.pi_C.query1(Index{u, v})};
          },
          [&](const Vec& r, const Rational& w) { checks::accumulate(h0, r, w); });
      for (auto& [val, n] : h1[{u, v}]) checks::accumulate(hh1, Vec{val}, Rational(n, total));
      EXPECT_EQ(checks::tv_distance(h0, hh1), Rational(0));
    }
}

TEST(OSat, DivisionVariantAgreesWithLagrangeOnPrimeField) {
  Field F(FieldSpec::prime(17));
  Rng rng(21);
  OSatInstance in;
  in.s = 1;
  in.B = random_3cnf(rng, 6, 3);
  auto pl = OSatParams::make(F, in, 1, Arith::Multilinear, Vec{0, 1});
  auto pd = pl.with_division();
  OSatSystem sl(in, pl), sd(in, pd);
  for (int t = 0; t < 10; ++t) {
    MultiPoly C = random_poly(F, pl.c_bounds(), rng);
    for (int i = 0; i < 20; ++i) {
      auto w = random_point(F, pl.tau_len(), rng);
      EXPECT_EQ(h_sum_over_c(sl, poly_fn(F, C), w), h_sum_over_c(sd, poly_fn(F, C), w));
    }
  }
  Field G(FieldSpec::binary(4, 1));
  EXPECT_THROW(OSatParams::make(G, in, 1, Arith::Multilinear).with_division(), Error);
}

TEST(OSat, LazyTauProofsAreStable) {
  Field F(FieldSpec::binary(8, 1));
  auto in = micro_instance(true);
  OSatSystem sys(in, OSatParams::make(F, in, 1, Arith::Multilinear));
  auto pr = osat_prove(sys, {1}, Seed::from_u64(8));
  auto o = osat_oracles(pr);
  Index i{1, 2, 3, 9, 8, 7, 6, 5, 4};
  auto s1 = o.pi_P.query(i);
  o.pi_P.query(Index{4, 4, 4, 0, 0, 0, 0, 0, 0});
  EXPECT_EQ(o.pi_P.query(i), s1);
  auto t1 = o.pi_sigma.query(Index{1, 2, 3, 9, 8, 7, 6, 5});
  EXPECT_EQ(o.pi_sigma.query(Index{1, 2, 3, 9, 8, 7, 6, 5}), t1);
}

TEST(OSat, CommitmentHidingTwoWitnesses) {
  Field F(FieldSpec::binary(2, 1));
  OSatInstance in;
  in.s = 1;
  in.B.nvars = 6;
  OSatSystem sys(in, OSatParams::make(F, in, 1, Arith::Multilinear));
  // every single query point (|H|^k = 2)
  for (Fe u = 0; u < 4; ++u)
    for (Fe v = 0; v < 4; ++v) {
      std::vector<std::vector<Fe>> Q{{u, v}};
      EXPECT_EQ(commitment_answer_counts(sys, {0, 1}, Q), commitment_answer_counts(sys, {1, 1}, Q));
    }
  // two points on the same row reveal the sum
  std::vector<std::vector<Fe>> Q2{{0, 0}, {0, 1}};
  EXPECT_NE(commitment_answer_counts(sys, {0, 1}, Q2), commitment_answer_counts(sys, {1, 1}, Q2));
  EXPECT_FALSE(commitment_images_equal(sys, {0, 1}, {1, 1}, Q2));

  OSatSystem sys2(in, OSatParams::make(F, in, 2, Arith::Multilinear));
  Rng rng(3);
  for (int t = 0; t < 50; ++t) {
    std::vector<std::vector<Fe>> Q;
    for (int j = 0; j < 3; ++j) Q.push_back(random_point(F, 3, rng));
    EXPECT_TRUE(commitment_images_equal(sys2, {0, 0}, {1, 0}, Q));
  }
}
