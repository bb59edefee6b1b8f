#include <gtest/gtest.h>

#include "zkpcp/compose.hpp"
#include "zkpcp/harness/exact_checks.hpp"

using namespace zkpcp;

namespace {

// Outer: one-round sumcheck over GF(4), m=2, H={0,1}, F = XY + X. Proof is g1 on all of GF(4).
struct MicroOuter {
  Field F{FieldSpec::binary(2)};
  Fe f(Fe x, Fe y) const { return F.add(F.mul(x, y), x); }
  Fe row(Fe x) const { return F.add(f(x, 0), f(x, 1)); }
  Fe gamma() const { return F.add(row(0), row(1)); }

  PcpSystem sys() const {
    PcpSystem s;
    s.name = "sumcheck-gf4";
    s.R = 4;
    s.q = 3;
    s.sym_bits = 2;
    s.qstar = 3;
    s.Q = [](uint64_t c) {
      return std::vector<Pos>{{"g1", {0}}, {"g1", {1}}, {"g1", {static_cast<uint32_t>(c)}}};
    };
    s.D = [this](uint64_t c, const std::vector<Symbol>& a) {
      return F.add(a[0][0], a[1][0]) == gamma() && a[2][0] == row(static_cast<Fe>(c));
    };
    return s;
  }
  static ProofAccess table(std::array<Fe, 4> g) {
    return [g](const Pos& p) { return Symbol{g.at(p.idx.at(0))}; };
  }
  std::array<Fe, 4> honest() const { return {row(0), row(1), row(2), row(3)}; }
};

std::array<Fe, 4> table_of(uint32_t v) { return {v & 3, (v >> 2) & 3, (v >> 4) & 3, (v >> 6) & 3}; }

// Base for lifting: bivariate C over GF(4), individual degree 2, sum over {0,1}^2 fixed to A.
struct MicroCommit {
  Field F{FieldSpec::binary(2)};
  DegreeBounds b = DegreeBounds::uniform(2, 2);
  Fe A = 3;

  Vec sum_functional() const {
    Vec s(b.box_size(), 0);
    for (Fe u : {0u, 1u})
      for (Fe v : {0u, 1u}) {
        auto f = eval_functional(F, b, {u, v});
        for (size_t i = 0; i < s.size(); ++i) s[i] = F.add(s[i], f[i]);
      }
    return s;
  }
  AffineSolution space() const { return solve_affine(F, {sum_functional()}, {A}, b.box_size()); }

  ProofAccess sample(const AffineSolution& sol, RandomSource& rng) const {
    Vec c = sol.particular;
    for (auto& k : sol.kernel) {
      Fe t = static_cast<Fe>(rng.below(4));
      for (size_t i = 0; i < c.size(); ++i) c[i] = F.add(c[i], F.mul(t, k[i]));
    }
    auto coef = std::make_shared<Vec>(c);
    return [this, coef](const Pos& p) {
      auto f = eval_functional(F, b, {p.idx.at(0), p.idx.at(1)});
      return Symbol{dot(F, f, *coef)};
    };
  }

  BaseSimulator sim() const {
    return [this](const Adversary& adv, RandomSource& sim_rng, RandomSource& coins) {
      auto ls = std::make_shared<LinearSim>(F, b.box_size());
      ls->constrain(sum_functional(), A);
      ProofAccess pi = [&, ls](const Pos& p) {
        return Symbol{ls->query(eval_functional(F, b, {p.idx.at(0), p.idx.at(1)}), sim_rng)};
      };
      return run_adversary(adv, pi, coins);
    };
  }
};

// ("D", [u, v]) -> (C(u,v), C(u,v+1))
LocalMap pair_map() {
  return {"pair", 2, [](const Pos& p, BaseReader& rd) {
            Symbol a = rd({"C", p.idx}), b = rd({"C", {p.idx[0], (p.idx[1] + 1) % 4}});
            return Symbol{a[0], b[0]};
          }};
}

checks::Dist real_views(const MicroCommit& Z, const LocalMap& f, const Adversary& V) {
  auto sol = Z.space();
  checks::Dist d;
  enumerate_branches(
      [&](RandomSource& rng) {
        auto base = Z.sample(sol, rng);
        return run_adversary(V, derived_proof(f, base), rng).key();
      },
      [&](const Vec& k, const Rational& w) { checks::accumulate(d, k, w); });
  return d;
}

checks::Dist lifted_views(const MicroCommit& Z, const LocalMap& f, const Adversary& V) {
  checks::Dist d;
  auto sim0 = Z.sim();
  enumerate_branches([&](RandomSource& rng) { return lifted_simulator(sim0, f, V, rng, rng).key(); },
                     [&](const Vec& k, const Rational& w) { checks::accumulate(d, k, w); });
  return d;
}

}  // namespace

TEST(LocalMap, IdentityAndBudget) {
  ProofAccess base = [](const Pos& p) { return Symbol{p.idx.at(0) * 2}; };
  LocalAudit au;
  EXPECT_EQ(localmap_apply(identity_map(), base, {"x", {5}}, &au), Symbol{10});
  EXPECT_EQ(au.max_reads, 1u);
  LocalMap greedy{"greedy", 2, [](const Pos& p, BaseReader& rd) {
                    Symbol s;
                    for (uint32_t i = 0; i < 3; ++i) s.push_back(rd({"x", {p.idx[0] + i}})[0]);
                    return s;
                  }};
  try {
    localmap_apply(greedy, base, {"y", {0}});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::LocalBudgetExceeded);
  }
}

TEST(LocalMap, ChainingMultipliesBudgets) {
  int reads = 0;
  ProofAccess base = [&](const Pos& p) {
    ++reads;
    return Symbol{p.idx.at(0) * 10 + p.idx.at(1)};
  };
  // pair map on top of pair map: 4 base reads
  LocalMap two = chain_maps(pair_map(), LocalMap{"first", 2, [](const Pos& p, BaseReader& rd) {
                                                   Symbol a = rd({"D", p.idx}), b = rd({"D", {p.idx[0], 3}});
                                                   return Symbol{a[0], a[1], b[0], b[1]};
                                                 }});
  EXPECT_EQ(two.ell, 4u);
  LocalAudit au;
  auto s = localmap_apply(two, base, {"E", {1, 1}}, &au);
  EXPECT_EQ(s, (Symbol{11, 12, 13, 10}));
  EXPECT_EQ(au.max_reads, 4u);
  EXPECT_EQ(reads, 4);
}

TEST(Lifting, HybridBudgetAndIdentityTranscript) {
  ProofAccess base = [](const Pos& p) { return Symbol{p.idx.at(0) + p.idx.at(1)}; };
  Adversary V{"two", 2, [](const Querier& q, RandomSource& c) {
                Fe x = q({"C", {0, 1}})[0];
                q({"C", {x, static_cast<uint32_t>(c.below(4))}});
              }};
  Rng r1(1), r2(1);
  auto direct = run_adversary(V, base, r1);
  auto hyb = run_adversary(lifted_hybrid_adversary(V, identity_map()), base, r2);
  EXPECT_EQ(direct.key(), hyb.key());

  Adversary Vp{"pairs", 2, [](const Querier& q, RandomSource&) {
                 q({"D", {0, 0}});
                 q({"D", {2, 3}});
               }};
  Rng r3(2);
  auto h = run_adversary(lifted_hybrid_adversary(Vp, pair_map()), base, r3);
  EXPECT_EQ(h.qa.size(), 4u);
}

TEST(Lifting, ReplayDeterminismAndMissingAnswer) {
  MicroCommit Z;
  Adversary V{"one", 1, [](const Querier& q, RandomSource& c) { q({"D", {static_cast<uint32_t>(c.below(4)), 2}}); }};
  Rng a(7), b(7), c(7), d(7);
  auto v1 = lifted_simulator(Z.sim(), pair_map(), V, a, b);
  auto v2 = lifted_simulator(Z.sim(), pair_map(), V, c, d);
  EXPECT_EQ(v1.key(), v2.key());
  BaseSimulator empty = [](const Adversary&, RandomSource&, RandomSource&) { return View{}; };
  try {
    Rng e(1), f(1);
    lifted_simulator(empty, pair_map(), V, e, f);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::MissingAnswer);
  }
}

TEST(Lifting, ExactViewEqualityIdentityPairAndEcc) {
  MicroCommit Z;
  // identity: adaptive 3-query adversary with one coin
  Adversary V3{"adaptive3", 3, [](const Querier& q, RandomSource& c) {
                 Fe x = q({"C", {0, 0}})[0];
                 Fe y = q({"C", {x, 1}})[0];
                 q({"C", {static_cast<uint32_t>(c.below(4)), y}});
               }};
  auto r = real_views(Z, identity_map(), V3), s = lifted_views(Z, identity_map(), V3);
  EXPECT_EQ(checks::tv_distance(r, s), Rational(0));
  EXPECT_GT(r.size(), 16u);

  // pair map, l = 2, one derived query (2 base reads within q* = 3)
  Adversary V1{"pair1", 1, [](const Querier& q, RandomSource& c) { q({"D", {static_cast<uint32_t>(c.below(4)), 1}}); }};
  EXPECT_EQ(checks::tv_distance(real_views(Z, pair_map(), V1), lifted_views(Z, pair_map(), V1)), Rational(0));

  // ECC bits, l = 1, three adaptive bit queries
  PcpSystem dummy;
  dummy.Q = [](uint64_t) { return std::vector<Pos>{}; };
  dummy.D = [](uint64_t, const std::vector<Symbol>&) { return true; };
  auto ar = alphabet_reduce(dummy, SymbolCodec{2}, [](const std::string&) { return size_t(1); }, 11);
  Adversary Vb{"bits3", 3, [](const Querier& q, RandomSource&) {
                 Fe t = q({"tau/C", {1, 1, 5}})[0];
                 q({"Pi_a/C", {t, 0, 0}});
                 q({"tau/C", {2, 3, static_cast<uint32_t>(7 - t)}});
               }};
  EXPECT_EQ(checks::tv_distance(real_views(Z, ar.map, Vb), lifted_views(Z, ar.map, Vb)), Rational(0));
}

TEST(Lifting, OverBudgetAdversaryIsDistinguishable) {
  // 4 reads cover the whole H-grid and reveal the committed sum; outside the guarantee
  MicroCommit Z;
  Adversary V4{"grid", 4, [](const Querier& q, RandomSource&) {
                 for (uint32_t u : {0u, 1u})
                   for (uint32_t v : {0u, 1u}) q({"C", {u, v}});
               }};
  auto r = real_views(Z, identity_map(), V4);
  auto s = lifted_views(Z, identity_map(), V4);
  EXPECT_EQ(checks::tv_distance(r, s), Rational(0));  // simulator is constrained by the sum, so still exact
  MicroCommit Z2;
  Z2.A = 1;
  EXPECT_GT(checks::tv_distance(r, real_views(Z2, identity_map(), V4)), Rational(0));
  // but below |H|^k queries two commitments are indistinguishable
  Adversary V3{"three", 3, [](const Querier& q, RandomSource&) {
                 q({"C", {0, 0}});
                 q({"C", {0, 1}});
                 q({"C", {1, 0}});
               }};
  EXPECT_EQ(checks::tv_distance(real_views(Z, identity_map(), V3), real_views(Z2, identity_map(), V3)), Rational(0));
}

TEST(Ecc, ToyCodeAndSystematic) {
  auto e = ecc_from_parity(2, {{1}, {1}});
  EXPECT_EQ(e.b, 3u);
  std::set<std::vector<uint8_t>> words;
  for (uint8_t x0 : {0, 1})
    for (uint8_t x1 : {0, 1}) words.insert(e.encode({x0, x1}));
  EXPECT_EQ(words, (std::set<std::vector<uint8_t>>{{0, 0, 0}, {0, 1, 1}, {1, 0, 1}, {1, 1, 0}}));
  EXPECT_EQ(e.min_distance, 2u);
  EXPECT_TRUE(e.exhaustive);

  for (size_t a : {2, 5, 8, 13, 20}) {
    auto g = ecc_generate(a, 100);
    EXPECT_EQ(g.b, 4 * a);
    EXPECT_TRUE(g.exhaustive);
    EXPECT_GE(g.relative_distance(), Rational(1, 8)) << a;
    EXPECT_EQ(g.encode(std::vector<uint8_t>(a, 0)), std::vector<uint8_t>(g.b, 0));
    Rng rng(a);
    std::vector<uint8_t> x(a);
    for (auto& v : x) v = static_cast<uint8_t>(rng.below(2));
    auto c = g.encode(x);
    EXPECT_TRUE(std::equal(x.begin(), x.end(), c.begin()));
    auto j = g.to_json();
    EXPECT_EQ(j["generator"].size(), a);
    EXPECT_EQ(j["distance_method"], "exhaustive");
  }
  auto big = ecc_generate(64, 5);
  EXPECT_FALSE(big.exhaustive);
  EXPECT_GE(big.relative_distance(), Rational(1, 8));
  try {
    ecc_generate(65, 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::BadConfig);
  }
}

TEST(Circuit, EqualityComparator) {
  for (size_t n : {1, 2, 4}) {
    auto c = equality_circuit(n);
    for (uint32_t v = 0; v < (1u << (2 * n)); ++v) {
      std::vector<uint8_t> x(2 * n);
      for (size_t j = 0; j < 2 * n; ++j) x[j] = (v >> j) & 1;
      bool eq = (v & ((1u << n) - 1)) == (v >> n);
      EXPECT_EQ(c.eval(x), eq);
    }
  }
}

TEST(Circuit, CompiledAgreesExhaustivelyAndRestricts) {
  for (size_t n : {1, 3, 7, 12, 16}) {
    Rng rng(n);
    uint64_t salt = rng.next();
    auto D = [&](const std::vector<uint8_t>& x) {
      uint64_t v = 0;
      for (size_t j = 0; j < x.size(); ++j) v |= uint64_t(x[j]) << j;
      return ((v * 0x9E3779B97F4A7C15ull + salt) >> 61) & 1;
    };
    auto C = decision_to_circuit([&](const std::vector<uint8_t>& x) { return D(x) != 0; }, n);
    size_t bad = 0;
    std::vector<uint8_t> x(n);
    for (uint64_t v = 0; v < (uint64_t(1) << n); ++v) {
      for (size_t j = 0; j < n; ++j) x[j] = (v >> j) & 1;
      bad += C.eval(x) != (D(x) != 0);
    }
    EXPECT_EQ(bad, 0u) << n;
    auto R = C.restrict(0, true);
    for (uint64_t v = 0; v < (uint64_t(1) << n); v += 7) {
      for (size_t j = 0; j < n; ++j) x[j] = (v >> j) & 1;
      auto y = x;
      y[0] = 1;
      EXPECT_EQ(R.eval(x), C.eval(y));
    }
  }
  try {
    decision_to_circuit([](const std::vector<uint8_t>&) { return true; }, 17);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::SearchSpaceTooLarge);
  }
}

TEST(Compose, PassThroughVerdictEquivalenceAndAudit) {
  MicroOuter O;
  auto outer = O.sys();
  SymbolCodec codec{2};
  for (auto inner : {pass_through_inner(), wire_transcript_inner()}) {
    auto c = compose(outer, inner, codec);
    size_t mism = 0, honest_rejects = 0;
    LocalAudit audit;
    for (uint32_t v = 0; v < 256; ++v) {
      auto base = MicroOuter::table(table_of(v));
      auto pi = composed_proof(c, base, codec, &audit);
      for (uint64_t r = 0; r < *c.sys.R; ++r) mism += pcp_verify(c.sys, pi, r) != pcp_verify(outer, base, r);
    }
    auto hon = MicroOuter::table(O.honest());
    for (uint64_t r = 0; r < *c.sys.R; ++r) honest_rejects += !pcp_verify(c.sys, composed_proof(c, hon, codec), r);
    EXPECT_EQ(mism, 0u) << inner.name;
    EXPECT_EQ(honest_rejects, 0u);
    if (inner.name == "pass-through") {
      EXPECT_EQ(audit.invocations, 0u);
      for (uint64_t r = 0; r < 4; ++r) EXPECT_EQ(c.sys.Q(r).size(), c.decision(r).nin);
    } else {
      // every inner proof symbol of every r
      LocalAudit full;
      for (uint64_t r = 0; r < 4; ++r)
        for (size_t j = 0; j < c.decision(r).circuit->size(); ++j) {
          BaseReader rd(hon, outer.q);
          c.map.f({"pi_r", {static_cast<uint32_t>(r), static_cast<uint32_t>(j)}}, rd);
          EXPECT_EQ(rd.used(), outer.Q(r).size());
          localmap_apply(c.map, hon, {"pi_r", {static_cast<uint32_t>(r), static_cast<uint32_t>(j)}}, &full);
        }
      EXPECT_GT(full.invocations, 0u);
      EXPECT_LE(full.max_reads, outer.q);
      EXPECT_GT(audit.invocations, 0u);
      EXPECT_LE(audit.max_reads, outer.q);
    }
  }
  auto bad = pass_through_inner();
  bad.delta_in = Rational(1, 4);
  try {
    compose(outer, bad, codec);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::ProximityExceedsRobustness);
  }
}

TEST(AlphabetReduction, HonestAcceptsAndEveryQueriedFlipRejects) {
  MicroOuter O;
  auto outer = O.sys();
  auto ar = alphabet_reduce(outer, SymbolCodec{2}, [](const std::string&) { return size_t(1); }, 3);
  auto hon = derived_proof(ar.map, MicroOuter::table(O.honest()));
  size_t flips = 0, survived = 0;
  for (uint64_t r = 0; r < 4; ++r) {
    ASSERT_TRUE(pcp_verify(ar.sys, hon, r));
    auto qs = ar.sys.Q(r);
    std::set<Pos> queried(qs.begin(), qs.end());
    for (auto& target : queried) {
      ProofAccess flipped = [&](const Pos& p) {
        Symbol s = hon(p);
        if (p == target) s[0] ^= 1;
        return s;
      };
      ++flips;
      survived += pcp_verify(ar.sys, flipped, r);
    }
  }
  EXPECT_EQ(flips, (2 + 2 + 3 + 3) * (2 + 8));  // 2 or 3 distinct blocks per r, 2 + 8 bits each
  EXPECT_EQ(survived, 0u);
}

TEST(AlphabetReduction, PreservesAndNeverIncreasesAcceptance) {
  MicroOuter O;
  auto outer = O.sys();
  auto ar = alphabet_reduce(outer, SymbolCodec{2}, [](const std::string&) { return size_t(1); }, 3);
  Rng rng(9);
  for (uint32_t v = 0; v < 256; ++v) {
    auto base = MicroOuter::table(table_of(v));
    auto der = derived_proof(ar.map, base);
    // random tau corruption on a random block
    uint32_t blk = static_cast<uint32_t>(rng.below(4)), bit = static_cast<uint32_t>(rng.below(8));
    ProofAccess cheat = [&](const Pos& p) {
      Symbol s = der(p);
      if (p.oracle == "tau/g1" && p.idx[0] == blk && p.idx[1] == bit) s[0] ^= 1;
      return s;
    };
    int a_base = 0, a_der = 0, a_cheat = 0;
    for (uint64_t r = 0; r < 4; ++r) {
      a_base += pcp_verify(outer, base, r);
      a_der += pcp_verify(ar.sys, der, r);
      a_cheat += pcp_verify(ar.sys, cheat, r);
    }
    EXPECT_EQ(a_base, a_der);
    EXPECT_LE(a_cheat, a_base);
  }
}
