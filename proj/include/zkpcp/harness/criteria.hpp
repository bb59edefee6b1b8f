#pragma once

#include <array>
#include <set>

#include "experiments.hpp"

namespace zkpcp {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;
};

struct CriteriaScale {
  uint64_t rsc_seeds = 20;
  uint64_t cascade_n = 2000;
  uint64_t mask_seeds = 1000;
  uint64_t preserve_n = 200;
  uint64_t sumgh_polys = 100, sumgh_points = 200;
  size_t cnfs = 24;
  uint64_t completeness_n = 10000;
  uint64_t soundness_n = 2000;
  uint64_t robust_n = 40;
  uint64_t zk_n = 100000;
  uint64_t commit_triples = 300;
  Seed master = Seed::from_u64(2024);

  static CriteriaScale quick() {
    CriteriaScale s;
    s.rsc_seeds = 2;
    s.cascade_n = 300;
    s.mask_seeds = 40;
    s.preserve_n = 20;
    s.sumgh_polys = 3;
    s.sumgh_points = 20;
    s.cnfs = 20;
    s.completeness_n = 20;
    s.soundness_n = 60;
    s.robust_n = 3;
    s.zk_n = 400;
    s.commit_triples = 20;
    return s;
  }
};

namespace crit {

inline std::string frac(uint64_t a, uint64_t b) { return std::to_string(a) + "/" + std::to_string(b); }

inline Fe grid_sum_direct(const Field& F, const MultiPoly& p, const std::vector<Fe>& H) {
  Fe s = 0;
  for (auto& x : hk_points(H, p.m())) s = F.add(s, eval(F, p, x));
  return s;
}

inline Cnf random_cnf(Rng& rng, size_t nvars, size_t nclauses, size_t max_width) {
  Cnf c;
  c.nvars = nvars;
  for (size_t j = 0; j < nclauses; ++j) {
    std::vector<int> cl;
    size_t w = 1 + rng.below(max_width);
    for (size_t t = 0; t < w; ++t) {
      int v = int(rng.below(nvars)) + 1;
      cl.push_back(rng.below(2) ? v : -v);
    }
    c.clauses.push_back(cl);
  }
  return c;
}

inline bool cnf_satisfiable(const Cnf& c) {
  for (uint64_t a = 0; a < (uint64_t(1) << c.nvars); ++a) {
    std::vector<uint8_t> x(c.nvars);
    for (size_t i = 0; i < c.nvars; ++i) x[i] = (a >> i) & 1;
    if (c.eval(x)) return true;
  }
  return false;
}

}  // namespace crit

// 1. RSC completeness on GF(17), every coin, several LDT seeds.
inline CriterionResult criterion_rsc_completeness(const CriteriaScale& sc) {
  auto R = rsc_micro(17);
  const Field& F = *R.F;
  bool gamma_ok = crit::grid_sum_direct(F, R.P, R.inst.H) == R.inst.gamma && R.inst.gamma == 3;
  auto pr = rsc_prove(R.inst, R.P);
  auto f = poly_input_oracle(F, R.P);
  auto pi = pr.oracle("pi");
  uint64_t runs = 0, acc = 0;
  for (Fe c = 0; c < F.order(); ++c)
    for (uint64_t s = 0; s < sc.rsc_seeds; ++s) {
      Rng rng(sc.master.derive("c1", c * 1000 + s));
      acc += rsc_verify(R.inst, f, pi, {c}, rng).accept;
      ++runs;
    }
  return {1, "RSC completeness", gamma_ok && acc == runs,
          "accepted " + crit::frac(acc, runs) + " (17 coins x " + std::to_string(sc.rsc_seeds) + " seeds)"};
}

// 2. Cascade forgery against gamma' = gamma + 1.
inline CriterionResult criterion_cascade(const CriteriaScale& sc) {
  ExperimentConfig cfg;
  cfg.trials = sc.cascade_n;
  cfg.master = sc.master;
  auto rep = exp_soundness_rsc(cfg);
  auto* r = rep.find("soundness", forgery_name(ForgeryKind::WrongGammaCascade));
  std::ostringstream d;
  d << "reject " << crit::frac(r->count, r->n) << " >= " << *r->threshold << " (bound "
    << r->extra["analytic_bound"].get<double>() << ")";
  return {2, "Cascade soundness", r->pass.value_or(false), d.str()};
}

// 3. Masks sum to zero over H^m; adding a mask keeps membership.
inline CriterionResult criterion_mask_nullity(const CriteriaScale& sc) {
  Field F17(FieldSpec::prime(17)), F64(FieldSpec::binary(6)), F97(FieldSpec::prime(97));
  std::vector<SumInstance> fams = {{&F17, 2, 3, {0, 1}, 0, Rational(1, 2)},
                                   {&F64, 3, 4, {0, 1, 2}, 0, Rational(1, 2)},
                                   {&F97, 3, 3, {5, 7}, 0, Rational(1, 2)}};
  uint64_t bad = 0, total = 0, mism = 0, ptotal = 0, in_sum = 0;
  for (size_t fi = 0; fi < fams.size(); ++fi) {
    auto& inst = fams[fi];
    const Field& F = *inst.F;
    for (uint64_t s = 0; s < sc.mask_seeds; ++s) {
      Rng rng(sc.master.derive("c3/mask/" + std::to_string(fi), s));
      auto R = zksc_mask(inst, rng).second;
      bad += crit::grid_sum_direct(F, R, inst.H) != 0;
      ++total;
    }
    for (uint64_t t = 0; t < sc.preserve_n; ++t) {
      Rng rng(sc.master.derive("c3/preserve/" + std::to_string(fi), t));
      auto p = random_poly(F, DegreeBounds::uniform(inst.m, inst.d), rng);
      auto R = zksc_mask(inst, rng).second;
      Fe sum = crit::grid_sum_direct(F, p, inst.H);
      Fe gamma = rng.below(2) ? sum : F.random(rng);
      bool a = sum == gamma, b = crit::grid_sum_direct(F, add(F, p, R), inst.H) == gamma;
      mism += a != b;
      in_sum += a;
      ++ptotal;
    }
  }
  return {3, "Mask nullity", bad == 0 && mism == 0 && in_sum > 0 && in_sum < ptotal,
          "nonzero mask sums " + crit::frac(bad, total) + ", membership changes " + crit::frac(mism, ptotal)};
}

// 4. PolySim reproduces the uniform-polynomial law exactly at GF(3).
inline CriterionResult criterion_polysim(const CriteriaScale&) {
  Field F(FieldSpec::prime(3));
  size_t checks_run = 0, ok = 0;
  auto run = [&](const DegreeBounds& b, const std::vector<std::vector<Fe>>& qs) {
    auto r = checks::polysim_exactness(F, b, qs);
    ++checks_run;
    ok += r.joint_equal && r.conditionals_equal && r.tv == Rational(0);
  };
  for (uint32_t d = 0; d <= 2; ++d) {
    run(DegreeBounds::total_degree(1, d), {{1}, {0}, {1}, {2}});
    run(DegreeBounds::total_degree(1, d), {{2}, {0}, {1}});
  }
  std::vector<std::vector<Fe>> all;
  for (Fe x = 0; x < 3; ++x)
    for (Fe y = 0; y < 3; ++y) all.push_back({y, x});
  run(DegreeBounds::uniform(2, 1), all);
  run(DegreeBounds::uniform(2, 1), {{0, 0}, {1, 2}, {2, 2}, {1, 1}, {0, 0}, {2, 0}});
  run(DegreeBounds::total_degree(2, 1), {{0, 0}, {1, 2}, {2, 2}, {1, 1}, {0, 0}, {2, 0}});
  return {4, "PolySim exactness", ok == checks_run, "exact " + crit::frac(ok, checks_run) + " query scripts"};
}

// 5. Sums over H^k are independent of fewer than |H|^k point values.
inline CriterionResult criterion_sum_independence(const CriteriaScale&) {
  Field F(FieldSpec::prime(3));
  size_t ok = 0, n = 0;
  for (Fe x = 0; x < 3; ++x)
    for (Fe y = 0; y < 3; ++y) {
      Rational tv(1);
      ok += sum_indep_check(F, 1, 1, {0, 1}, 1, 2, {{x, y}}, &tv) && tv == Rational(0);
      ++n;
    }
  return {5, "Sum-independence", ok == n, "TV 0 for " + crit::frac(ok, n) + " single-point queries"};
}

// 6. sum_c h_C(w, c) = g_A(w) at random points and on the whole grid.
inline CriterionResult criterion_sum_gh(const CriteriaScale& sc) {
  Field F(FieldSpec::binary(4, 2));
  Rng rng(sc.master.derive("c6", 0));
  OSatInstance in;
  in.s = 2;
  in.B = crit::random_cnf(rng, 9, 4, 3);
  auto p = OSatParams::make(F, in, 1, Arith::Multilinear);
  OSatSystem sys(in, p);
  auto grid = osat_grid(sys);
  auto cs = hk_points(p.H, p.k);
  uint64_t bad = 0, n = 0;
  for (uint64_t t = 0; t < sc.sumgh_polys; ++t) {
    MultiPoly C = random_poly(F, p.c_bounds(), rng);
    PointFn chat = poly_fn(F, C);
    PointFn ahat = [&](const std::vector<Fe>& b) {
      Fe s = 0;
      for (auto& c : cs) {
        auto x = b;
        x.insert(x.end(), c.begin(), c.end());
        s = F.add(s, chat(x));
      }
      return s;
    };
    auto check = [&](const std::vector<Fe>& w) {
      bad += h_sum_over_c(sys, chat, w) != sys.g_A(ahat, w);
      ++n;
    };
    for (uint64_t i = 0; i < sc.sumgh_points; ++i) check(random_coins(F, p.tau_len(), rng));
    for (auto& w : grid) check(w);
  }
  return {6, "Sum-g-h identity", bad == 0,
          "mismatches " + crit::frac(bad, n) + " (" + std::to_string(sc.sumgh_polys) + " polynomials, grid " +
              std::to_string(grid.size()) + ")"};
}

// 7. Implicit satisfiability iff some commitment zeroes the grid sums.
inline CriterionResult criterion_claim_equivalence(const CriteriaScale& sc) {
  Field F(FieldSpec::binary(2, 1));
  size_t ok = 0, sat = 0, unsat = 0, n = 0;
  for (size_t i = 0; i < sc.cnfs; ++i) {
    Rng rng(sc.master.derive("c7", i));
    Cnf phi = crit::random_cnf(rng, 4, 4, 3);
    if (i % 2) {
      int v = int(rng.below(4)) + 1;
      phi.clauses[0] = {v};
      phi.clauses[1] = {-v};
    }
    auto enc = osat_encode_from_3sat(phi);
    if (enc.inst.s != 2 || enc.inst.r != 2) continue;
    OSatSystem sys(enc.inst, OSatParams::make(F, enc.inst, 1, Arith::Multilinear));
    bool truth = crit::cnf_satisfiable(phi);
    auto rep = claim_equivalence_bruteforce(sys, i);
    ok += rep.holds && rep.satisfiable == truth;
    (truth ? sat : unsat)++;
    ++n;
  }
  return {7, "Claim equivalence", ok == n && n >= 20 && sat > 0 && unsat > 0,
          "agree " + crit::frac(ok, n) + " (" + std::to_string(sat) + " sat, " + std::to_string(unsat) + " unsat)"};
}

// 8. Honest osat proofs always accepted.
inline CriterionResult criterion_osat_completeness(const CriteriaScale& sc) {
  auto M = osat_micro(true);
  auto bal = osat_balance(*M.sys);
  uint64_t acc = 0;
  for (uint64_t t = 0; t < sc.completeness_n; ++t) {
    auto pr = osat_prove(*M.sys, M.witness, sc.master.derive("c8/proof", t));
    auto o = osat_oracles(pr);
    Rng rng(sc.master.derive("c8/coins", t));
    acc += osat_verify(*M.sys, o, rng, {}, bal).accept;
  }
  return {8, "osat completeness", acc == sc.completeness_n, "accepted " + crit::frac(acc, sc.completeness_n)};
}

// 9. Rejection of forgeries on the unsatisfiable micro instance; robustness means.
inline CriterionResult criterion_osat_soundness(const CriteriaScale& sc) {
  ExperimentConfig cfg;
  cfg.master = sc.master;
  cfg.trials = sc.soundness_n;
  auto s = exp_soundness_osat(cfg, {{ForgeryKind::WrongWitness, 0}, {ForgeryKind::RandomProof, 0}});
  cfg.trials = sc.robust_n;
  auto rr = exp_robustness_rsc(cfg);
  auto ro = exp_robustness_osat(cfg);
  std::ostringstream d;
  d << std::setprecision(4);
  bool pass = s.passed() && rr.passed() && ro.passed();
  for (auto* l : {"wrong-witness", "random-proof"}) {
    auto* r = s.find("soundness", l);
    d << l << " reject " << *r->value << " [" << *r->lo << "," << *r->hi << "]; ";
    pass = pass && r->pass.value_or(false);
  }
  auto* z = rr.find("robustness", "zero-proof");
  d << "rsc zero-proof mean " << *z->exact_value;
  for (auto* l : {"wrong-witness", "random-proof"}) d << "; osat " << l << " mean " << *ro.find("robustness", l)->value;
  return {9, "osat soundness and robustness", pass, d.str()};
}

// H0 (PolySim answers) equals H1 (uniform polynomial) pointwise on GF(4), m2 = 1, k = 1.
inline bool hybrid_h0_h1_exact_gf4() {
  Field F(FieldSpec::binary(2, 1));
  OSatInstance in;
  in.s = 1;
  in.B.nvars = 6;
  auto p = OSatParams::make(F, in, 1, Arith::Multilinear);
  OSatSystem sys(in, p);
  auto b = p.c_bounds();
  std::map<std::vector<Fe>, std::map<Fe, size_t>> h1;
  MultiPoly Z = MultiPoly::zero(b);
  size_t total = 1;
  for (size_t i = 0; i < Z.c.size(); ++i) total *= 4;
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
      if (checks::tv_distance(h0, hh1) != Rational(0)) return false;
    }
  return true;
}

// 10. Real vs simulated views for the adversary zoo; exact hybrid step.
inline CriterionResult criterion_zk(const CriteriaScale& sc) {
  ExperimentConfig cfg;
  cfg.master = sc.master;
  cfg.zk_trials = sc.zk_n;
  auto rep = exp_zk(osat_micro(true), cfg);
  size_t tested = 0, ok = 0;
  double minp = 1;
  for (auto& r : rep.rows) {
    if (!r.pass) continue;
    ++tested;
    ok += *r.pass;
    if (r.p) minp = std::min(minp, *r.p);
  }
  bool hyb = hybrid_h0_h1_exact_gf4();
  std::ostringstream d;
  d << "adversaries " << crit::frac(ok, tested) << " pass, min p " << std::setprecision(4) << minp
    << ", hybrid exact " << (hyb ? "yes" : "no");
  return {10, "Zero knowledge", ok == tested && tested >= 5 && hyb, d.str()};
}

// 11. Commitments to distinct witnesses look the same below |H|^k queries.
inline CriterionResult criterion_hiding(const CriteriaScale& sc) {
  Field F(FieldSpec::binary(2, 1));
  OSatInstance in;
  in.s = 1;
  in.B.nvars = 6;
  OSatSystem s1(in, OSatParams::make(F, in, 1, Arith::Multilinear));
  size_t sets = 0, ok = 0;
  for (Fe u = 0; u < 4; ++u)
    for (Fe v = 0; v < 4; ++v) {
      std::vector<std::vector<Fe>> Q{{u, v}};
      auto a = commitment_answer_counts(s1, {0, 1}, Q), b = commitment_answer_counts(s1, {1, 1}, Q);
      checks::Dist da, db;
      uint64_t na = 0, nb = 0;
      for (auto& [k, n] : a) na += n;
      for (auto& [k, n] : b) nb += n;
      for (auto& [k, n] : a) checks::accumulate(da, k, Rational(n, na));
      for (auto& [k, n] : b) checks::accumulate(db, k, Rational(n, nb));
      ok += checks::tv_distance(da, db) == Rational(0);
      ++sets;
    }
  OSatSystem s2(in, OSatParams::make(F, in, 2, Arith::Multilinear));
  std::vector<std::vector<Fe>> pts = hk_points({0, 1, 2, 3}, 3);
  for (size_t i = 0; i < pts.size(); ++i) {
    ok += commitment_images_equal(s2, {0, 0}, {1, 0}, {pts[i]});
    ++sets;
    for (size_t j = i + 1; j < pts.size(); ++j) {
      ok += commitment_images_equal(s2, {0, 1}, {1, 1}, {pts[i], pts[j]});
      ++sets;
    }
  }
  Rng rng(sc.master.derive("c11", 0));
  for (uint64_t t = 0; t < sc.commit_triples; ++t) {
    std::vector<std::vector<Fe>> Q;
    for (int j = 0; j < 3; ++j) Q.push_back(random_coins(F, 3, rng));
    ok += commitment_images_equal(s2, {0, 0}, {1, 0}, Q);
    ++sets;
  }
  return {11, "Commitment hiding", ok == sets, "TV 0 on " + crit::frac(ok, sets) + " query sets"};
}

namespace crit {

// One-round sumcheck over GF(4), m = 2, H = {0,1}, F = XY + X; the proof is g1 on GF(4).
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

// bivariate C over GF(4), individual degree 2, sum over {0,1}^2 fixed
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
  ProofAccess sample(const AffineSolution& sol, RandomSource& rng) const {
    Vec c = sol.particular;
    for (auto& k : sol.kernel) axpy(F, c, static_cast<Fe>(rng.below(4)), k);
    auto coef = std::make_shared<Vec>(c);
    return [this, coef](const Pos& p) { return Symbol{dot(F, eval_functional(F, b, {p.idx.at(0), p.idx.at(1)}), *coef)}; };
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
  Rational tv(const LocalMap& f, const Adversary& V) const {
    auto sol = solve_affine(F, {sum_functional()}, {A}, b.box_size());
    checks::Dist r, s;
    enumerate_branches(
        [&](RandomSource& rng) { return run_adversary(V, derived_proof(f, sample(sol, rng)), rng).key(); },
        [&](const Vec& k, const Rational& w) { checks::accumulate(r, k, w); });
    auto s0 = sim();
    enumerate_branches([&](RandomSource& rng) { return lifted_simulator(s0, f, V, rng, rng).key(); },
                       [&](const Vec& k, const Rational& w) { checks::accumulate(s, k, w); });
    return checks::tv_distance(r, s);
  }
};

}  // namespace crit

// 12. Verdicts survive composition; decisions stay local; lifted simulation exact; flips caught.
inline CriterionResult criterion_composition(const CriteriaScale&) {
  crit::MicroOuter O;
  auto outer = O.sys();
  SymbolCodec codec{2};
  size_t mism = 0, honest_rej = 0;
  bool audit_ok = true;
  for (auto inner : {pass_through_inner(), wire_transcript_inner()}) {
    auto c = compose(outer, inner, codec);
    LocalAudit audit;
    for (uint32_t v = 0; v < 256; ++v) {
      auto base = crit::MicroOuter::table({v & 3, (v >> 2) & 3, (v >> 4) & 3, (v >> 6) & 3});
      auto pi = composed_proof(c, base, codec, &audit);
      for (uint64_t r = 0; r < *c.sys.R; ++r) mism += pcp_verify(c.sys, pi, r) != pcp_verify(outer, base, r);
    }
    auto hon = crit::MicroOuter::table(O.honest());
    for (uint64_t r = 0; r < *c.sys.R; ++r) honest_rej += !pcp_verify(c.sys, composed_proof(c, hon, codec), r);
    audit_ok = audit_ok && audit.max_reads <= outer.q;
  }

  crit::MicroCommit Z;
  Adversary V3{"adaptive3", 3, [](const Querier& q, RandomSource& c) {
                 Fe x = q({"C", {0, 0}})[0];
                 Fe y = q({"C", {x, 1}})[0];
                 q({"C", {static_cast<uint32_t>(c.below(4)), y}});
               }};
  LocalMap pair{"pair", 2, [](const Pos& p, BaseReader& rd) {
                  Symbol a = rd({"C", p.idx}), b = rd({"C", {p.idx[0], (p.idx[1] + 1) % 4}});
                  return Symbol{a[0], b[0]};
                }};
  Adversary V1{"pair1", 1, [](const Querier& q, RandomSource& c) { q({"D", {static_cast<uint32_t>(c.below(4)), 1}}); }};
  PcpSystem dummy;
  dummy.Q = [](uint64_t) { return std::vector<Pos>{}; };
  dummy.D = [](uint64_t, const std::vector<Symbol>&) { return true; };
  auto bits = alphabet_reduce(dummy, SymbolCodec{2}, [](const std::string&) { return size_t(1); }, 11);
  Adversary Vb{"bits3", 3, [](const Querier& q, RandomSource&) {
                 Fe t = q({"tau/C", {1, 1, 5}})[0];
                 q({"Pi_a/C", {t, 0, 0}});
                 q({"tau/C", {2, 3, static_cast<uint32_t>(7 - t)}});
               }};
  bool lifted = Z.tv(identity_map(), V3) == Rational(0) && Z.tv(pair, V1) == Rational(0) &&
                Z.tv(bits.map, Vb) == Rational(0);

  auto ar = alphabet_reduce(outer, SymbolCodec{2}, [](const std::string&) { return size_t(1); }, 3);
  auto hon = derived_proof(ar.map, crit::MicroOuter::table(O.honest()));
  size_t flips = 0, survived = 0;
  for (uint64_t r = 0; r < 4; ++r) {
    honest_rej += !pcp_verify(ar.sys, hon, r);
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
  std::ostringstream d;
  d << "verdict mismatches " << mism << ", honest rejects " << honest_rej << ", audit "
    << (audit_ok ? "local" : "nonlocal") << ", lifted TV " << (lifted ? "0" : ">0") << ", flips caught "
    << crit::frac(flips - survived, flips);
  return {12, "Composition mechanics", mism == 0 && honest_rej == 0 && audit_ok && lifted && survived == 0 && flips > 0,
          d.str()};
}

// 13. One query past the declared budget is refused before it is answered.
inline CriterionResult criterion_budget(const CriteriaScale& sc) {
  auto M = osat_micro(true);
  auto zoo = osat_adversary_zoo(*M.sys);
  std::vector<OsatAdversary> all = zoo.within;
  all.insert(all.end(), zoo.over.begin(), zoo.over.end());
  size_t cases = 0, ok = 0;
  for (size_t i = 0; i < all.size(); ++i) {
    auto& A = all[i];
    auto pr = osat_prove(*M.sys, M.witness, sc.master.derive("c13/proof", i));
    auto real = osat_oracles(pr);
    Rng c1(sc.master.derive("c13/coins", i));
    size_t served = 0;
    ok += overreach_refused(A, real, c1, &served) && served <= A.budget;
    Rng srng(sc.master.derive("c13/sim", i)), c2(sc.master.derive("c13/coins", i));
    OSatSimulator sim(*M.sys, srng);
    auto so = sim.oracles();
    served = 0;
    ok += overreach_refused(A, so, c2, &served) && served <= A.budget;
    cases += 2;
  }
  auto P = build_pipeline(pipeline_phi(true), {1}, sc.master);
  auto sim0 = osat_base_simulator(P.M.sys);
  auto pr = osat_prove(*P.M.sys, P.M.witness, sc.master.derive("c13/pipeline", 0));
  auto base = pipeline_base(std::make_shared<OSatOracles>(osat_oracles(pr)));
  auto bitsproof = derived_proof(P.bits_chain, base);
  for (auto& V : pipeline_adversaries(P)) {
    Adversary greedy = V;
    greedy.budget = V.budget;
    greedy.run = [V](const Querier& q, RandomSource& c) {
      V.run(q, c);
      q({"bits/tau/pi_C", {0, 0, 0}});
    };
    size_t calls = 0;
    ProofAccess counting = [&](const Pos& p) {
      ++calls;
      return bitsproof(p);
    };
    auto refused = [](auto&& f) {
      try {
        f();
      } catch (const Error& e) {
        return e.code() == Errc::BudgetExceeded;
      }
      return false;
    };
    Rng c1(sc.master.derive("c13/pipeline/coins", 0));
    ok += refused([&] { run_adversary(greedy, counting, c1); }) && calls == V.budget;
    Rng srng(sc.master.derive("c13/pipeline/sim", 0)), c2(sc.master.derive("c13/pipeline/coins", 1));
    ok += refused([&] { lifted_simulator(sim0, P.bits_chain, greedy, srng, c2); });
    cases += 2;
  }
  return {13, "Budget enforcement", ok == cases, "refused before serving in " + crit::frac(ok, cases) + " cases"};
}

inline std::vector<std::function<CriterionResult(const CriteriaScale&)>> all_criteria() {
  return {criterion_rsc_completeness, criterion_cascade,   criterion_mask_nullity,     criterion_polysim,
          criterion_sum_independence, criterion_sum_gh,    criterion_claim_equivalence, criterion_osat_completeness,
          criterion_osat_soundness,   criterion_zk,        criterion_hiding,           criterion_composition,
          criterion_budget};
}

inline std::string criterion_line(const CriterionResult& r) {
  std::ostringstream o;
  o << (r.pass ? "PASS" : "FAIL") << " [" << std::setw(2) << r.id << "] " << r.name << ": " << r.detail;
  return o.str();
}

}  // namespace zkpcp
