#pragma once

#include "../zksc.hpp"
#include "exact_checks.hpp"
#include "pipeline.hpp"
#include "report.hpp"
#include "stats.hpp"

namespace zkpcp {

// ---- micro systems ----

struct OsatMicro {
  std::string name;
  std::shared_ptr<const Field> F;
  std::shared_ptr<const OSatSystem> sys;
  std::vector<uint8_t> witness;  // satisfying when satisfiable, else arbitrary
  bool satisfiable = true;
};

inline OSatInstance osat_micro_instance(bool satisfiable) {
  OSatInstance in;
  in.B.nvars = 3;
  if (satisfiable)
    in.B.clauses = {{1, 2, 3}};
  else
    in.B.clauses = {{1, 2}, {-1, -2}};
  return in;
}

inline bool osat_satisfiable(const OSatInstance& in) {
  size_t na = size_t(1) << in.s;
  for (uint64_t a = 0; a < (uint64_t(1) << na); ++a) {
    std::vector<uint8_t> A(na);
    for (size_t i = 0; i < na; ++i) A[i] = (a >> i) & 1;
    if (osat_check_direct(in, A)) return true;
  }
  return false;
}

inline OsatMicro osat_system(std::string name, const OSatInstance& in, std::vector<uint8_t> witness) {
  OsatMicro M;
  M.name = std::move(name);
  auto F = std::make_shared<Field>(FieldSpec::binary(8, 1));
  M.F = F;
  M.sys = std::make_shared<OSatSystem>(in, OSatParams::make(*F, in, 1, Arith::Multilinear));
  M.witness = std::move(witness);
  M.satisfiable = osat_check_direct(in, M.witness);
  return M;
}

// GF(256), H = {0,1}, k = 1.
inline OsatMicro osat_micro(bool satisfiable) {
  return osat_system(satisfiable ? "osat-micro" : "osat-micro-unsat", osat_micro_instance(satisfiable), {1});
}

struct RscMicro {
  std::string name;
  std::shared_ptr<const Field> F;
  SumInstance inst;
  MultiPoly P;
};

// F = X1 X2 + X1 over GF(p), H = {0,1}, d = 3, gamma = 3.
inline RscMicro rsc_micro(uint32_t p = 17, Rational delta = Rational(1, 2)) {
  RscMicro R;
  R.name = "rsc-gf" + std::to_string(p);
  auto F = std::make_shared<Field>(FieldSpec::prime(p));
  R.F = F;
  R.inst = SumInstance{F.get(), 2, 3, {0, 1}, 3, delta};
  R.P = MultiPoly::zero(DegreeBounds::uniform(2, 1));
  R.P.c[R.P.index({1, 1})] = 1;
  R.P.c[R.P.index({1, 0})] = 1;
  R.inst.validate();
  return R;
}

inline Oracle poly_input_oracle(const Field& F, const MultiPoly& p, const std::string& id = "F") {
  auto sp = std::make_shared<MultiPoly>(p);
  const Field* Fp = &F;
  return Oracle(id, std::vector<uint32_t>(p.m(), F.order()), 1,
                [sp, Fp](const Index& i) { return Symbol{eval(*Fp, *sp, std::vector<Fe>(i.begin(), i.end()))}; });
}

// ---- row helpers ----

inline ReportRow rate_row(std::string exp, std::string sys, std::string label, uint64_t n, uint64_t hits, double conf,
                          std::string seed_label) {
  ReportRow r;
  r.experiment = std::move(exp);
  r.system = std::move(sys);
  r.label = std::move(label);
  r.n = n;
  r.count = hits;
  r.value = n ? double(hits) / double(n) : 0.0;
  r.exact_value = Rational(hits, std::max<uint64_t>(n, 1)).str();
  auto ci = stats::binomial_ci(hits, n, conf);
  r.lo = ci.lo;
  r.hi = ci.hi;
  r.seed_label = std::move(seed_label);
  return r;
}

inline Vec osat_view_key(const VerifierView& v) {
  Vec k;
  k.push_back(static_cast<Fe>(v.randomness.size()));
  for (auto c : v.randomness) k.push_back(static_cast<Fe>(c));
  for (auto& a : v.answers) {
    k.push_back(static_cast<Fe>(a.oracle.size()));
    k.insert(k.end(), a.oracle.begin(), a.oracle.end());
    k.insert(k.end(), a.index.begin(), a.index.end());
    k.insert(k.end(), a.answer.begin(), a.answer.end());
  }
  return k;
}

// ---- zero knowledge ----

inline Report exp_zk(const OsatMicro& M, const ExperimentConfig& cfg) {
  cfg.validate();
  Report rep;
  rep.cfg = cfg;
  const OSatSystem& sys = *M.sys;
  auto zoo = osat_adversary_zoo(sys);
  size_t tests = 0;
  for (auto& A : zoo.within) tests += A.budget > 0;
  double thr = stats::bonferroni(cfg.alpha, tests);
  const Seed& ms = cfg.master;
  for (auto& A : zoo.within) {
    Stopwatch sw;
    ReportRow r;
    r.experiment = "zk";
    r.system = M.name;
    r.label = A.name;
    r.extra = {{"budget", A.budget}, {"c_points", A.c_points}};
    if (A.budget == 0) {
      // views carry only the adversary's coins: tabulate both sides exactly
      checks::Dist real, sim;
      Seed ps = ms.derive("zk/exact/proof/" + A.name);
      enumerate_branches(
          [&](RandomSource& rs) {
            auto pr = osat_prove(sys, M.witness, ps);
            auto o = osat_oracles(pr);
            return osat_view_key(run_osat_adversary(A, o, rs));
          },
          [&](const Vec& k, const Rational& w) { checks::accumulate(real, k, w); });
      enumerate_branches(
          [&](RandomSource& rs) {
            OSatSimulator s(sys, rs);
            auto o = s.oracles();
            return osat_view_key(run_osat_adversary(A, o, rs));
          },
          [&](const Vec& k, const Rational& w) { checks::accumulate(sim, k, w); });
      Rational tv = checks::tv_distance(real, sim);
      r.metric = "tv";
      r.exact = true;
      r.exact_value = tv.str();
      r.value = tv.to_double();
      r.p = tv == Rational(0) ? 1.0 : 0.0;
      r.n = real.size();
      r.pass = tv == Rational(0);
      r.seed_label = "zk/exact/proof/" + A.name;
      r.note = "exact tabulation over the adversary's coins";
    } else {
      std::map<uint64_t, uint64_t> rb, sb;
      for (uint64_t t = 0; t < cfg.zk_trials; ++t) {
        auto pr = osat_prove(sys, M.witness, ms.derive("zk/real/proof/" + A.name, t));
        auto o = osat_oracles(pr);
        Rng coins(ms.derive("zk/real/coins/" + A.name, t));
        ++rb[view_bin(A, run_osat_adversary(A, o, coins), cfg.bins)];
      }
      for (uint64_t t = 0; t < cfg.zk_trials; ++t) {
        Rng srng(ms.derive("zk/sim/rng/" + A.name, t)), coins(ms.derive("zk/sim/coins/" + A.name, t));
        OSatSimulator s(sys, srng);
        auto o = s.oracles();
        ++sb[view_bin(A, run_osat_adversary(A, o, coins), cfg.bins)];
      }
      auto c = stats::chi2_two_sample(rb, sb);
      r.metric = "chi2";
      r.n = cfg.zk_trials;
      r.stat = c.stat;
      r.df = c.df;
      r.p = c.p;
      r.threshold = thr;
      r.pass = c.p > thr;
      r.seed_label = "zk/{real,sim}/*/" + A.name;
      r.extra["bins_used"] = std::max(rb.size(), sb.size());
    }
    r.runtime_ms = sw.ms();
    rep.rows.push_back(r);
  }
  for (auto& A : zoo.over) {
    ReportRow r;
    r.experiment = "zk";
    r.system = M.name;
    r.label = A.name;
    r.metric = "budget";
    r.extra = {{"budget", A.budget}, {"c_points", A.c_points}};
    auto outcome = [&](auto&& go) -> std::string {
      try {
        go();
        return "served";
      } catch (const Error& e) {
        if (e.code() == Errc::BudgetExceeded) return "BudgetExceeded";
        throw;
      }
    };
    std::string real = outcome([&] {
      auto pr = osat_prove(sys, M.witness, ms.derive("zk/over/proof/" + A.name));
      auto o = osat_oracles(pr);
      Rng coins(ms.derive("zk/over/coins/" + A.name));
      run_osat_adversary(A, o, coins);
    });
    std::string sim = outcome([&] {
      Rng srng(ms.derive("zk/over/sim/" + A.name));
      OSatSimulator s(sys, srng);
      auto o = s.oracles();
      run_osat_adversary(A, o, srng);
    });
    r.note = "outside the query bound; real: " + real + ", simulator: " + sim;
    r.extra["real"] = real;
    r.extra["simulator"] = sim;
    r.seed_label = "zk/over/*/" + A.name;
    rep.rows.push_back(r);
  }
  return rep;
}

// ---- soundness ----

inline Report exp_soundness_rsc(const ExperimentConfig& cfg) {
  Report rep;
  rep.cfg = cfg;
  auto R = rsc_micro();
  const Field& F = *R.F;
  auto honest = rsc_prove(R.inst, R.P);
  auto f = poly_input_oracle(F, R.P);
  uint64_t N = cfg.trials;
  auto run = [&](const std::string& label, const SumInstance& inst, auto&& proof_for) {
    Stopwatch sw;
    uint64_t rej = 0;
    for (uint64_t t = 0; t < N; ++t) {
      Rng rng(cfg.master.derive("soundness/" + R.name + "/" + label, t));
      Oracle pi = proof_for(t);
      auto coins = random_coins(F, inst.m - 1, rng);
      rej += !rsc_verify(inst, f, pi, coins, rng).accept;
    }
    auto row = rate_row("soundness", R.name, label, N, rej, cfg.ci, "soundness/" + R.name + "/" + label);
    row.metric = "reject";
    row.runtime_ms = sw.ms();
    return row;
  };
  auto hon = run("honest", R.inst, [&](uint64_t) { return honest.oracle("pi"); });
  hon.pass = hon.count == 0;
  hon.threshold = 0.0;
  hon.note = "completeness control";
  rep.rows.push_back(hon);

  auto rnd = run("random-proof", R.inst, [&](uint64_t t) {
    Seed s = cfg.master.derive("soundness/" + R.name + "/random-proof/table", t);
    const Field* Fp = &F;
    return Oracle("pi", {F.order()}, 1, [s, Fp](const Index& i) { return prf_symbol(*Fp, s, "pi", i, 1); });
  });
  rnd.threshold = 0.99;
  rnd.pass = *rnd.value >= 0.99;
  rep.rows.push_back(rnd);

  // cascade: gamma' = gamma + 1, shift carried on b0 = 0
  SumInstance wrong = R.inst;
  wrong.gamma = F.add(R.inst.gamma, 1);
  auto forged = rsc_cascade_forgery(R.inst, honest, wrong.gamma, 0);
  auto cas = run(forgery_name(ForgeryKind::WrongGammaCascade), wrong, [&](uint64_t) { return forged.oracle("pi"); });
  double bound = 1.0 - double(wrong.m * wrong.d) / double(F.order());
  double ph = *cas.value;
  double sigma = std::sqrt(std::max(ph * (1 - ph), 1e-12) / double(N));
  cas.threshold = bound - 3 * sigma;
  cas.pass = ph >= *cas.threshold;
  cas.extra = {{"analytic_bound", bound}, {"sigma", sigma}};
  rep.rows.push_back(cas);
  return rep;
}

inline Report exp_soundness_osat(const ExperimentConfig& cfg, std::vector<ForgeryStrategy> forgeries = {}) {
  Report rep;
  rep.cfg = cfg;
  if (forgeries.empty())
    forgeries = {{ForgeryKind::WrongWitness, 0},
                 {ForgeryKind::RandomProof, 0},
                 {ForgeryKind::Bitflip, 0.05},
                 {ForgeryKind::TamperPiP, 0.05}};
  auto S = osat_micro(true), U = osat_micro(false);
  auto bal = osat_balance(*U.sys);
  uint64_t N = cfg.trials;
  auto run = [&](const OsatMicro& M, const ForgeryStrategy& st) {
    Stopwatch sw;
    std::string label = st.label();
    std::string sl = "soundness/" + M.name + "/" + label;
    uint64_t rej = 0;
    std::map<std::string, uint64_t> where;
    for (uint64_t t = 0; t < N; ++t) {
      std::vector<uint8_t> A = M.witness;
      if (st.kind != ForgeryKind::Honest) A = {uint8_t(t & 1)};
      auto fo = osat_forgery(*M.sys, st, A, cfg.master.derive(sl + "/proof", t));
      Rng rng(cfg.master.derive(sl + "/coins", t));
      auto res = osat_verify(*M.sys, *fo.o, rng, {}, bal);
      rej += !res.accept;
      ++where[osat_fail_name(res.fail)];
    }
    auto row = rate_row("soundness", M.name, label, N, rej, cfg.ci, sl);
    row.metric = "reject";
    row.extra["outcomes"] = where;
    row.runtime_ms = sw.ms();
    return row;
  };
  auto hon = run(S, {ForgeryKind::Honest, 0});
  hon.pass = hon.count == 0;
  hon.threshold = 0.0;
  hon.note = "completeness control";
  rep.rows.push_back(hon);
  for (auto& st : forgeries) {
    auto row = run(U, st);
    if (st.kind == ForgeryKind::WrongWitness || st.kind == ForgeryKind::RandomProof) {
      row.threshold = 0.5;
      row.pass = *row.value >= 0.5;
    }
    rep.rows.push_back(row);
  }
  return rep;
}

inline Report exp_soundness(const ExperimentConfig& cfg) {
  cfg.validate();
  Report rep;
  rep.cfg = cfg;
  if (cfg.system == "rsc-micro" || cfg.system == "all") rep.append(exp_soundness_rsc(cfg));
  if (cfg.system == "osat-micro" || cfg.system == "all") rep.append(exp_soundness_osat(cfg));
  if (rep.rows.empty()) fail(Errc::BadConfig, "unknown system " + cfg.system);
  return rep;
}

// ---- robustness ----

// Exhaustive reference: every degree-<=d layer u with the right H-sum, and every input axis within
// one change of the view, judged by the axis decision itself.
inline Rational rsc_axis_distance_bruteforce(const SumInstance& inst, const std::vector<Fe>& coins,
                                             const RscAxisView& v) {
  const Field& F = *inst.F;
  size_t q = F.order();
  Vec ts = field_elements(F);
  size_t best = 2 * q;
  Vec c(inst.d + 1, 0);
  RscAxisView cand = v;
  for (;;) {
    size_t du = 0;
    for (size_t a = 0; a < q; ++a) {
      Fe y = uni_eval(F, c, ts[a]);
      cand.pi[a] = {y};
      du += y != v.pi[a][0];
    }
    if (du < best) {
      cand.f = v.f;
      if (rsc_axis_decide(inst, coins, cand) == RscStep::None) best = du;
      for (size_t a = 0; a < q && du + 1 < best; ++a)
        for (Fe y = 0; y < q && du + 1 < best; ++y) {
          if (y == v.f[a]) continue;
          cand.f = v.f;
          cand.f[a] = y;
          if (rsc_axis_decide(inst, coins, cand) == RscStep::None) best = du + 1;
        }
    }
    size_t k = c.size();
    while (k-- > 0) {
      if (++c[k] < q) break;
      c[k] = 0;
    }
    if (k == static_cast<size_t>(-1)) break;
  }
  return Rational(best, 2 * q);
}

struct MarkovCheck {
  Rational eps;
  Rational frac;  // Pr[dist >= rho - eps]
  bool holds = false;
};

// Expected robustness rho gives, for eps <= rho, Pr[dist >= rho - eps] >= eps.
inline std::vector<MarkovCheck> markov_checks(const std::vector<Rational>& dists) {
  std::vector<MarkovCheck> out;
  if (dists.empty()) return out;
  Rational rho(0);
  for (auto& d : dists) rho = rho + d;
  rho = rho / Rational(dists.size());
  for (uint64_t k : {4, 2, 1}) {
    MarkovCheck m;
    m.eps = rho / Rational(k);
    Rational lo = rho - m.eps;
    size_t hit = 0;
    for (auto& d : dists) hit += lo <= d;
    m.frac = Rational(hit, dists.size());
    m.holds = m.eps <= m.frac;
    out.push_back(m);
  }
  return out;
}

inline Report exp_robustness_rsc(const ExperimentConfig& cfg) {
  Report rep;
  rep.cfg = cfg;
  auto R = rsc_micro(11, Rational(6, 10));
  const Field& F = *R.F;
  size_t q = F.order();
  auto f = poly_input_oracle(F, R.P);
  InputFn in = [&](const std::vector<Fe>& x) { return f.query1(to_index(x)); };
  auto honest = rsc_prove(R.inst, R.P);
  auto hpi = honest.oracle("pi");
  RscProof zero{&F, 2, {MultiPoly::zero(DegreeBounds::uniform(1, 0))}};
  auto zpi = zero.oracle("pi");

  Stopwatch sw;
  Rational hsum(0);
  for (Fe c = 0; c < q; ++c) hsum = hsum + rsc_axis_distance_structured(R.inst, {c}, rsc_read_axes(R.inst, in, hpi, {c})).value;
  ReportRow h;
  h.experiment = "robustness";
  h.system = R.name;
  h.label = "honest";
  h.metric = "mean-distance";
  h.n = q;
  h.exact = true;
  h.exact_value = (hsum / Rational(q)).str();
  h.value = (hsum / Rational(q)).to_double();
  h.pass = hsum == Rational(0);
  h.note = "all coins";
  h.runtime_ms = sw.ms();
  rep.rows.push_back(h);

  sw = Stopwatch();
  std::vector<Rational> dists;
  bool agree = true;
  Rational sum(0), bsum(0);
  for (Fe c = 0; c < q; ++c) {
    auto v = rsc_read_axes(R.inst, in, zpi, {c});
    Rational d = rsc_axis_distance_structured(R.inst, {c}, v).value;
    Rational b = rsc_axis_distance_bruteforce(R.inst, {c}, v);
    agree = agree && d == b;
    dists.push_back(d);
    sum = sum + d;
    bsum = bsum + b;
  }
  Rational mean = sum / Rational(q);
  ReportRow z;
  z.experiment = "robustness";
  z.system = R.name;
  z.label = "zero-proof";
  z.metric = "mean-distance";
  z.n = q;
  z.exact = true;
  z.exact_value = mean.str();
  z.value = mean.to_double();
  z.pass = agree && Rational(0) < mean;
  z.extra = {{"bruteforce_mean", (bsum / Rational(q)).str()}, {"agree", agree}};
  std::vector<std::string> ds;
  for (auto& d : dists) ds.push_back(d.str());
  z.extra["per_coin"] = ds;
  z.note = "all coins; structured search vs brute force";
  z.runtime_ms = sw.ms();
  rep.rows.push_back(z);

  for (auto& m : markov_checks(dists)) {
    ReportRow r;
    r.experiment = "robustness";
    r.system = R.name;
    r.label = "markov(eps=" + m.eps.str() + ")";
    r.metric = "fraction";
    r.n = q;
    r.exact = true;
    r.exact_value = m.frac.str();
    r.value = m.frac.to_double();
    r.threshold = m.eps.to_double();
    r.pass = m.holds;
    r.note = "Pr[dist >= rho - eps] >= eps";
    rep.rows.push_back(r);
  }

  Rational drm = R.inst.delta_rm();
  Rational four = drm * Rational(4);
  Rational other = four < Rational(1) ? Rational(1) - four : Rational(0);
  Rational ref = rmin(drm, other) / Rational(2);
  ReportRow ql;
  ql.experiment = "robustness";
  ql.system = R.name;
  ql.label = "reference-1/2min(dRM,1-4dRM)";
  ql.metric = "comparison";
  ql.exact = true;
  ql.exact_value = ref.str();
  ql.value = ref.to_double();
  ql.extra = {{"measured_mean", mean.str()}, {"measured_at_least_reference", ref <= mean}};
  ql.note = "qualitative; constants are asymptotic";
  rep.rows.push_back(ql);
  return rep;
}

inline Report exp_robustness_osat(const ExperimentConfig& cfg) {
  Report rep;
  rep.cfg = cfg;
  auto S = osat_micro(true), U = osat_micro(false);
  auto bal = osat_balance(*U.sys);
  uint64_t N = cfg.trials;
  auto run = [&](const OsatMicro& M, const ForgeryStrategy& st) {
    Stopwatch sw;
    std::string sl = "robustness/" + M.name + "/" + st.label();
    Rational sum(0);
    uint64_t positive = 0;
    for (uint64_t t = 0; t < N; ++t) {
      std::vector<uint8_t> A = st.kind == ForgeryKind::Honest ? M.witness : std::vector<uint8_t>{uint8_t(t & 1)};
      auto fo = osat_forgery(*M.sys, st, A, cfg.master.derive(sl + "/proof", t));
      Rng rng(cfg.master.derive(sl + "/coins", t));
      auto [res, pos] = osat_verify_counted(*M.sys, *fo.o, rng, bal);
      auto b = osat_distance_lower_bound(*M.sys, res, pos);
      sum = sum + b.value;
      positive += Rational(0) < b.value;
    }
    Rational mean = sum / Rational(N);
    ReportRow r;
    r.experiment = "robustness";
    r.system = M.name;
    r.label = st.label();
    r.metric = "mean-distance-lower-bound";
    r.n = N;
    r.count = positive;
    r.exact = false;
    r.exact_value = mean.str();
    r.value = mean.to_double();
    r.seed_label = sl;
    r.note = "lower bound from necessary changes per subtest";
    r.runtime_ms = sw.ms();
    return r;
  };
  auto h = run(S, {ForgeryKind::Honest, 0});
  h.pass = h.count == 0;
  rep.rows.push_back(h);
  for (auto k : {ForgeryKind::WrongWitness, ForgeryKind::RandomProof}) {
    auto r = run(U, {k, 0});
    r.pass = *r.value > 0;
    rep.rows.push_back(r);
  }
  return rep;
}

inline Report exp_robustness(const ExperimentConfig& cfg) {
  cfg.validate();
  Report rep;
  rep.cfg = cfg;
  if (cfg.system == "rsc-micro" || cfg.system == "all") rep.append(exp_robustness_rsc(cfg));
  if (cfg.system == "osat-micro" || cfg.system == "all") rep.append(exp_robustness_osat(cfg));
  if (rep.rows.empty()) fail(Errc::BadConfig, "unknown system " + cfg.system);
  return rep;
}

// ---- pipeline: 3SAT -> OSat -> osat PCP -> bits -> composed ----

struct Pipeline {
  Cnf phi;
  OsatMicro M;
  OSatBalance bal;
  PcpSystem osat;
  AlphabetReduction ar;
  Composed comp;
  LocalMap bits_chain;  // composed bit positions from the osat proof
  SymbolCodec codec{8};
};

inline Cnf pipeline_phi(bool satisfiable) {
  Cnf c;
  c.nvars = 1;
  if (satisfiable)
    c.clauses = {{1, 1, 1}, {1, -1, 1}};
  else
    c.clauses = {{1}, {-1}};
  return c;
}

inline Pipeline build_pipeline(const Cnf& phi, const std::vector<uint8_t>& assignment, const Seed& master) {
  Pipeline P;
  P.phi = phi;
  auto enc = osat_encode_from_3sat(phi);
  P.M = osat_system("3sat-pipeline", enc.inst, enc.translate(assignment));
  const OSatSystem& sys = *P.M.sys;
  P.bal = osat_balance(sys);
  P.osat = osat_pcp(sys, P.bal, master.derive("pipeline/verifier"));
  P.osat.q = P.osat.Q(0).size();
  P.ar = alphabet_reduce(P.osat, P.codec, osat_widths(sys), 1);
  P.ar.sys.q = P.ar.sys.Q(0).size();
  P.comp = compose(P.ar.sys, pass_through_inner(), SymbolCodec{1});
  P.bits_chain = chain_maps(P.ar.map, composed_bits_map(SymbolCodec{1}));
  return P;
}

inline ProofAccess pipeline_base(std::shared_ptr<OSatOracles> o) { return memo_access(osat_access(std::move(o))); }

struct StageParams {
  std::string stage;
  double rand_bits = 0;
  size_t q = 0, distinct = 0, sym_bits = 0, qstar = 0, ell = 1;
  nlohmann::json extra = nlohmann::json::object();
};

inline std::vector<StageParams> pipeline_params(const Pipeline& P, uint64_t r = 0) {
  const OSatSystem& sys = *P.M.sys;
  std::vector<StageParams> out;
  auto distinct = [](const std::vector<Pos>& v) { return std::set<Pos>(v.begin(), v.end()).size(); };
  StageParams s0{"3sat"};
  s0.extra = {{"vars", P.phi.nvars}, {"clauses", P.phi.clauses.size()}};
  out.push_back(s0);
  StageParams s1{"oracle-3sat"};
  const auto& in = sys.instance();
  const auto& pp = sys.params();
  s1.extra = {{"r", in.r}, {"s", in.s}, {"B_vars", in.B.nvars}, {"field_order", sys.field().order()},
              {"H", pp.H.size()}, {"k", pp.k}, {"tau_len", pp.tau_len()}, {"sc_vars", pp.sc_vars()},
              {"c_vars", pp.c_vars()}};
  out.push_back(s1);
  StageParams s2{"osat-pcp"};
  {
    ScriptedOracles rec;
    auto o = rec.make(sys);
    Rng base = osat_run_rng(Seed::from_u64(0), r);
    CountingSource cs(base);
    osat_verify(sys, o, cs, {}, P.bal);
    s2.rand_bits = cs.bits();
  }
  auto q2 = P.osat.Q(r);
  s2.q = q2.size();
  s2.distinct = distinct(q2);
  s2.sym_bits = P.osat.sym_bits;
  s2.qstar = P.osat.qstar;
  s2.extra = {{"ldt_reps", P.bal.ldt_reps}, {"sc_reps", P.bal.sc_reps}};
  out.push_back(s2);
  StageParams s3{"alphabet-reduced"};
  auto q3 = P.ar.sys.Q(r);
  s3.rand_bits = s2.rand_bits;
  s3.q = q3.size();
  s3.distinct = distinct(q3);
  s3.sym_bits = 1;
  s3.qstar = P.ar.sys.qstar;
  s3.ell = P.ar.map.ell;
  for (std::string o : {"pi_C", "pi_sigma", "pi_P"}) {
    size_t a = P.codec.elem_bits * osat_widths(sys)(o);
    const EccSpec& e = P.ar.ecc(a);
    s3.extra[o] = {{"a", e.a}, {"b", e.b}, {"min_distance", e.min_distance}, {"distance_exact", e.exhaustive}};
  }
  out.push_back(s3);
  StageParams s4{"composed"};
  auto q4 = P.comp.sys.Q(r);
  s4.rand_bits = s3.rand_bits;
  s4.q = q4.size();
  s4.distinct = distinct(q4);
  s4.sym_bits = 1;
  s4.qstar = P.ar.sys.qstar;
  s4.ell = P.bits_chain.ell;
  s4.extra = {{"inner", "pass-through"}, {"inner_proof_symbols", 0}};
  out.push_back(s4);
  return out;
}

// Composed-stage adversaries over bit positions "bits/Pi_a/<o>" and "bits/tau/<o>".
inline std::vector<Adversary> pipeline_adversaries(const Pipeline& P) {
  const OSatSystem& sys = *P.M.sys;
  uint32_t q = sys.field().order();
  size_t tl = sys.params().tau_len(), m = sys.params().sc_vars(), cv = sys.params().c_vars();
  size_t wide = P.codec.elem_bits * (m + 1), tb = P.ar.ecc(wide).b, cb = P.ar.ecc(P.codec.elem_bits).b;
  auto pt = [q](RandomSource& r, size_t n) {
    Index x(n);
    for (auto& v : x) v = static_cast<uint32_t>(r.below(q));
    return x;
  };
  auto bit = [](std::string kind, std::string o, Index i, size_t j) {
    i.push_back(static_cast<uint32_t>(j));
    i.push_back(0);
    return Pos{"bits/" + kind + "/" + o, i};
  };
  std::vector<Adversary> out;
  out.push_back({"sigma-message-and-code", 2, [=](const Querier& Q, RandomSource& c) {
                   Index i = pt(c, tl + m - 1);
                   Q(bit("Pi_a", "pi_sigma", i, c.below(wide)));
                   Q(bit("tau", "pi_sigma", i, c.below(tb)));
                 }});
  out.push_back({"pi_P-reversal-bits", 2, [=](const Querier& Q, RandomSource& c) {
                   Index tau = pt(c, tl), a = pt(c, m);
                   Index x = tau, y = tau;
                   x.insert(x.end(), a.begin(), a.end());
                   y.insert(y.end(), a.rbegin(), a.rend());
                   Q(bit("Pi_a", "pi_P", x, 0));
                   Q(bit("Pi_a", "pi_P", y, 0));
                 }});
  out.push_back({"pi_C-codeword", 3, [=](const Querier& Q, RandomSource& c) {
                   Index i = pt(c, cv);
                   for (size_t j = 0; j < 3; ++j) Q(bit("tau", "pi_C", i, c.below(cb)));
                 }});
  return out;
}

inline uint64_t bit_view_bin(const View& v) {
  uint64_t b = 0;
  for (auto& [p, s] : v.qa) b = (b << 1) | (s.at(0) & 1);
  return b;
}

inline BaseSimulator osat_base_simulator(std::shared_ptr<const OSatSystem> sys) {
  return [sys](const Adversary& adv, RandomSource& sim_rng, RandomSource& coins) {
    OSatSimulator s(*sys, sim_rng);
    auto o = std::make_shared<OSatOracles>(s.oracles());
    return run_adversary(adv, osat_access(o), coins);
  };
}

inline Report exp_pipeline(const ExperimentConfig& cfg, uint64_t runs = 0) {
  cfg.validate();
  Report rep;
  rep.cfg = cfg;
  const Seed& ms = cfg.master;
  if (!runs) runs = std::min<uint64_t>(cfg.trials, 20);
  auto P = build_pipeline(pipeline_phi(true), {1}, ms);
  const OSatSystem& sys = *P.M.sys;

  for (auto& s : pipeline_params(P)) {
    ReportRow r;
    r.experiment = "pipeline";
    r.system = "3sat-pipeline";
    r.label = "params/" + s.stage;
    r.metric = "parameters";
    r.exact = true;
    r.extra = s.extra;
    r.extra["rand_bits"] = s.rand_bits;
    r.extra["q"] = s.q;
    r.extra["distinct"] = s.distinct;
    r.extra["sym_bits"] = s.sym_bits;
    r.extra["qstar"] = s.qstar;
    r.extra["ell"] = s.ell;
    rep.rows.push_back(r);
  }

  // completeness at every stage
  {
    Stopwatch sw;
    uint64_t acc[3] = {0, 0, 0};
    for (uint64_t t = 0; t < runs; ++t) {
      auto pr = osat_prove(sys, P.M.witness, ms.derive("pipeline/sat/proof", t));
      auto base = pipeline_base(std::make_shared<OSatOracles>(osat_oracles(pr)));
      auto bits = memo_access(derived_proof(P.ar.map, base));
      uint64_t r = Rng(ms.derive("pipeline/sat/r", t)).next();
      acc[0] += pcp_verify(P.osat, base, r);
      acc[1] += pcp_verify(P.ar.sys, bits, r);
      acc[2] += pcp_verify(P.comp.sys, composed_proof(P.comp, bits, SymbolCodec{1}), r);
    }
    const char* names[3] = {"osat-pcp", "alphabet-reduced", "composed"};
    for (int s = 0; s < 3; ++s) {
      auto row = rate_row("pipeline", "3sat-pipeline", std::string("accept/") + names[s], runs, acc[s], cfg.ci,
                          "pipeline/sat/*");
      row.metric = "accept";
      row.threshold = 1.0;
      row.pass = acc[s] == runs;
      row.runtime_ms = sw.ms();
      rep.rows.push_back(row);
    }
  }

  // unsatisfiable formula, committed table from an arbitrary assignment
  {
    Stopwatch sw;
    auto U = build_pipeline(pipeline_phi(false), {1}, ms);
    uint64_t rej = 0;
    for (uint64_t t = 0; t < runs; ++t) {
      Rng cr(ms.derive("pipeline/unsat/commit", t));
      auto pr = osat_proof_from_commitment(*U.M.sys, U.M.sys->commit_witness({uint8_t(t & 1)}, cr),
                                           ms.derive("pipeline/unsat/proof", t));
      auto base = pipeline_base(std::make_shared<OSatOracles>(osat_oracles(pr)));
      auto bits = memo_access(derived_proof(U.ar.map, base));
      uint64_t r = Rng(ms.derive("pipeline/unsat/r", t)).next();
      rej += !pcp_verify(U.comp.sys, composed_proof(U.comp, bits, SymbolCodec{1}), r);
    }
    auto row = rate_row("pipeline", "3sat-pipeline-unsat", "reject/composed", runs, rej, cfg.ci, "pipeline/unsat/*");
    row.metric = "reject";
    row.threshold = 0.5;
    row.pass = *row.value >= 0.5;
    row.runtime_ms = sw.ms();
    rep.rows.push_back(row);
  }

  // zero knowledge at the final stage through the lifted simulator
  auto advs = pipeline_adversaries(P);
  double thr = stats::bonferroni(cfg.alpha, advs.size());
  auto sim0 = osat_base_simulator(P.M.sys);
  for (auto& V : advs) {
    Stopwatch sw;
    std::map<uint64_t, uint64_t> rb, sb;
    for (uint64_t t = 0; t < cfg.zk_trials; ++t) {
      auto pr = osat_prove(sys, P.M.witness, ms.derive("pipeline/zk/real/proof/" + V.name, t));
      auto base = pipeline_base(std::make_shared<OSatOracles>(osat_oracles(pr)));
      Rng coins(ms.derive("pipeline/zk/real/coins/" + V.name, t));
      ++rb[bit_view_bin(run_adversary(V, derived_proof(P.bits_chain, base), coins))];
    }
    for (uint64_t t = 0; t < cfg.zk_trials; ++t) {
      Rng srng(ms.derive("pipeline/zk/sim/rng/" + V.name, t)), coins(ms.derive("pipeline/zk/sim/coins/" + V.name, t));
      ++sb[bit_view_bin(lifted_simulator(sim0, P.bits_chain, V, srng, coins))];
    }
    auto c = stats::chi2_two_sample(rb, sb);
    ReportRow r;
    r.experiment = "pipeline";
    r.system = "3sat-pipeline";
    r.label = "zk/" + V.name;
    r.metric = "chi2";
    r.n = cfg.zk_trials;
    r.stat = c.stat;
    r.df = c.df;
    r.p = c.p;
    r.threshold = thr;
    r.pass = c.p > thr;
    r.seed_label = "pipeline/zk/*/" + V.name;
    r.extra = {{"budget", V.budget}, {"locality", P.bits_chain.ell}};
    r.runtime_ms = sw.ms();
    rep.rows.push_back(r);
  }
  return rep;
}

inline Report run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  auto with_system = [&](std::string s) {
    ExperimentConfig c = cfg;
    if (c.system == "all") c.system = s;
    return c;
  };
  Report rep;
  rep.cfg = cfg;
  const std::string& e = cfg.experiment;
  bool all = e == "all";
  if (all || e == "zk") rep.append(exp_zk(osat_micro(true), with_system("osat-micro")));
  if (all || e == "soundness") rep.append(exp_soundness(cfg));
  if (all || e == "robustness") rep.append(exp_robustness(cfg));
  if (all || e == "pipeline") rep.append(exp_pipeline(cfg));
  if (rep.rows.empty()) fail(Errc::BadConfig, "unknown experiment " + e);
  return rep;
}

}  // namespace zkpcp
