#pragma once

#include <set>

#include "../compose.hpp"
#include "../osat_sim.hpp"

namespace zkpcp {

// ---- adversaries against the osat oracles ----

struct OsatAdversary {
  std::string name;
  size_t budget = 0;    // declared total queries
  size_t c_points = 0;  // distinct pi_C points it reads
  std::function<void(OracleSet&, RandomSource&)> run;
  std::function<uint64_t(const VerifierView&)> feature;  // pre-registered relation bits
};

inline VerifierView run_osat_adversary(const OsatAdversary& A, OSatOracles& o, RandomSource& coins,
                                       std::optional<size_t> budget = std::nullopt) {
  Transcript t;
  for (Oracle* x : {&o.pi_C, &o.pi_sigma, &o.pi_P}) {
    x->record_to(&t);
    x->reset_counter();
  }
  OracleSet set = OracleSet::concat({&o.pi_C, &o.pi_sigma, &o.pi_P});
  set.set_aggregate_budget(budget ? *budget : A.budget);
  CoinTape tape(coins);
  VerifierView v;
  auto detach = [&o] {
    for (Oracle* x : {&o.pi_C, &o.pi_sigma, &o.pi_P}) {
      x->record_to(nullptr);
      x->share_budget(nullptr);
    }
  };
  try {
    A.run(set, tape);
  } catch (...) {
    detach();
    throw;
  }
  detach();
  v.randomness = tape.tape();
  v.answers = t.records();
  return v;
}

// Pre-registered binning: relation bits, then the low bits of the first answer (or coin).
inline uint64_t view_bin(const OsatAdversary& A, const VerifierView& v, uint32_t bins) {
  uint64_t f = A.feature ? A.feature(v) : 0;
  uint64_t low = 0;
  if (!v.answers.empty())
    low = v.answers[0].answer.at(0) % bins;
  else if (!v.randomness.empty())
    low = v.randomness[0] % bins;
  return f * bins + low;
}

struct OsatZoo {
  std::vector<OsatAdversary> within;
  std::vector<OsatAdversary> over;  // exceed the pi_C point bound; informational
};

inline OsatZoo osat_adversary_zoo(const OSatSystem& sys) {
  const Field& F = sys.field();
  uint32_t q = F.order();
  size_t tl = sys.params().tau_len(), m = sys.params().sc_vars(), cv = sys.params().c_vars();
  auto pt = [q](RandomSource& r, size_t n) {
    Index x(n);
    for (auto& v : x) v = static_cast<uint32_t>(r.below(q));
    return x;
  };
  auto cat = [](Index a, const Index& b) {
    a.insert(a.end(), b.begin(), b.end());
    return a;
  };
  auto ans = [](const VerifierView& v, size_t i, size_t j) { return v.answers.at(i).answer.at(j); };
  const Field* Fp = &F;
  OsatZoo z;
  z.within.push_back({"zero-query", 0, 0, [q](OracleSet&, RandomSource& c) { c.below(q); }, nullptr});
  z.within.push_back({"fixed-index-pi_C", 1, 1,
                      [cv](OracleSet& s, RandomSource&) { s.query("pi_C", Index(cv, 77)); }, nullptr});
  z.within.push_back({"reversal-prober", 2, 0,
                      [=](OracleSet& s, RandomSource& c) {
                        Index tau = pt(c, tl), a = pt(c, m);
                        Index r(a.rbegin(), a.rend());
                        s.query("pi_P", cat(tau, a));
                        s.query("pi_P", cat(tau, r));
                      },
                      [=](const VerifierView& v) -> uint64_t { return ans(v, 0, 0) == ans(v, 1, 0); }});
  z.within.push_back({"adaptive-chain", 3, 0,
                      [=](OracleSet& s, RandomSource& c) {
                        Index tau = pt(c, tl), x = pt(c, m - 1);
                        auto a = s.query("pi_sigma", cat(tau, x));
                        x[m - 2] = a[0];
                        x[0] = a[1];
                        auto b = s.query("pi_sigma", cat(tau, x));
                        x[m - 2] = b[m - 2];
                        s.query("pi_sigma", cat(tau, x));
                      },
                      [=](const VerifierView& v) -> uint64_t {
                        return (ans(v, 0, 0) == ans(v, 1, 0)) | (uint64_t(ans(v, 2, m) == 0) << 1);
                      }});
  z.within.push_back({"sum-prober", 2, 0,
                      [=](OracleSet& s, RandomSource& c) {
                        Index tau = pt(c, tl), y = pt(c, m - 2);
                        s.query("pi_sigma", cat(cat(tau, y), {0}));
                        s.query("pi_sigma", cat(cat(tau, y), {1}));
                      },
                      [=](const VerifierView& v) -> uint64_t { return Fp->add(ans(v, 0, 0), ans(v, 1, 0)) == 0; }});
  z.within.push_back({"random-sampler", 3, 0,
                      [=](OracleSet& s, RandomSource& c) {
                        for (int i = 0; i < 3; ++i) {
                          if (c.below(2))
                            s.query("pi_sigma", pt(c, tl + m - 1));
                          else
                            s.query("pi_P", pt(c, tl + m));
                        }
                      },
                      [=](const VerifierView& v) -> uint64_t {
                        uint64_t f = 0;
                        for (size_t i = 0; i < v.answers.size(); ++i) f |= uint64_t(v.answers[i].oracle == "pi_P") << i;
                        return f;
                      }});
  z.within.push_back({"mixed-5", 5, 1,
                      [=](OracleSet& s, RandomSource& c) {
                        Index xc = pt(c, cv);
                        Fe cval = s.query("pi_C", xc)[0];
                        Index tau = pt(c, tl), x = pt(c, m - 1);
                        x[0] = cval;
                        auto a = s.query("pi_sigma", cat(tau, x));
                        x[m - 2] = a[1];
                        s.query("pi_sigma", cat(tau, x));
                        Index al = pt(c, m);
                        al[0] = a[0];
                        Index r(al.rbegin(), al.rend());
                        s.query("pi_P", cat(tau, al));
                        s.query("pi_P", cat(tau, r));
                      },
                      [=](const VerifierView& v) -> uint64_t {
                        return (ans(v, 1, 0) == ans(v, 2, 0)) | (uint64_t(ans(v, 3, 0) == ans(v, 4, 0)) << 1);
                      }});
  size_t hk = 1;
  for (size_t i = 0; i < sys.params().k; ++i) hk *= sys.params().H.size();
  z.over.push_back({"over-budget-pi_C", hk, hk,
                    [=](OracleSet& s, RandomSource&) {
                      for (size_t i = 0; i < hk; ++i) s.query("pi_C", Index(cv, static_cast<uint32_t>(i)));
                    },
                    nullptr});
  return z;
}

// Runs A, then one extra query; the extra one must be refused before it is served.
inline bool overreach_refused(const OsatAdversary& A, OSatOracles& o, RandomSource& coins, size_t* served = nullptr) {
  OsatAdversary greedy = A;
  size_t cv = o.pi_C.extents().size();
  greedy.run = [A, cv](OracleSet& s, RandomSource& c) {
    A.run(s, c);
    s.query("pi_C", Index(cv, 0));
  };
  try {
    run_osat_adversary(greedy, o, coins, A.budget);
  } catch (const Error& e) {
    if (served) *served = o.pi_C.served() + o.pi_sigma.served() + o.pi_P.served();
    return e.code() == Errc::BudgetExceeded;
  }
  return false;
}

// ---- forged proofs ----

enum class ForgeryKind { Honest, WrongWitness, RandomProof, Bitflip, TamperPiP, WrongGammaCascade };

inline const char* forgery_name(ForgeryKind k) {
  switch (k) {
    case ForgeryKind::Honest: return "honest";
    case ForgeryKind::WrongWitness: return "wrong-witness";
    case ForgeryKind::RandomProof: return "random-proof";
    case ForgeryKind::Bitflip: return "bitflip";
    case ForgeryKind::TamperPiP: return "tamper-pi_P";
    case ForgeryKind::WrongGammaCascade: return "wrong-gamma-cascade";
  }
  return "?";
}

struct ForgeryStrategy {
  ForgeryKind kind = ForgeryKind::RandomProof;
  double rate = 0;
  std::string label() const {
    std::string s = forgery_name(kind);
    if (kind == ForgeryKind::Bitflip || kind == ForgeryKind::TamperPiP) s += "(" + std::to_string(rate).substr(0, 4) + ")";
    return s;
  }
  void validate() const {
    if (!(rate >= 0 && rate <= 1)) fail(Errc::BadConfig, "forgery rate must lie in [0,1]");
  }
};

inline Symbol prf_symbol(const Field& F, const Seed& s, const std::string& id, const Index& i, size_t w) {
  Rng r(s.derive(id, i));
  Symbol out(w);
  for (auto& x : out) x = F.random(r);
  return out;
}

inline bool prf_coin(const Seed& s, const std::string& id, const Index& i, double rate) {
  Rng r(s.derive("flip/" + id, i));
  return r.uniform01() < rate;
}

// Keeps whatever backs the oracles alive.
struct ForgedOracles {
  std::shared_ptr<OSatProof> proof;
  std::shared_ptr<OSatOracles> inner;
  std::shared_ptr<OSatOracles> o;
};

inline Oracle wrap_oracle(Oracle& base, std::function<Symbol(const Index&, Oracle&)> fn) {
  Oracle* b = &base;
  return Oracle(base.id(), base.extents(), base.width(), [b, fn](const Index& i) { return fn(i, *b); });
}

// Witness used for wrong-witness and the base of tampering: `A` (need not satisfy B).
inline ForgedOracles osat_forgery(const OSatSystem& sys, const ForgeryStrategy& st, const std::vector<uint8_t>& A,
                                  const Seed& seed) {
  st.validate();
  const Field& F = sys.field();
  ForgedOracles f;
  if (st.kind == ForgeryKind::RandomProof) {
    Rng rng(seed.derive("random-proof"));
    auto C = random_poly(F, DegreeBounds::uniform(sys.params().c_vars(), F.order() - 1), rng);
    f.proof = std::make_shared<OSatProof>(osat_proof_from_commitment(sys, C, seed));
    f.inner = std::make_shared<OSatOracles>(osat_oracles(*f.proof));
    auto w = [&F, seed](Oracle& o) {
      return wrap_oracle(o, [&F, seed](const Index& i, Oracle& b) { return prf_symbol(F, seed, b.id(), i, b.width()); });
    };
    f.o = std::make_shared<OSatOracles>(OSatOracles{wrap_oracle(f.inner->pi_C, [](const Index& i, Oracle& b) { return b.query(i); }), w(f.inner->pi_sigma),
           w(f.inner->pi_P)});
    return f;
  }
  if (st.kind == ForgeryKind::Honest) {
    f.proof = std::make_shared<OSatProof>(osat_prove(sys, A, seed));
  } else {
    Rng rng(seed.derive("commit"));
    f.proof = std::make_shared<OSatProof>(osat_proof_from_commitment(sys, sys.commit_witness(A, rng), seed));
  }
  f.inner = std::make_shared<OSatOracles>(osat_oracles(*f.proof));
  double rate = st.rate;
  auto pass = [](Oracle& o) { return wrap_oracle(o, [](const Index& i, Oracle& b) { return b.query(i); }); };
  auto flip = [&F, seed, rate](Oracle& o) {
    return wrap_oracle(o, [&F, seed, rate](const Index& i, Oracle& b) {
      if (prf_coin(seed, b.id(), i, rate)) return prf_symbol(F, seed, b.id(), i, b.width());
      return b.query(i);
    });
  };
  if (st.kind == ForgeryKind::Bitflip)
    f.o = std::make_shared<OSatOracles>(OSatOracles{flip(f.inner->pi_C), flip(f.inner->pi_sigma), flip(f.inner->pi_P)});
  else if (st.kind == ForgeryKind::TamperPiP)
    f.o = std::make_shared<OSatOracles>(OSatOracles{pass(f.inner->pi_C), pass(f.inner->pi_sigma), flip(f.inner->pi_P)});
  else
    f.o = std::make_shared<OSatOracles>(OSatOracles{pass(f.inner->pi_C), pass(f.inner->pi_sigma), pass(f.inner->pi_P)});
  return f;
}

// ---- distance lower bound for an osat run ----

// Mismatches of a scalar table to its nearest degree-<=d polynomial; past the unique
// decoding radius, the radius bound.
inline size_t rs_mismatch(const Field& F, const Vec& ys, uint32_t d) {
  auto fit = univariate_fit_check(F, ys, d);
  if (fit.is_degree_le_d) return 0;
  return static_cast<size_t>(fit.distance.num * ys.size() / fit.distance.den);
}

struct DistanceBound {
  Rational value;
  size_t positions = 0;
  size_t c_part = 0, sigma_part = 0, p_part = 0;
};

// Changes needed on pi_C (line test), pi_sigma (first layer: degree and H-sum) and pi_P (line test),
// over the distinct positions read. These parts are disjoint, so the sum is a lower bound.
inline DistanceBound osat_distance_lower_bound(const OSatSystem& sys, const OSatResult& res, size_t positions) {
  const Field& F = sys.field();
  size_t q = F.order();
  DistanceBound b;
  b.positions = positions;
  for (auto& lv : res.ldt_c.lines) {
    Vec ys;
    for (auto& s : lv.values) ys.push_back(s[0]);
    b.c_part = std::max(b.c_part, rs_mismatch(F, ys, sys.params().c_total_degree()));
  }
  auto inst = sys.sc_instance();
  for (auto& run : res.runs) {
    Vec u;
    for (auto& s : run.zk.axes.pi) u.push_back(s[0]);
    if (u.size() == q) {
      size_t c = rs_mismatch(F, u, inst.d);
      if (c == 0) {
        Fe hs = 0;
        for (Fe h : inst.H) hs = F.add(hs, u[h]);
        if (hs != inst.gamma) b.sigma_part = std::max(b.sigma_part, q - inst.d);
      } else {
        b.sigma_part = std::max(b.sigma_part, c);
      }
    }
    for (auto& lv : run.zk.ldt_p.lines) {
      size_t best = 0;
      for (size_t j = 0; j < lv.values[0].size(); ++j) {
        Vec ys;
        for (auto& s : lv.values) ys.push_back(s[j]);
        best = std::max(best, rs_mismatch(F, ys, static_cast<uint32_t>(inst.m * inst.d)));
      }
      b.p_part = std::max(b.p_part, best);
    }
  }
  b.value = positions ? Rational(b.c_part + b.sigma_part + b.p_part, positions) : Rational(0);
  return b;
}

// Verifies and counts distinct positions read.
inline std::pair<OSatResult, size_t> osat_verify_counted(const OSatSystem& sys, OSatOracles& o, RandomSource& rng,
                                                         const OSatBalance& bal) {
  Transcript t;
  for (Oracle* x : {&o.pi_C, &o.pi_sigma, &o.pi_P}) x->record_to(&t);
  auto res = osat_verify(sys, o, rng, {}, bal);
  for (Oracle* x : {&o.pi_C, &o.pi_sigma, &o.pi_P}) x->record_to(nullptr);
  std::set<std::pair<std::string, Index>> pos;
  for (auto& r : t.records()) pos.insert({r.oracle, r.index});
  return {std::move(res), pos.size()};
}

}  // namespace zkpcp
