#pragma once

#include <memory>
#include <vector>

#include <map>

#include "rsc.hpp"

namespace zkpcp {

struct MaskSet {
  MultiPoly Q;
  std::vector<MultiPoly> T;
};

inline std::vector<DegreeBounds> mask_bounds(size_t m, uint32_t md, size_t h) {
  if (md < h) fail(Errc::BadConfig, "mask degree must be at least |H|");
  std::vector<DegreeBounds> b;
  b.push_back(DegreeBounds::uniform(m, md));
  for (size_t i = 0; i < m; ++i) {
    auto t = DegreeBounds::uniform(m, md);
    t.per_var[i] = md - static_cast<uint32_t>(h);
    b.push_back(t);
  }
  return b;
}

// R = Q - Q_rev + sum_i Z_H(X_i) T_i
inline MultiPoly assemble_mask(const Field& F, const MaskSet& M, const std::vector<Fe>& H) {
  size_t m = M.Q.m();
  MultiPoly R = sub(F, M.Q, reverse_vars(M.Q));
  MultiPoly Z = vanishing_poly(F, H);
  for (size_t i = 0; i < m; ++i) R = add(F, R, mul(F, embed(Z, m, {i}), M.T[i]));
  return R;
}

inline std::pair<MaskSet, MultiPoly> zksc_mask(const SumInstance& inst, RandomSource& rng,
                                               std::optional<uint32_t> mask_degree = std::nullopt) {
  uint32_t md = mask_degree ? *mask_degree : inst.d;
  auto b = mask_bounds(inst.m, md, inst.H.size());
  MaskSet M;
  M.Q = random_poly(*inst.F, b[0], rng);
  for (size_t i = 0; i < inst.m; ++i) M.T.push_back(random_poly(*inst.F, b[i + 1], rng));
  MultiPoly R = assemble_mask(*inst.F, M, inst.H);
  return {std::move(M), std::move(R)};
}

struct ZkscProof {
  RscProof sigma;  // for F + R
  MaskSet mask;
  MultiPoly R;

  // pi_Sigma: symbols padded with two zeros to width m+1
  Oracle sigma_oracle(const std::string& id = "pi_sigma") const { return sigma.oracle(id, 2); }

  // pi_P(x) = (Q(x), T_1(x), ..., T_m(x))
  Oracle mask_oracle(const std::string& id = "pi_P") const {
    auto polys = std::make_shared<std::vector<MultiPoly>>();
    polys->push_back(mask.Q);
    for (auto& t : mask.T) polys->push_back(t);
    const Field* F = sigma.F;
    size_t m = mask.Q.m();
    std::vector<const MultiPoly*> ptrs;
    for (auto& p : *polys) ptrs.push_back(&p);
    auto cache = std::make_shared<LineCachedEval>(*F, ptrs);
    return Oracle(id, std::vector<uint32_t>(m, F->order()), m + 1, [polys, cache](const Index& i) {
      return cache->eval(std::vector<Fe>(i.begin(), i.end()));
    });
  }
};

inline ZkscProof zksc_prove(const SumInstance& inst, const MultiPoly& Fp, RandomSource& rng,
                            std::optional<uint32_t> mask_degree = std::nullopt) {
  inst.validate();
  uint32_t md = mask_degree ? *mask_degree : inst.d;
  if (md > inst.d) fail(Errc::DegreeTooHigh, "mask degree exceeds the instance degree");
  for (auto dj : individual_degrees(Fp))
    if (dj > inst.d) fail(Errc::DegreeTooHigh, "summand exceeds the individual degree cap");
  auto [M, R] = zksc_mask(inst, rng, md);
  ZkscProof p{rsc_prove(inst, add(*inst.F, Fp, R)), std::move(M), std::move(R)};
  return p;
}

// (F+R)(alpha) from F(alpha), pi_P(alpha) and pi_P(rev alpha).
inline Fe synthesize_masked(const Field& F, const std::vector<Fe>& H, const std::vector<Fe>& alpha, Fe f_alpha,
                            const Symbol& p_alpha, const Symbol& p_rev) {
  Fe v = F.add(f_alpha, F.sub(p_alpha[0], p_rev[0]));
  for (size_t i = 0; i < alpha.size(); ++i) {
    Fe z = 1;
    for (Fe h : H) z = F.mul(z, F.sub(alpha[i], h));
    v = F.add(v, F.mul(z, p_alpha[i + 1]));
  }
  return v;
}

inline std::vector<Fe> reversed(std::vector<Fe> x) {
  std::reverse(x.begin(), x.end());
  return x;
}

struct ZkscOptions {
  size_t ldt_f_reps = 1;
  size_t ldt_p_reps = 1;
  bool allow_small_field = false;
};

struct ZkscResult {
  bool accept = false;
  RscStep step = RscStep::None;  // Ldt means the line test on F failed
  bool ldt_p_failed = false;
  RscAxisView axes;  // axis view of the emulated verifier (input axis synthesized)
  LdtResult ldt_f, ldt_p;
  Rational eps_p;
};

// Emulates the sumcheck verifier on F+R, then line-tests F and pi_P.
inline ZkscResult zksc_verify(const SumInstance& inst, const InputFn& f_input, Oracle* f_oracle, Oracle& sigma,
                              Oracle& pi_p, const std::vector<Fe>& coins, RandomSource& ldt_rng,
                              const ZkscOptions& opt = {}) {
  const Field& F = *inst.F;
  ZkscResult r;
  r.eps_p = inst.delta_rm() / Rational(8);
  // input axis read line by line: F, then pi_P, then pi_P at the reversed points
  std::vector<Fe> x(coins.begin(), coins.end());
  x.push_back(0);
  Vec fv(F.order());
  std::vector<Symbol> pa(F.order()), pr(F.order());
  for (Fe a = 0; a < F.order(); ++a) {
    x.back() = a;
    fv[a] = f_input(x);
  }
  for (Fe a = 0; a < F.order(); ++a) {
    x.back() = a;
    pa[a] = pi_p.query(to_index(x));
  }
  for (Fe a = 0; a < F.order(); ++a) {
    x.back() = a;
    pr[a] = pi_p.query(to_index(reversed(x)));
  }
  InputFn masked = [&](const std::vector<Fe>& a) {
    Fe al = a.back();
    return synthesize_masked(F, inst.H, a, fv[al], pa[al], pr[al]);
  };
  r.axes = rsc_read_axes(inst, masked, sigma, coins);
  r.step = rsc_axis_decide(inst, coins, r.axes);
  if (f_oracle) {
    LdtParams lf{inst.m, inst.line_degree(), opt.ldt_f_reps, inst.delta_rm(), true};
    r.ldt_f = ldt_scalar(F, *f_oracle, lf, ldt_rng);
    if (r.step == RscStep::None && !r.ldt_f.accept) r.step = RscStep::Ldt;
  }
  LdtParams lp{inst.m, static_cast<uint32_t>(inst.m * inst.d), opt.ldt_p_reps, r.eps_p, opt.allow_small_field};
  r.ldt_p = ldt_vector(F, pi_p, lp, ldt_rng);
  r.ldt_p_failed = !r.ldt_p.accept;
  r.accept = r.step == RscStep::None && !r.ldt_p_failed;
  return r;
}

inline ZkscResult zksc_verify(const SumInstance& inst, Oracle& f, Oracle& sigma, Oracle& pi_p,
                              const std::vector<Fe>& coins, RandomSource& ldt_rng, const ZkscOptions& opt = {}) {
  InputFn in = [&](const std::vector<Fe>& x) { return f.query1(to_index(x)); };
  return zksc_verify(inst, in, &f, sigma, pi_p, coins, ldt_rng, opt);
}

// Reference simulator: a fresh honest bundle answers the adversary. Needs the summand itself
// (the simulator of this module is given the input).
struct ZkscSession {
  ZkscProof proof;
  Oracle sigma, pi_p;
};

inline std::unique_ptr<ZkscSession> zksc_reference_session(const SumInstance& inst, const MultiPoly& Fp,
                                                           RandomSource& rng,
                                                           std::optional<uint32_t> mask_degree = std::nullopt) {
  auto proof = zksc_prove(inst, Fp, rng, mask_degree);
  auto sigma = proof.sigma_oracle();
  auto pp = proof.mask_oracle();
  return std::unique_ptr<ZkscSession>(new ZkscSession{std::move(proof), std::move(sigma), std::move(pp)});
}

// Independence of (sum_{y in H^k} Z(alpha, y))_alpha and (Z(q))_{q in Qs} for uniform Z of
// individual degree d in the first m variables and d2 in the last k, by full enumeration.
inline bool sum_indep_check(const Field& F, size_t m, size_t k, const std::vector<Fe>& H, uint32_t d, uint32_t d2,
                            const std::vector<std::vector<Fe>>& Qs, Rational* tv_out = nullptr) {
  size_t hk = 1;
  for (size_t i = 0; i < k; ++i) hk *= H.size();
  if (Qs.size() >= hk) fail(Errc::PreconditionViolated, "need |Q| < |H|^k");
  if (d2 < 2 * (H.size() - 1)) fail(Errc::PreconditionViolated, "need d' >= 2(|H|-1)");
  DegreeBounds b;
  b.per_var.assign(m, d);
  b.per_var.insert(b.per_var.end(), k, d2);
  std::vector<std::vector<Fe>> alphas;
  {
    std::vector<Fe> a(m, 0);
    for (;;) {
      alphas.push_back(a);
      size_t j = m;
      while (j-- > 0) {
        if (++a[j] < F.order()) break;
        a[j] = 0;
      }
      if (j == static_cast<size_t>(-1)) break;
    }
  }
  std::vector<size_t> yvars;
  for (size_t j = m; j < m + k; ++j) yvars.push_back(j);
  std::map<std::pair<Vec, Vec>, size_t> joint;
  std::map<Vec, size_t> ms, mq;
  size_t total = 0;
  for_each_poly(F, b, [&](const MultiPoly& Z) {
    MultiPoly S = sum_over_vars(F, Z, H, yvars);
    Vec sums, ans;
    for (auto& a : alphas) sums.push_back(eval(F, S, a));
    for (auto& q : Qs) ans.push_back(eval(F, Z, q));
    ++joint[{sums, ans}];
    ++ms[sums];
    ++mq[ans];
    ++total;
  });
  // factorization: P(s, a) = P(s) P(a) for every pair in the support product
  Rational tv(0);
  bool ok = true;
  for (auto& [s, cs] : ms)
    for (auto& [a, ca] : mq) {
      auto it = joint.find({s, a});
      size_t cj = it == joint.end() ? 0 : it->second;
      Rational pj(cj, total), pp = Rational(cs, total) * Rational(ca, total);
      if (!(pj == pp)) {
        ok = false;
        tv = tv + (pj < pp ? pp - pj : pj - pp);
      }
    }
  if (tv_out) *tv_out = tv / Rational(2);
  return ok;
}

}  // namespace zkpcp
