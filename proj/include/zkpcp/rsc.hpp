#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "ldt.hpp"
#include "oracle.hpp"
#include "poly.hpp"

namespace zkpcp {

struct SumInstance {
  const Field* F = nullptr;
  size_t m = 2;
  uint32_t d = 2;  // individual degree cap
  std::vector<Fe> H;
  Fe gamma = 0;
  Rational delta = Rational(1, 2);
  std::optional<uint32_t> ldt_degree;  // total degree for the line test, default m*d
  size_t ldt_reps = 1;

  uint32_t line_degree() const { return ldt_degree ? *ldt_degree : static_cast<uint32_t>(m * d); }
  Rational delta_rm() const { return rmin(delta, Rational(1, 5)); }

  void validate() const {
    if (!F) fail(Errc::BadConfig, "instance has no field");
    if (m < 2) fail(Errc::BadConfig, "sumcheck instances need m >= 2");
    if (H.empty()) fail(Errc::BadConfig, "H must be nonempty");
    if (d < H.size() + 1) fail(Errc::BadConfig, "degree must be at least |H|+1");
    if (!(Rational(m * d, F->order()) < delta)) fail(Errc::BadConfig, "need m*d/|F| < delta");
    if (line_degree() >= F->order()) fail(Errc::BadConfig, "line degree must be below |F|");
  }
};

// g_1..g_{m-1}; the bundled table is derived from them pointwise.
struct RscProof {
  const Field* F = nullptr;
  size_t m = 0;
  std::vector<MultiPoly> g;

  // pi(c_1..c_{m-2}, alpha) = (g_1(alpha), g_2(c_1, alpha), ..., g_{m-1}(c_1..c_{m-2}, alpha))
  Symbol symbol(const std::vector<Fe>& idx) const {
    Symbol s(m - 1);
    std::vector<Fe> x;
    Fe alpha = idx.back();
    for (size_t i = 1; i < m; ++i) {
      x.assign(idx.begin(), idx.begin() + (i - 1));
      x.push_back(alpha);
      s[i - 1] = eval(*F, g[i - 1], x);
    }
    return s;
  }

  // Oracle over F^{m-1}; `pad` trailing zeros appended to every symbol.
  Oracle oracle(const std::string& id, size_t pad = 0) const {
    auto self = std::make_shared<RscProof>(*this);
    return Oracle(id, std::vector<uint32_t>(m - 1, F->order()), m - 1 + pad, [self, pad](const Index& i) {
      Symbol s = self->symbol(std::vector<Fe>(i.begin(), i.end()));
      s.resize(s.size() + pad, 0);
      return s;
    });
  }
};

inline RscProof rsc_prove(const SumInstance& inst, const MultiPoly& Fp) {
  inst.validate();
  if (Fp.m() != inst.m) fail(Errc::ArityMismatch, "summand arity differs from instance");
  for (auto dj : individual_degrees(Fp))
    if (dj > inst.d) fail(Errc::DegreeTooHigh, "summand exceeds the individual degree cap");
  RscProof p{inst.F, inst.m, {}};
  for (size_t i = 1; i < inst.m; ++i) p.g.push_back(partial_sum(*inst.F, Fp, inst.H, i));
  return p;
}

// Everything the sumcheck part of the verifier reads, for fixed coins.
struct RscAxisView {
  std::vector<Symbol> pi;  // |F| symbols at (c_1..c_{m-2}, alpha)
  Vec f;                   // F(c_1..c_{m-1}, alpha)
};

enum class RscStep { None = 0, Padding = 1, Degree = 4, FirstSum = 5, Chain = 6, Final = 7, Ldt = 8 };

inline const char* rsc_step_name(RscStep s) {
  switch (s) {
    case RscStep::None: return "accept";
    case RscStep::Padding: return "padding";
    case RscStep::Degree: return "degree";
    case RscStep::FirstSum: return "first-sum";
    case RscStep::Chain: return "chain";
    case RscStep::Final: return "final";
    case RscStep::Ldt: return "ldt";
  }
  return "?";
}

// Decision for steps 4-7 on a realized axis view.
inline RscStep rsc_axis_decide(const SumInstance& inst, const std::vector<Fe>& coins, const RscAxisView& v) {
  const Field& F = *inst.F;
  size_t m = inst.m, q = F.order();
  for (auto& s : v.pi)
    for (size_t j = m - 1; j < s.size(); ++j)
      if (s[j] != 0) return RscStep::Padding;
  Vec ts = field_elements(F);
  std::vector<Vec> u(m - 1, Vec(q));
  for (size_t a = 0; a < q; ++a)
    for (size_t i = 0; i + 1 < m; ++i) u[i][a] = v.pi[a][i];
  for (auto& ui : u)
    if (!uni_fit(F, ts, ui, inst.d)) return RscStep::Degree;
  auto hsum = [&](const Vec& w) {
    Fe s = 0;
    for (Fe b : inst.H) s = F.add(s, w[b]);
    return s;
  };
  if (hsum(u[0]) != inst.gamma) return RscStep::FirstSum;
  for (size_t i = 0; i + 2 < m; ++i)
    if (hsum(u[i + 1]) != u[i][coins[i]]) return RscStep::Chain;
  if (hsum(v.f) != u[m - 2][coins[m - 2]]) return RscStep::Final;
  return RscStep::None;
}

using InputFn = std::function<Fe(const std::vector<Fe>&)>;

// Steps 1-7: full-axis reads of pi at the coin prefix and of the input at the coins.
inline RscAxisView rsc_read_axes(const SumInstance& inst, const InputFn& input, Oracle& pi, const std::vector<Fe>& coins) {
  const Field& F = *inst.F;
  RscAxisView v;
  Index idx(coins.begin(), coins.begin() + (inst.m - 2));
  idx.push_back(0);
  std::vector<Fe> x(coins.begin(), coins.end());
  x.push_back(0);
  for (Fe a = 0; a < F.order(); ++a) {
    idx.back() = a;
    v.pi.push_back(pi.query(idx));
  }
  for (Fe a = 0; a < F.order(); ++a) {
    x.back() = a;
    v.f.push_back(input(x));
  }
  return v;
}

struct RscResult {
  bool accept = false;
  RscStep step = RscStep::None;
  RscAxisView axes;
  LdtResult ldt;
};

inline std::vector<Fe> random_coins(const Field& F, size_t n, RandomSource& rng) {
  std::vector<Fe> c(n);
  for (auto& x : c) x = F.random(rng);
  return c;
}

// The full verifier; LDT lines are sampled after the axis reads.
inline RscResult rsc_verify(const SumInstance& inst, Oracle& f, Oracle& pi, const std::vector<Fe>& coins,
                            RandomSource& ldt_rng) {
  RscResult r;
  InputFn input = [&](const std::vector<Fe>& x) { return f.query1(to_index(x)); };
  r.axes = rsc_read_axes(inst, input, pi, coins);
  r.step = rsc_axis_decide(inst, coins, r.axes);
  LdtParams lp{inst.m, inst.line_degree(), inst.ldt_reps, inst.delta_rm(), true};
  r.ldt = ldt_scalar(*inst.F, f, lp, ldt_rng);
  if (r.step == RscStep::None && !r.ldt.accept) r.step = RscStep::Ldt;
  r.accept = r.step == RscStep::None;
  return r;
}

// Shifts the claimed sum to gamma' and propagates the difference through every level,
// so that only the final check sees it: g_i' = g_i + (gamma'-gamma) prod_{j<=i} L_{H,b0}(X_j).
inline RscProof rsc_cascade_forgery(const SumInstance& inst, const RscProof& honest, Fe gamma_prime, Fe b0) {
  const Field& F = *inst.F;
  RscProof p = honest;
  Fe shift = F.sub(gamma_prime, inst.gamma);
  Vec L = lagrange_univariate(F, inst.H, b0);
  for (size_t i = 1; i < inst.m; ++i) {
    MultiPoly delta = MultiPoly::constant(DegreeBounds::uniform(i, 0), shift);
    for (size_t j = 0; j < i; ++j) {
      MultiPoly Lj = MultiPoly::zero(DegreeBounds::individual({static_cast<uint32_t>(L.size() - 1)}));
      Lj.c = L;
      delta = mul(F, delta, embed(Lj, i, {j}));
    }
    p.g[i - 1] = add(F, honest.g[i - 1], delta);
  }
  return p;
}

// Positions of the axis view flattened: |F| pi symbols then |F| input values.
inline std::vector<Symbol> flatten_axes(const RscAxisView& v) {
  std::vector<Symbol> s = v.pi;
  for (Fe x : v.f) s.push_back({x});
  return s;
}

inline RscAxisView unflatten_axes(const std::vector<Symbol>& s, size_t q) {
  RscAxisView v;
  v.pi.assign(s.begin(), s.begin() + q);
  for (size_t i = q; i < 2 * q; ++i) v.f.push_back(s[i][0]);
  return v;
}

// Exact distance of the axis view to the accepting axis views, by exhaustive search.
inline DistanceResult rsc_axis_distance_exhaustive(const SumInstance& inst, const std::vector<Fe>& coins,
                                                   const RscAxisView& v) {
  const Field& F = *inst.F;
  size_t q = F.order(), w = inst.m - 1;
  std::vector<Symbol> all_sym;
  {
    Symbol s(w, 0);
    for (;;) {
      all_sym.push_back(s);
      size_t k = w;
      while (k-- > 0) {
        if (++s[k] < q) break;
        s[k] = 0;
      }
      if (k == static_cast<size_t>(-1)) break;
    }
  }
  std::vector<Symbol> scalar;
  for (Fe x = 0; x < q; ++x) scalar.push_back({x});
  std::vector<std::vector<Symbol>> alpha(q, all_sym);
  for (size_t i = 0; i < q; ++i) alpha.push_back(scalar);
  auto view = flatten_axes(v);
  return distance_to_accepting_exhaustive(view, alpha, [&](const std::vector<Symbol>& s) {
    return rsc_axis_decide(inst, coins, unflatten_axes(s, q)) == RscStep::None;
  });
}

// Structured search for m = 2: enumerates the affine space of degree-<=d layers with the
// right H-sum; the input axis then needs at most one change. Exact.
inline DistanceResult rsc_axis_distance_structured(const SumInstance& inst, const std::vector<Fe>& coins,
                                                   const RscAxisView& v) {
  const Field& F = *inst.F;
  size_t q = F.order();
  if (inst.m != 2) fail(Errc::PreconditionViolated, "structured axis distance implemented for m = 2");
  double space = 1;
  for (uint32_t i = 0; i <= inst.d; ++i) space *= q;
  if (space > double(1u << 24)) fail(Errc::SearchSpaceTooLarge, "layer space too large");
  Vec ts = field_elements(F);
  Vec u(q);
  for (size_t a = 0; a < q; ++a) u[a] = v.pi[a][0];
  Fe fsum = 0;
  for (Fe b : inst.H) fsum = F.add(fsum, v.f[b]);
  size_t best = 2 * q;
  Vec c(inst.d + 1, 0);
  for (;;) {
    Fe hs = 0;
    for (Fe b : inst.H) hs = F.add(hs, uni_eval(F, c, b));
    if (hs == inst.gamma) {
      size_t dist = 0;
      for (size_t a = 0; a < q && dist < best; ++a) dist += uni_eval(F, c, ts[a]) != u[a];
      dist += fsum != uni_eval(F, c, coins[0]);
      best = std::min(best, dist);
    }
    size_t k = c.size();
    while (k-- > 0) {
      if (++c[k] < q) break;
      c[k] = 0;
    }
    if (k == static_cast<size_t>(-1)) break;
  }
  return {Rational(best, 2 * q), true};
}

}  // namespace zkpcp
