#pragma once

#include <iostream>
#include <vector>

#include "oracle.hpp"
#include "poly.hpp"
#include "random.hpp"

namespace zkpcp {

struct LdtParams {
  size_t m = 1;
  uint32_t d = 0;  // total degree cap
  size_t reps = 1;
  Rational proximity = Rational(1, 5);
  bool allow_small_field = false;
};

struct Line {
  std::vector<Fe> base, dir;

  std::vector<Fe> at(const Field& F, Fe t) const {
    std::vector<Fe> x(base.size());
    for (size_t j = 0; j < x.size(); ++j) x[j] = F.add(base[j], F.mul(t, dir[j]));
    return x;
  }
};

inline Line random_line(const Field& F, size_t m, RandomSource& rng) {
  Line L;
  L.base.resize(m);
  for (auto& x : L.base) x = F.random(rng);
  do {
    L.dir.assign(m, 0);
    for (auto& x : L.dir) x = F.random(rng);
  } while (std::all_of(L.dir.begin(), L.dir.end(), [](Fe v) { return v == 0; }));
  return L;
}

struct LineView {
  Line line;
  std::vector<Symbol> values;  // indexed by t = 0..|F|-1
  bool ok = true;
};

struct LdtResult {
  bool accept = true;
  std::vector<LineView> lines;
};

inline Index to_index(const std::vector<Fe>& x) { return Index(x.begin(), x.end()); }

// Reads every point of `reps` random lines; each coordinate must restrict to degree <= d.
inline LdtResult ldt_vector(const Field& F, Oracle& pi, const LdtParams& p, RandomSource& rng) {
  size_t k = pi.width();
  if (!(F.order() > 25 * k)) {
    if (!p.allow_small_field) fail(Errc::FieldTooSmallForK, "field order must exceed 25k");
  }
  if (p.d >= F.order()) fail(Errc::PreconditionViolated, "degree cap must be below field order");
  LdtResult res;
  Vec ts = field_elements(F);
  for (size_t r = 0; r < p.reps; ++r) {
    LineView lv;
    lv.line = random_line(F, p.m, rng);
    for (Fe t : ts) lv.values.push_back(pi.query(to_index(lv.line.at(F, t))));
    for (size_t j = 0; j < k && lv.ok; ++j) {
      Vec ys(ts.size());
      for (size_t i = 0; i < ts.size(); ++i) ys[i] = lv.values[i][j];
      lv.ok = uni_fit(F, ts, ys, p.d).has_value();
    }
    res.accept = res.accept && lv.ok;
    res.lines.push_back(std::move(lv));
  }
  return res;
}

inline LdtResult ldt_scalar(const Field& F, Oracle& f, const LdtParams& p, RandomSource& rng) {
  LdtParams q = p;
  q.allow_small_field = true;
  return ldt_vector(F, f, q, rng);
}

// Distance of one line view to the accepting line views. Exact for width 1;
// otherwise the union of per-coordinate nearest disagreements (an upper bound).
inline DistanceResult line_view_distance(const Field& F, const LineView& lv, uint32_t d) {
  size_t q = lv.values.size();
  size_t k = lv.values.empty() ? 0 : lv.values[0].size();
  std::vector<bool> bad(q, false);
  size_t maxc = 0;
  bool exact = true;
  Vec ts = field_elements(F);
  for (size_t j = 0; j < k; ++j) {
    Vec ys(q);
    for (size_t i = 0; i < q; ++i) ys[i] = lv.values[i][j];
    auto fit = univariate_fit_check(F, ys, d);
    if (fit.is_degree_le_d) continue;
    exact = exact && fit.exact;
    if (!fit.exact) {
      for (size_t i = 0; i < q; ++i) bad[i] = true;
      continue;
    }
    size_t c = 0;
    for (size_t i = 0; i < q; ++i)
      if (uni_eval(F, fit.nearest, ts[i]) != ys[i]) {
        bad[i] = true;
        ++c;
      }
    maxc = std::max(maxc, c);
  }
  size_t u = std::count(bad.begin(), bad.end(), true);
  return {Rational(u, q), exact && (k <= 1 || u == maxc)};
}

inline uint32_t total_degree_of(const std::vector<uint32_t>& e) {
  uint32_t s = 0;
  for (auto x : e) s += x;
  return s;
}

// Exact relative distance of a full table on F^m to total-degree-d Reed-Muller codewords.
inline Rational rm_distance_exact(const Field& F, const Vec& table, size_t m, uint32_t d, double cap = double(1u << 20)) {
  uint32_t q = F.order();
  size_t n = 1;
  for (size_t i = 0; i < m; ++i) n *= q;
  if (table.size() != n) fail(Errc::LengthMismatch, "table must cover F^m");
  auto b = DegreeBounds::uniform(m, std::min<uint32_t>(d, q - 1));
  MultiPoly shape = MultiPoly::zero(b);
  std::vector<Vec> mono;
  for (size_t i = 0; i < shape.c.size(); ++i)
    if (total_degree_of(shape.exps(i)) <= d) {
      MultiPoly e = MultiPoly::zero(b);
      e.c[i] = 1;
      mono.push_back(eval_table(F, e));
    }
  double space = 1;
  for (size_t i = 0; i < mono.size(); ++i) space *= q;
  if (space > cap) fail(Errc::SearchSpaceTooLarge, "Reed-Muller code too large to enumerate");
  Vec cur(n, 0);
  std::vector<Fe> coef(mono.size(), 0);
  size_t best = n;
  for (;;) {
    size_t dist = 0;
    for (size_t i = 0; i < n; ++i) dist += cur[i] != table[i];
    best = std::min(best, dist);
    size_t k = mono.size();
    while (k-- > 0) {
      Fe old = coef[k];
      Fe nv = (old + 1 == q) ? 0 : old + 1;
      coef[k] = nv;
      Fe delta = F.sub(nv, old);
      for (size_t i = 0; i < n; ++i)
        if (mono[k][i]) cur[i] = F.add(cur[i], F.mul(delta, mono[k][i]));
      if (nv != 0) break;
    }
    if (k == static_cast<size_t>(-1)) break;
  }
  return Rational(best, n);
}

}  // namespace zkpcp
