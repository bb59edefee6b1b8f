#pragma once

#include <algorithm>
#include <functional>
#include <numeric>
#include <optional>
#include <vector>

#include <json.hpp>

#include "field.hpp"
#include "linalg.hpp"
#include "rational.hpp"

namespace zkpcp {

struct DegreeBounds {
  std::vector<uint32_t> per_var;
  std::optional<uint32_t> total;

  static DegreeBounds individual(std::vector<uint32_t> d) { return {std::move(d), std::nullopt}; }
  static DegreeBounds total_degree(size_t m, uint32_t d) { return {std::vector<uint32_t>(m, d), d}; }
  static DegreeBounds uniform(size_t m, uint32_t d) { return individual(std::vector<uint32_t>(m, d)); }

  size_t m() const { return per_var.size(); }
  std::vector<size_t> dims() const {
    std::vector<size_t> d(per_var.size());
    for (size_t i = 0; i < d.size(); ++i) d[i] = per_var[i] + 1;
    return d;
  }
  size_t box_size() const {
    size_t n = 1;
    for (auto d : per_var) n *= d + 1;
    return n;
  }
  bool admits(const std::vector<uint32_t>& e) const {
    uint32_t s = 0;
    for (size_t i = 0; i < e.size(); ++i) {
      if (e[i] > per_var[i]) return false;
      s += e[i];
    }
    return !total || s <= *total;
  }
  // Degree of a restriction to a line.
  uint32_t line_degree() const {
    if (total) return *total;
    uint32_t s = 0;
    for (auto d : per_var) s += d;
    return s;
  }
  friend bool operator==(const DegreeBounds& a, const DegreeBounds& b) {
    return a.per_var == b.per_var && a.total == b.total;
  }
};

// Dense coefficients, row-major over exponent tuples (variable 0 slowest).
struct MultiPoly {
  DegreeBounds bounds;
  Vec c;

  static MultiPoly zero(const DegreeBounds& b) { return {b, Vec(b.box_size(), 0)}; }
  static MultiPoly constant(const DegreeBounds& b, Fe v) {
    MultiPoly p = zero(b);
    if (!p.c.empty()) p.c[0] = v;
    return p;
  }
  size_t m() const { return bounds.m(); }
  std::vector<uint32_t> exps(size_t idx) const {
    std::vector<uint32_t> e(m());
    for (size_t j = m(); j-- > 0;) {
      e[j] = static_cast<uint32_t>(idx % (bounds.per_var[j] + 1));
      idx /= bounds.per_var[j] + 1;
    }
    return e;
  }
  size_t index(const std::vector<uint32_t>& e) const {
    size_t idx = 0;
    for (size_t j = 0; j < m(); ++j) idx = idx * (bounds.per_var[j] + 1) + e[j];
    return idx;
  }
  Fe coeff(const std::vector<uint32_t>& e) const {
    for (size_t j = 0; j < e.size(); ++j)
      if (e[j] > bounds.per_var[j]) return 0;
    return c[index(e)];
  }
  bool is_zero() const {
    for (Fe x : c)
      if (x) return false;
    return true;
  }
};

inline Vec powers(const Field& F, Fe x, size_t n) {
  Vec p(n);
  Fe v = 1;
  for (size_t i = 0; i < n; ++i) {
    p[i] = v;
    v = F.mul(v, x);
  }
  return p;
}

// Sum over H of h^e for e < n.
inline Vec power_sums(const Field& F, const std::vector<Fe>& H, size_t n) {
  Vec s(n, 0);
  for (Fe h : H) {
    Fe v = 1;
    for (size_t e = 0; e < n; ++e) {
      s[e] = F.add(s[e], v);
      v = F.mul(v, h);
    }
  }
  return s;
}

// Full tensor contraction: sum over all exponents of c[e] * prod_j f_j[e_j].
inline Fe contract(const Field& F, const Vec& c, const std::vector<size_t>& dims, const std::vector<Vec>& f) {
  if (dims.empty()) return c.empty() ? 0 : c[0];
  Vec buf = c;
  size_t size = c.size();
  for (size_t j = dims.size(); j-- > 0;) {
    size_t d = dims[j], n = size / d;
    const Vec& fj = f[j];
    for (size_t i = 0; i < n; ++i) {
      Fe s = 0;
      const Fe* row = &buf[i * d];
      for (size_t e = 0; e < d; ++e)
        if (row[e] && fj[e]) s = F.add(s, F.mul(row[e], fj[e]));
      buf[i] = s;
    }
    size = n;
  }
  return buf[0];
}

inline Fe eval(const Field& F, const MultiPoly& p, const std::vector<Fe>& x) {
  if (x.size() != p.m()) fail(Errc::ArityMismatch, "point has wrong arity");
  std::vector<Vec> f(p.m());
  for (size_t j = 0; j < p.m(); ++j) f[j] = powers(F, x[j], p.bounds.per_var[j] + 1);
  return contract(F, p.c, p.bounds.dims(), f);
}

// Contracts the variables that have a factor; the rest remain, in order.
inline MultiPoly contract_some(const Field& F, const MultiPoly& p, const std::vector<std::optional<Vec>>& f) {
  std::vector<uint32_t> keep;
  std::vector<size_t> keep_idx;
  for (size_t j = 0; j < p.m(); ++j)
    if (!f[j]) {
      keep.push_back(p.bounds.per_var[j]);
      keep_idx.push_back(j);
    }
  DegreeBounds nb{keep, p.bounds.total};
  if (nb.total && keep.empty()) nb.total.reset();
  MultiPoly out = MultiPoly::zero(nb);
  auto dims = p.bounds.dims();
  size_t m = p.m();
  std::vector<uint32_t> e(m, 0);
  for (size_t idx = 0; idx < p.c.size(); ++idx) {
    if (idx) {
      for (size_t j = m; j-- > 0;) {
        if (++e[j] < dims[j]) break;
        e[j] = 0;
      }
    }
    Fe v = p.c[idx];
    if (!v) continue;
    size_t oi = 0;
    for (size_t j = 0; j < m && v; ++j) {
      if (f[j]) {
        v = F.mul(v, (*f[j])[e[j]]);
      } else {
        oi = oi * dims[j] + e[j];
      }
    }
    if (v) out.c[oi] = F.add(out.c[oi], v);
  }
  return out;
}

inline std::vector<size_t> strides(const DegreeBounds& b) {
  std::vector<size_t> st(b.m());
  size_t s = 1;
  for (size_t j = b.m(); j-- > 0;) {
    st[j] = s;
    s *= b.per_var[j] + 1;
  }
  return st;
}

// Visits every coefficient slot of b with its exponent tuple, in storage order.
template <class Fn>
inline void for_each_exp(const DegreeBounds& b, Fn fn) {
  size_t n = b.box_size(), m = b.m();
  std::vector<uint32_t> e(m, 0);
  for (size_t i = 0; i < n; ++i) {
    fn(i, e);
    for (size_t j = m; j-- > 0;) {
      if (++e[j] <= b.per_var[j]) break;
      e[j] = 0;
    }
  }
}

inline size_t offset_of(const std::vector<size_t>& st, const std::vector<uint32_t>& e) {
  size_t o = 0;
  for (size_t j = 0; j < e.size(); ++j) o += st[j] * e[j];
  return o;
}

inline MultiPoly add(const Field& F, const MultiPoly& a, const MultiPoly& b) {
  if (a.m() != b.m()) fail(Errc::ArityMismatch, "add arity");
  DegreeBounds nb;
  for (size_t j = 0; j < a.m(); ++j) nb.per_var.push_back(std::max(a.bounds.per_var[j], b.bounds.per_var[j]));
  if (a.bounds.total && b.bounds.total) nb.total = std::max(*a.bounds.total, *b.bounds.total);
  MultiPoly out = MultiPoly::zero(nb);
  auto st = strides(nb);
  for (const MultiPoly* s : {&a, &b}) {
    if (s->bounds.per_var == nb.per_var) {
      for (size_t i = 0; i < s->c.size(); ++i) out.c[i] = F.add(out.c[i], s->c[i]);
      continue;
    }
    for_each_exp(s->bounds, [&](size_t i, const std::vector<uint32_t>& e) {
      if (!s->c[i]) return;
      size_t oi = offset_of(st, e);
      out.c[oi] = F.add(out.c[oi], s->c[i]);
    });
  }
  return out;
}

inline MultiPoly scale(const Field& F, const MultiPoly& a, Fe k) {
  MultiPoly out = a;
  for (auto& x : out.c) x = F.mul(x, k);
  return out;
}

inline MultiPoly sub(const Field& F, const MultiPoly& a, const MultiPoly& b) {
  return add(F, a, scale(F, b, F.neg(1)));
}

inline MultiPoly mul(const Field& F, const MultiPoly& a, const MultiPoly& b) {
  if (a.m() != b.m()) fail(Errc::ArityMismatch, "mul arity");
  DegreeBounds nb;
  for (size_t j = 0; j < a.m(); ++j) nb.per_var.push_back(a.bounds.per_var[j] + b.bounds.per_var[j]);
  if (a.bounds.total && b.bounds.total) nb.total = *a.bounds.total + *b.bounds.total;
  MultiPoly out = MultiPoly::zero(nb);
  auto st = strides(nb);
  // output index is linear in the exponents, so offsets add
  std::vector<std::pair<size_t, Fe>> at, bt;
  for_each_exp(a.bounds, [&](size_t i, const std::vector<uint32_t>& e) {
    if (a.c[i]) at.push_back({offset_of(st, e), a.c[i]});
  });
  for_each_exp(b.bounds, [&](size_t i, const std::vector<uint32_t>& e) {
    if (b.c[i]) bt.push_back({offset_of(st, e), b.c[i]});
  });
  for (auto& [oa, ca] : at)
    for (auto& [ob, cb] : bt) out.c[oa + ob] = F.add(out.c[oa + ob], F.mul(ca, cb));
  return out;
}

// Re-expresses p over m_new variables; variable j of p becomes var_map[j].
inline MultiPoly embed(const MultiPoly& p, size_t m_new, const std::vector<size_t>& var_map) {
  DegreeBounds nb;
  nb.per_var.assign(m_new, 0);
  for (size_t j = 0; j < p.m(); ++j) nb.per_var[var_map[j]] = p.bounds.per_var[j];
  nb.total = p.bounds.total;
  MultiPoly out = MultiPoly::zero(nb);
  std::vector<uint32_t> e(m_new, 0);
  for (size_t i = 0; i < p.c.size(); ++i) {
    if (!p.c[i]) continue;
    auto pe = p.exps(i);
    std::fill(e.begin(), e.end(), 0);
    for (size_t j = 0; j < p.m(); ++j) e[var_map[j]] = pe[j];
    out.c[out.index(e)] = p.c[i];
  }
  return out;
}

// Same polynomial stored under wider bounds.
inline MultiPoly widen(const MultiPoly& p, const DegreeBounds& nb) {
  MultiPoly out = MultiPoly::zero(nb);
  for (size_t i = 0; i < p.c.size(); ++i)
    if (p.c[i]) {
      auto e = p.exps(i);
      if (!nb.admits(e)) fail(Errc::DegreeTooHigh, "widen target too narrow");
      out.c[out.index(e)] = p.c[i];
    }
  return out;
}

inline MultiPoly reverse_vars(const MultiPoly& p) {
  DegreeBounds nb{std::vector<uint32_t>(p.bounds.per_var.rbegin(), p.bounds.per_var.rend()), p.bounds.total};
  MultiPoly out = MultiPoly::zero(nb);
  auto st = strides(nb);
  std::reverse(st.begin(), st.end());
  for_each_exp(p.bounds, [&](size_t i, const std::vector<uint32_t>& e) {
    if (p.c[i]) out.c[offset_of(st, e)] = p.c[i];
  });
  return out;
}

inline std::vector<uint32_t> individual_degrees(const MultiPoly& p) {
  std::vector<uint32_t> d(p.m(), 0);
  for (size_t i = 0; i < p.c.size(); ++i)
    if (p.c[i]) {
      auto e = p.exps(i);
      for (size_t j = 0; j < d.size(); ++j) d[j] = std::max(d[j], e[j]);
    }
  return d;
}

// -1 for the zero polynomial.
inline int total_degree(const MultiPoly& p) {
  int d = -1;
  for (size_t i = 0; i < p.c.size(); ++i)
    if (p.c[i]) {
      auto e = p.exps(i);
      d = std::max(d, static_cast<int>(std::accumulate(e.begin(), e.end(), 0u)));
    }
  return d;
}

inline MultiPoly random_poly(const Field& F, const DegreeBounds& b, RandomSource& rng) {
  MultiPoly p = MultiPoly::zero(b);
  if (!b.total) {
    for (auto& x : p.c) x = F.random(rng);
    return p;
  }
  for (size_t i = 0; i < p.c.size(); ++i)
    if (b.admits(p.exps(i))) p.c[i] = F.random(rng);
  return p;
}

// ---- univariate helpers (coefficient vectors, lowest degree first) ----

inline Fe uni_eval(const Field& F, const Vec& c, Fe x) {
  Fe r = 0;
  for (size_t i = c.size(); i-- > 0;) r = F.add(F.mul(r, x), c[i]);
  return r;
}

inline Vec uni_mul(const Field& F, const Vec& a, const Vec& b) {
  if (a.empty() || b.empty()) return {};
  Vec r(a.size() + b.size() - 1, 0);
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < b.size(); ++j) r[i + j] = F.add(r[i + j], F.mul(a[i], b[j]));
  return r;
}

// Newton interpolation through (xs, ys); returns coefficients of degree < n.
inline Vec uni_interpolate(const Field& F, const Vec& xs, const Vec& ys) {
  size_t n = xs.size();
  Vec dd = ys;
  for (size_t k = 1; k < n; ++k)
    for (size_t i = n - 1; i >= k; --i) {
      dd[i] = F.div(F.sub(dd[i], dd[i - 1]), F.sub(xs[i], xs[i - k]));
      if (i == k) break;
    }
  Vec c(n, 0);
  Vec basis{1};
  for (size_t k = 0; k < n; ++k) {
    for (size_t j = 0; j < basis.size(); ++j) c[j] = F.add(c[j], F.mul(dd[k], basis[j]));
    basis = uni_mul(F, basis, Vec{F.neg(xs[k]), 1});
  }
  return c;
}

// Coefficients if the points lie on a polynomial of degree <= d.
inline std::optional<Vec> uni_fit(const Field& F, const Vec& xs, const Vec& ys, size_t d) {
  size_t k = std::min(xs.size(), d + 1);
  Vec c = uni_interpolate(F, Vec(xs.begin(), xs.begin() + k), Vec(ys.begin(), ys.begin() + k));
  for (size_t i = k; i < xs.size(); ++i)
    if (uni_eval(F, c, xs[i]) != ys[i]) return std::nullopt;
  c.resize(d + 1, 0);
  return c;
}

inline Vec field_elements(const Field& F) {
  Vec xs(F.order());
  std::iota(xs.begin(), xs.end(), 0u);
  return xs;
}

struct FitResult {
  bool is_degree_le_d = false;
  Vec nearest;  // coefficients, degree <= d
  Rational distance;
  bool exact = true;
};

namespace detail {

// Berlekamp-Welch: nearest codeword if within the unique decoding radius.
inline std::optional<Vec> berlekamp_welch(const Field& F, const Vec& xs, const Vec& ys, size_t d) {
  size_t n = xs.size();
  if (n <= d) return std::nullopt;
  size_t e = (n - d - 1) / 2;
  // unknowns: E_0..E_{e-1} (E monic of degree e), N_0..N_{e+d}
  size_t nu = e + (e + d + 1);
  Mat A;
  Vec b;
  for (size_t i = 0; i < n; ++i) {
    Vec row(nu, 0);
    Fe xp = 1;
    for (size_t k = 0; k < e; ++k) {
      row[k] = F.mul(ys[i], xp);
      xp = F.mul(xp, xs[i]);
    }
    Fe rhs = F.neg(F.mul(ys[i], xp));
    xp = 1;
    for (size_t k = 0; k <= e + d; ++k) {
      row[e + k] = F.neg(xp);
      xp = F.mul(xp, xs[i]);
    }
    A.push_back(std::move(row));
    b.push_back(rhs);
  }
  AffineSolution sol;
  try {
    sol = solve_affine(F, A, b, nu);
  } catch (const Error&) {
    return std::nullopt;
  }
  Vec E(sol.particular.begin(), sol.particular.begin() + e);
  E.push_back(1);
  Vec N(sol.particular.begin() + e, sol.particular.end());
  // polynomial division N / E
  Vec q(N.size() >= E.size() ? N.size() - E.size() + 1 : 1, 0);
  Vec r = N;
  for (size_t i = r.size(); i-- >= E.size();) {
    Fe coef = r[i];
    size_t shift = i - (E.size() - 1);
    q[shift] = coef;
    for (size_t j = 0; j < E.size(); ++j) r[shift + j] = F.sub(r[shift + j], F.mul(coef, E[j]));
    if (i == E.size() - 1) break;
  }
  for (Fe x : r)
    if (x) return std::nullopt;
  q.resize(d + 1, 0);
  size_t errs = 0;
  for (size_t i = 0; i < n; ++i)
    if (uni_eval(F, q, xs[i]) != ys[i]) ++errs;
  if (errs > e) return std::nullopt;
  return q;
}

}  // namespace detail

// Nearest polynomial of degree <= d to a table over the whole field.
inline FitResult univariate_fit_check(const Field& F, const Vec& table, size_t d, uint64_t enum_cap = 1u << 20) {
  Vec xs = field_elements(F);
  if (table.size() != xs.size()) fail(Errc::LengthMismatch, "table must cover the field");
  FitResult res;
  size_t n = xs.size();
  if (d + 1 >= n) {
    res.is_degree_le_d = true;
    res.nearest = uni_interpolate(F, xs, table);
    res.nearest.resize(d + 1, 0);
    return res;
  }
  if (auto c = uni_fit(F, xs, table, d)) {
    res.is_degree_le_d = true;
    res.nearest = *c;
    return res;
  }
  if (auto q = detail::berlekamp_welch(F, xs, table, d)) {
    size_t dist = 0;
    for (size_t i = 0; i < n; ++i)
      if (uni_eval(F, *q, xs[i]) != table[i]) ++dist;
    res.nearest = *q;
    res.distance = Rational(dist, n);
    return res;
  }
  double space = 1;
  for (size_t i = 0; i <= d; ++i) space *= n;
  if (space <= static_cast<double>(enum_cap)) {
    // lexicographic enumeration (c_0 most significant), first strict minimum wins
    Vec c(d + 1, 0), best;
    size_t bestd = n + 1;
    for (;;) {
      size_t dist = 0;
      for (size_t i = 0; i < n && dist < bestd; ++i)
        if (uni_eval(F, c, xs[i]) != table[i]) ++dist;
      if (dist < bestd) {
        bestd = dist;
        best = c;
      }
      size_t k = d + 1;
      while (k-- > 0) {
        if (++c[k] < n) break;
        c[k] = 0;
      }
      if (k == static_cast<size_t>(-1)) break;
    }
    res.nearest = best;
    res.distance = Rational(bestd, n);
    return res;
  }
  // beyond unique decoding: report the radius as a lower bound
  res.exact = false;
  res.distance = Rational((n - d + 1) / 2, n);
  return res;
}

// ---- grids, Lagrange bases, interpolation ----

using Grid = std::vector<Vec>;  // product set S_1 x ... x S_m

// Univariate L_{S,a}: 1 at a, 0 on S \ {a}.
inline Vec lagrange_univariate(const Field& F, const Vec& S, Fe a) {
  Vec num{1};
  Fe den = 1;
  bool found = false;
  for (Fe s : S) {
    if (s == a) {
      found = true;
      continue;
    }
    num = uni_mul(F, num, Vec{F.neg(s), 1});
    den = F.mul(den, F.sub(a, s));
  }
  if (!found) fail(Errc::PointNotInGrid, "point not in set");
  Fe iv = F.inv(den);
  for (auto& x : num) x = F.mul(x, iv);
  return num;
}

inline Fe lagrange_eval(const Field& F, const Vec& S, Fe a, Fe x) {
  Fe num = 1, den = 1;
  for (Fe s : S) {
    if (s == a) continue;
    num = F.mul(num, F.sub(x, s));
    den = F.mul(den, F.sub(a, s));
  }
  return F.div(num, den);
}

inline MultiPoly lagrange_basis(const Field& F, const Grid& S, const std::vector<Fe>& a) {
  if (a.size() != S.size()) fail(Errc::ArityMismatch, "grid point arity");
  DegreeBounds b;
  for (auto& s : S) b.per_var.push_back(static_cast<uint32_t>(s.size() - 1));
  std::vector<Vec> u;
  for (size_t j = 0; j < S.size(); ++j) u.push_back(lagrange_univariate(F, S[j], a[j]));
  MultiPoly p = MultiPoly::zero(b);
  for (size_t i = 0; i < p.c.size(); ++i) {
    auto e = p.exps(i);
    Fe v = 1;
    for (size_t j = 0; j < e.size() && v; ++j) v = F.mul(v, u[j][e[j]]);
    p.c[i] = v;
  }
  return p;
}

inline MultiPoly vanishing_poly(const Field& F, const std::vector<Fe>& H) {
  if (H.empty()) fail(Errc::PreconditionViolated, "H must be nonempty");
  Vec z{1};
  for (Fe h : H) z = uni_mul(F, z, Vec{F.neg(h), 1});
  MultiPoly p = MultiPoly::zero(DegreeBounds::individual({static_cast<uint32_t>(H.size())}));
  p.c = z;
  return p;
}

inline Vec vanishing_coeffs(const Field& F, const std::vector<Fe>& H) { return vanishing_poly(F, H).c; }

// Inverse Vandermonde: coefficients = M * values for points S.
inline Mat inverse_vandermonde(const Field& F, const Vec& S) {
  size_t n = S.size();
  Mat M(n, Vec(n, 0));
  for (size_t k = 0; k < n; ++k) {
    Vec l = lagrange_univariate(F, S, S[k]);
    for (size_t i = 0; i < n; ++i) M[i][k] = l[i];
  }
  return M;
}

// values row-major over S_1 x ... x S_m (first coordinate slowest).
inline MultiPoly interpolate_grid(const Field& F, const Grid& S, const Vec& values) {
  size_t total = 1;
  DegreeBounds b;
  for (auto& s : S) {
    total *= s.size();
    b.per_var.push_back(static_cast<uint32_t>(s.size() - 1));
  }
  if (values.size() != total) fail(Errc::IncompleteTable, "grid table has wrong size");
  Vec buf = values;
  size_t m = S.size();
  size_t stride = 1;
  for (size_t j = m; j-- > 0;) {
    size_t n = S[j].size();
    Mat M = inverse_vandermonde(F, S[j]);
    size_t outer = total / (n * stride);
    Vec tmp(n);
    for (size_t o = 0; o < outer; ++o)
      for (size_t in = 0; in < stride; ++in) {
        size_t base = o * n * stride + in;
        for (size_t i = 0; i < n; ++i) {
          Fe s = 0;
          for (size_t k = 0; k < n; ++k) s = F.add(s, F.mul(M[i][k], buf[base + k * stride]));
          tmp[i] = s;
        }
        for (size_t i = 0; i < n; ++i) buf[base + i * stride] = tmp[i];
      }
    stride *= n;
  }
  return {b, std::move(buf)};
}

// Minimal-degree extension of a table on H^m (row-major in H's order).
inline MultiPoly lde_from_table(const Field& F, const Vec& values, const std::vector<Fe>& H, size_t m) {
  size_t expect = 1;
  for (size_t i = 0; i < m; ++i) expect *= H.size();
  if (values.size() != expect) fail(Errc::IncompleteTable, "table must cover H^m");
  return interpolate_grid(F, Grid(m, Vec(H.begin(), H.end())), values);
}

// Interpolates an evaluator known to lie within per-variable bounds.
inline MultiPoly interpolate_from_evaluator(const Field& F, const std::vector<uint32_t>& per_var,
                                            const std::function<Fe(const std::vector<Fe>&)>& fn) {
  Grid S;
  size_t total = 1;
  for (auto d : per_var) {
    if (d + 1 > F.order()) fail(Errc::DegreeTooHigh, "degree exceeds field size");
    Vec s(d + 1);
    std::iota(s.begin(), s.end(), 0u);
    S.push_back(s);
    total *= d + 1;
  }
  Vec vals(total);
  std::vector<Fe> x(per_var.size(), 0);
  for (size_t i = 0; i < total; ++i) {
    if (i) {
      for (size_t j = x.size(); j-- > 0;) {
        if (++x[j] <= per_var[j]) break;
        x[j] = 0;
      }
    }
    vals[i] = fn(x);
  }
  return interpolate_grid(F, S, vals);
}

// ---- sums over H ----

// g_i(x_1..x_i) = sum over the trailing m-i variables in H.
inline MultiPoly partial_sum(const Field& F, const MultiPoly& p, const std::vector<Fe>& H, size_t i) {
  if (i < 1 || i + 1 > p.m()) fail(Errc::BadIndex, "partial sum index out of range");
  std::vector<std::optional<Vec>> f(p.m());
  for (size_t j = i; j < p.m(); ++j) f[j] = power_sums(F, H, p.bounds.per_var[j] + 1);
  return contract_some(F, p, f);
}

inline MultiPoly sum_over_vars(const Field& F, const MultiPoly& p, const std::vector<Fe>& H,
                               const std::vector<size_t>& which) {
  std::vector<std::optional<Vec>> f(p.m());
  for (size_t j : which) {
    if (j >= p.m()) fail(Errc::BadIndex, "variable index out of range");
    f[j] = power_sums(F, H, p.bounds.per_var[j] + 1);
  }
  return contract_some(F, p, f);
}

inline Fe sum_over_grid(const Field& F, const MultiPoly& p, const std::vector<Fe>& H) {
  std::vector<Vec> f(p.m());
  for (size_t j = 0; j < p.m(); ++j) f[j] = power_sums(F, H, p.bounds.per_var[j] + 1);
  return contract(F, p.c, p.bounds.dims(), f);
}

// Brute-force sum of an evaluator over H^m.
inline Fe grid_sum(const Field& F, size_t m, const std::vector<Fe>& H,
                   const std::function<Fe(const std::vector<Fe>&)>& fn) {
  std::vector<size_t> idx(m, 0);
  std::vector<Fe> x(m, H.empty() ? 0 : H[0]);
  Fe s = 0;
  for (;;) {
    s = F.add(s, fn(x));
    size_t j = m;
    while (j-- > 0) {
      if (++idx[j] < H.size()) {
        x[j] = H[idx[j]];
        break;
      }
      idx[j] = 0;
      x[j] = H[0];
    }
    if (j == static_cast<size_t>(-1)) break;
  }
  return s;
}

// Full evaluation table over F^m, row-major.
inline Vec eval_table(const Field& F, const MultiPoly& p) {
  size_t q = F.order(), m = p.m();
  Vec buf = p.c;
  std::vector<size_t> cur = p.bounds.dims();
  // transform axis by axis: coefficient axis (d+1) -> value axis (q)
  for (size_t j = 0; j < m; ++j) {
    size_t before = 1, after = 1;
    for (size_t l = 0; l < j; ++l) before *= cur[l];
    for (size_t l = j + 1; l < m; ++l) after *= cur[l];
    size_t d = cur[j];
    Vec out(before * q * after, 0);
    std::vector<Vec> pw(q);
    for (size_t x = 0; x < q; ++x) pw[x] = powers(F, static_cast<Fe>(x), d);
    for (size_t b = 0; b < before; ++b)
      for (size_t x = 0; x < q; ++x)
        for (size_t a = 0; a < after; ++a) {
          Fe s = 0;
          for (size_t e = 0; e < d; ++e) {
            Fe c = buf[(b * d + e) * after + a];
            if (c) s = F.add(s, F.mul(c, pw[x][e]));
          }
          out[(b * q + x) * after + a] = s;
        }
    buf = std::move(out);
    cur[j] = q;
  }
  return buf;
}

// Evaluates a family of polynomials, memoizing restrictions to the current line.
class LineCachedEval {
 public:
  LineCachedEval(const Field& F, std::vector<const MultiPoly*> polys) : F_(&F), polys_(std::move(polys)) {
    for (auto* p : polys_) deg_ = std::max(deg_, p->bounds.line_degree());
    deg_ = std::min<uint32_t>(deg_, F.order() - 1);
  }

  Vec eval(const std::vector<Fe>& y) {
    if (active_) {
      if (auto t = param(y)) {
        Vec out(polys_.size());
        for (size_t i = 0; i < polys_.size(); ++i) out[i] = uni_eval(*F_, uni_[i], *t);
        return out;
      }
      active_ = false;
    }
    if (have_cand_) {
      if (auto t = param(y)) {
        if (*t != 0 && *t != 1) {
          build();
          return eval(y);
        }
      }
    }
    if (have_prev_ && prev_ != y) {
      base_ = prev_;
      dir_.assign(y.size(), 0);
      for (size_t j = 0; j < y.size(); ++j) dir_[j] = F_->sub(y[j], prev_[j]);
      have_cand_ = true;
    }
    prev_ = y;
    have_prev_ = true;
    Vec out(polys_.size());
    for (size_t i = 0; i < polys_.size(); ++i) out[i] = zkpcp::eval(*F_, *polys_[i], y);
    return out;
  }

 private:
  std::optional<Fe> param(const std::vector<Fe>& y) const {
    size_t j = 0;
    while (j < dir_.size() && dir_[j] == 0) ++j;
    if (j == dir_.size()) return std::nullopt;
    Fe t = F_->div(F_->sub(y[j], base_[j]), dir_[j]);
    for (size_t l = 0; l < y.size(); ++l)
      if (F_->add(base_[l], F_->mul(t, dir_[l])) != y[l]) return std::nullopt;
    return t;
  }

  void build() {
    Vec ts(deg_ + 1);
    std::iota(ts.begin(), ts.end(), 0u);
    uni_.assign(polys_.size(), Vec());
    std::vector<Vec> vals(polys_.size(), Vec(ts.size()));
    std::vector<Fe> pt(base_.size());
    for (size_t k = 0; k < ts.size(); ++k) {
      for (size_t l = 0; l < pt.size(); ++l) pt[l] = F_->add(base_[l], F_->mul(ts[k], dir_[l]));
      for (size_t i = 0; i < polys_.size(); ++i) vals[i][k] = zkpcp::eval(*F_, *polys_[i], pt);
    }
    for (size_t i = 0; i < polys_.size(); ++i) uni_[i] = uni_interpolate(*F_, ts, vals[i]);
    active_ = true;
    have_cand_ = false;
  }

  const Field* F_;
  std::vector<const MultiPoly*> polys_;
  uint32_t deg_ = 0;
  bool have_prev_ = false, have_cand_ = false, active_ = false;
  std::vector<Fe> prev_, base_, dir_;
  std::vector<Vec> uni_;
};

// Calls fn(poly) for every polynomial within bounds (in-bound coefficients only).
template <class Fn>
void for_each_poly(const Field& F, const DegreeBounds& b, Fn&& fn) {
  MultiPoly p = MultiPoly::zero(b);
  std::vector<size_t> free;
  for (size_t i = 0; i < p.c.size(); ++i)
    if (b.admits(p.exps(i))) free.push_back(i);
  double space = 1;
  for (size_t i = 0; i < free.size(); ++i) space *= F.order();
  if (space > double(1u << 24)) fail(Errc::SearchSpaceTooLarge, "polynomial space too large to enumerate");
  for (;;) {
    fn(static_cast<const MultiPoly&>(p));
    size_t k = free.size();
    while (k-- > 0) {
      if (++p.c[free[k]] < F.order()) break;
      p.c[free[k]] = 0;
    }
    if (k == static_cast<size_t>(-1)) break;
  }
}

// ---- serialization ----

inline nlohmann::json poly_to_json(const MultiPoly& p) {
  nlohmann::json j;
  j["num_vars"] = p.m();
  if (p.bounds.total)
    j["bounds"] = {{"total", *p.bounds.total}};
  else
    j["bounds"] = {{"per_var", p.bounds.per_var}};
  nlohmann::json terms = nlohmann::json::array();
  for (size_t i = 0; i < p.c.size(); ++i)
    if (p.c[i]) terms.push_back({{"exp", p.exps(i)}, {"coeff", p.c[i]}});
  j["terms"] = terms;
  return j;
}

inline MultiPoly poly_from_json(const nlohmann::json& j) {
  size_t m = j.at("num_vars").get<size_t>();
  DegreeBounds b;
  if (j.at("bounds").contains("total"))
    b = DegreeBounds::total_degree(m, j["bounds"]["total"].get<uint32_t>());
  else
    b = DegreeBounds::individual(j["bounds"]["per_var"].get<std::vector<uint32_t>>());
  MultiPoly p = MultiPoly::zero(b);
  for (auto& t : j.at("terms")) {
    auto e = t.at("exp").get<std::vector<uint32_t>>();
    if (!b.admits(e)) fail(Errc::DegreeTooHigh, "term outside bounds");
    p.c[p.index(e)] = t.at("coeff").get<Fe>();
  }
  return p;
}

// ---- dense grid files: "ZKGRID1\n", u32 header length, JSON header {field, m}, row-major body ----

struct GridData {
  FieldSpec field;
  uint32_t m = 0;
  Vec values;
};

inline std::vector<uint8_t> grid_to_bytes(const Field& F, uint32_t m, const Vec& values) {
  size_t n = 1;
  for (uint32_t i = 0; i < m; ++i) n *= F.order();
  if (values.size() != n) fail(Errc::IncompleteTable, "grid must cover F^m");
  std::string head = nlohmann::json{{"field", F.spec()}, {"m", m}}.dump();
  std::vector<uint8_t> out{'Z', 'K', 'G', 'R', 'I', 'D', '1', '\n'};
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<uint8_t>(head.size() >> (8 * i)));
  out.insert(out.end(), head.begin(), head.end());
  for (Fe v : values) F.encode(v, out);
  return out;
}

inline GridData grid_from_bytes(const std::vector<uint8_t>& in) {
  static const char magic[] = "ZKGRID1\n";
  if (in.size() < 12 || !std::equal(magic, magic + 8, in.begin())) fail(Errc::BadConfig, "not a grid file");
  size_t hl = 0;
  for (int i = 0; i < 4; ++i) hl |= size_t(in[8 + i]) << (8 * i);
  if (in.size() < 12 + hl) fail(Errc::BadConfig, "truncated grid header");
  auto head = nlohmann::json::parse(in.begin() + 12, in.begin() + 12 + hl);
  GridData g;
  g.field = head.at("field").get<FieldSpec>();
  g.m = head.at("m").get<uint32_t>();
  Field F(g.field);
  size_t n = 1;
  for (uint32_t i = 0; i < g.m; ++i) n *= F.order();
  size_t w = F.bytes_per_element(), off = 12 + hl;
  if (in.size() != off + n * w) fail(Errc::IncompleteTable, "grid body has the wrong length");
  g.values.resize(n);
  for (size_t i = 0; i < n; ++i) g.values[i] = F.decode(in.data() + off + i * w);
  return g;
}

}  // namespace zkpcp
