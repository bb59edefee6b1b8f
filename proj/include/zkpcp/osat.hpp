#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "ldt.hpp"
#include "linalg.hpp"
#include "polysim.hpp"
#include "zksc.hpp"

namespace zkpcp {

// CNF over variables 1..nvars; literal +v / -v.
struct Cnf {
  size_t nvars = 0;
  std::vector<std::vector<int>> clauses;

  bool eval(const std::vector<uint8_t>& x) const {
    for (auto& cl : clauses) {
      bool sat = false;
      for (int lit : cl) {
        bool v = x[std::abs(lit) - 1];
        if ((lit > 0) == v) {
          sat = true;
          break;
        }
      }
      if (!sat) return false;
    }
    return true;
  }
};

inline nlohmann::json cnf_to_json(const Cnf& c) { return {{"nvars", c.nvars}, {"clauses", c.clauses}}; }
inline Cnf cnf_from_json(const nlohmann::json& j) {
  return {j.at("nvars").get<size_t>(), j.at("clauses").get<std::vector<std::vector<int>>>()};
}

// B over (z: r bits, b1, b2, b3: s bits each, a1, a2, a3), in that variable order.
struct OSatInstance {
  size_t r = 0, s = 0;
  Cnf B;

  size_t nvars() const { return r + 3 * s + 3; }
  void validate() const {
    if (B.nvars != nvars()) fail(Errc::WidthMismatch, "formula arity must be r+3s+3");
    for (auto& cl : B.clauses) {
      if (cl.empty()) fail(Errc::BadConfig, "empty clause");
      for (int lit : cl)
        if (lit == 0 || static_cast<size_t>(std::abs(lit)) > nvars()) fail(Errc::BadConfig, "literal out of range");
    }
  }
};

inline std::vector<uint8_t> int_bits(uint64_t v, size_t w) {
  std::vector<uint8_t> b(w);
  for (size_t i = 0; i < w; ++i) b[i] = (v >> (w - 1 - i)) & 1;
  return b;
}

// A: table over {0,1}^s indexed by the bit string read most significant first.
inline bool osat_check_direct(const OSatInstance& inst, const std::vector<uint8_t>& A) {
  if (A.size() != (size_t(1) << inst.s)) fail(Errc::LengthMismatch, "witness table must have 2^s entries");
  std::vector<uint8_t> x(inst.nvars());
  uint64_t nz = uint64_t(1) << inst.r, nb = uint64_t(1) << inst.s;
  for (uint64_t z = 0; z < nz; ++z)
    for (uint64_t b1 = 0; b1 < nb; ++b1)
      for (uint64_t b2 = 0; b2 < nb; ++b2)
        for (uint64_t b3 = 0; b3 < nb; ++b3) {
          size_t p = 0;
          for (auto bit : int_bits(z, inst.r)) x[p++] = bit;
          for (uint64_t b : {b1, b2, b3})
            for (auto bit : int_bits(b, inst.s)) x[p++] = bit;
          x[p++] = A[b1];
          x[p++] = A[b2];
          x[p++] = A[b3];
          if (!inst.B.eval(x)) return false;
        }
  return true;
}

inline size_t ceil_log2(size_t n) {
  size_t r = 0;
  while ((size_t(1) << r) < n) ++r;
  return r;
}

struct EncodedOSat {
  OSatInstance inst;
  size_t phi_vars = 0;
  // assignment of the formula's variables (index v-1) -> oracle table A
  std::vector<uint8_t> translate(const std::vector<uint8_t>& assignment) const {
    std::vector<uint8_t> A(size_t(1) << inst.s, 0);
    for (size_t v = 0; v < phi_vars; ++v) A[v] = assignment[v];
    return A;
  }
};

// One wide clause per formula clause j:
// (z != j) or (b_1 != v_1) or ... or l_1(a_1) or ... ; shorter clauses use fewer slots.
inline EncodedOSat osat_encode_from_3sat(const Cnf& phi, std::optional<size_t> s_override = std::nullopt) {
  for (auto& cl : phi.clauses)
    if (cl.empty() || cl.size() > 3) fail(Errc::BadConfig, "formula must be a 3-CNF");
  EncodedOSat e;
  e.phi_vars = phi.nvars;
  size_t s = s_override ? *s_override : ceil_log2(std::max<size_t>(phi.nvars, 1));
  if ((size_t(1) << s) < phi.nvars) fail(Errc::TooManyVariables, "more variables than 2^s");
  size_t r = ceil_log2(std::max<size_t>(phi.clauses.size(), 1));
  e.inst.r = r;
  e.inst.s = s;
  e.inst.B.nvars = r + 3 * s + 3;
  for (size_t j = 0; j < phi.clauses.size(); ++j) {
    std::vector<int> wide;
    auto zb = int_bits(j, r);
    for (size_t t = 0; t < r; ++t) wide.push_back(zb[t] ? -int(t + 1) : int(t + 1));
    auto& cl = phi.clauses[j];
    for (size_t i = 0; i < cl.size(); ++i) {
      size_t v = std::abs(cl[i]) - 1;
      auto vb = int_bits(v, s);
      for (size_t t = 0; t < s; ++t) {
        int var = int(r + i * s + t + 1);
        wide.push_back(vb[t] ? -var : var);
      }
      int avar = int(r + 3 * s + i + 1);
      wide.push_back(cl[i] > 0 ? avar : -avar);
    }
    e.inst.B.clauses.push_back(wide);
  }
  return e;
}

enum class Arith { Multilinear, Formula };

// How the (a_i - 1) term is spread over c in H^k: at c = 0^k only, or as (a_i - 1)/|H|^k everywhere.
enum class Correction { Lagrange, Division };

// Extension of 1 - B.
class BHat {
 public:
  BHat(const Field& F, const Cnf& B, Arith mode) : F_(&F), B_(B), mode_(mode) {
    size_t n = B.nvars;
    deg_.assign(n, 0);
    if (mode == Arith::Multilinear) {
      if (n > 24) fail(Errc::SearchSpaceTooLarge, "multilinear table too large");
      table_.resize(size_t(1) << n);
      std::vector<uint8_t> x(n);
      for (size_t i = 0; i < table_.size(); ++i) {
        for (size_t j = 0; j < n; ++j) x[j] = (i >> (n - 1 - j)) & 1;
        table_[i] = B.eval(x) ? 0 : 1;
      }
      for (auto& d : deg_) d = 1;
      total_ = static_cast<uint32_t>(n);
    } else {
      total_ = 0;
      for (auto& cl : B.clauses) {
        total_ += static_cast<uint32_t>(cl.size());
        for (int lit : cl) deg_[std::abs(lit) - 1]++;
      }
    }
  }

  Arith mode() const { return mode_; }
  uint32_t total_degree() const { return total_; }
  uint32_t var_degree(size_t v) const { return deg_[v]; }

  Fe eval(const std::vector<Fe>& x) const {
    const Field& F = *F_;
    size_t n = x.size();
    bool boolean = true;
    for (Fe v : x) boolean = boolean && v <= 1;
    if (boolean) {
      std::vector<uint8_t> b(x.begin(), x.end());
      return B_.eval(b) ? 0 : 1;
    }
    if (mode_ == Arith::Formula) {
      Fe b = 1;  // prod_j clause_j, clause_j = 1 - prod_{lit} (1 - lit)
      for (auto& cl : B_.clauses) {
        Fe unsat = 1;
        for (int lit : cl) {
          Fe v = x[std::abs(lit) - 1];
          Fe l = lit > 0 ? v : F.sub(1, v);
          unsat = F.mul(unsat, F.sub(1, l));
        }
        b = F.mul(b, F.sub(1, unsat));
      }
      return F.sub(1, b);
    }
    Vec t(table_.begin(), table_.end());
    size_t len = t.size();
    for (size_t j = 0; j < n; ++j) {
      len /= 2;
      Fe v = x[j], nv = F.sub(1, v);
      for (size_t i = 0; i < len; ++i) t[i] = F.add(F.mul(nv, t[i]), F.mul(v, t[i + len]));
    }
    return t[0];
  }

 private:
  const Field* F_;
  Cnf B_;
  Arith mode_;
  std::vector<uint8_t> table_;
  std::vector<uint32_t> deg_;
  uint32_t total_ = 0;
};

// Lexicographic map H^m -> {0,1}^{m log|H|} and its coordinate-wise extension.
class LexMap {
 public:
  LexMap(const Field& F, std::vector<Fe> H, size_t m) : F_(&F), H_(std::move(H)), m_(m) {
    size_t h = H_.size();
    f_ = 0;
    while ((size_t(1) << f_) < h) ++f_;
    if ((size_t(1) << f_) != h) fail(Errc::WidthMismatch, "|H| must be a power of two");
    for (Fe a : H_) L_.push_back(lagrange_univariate(F, H_, a));
  }
  static LexMap checked(const Field& F, std::vector<Fe> H, size_t m, size_t width) {
    LexMap g(F, std::move(H), m);
    if (g.f_ * m != width) fail(Errc::WidthMismatch, "m log|H| must equal the bit width");
    return g;
  }

  size_t bits_per_coord() const { return f_; }
  size_t width() const { return f_ * m_; }

  std::vector<uint8_t> bits(const std::vector<Fe>& x) const {
    std::vector<uint8_t> out;
    for (Fe v : x) {
      size_t idx = std::find(H_.begin(), H_.end(), v) - H_.begin();
      if (idx == H_.size()) fail(Errc::PointNotInGrid, "coordinate outside H");
      for (auto b : int_bits(idx, f_)) out.push_back(b);
    }
    return out;
  }

  // bit t of coordinate value x, extended with degree |H|-1
  Fe ext_bit(Fe x, size_t t) const {
    const Field& F = *F_;
    Fe s = 0;
    for (size_t i = 0; i < H_.size(); ++i)
      if ((i >> (f_ - 1 - t)) & 1) s = F.add(s, uni_eval(F, L_[i], x));
    return s;
  }

  std::vector<Fe> ext(const std::vector<Fe>& x) const {
    std::vector<Fe> out;
    for (Fe v : x)
      for (size_t t = 0; t < f_; ++t) out.push_back(ext_bit(v, t));
    return out;
  }

 private:
  const Field* F_;
  std::vector<Fe> H_;
  size_t m_, f_;
  std::vector<Vec> L_;
};

using PointFn = std::function<Fe(const std::vector<Fe>&)>;

struct OSatParams {
  const Field* F = nullptr;
  std::vector<Fe> H;
  size_t f = 0, m1 = 0, m2 = 0, k = 1;
  Arith mode = Arith::Multilinear;
  Correction corr = Correction::Lagrange;
  bool require_subfield = true;

  static OSatParams make(const Field& F, const OSatInstance& inst, size_t k, Arith mode,
                         std::optional<std::vector<Fe>> H = std::nullopt) {
    OSatParams p;
    p.F = &F;
    p.k = k;
    p.mode = mode;
    if (H) {
      p.H = *H;
      p.require_subfield = false;
    } else {
      if (!F.is_binary()) fail(Errc::BadConfig, "the formula path needs characteristic 2");
      p.H = F.subfield_elements();
    }
    while ((size_t(1) << p.f) < p.H.size()) ++p.f;
    if ((size_t(1) << p.f) != p.H.size()) fail(Errc::WidthMismatch, "|H| must be a power of two");
    if (k < 1) fail(Errc::BadConfig, "k must be at least 1");
    if (inst.r % p.f || inst.s % p.f) fail(Errc::WidthMismatch, "log|H| must divide r and s");
    p.m1 = inst.r / p.f;
    p.m2 = inst.s / p.f;
    return p;
  }

  OSatParams with_division() const {
    if (F->is_binary()) fail(Errc::BadConfig, "division by |H|^k needs a prime field");
    Fe hk = 1;
    for (size_t i = 0; i < k; ++i) hk = F->mul(hk, F->from_int(int64_t(H.size())));
    if (hk == 0) fail(Errc::BadConfig, "|H|^k vanishes in the field");
    OSatParams q = *this;
    q.corr = Correction::Division;
    return q;
  }

  size_t tau_len() const { return m1 + 3 * m2 + 3; }
  size_t sc_vars() const { return tau_len() + 3 * k; }
  size_t c_vars() const { return m2 + k; }
  uint32_t c_degree() const { return static_cast<uint32_t>(2 * (H.size() - 1)); }
  DegreeBounds c_bounds() const { return DegreeBounds::uniform(c_vars(), c_degree()); }
  uint32_t c_total_degree() const { return static_cast<uint32_t>(c_vars()) * c_degree(); }
};

class OSatSystem {
 public:
  OSatSystem(const OSatInstance& inst, const OSatParams& p)
      : inst_(inst), p_(p), Bh_(*p.F, inst.B, p.mode), g1_(*p.F, p.H, p.m1), g2_(*p.F, p.H, p.m2) {
    inst.validate();
    const Field& F = *p.F;
    L0_ = lagrange_univariate(F, p.H, 0);
    for (Fe a : p.H) LH_.push_back(lagrange_univariate(F, p.H, a));
    for (Fe a : Vec{0, 1}) Lbool_.push_back(lagrange_univariate(F, Vec{0, 1}, a));
    Fe hk = 1;
    for (size_t i = 0; i < p.k; ++i) hk = F.mul(hk, F.from_int(int64_t(p.H.size())));
    inv_hk_ = p.corr == Correction::Division ? F.inv(hk) : 0;
  }

  const OSatInstance& instance() const { return inst_; }
  const OSatParams& params() const { return p_; }
  const Field& field() const { return *p_.F; }
  const BHat& bhat() const { return Bh_; }

  // w = (z, b1, b2, b3, a1, a2, a3) -> argument of B-hat
  std::vector<Fe> bhat_args(const std::vector<Fe>& w) const {
    std::vector<Fe> x;
    auto take = [&](size_t off, size_t len) { return std::vector<Fe>(w.begin() + off, w.begin() + off + len); };
    auto z = g1_.ext(take(0, p_.m1));
    x.insert(x.end(), z.begin(), z.end());
    for (size_t i = 0; i < 3; ++i) {
      auto b = g2_.ext(take(p_.m1 + i * p_.m2, p_.m2));
      x.insert(x.end(), b.begin(), b.end());
    }
    for (size_t i = 0; i < 3; ++i) x.push_back(w[p_.m1 + 3 * p_.m2 + i]);
    return x;
  }

  std::vector<Fe> b_of(const std::vector<Fe>& w, size_t i) const {
    auto off = w.begin() + p_.m1 + i * p_.m2;
    return std::vector<Fe>(off, off + p_.m2);
  }
  Fe a_of(const std::vector<Fe>& w, size_t i) const { return w[p_.m1 + 3 * p_.m2 + i]; }

  Fe g_A(const PointFn& Ahat, const std::vector<Fe>& w) const {
    const Field& F = *p_.F;
    Fe v = Bh_.eval(bhat_args(w));
    for (size_t i = 0; i < 3 && v; ++i) v = F.mul(v, F.sub(F.add(Ahat(b_of(w, i)), a_of(w, i)), 1));
    return v;
  }

  Fe lagrange0_k(const std::vector<Fe>& c) const {
    Fe v = 1;
    for (Fe x : c) v = field().mul(v, uni_eval(field(), L0_, x));
    return v;
  }

  // point = (w, c1, c2, c3); Chat queried at (b_i, c_i)
  Fe h_C(const PointFn& Chat, const std::vector<Fe>& point) const {
    const Field& F = *p_.F;
    size_t tl = p_.tau_len();
    std::vector<Fe> w(point.begin(), point.begin() + tl);
    Fe v = Bh_.eval(bhat_args(w));
    for (size_t i = 0; i < 3; ++i) {
      std::vector<Fe> ci(point.begin() + tl + i * p_.k, point.begin() + tl + (i + 1) * p_.k);
      std::vector<Fe> q = b_of(w, i);
      q.insert(q.end(), ci.begin(), ci.end());
      Fe cv = Chat(q);
      Fe wgt = p_.corr == Correction::Lagrange ? lagrange0_k(ci) : inv_hk_;
      v = F.mul(v, F.add(cv, F.mul(wgt, F.sub(a_of(w, i), 1))));
    }
    return v;
  }

  // Grid of the outer sum: H^{m1+3m2} x {0,1}^3.
  bool is_bool_coord(size_t j) const { return j >= p_.m1 + 3 * p_.m2 && j < p_.tau_len(); }

  // LDE in w_j of w_j -> L_{grid_j, w_j}(tau_j), zero on H outside the boolean slice.
  Fe selector(const std::vector<Fe>& tau, const std::vector<Fe>& w) const {
    const Field& F = *p_.F;
    Fe v = 1;
    for (size_t j = 0; j < tau.size() && v; ++j) {
      Fe s = 0;
      if (is_bool_coord(j)) {
        for (Fe h : {0u, 1u}) {
          size_t hi = std::find(p_.H.begin(), p_.H.end(), h) - p_.H.begin();
          s = F.add(s, F.mul(uni_eval(F, LH_[hi], w[j]), uni_eval(F, Lbool_[h], tau[j])));
        }
      } else {
        for (size_t i = 0; i < p_.H.size(); ++i)
          s = F.add(s, F.mul(uni_eval(F, LH_[i], w[j]), uni_eval(F, LH_[i], tau[j])));
      }
      v = F.mul(v, s);
    }
    return v;
  }

  // S_tau(w, c) = sel_tau(w) * h_C(w, c)
  Fe summand(const std::vector<Fe>& tau, const PointFn& Chat, const std::vector<Fe>& x) const {
    std::vector<Fe> w(x.begin(), x.begin() + p_.tau_len());
    Fe s = selector(tau, w);
    if (s == 0) return 0;
    return field().mul(s, h_C(Chat, x));
  }

  std::vector<uint32_t> summand_degrees() const {
    uint32_t hm1 = static_cast<uint32_t>(p_.H.size() - 1);
    std::vector<uint32_t> d;
    size_t f = p_.f;
    auto bitdeg = [&](size_t first_var, size_t nbits) {
      uint32_t s = 0;
      for (size_t t = 0; t < nbits; ++t) s += Bh_.var_degree(first_var + t);
      return s * hm1;
    };
    for (size_t j = 0; j < p_.m1; ++j) d.push_back(hm1 + bitdeg(j * f, f));
    for (size_t i = 0; i < 3; ++i)
      for (size_t j = 0; j < p_.m2; ++j) d.push_back(hm1 + bitdeg(inst_.r + i * inst_.s + j * f, f) + p_.c_degree());
    for (size_t i = 0; i < 3; ++i) d.push_back(hm1 + Bh_.var_degree(inst_.r + 3 * inst_.s + i) + 1);
    for (size_t i = 0; i < 3 * p_.k; ++i) d.push_back(std::max(p_.c_degree(), hm1));
    return d;
  }

  uint32_t sc_degree() const {
    auto d = summand_degrees();
    uint32_t mx = *std::max_element(d.begin(), d.end());
    return std::max<uint32_t>(mx, static_cast<uint32_t>(p_.H.size() + 1));
  }
  uint32_t mask_degree() const {
    auto d = summand_degrees();
    return std::max<uint32_t>(*std::max_element(d.begin(), d.end()), static_cast<uint32_t>(p_.H.size()));
  }

  SumInstance sc_instance(Rational delta = Rational(1, 2)) const {
    SumInstance s;
    s.F = p_.F;
    s.m = p_.sc_vars();
    s.d = sc_degree();
    s.H = p_.H;
    s.gamma = 0;
    s.delta = delta;
    return s;
  }

  MultiPoly summand_poly(const std::vector<Fe>& tau, const PointFn& Chat) const {
    auto degs = summand_degrees();
    std::map<std::vector<Fe>, Fe> memo;  // few distinct Chat points on the grid
    PointFn cached = [&](const std::vector<Fe>& y) {
      auto it = memo.find(y);
      if (it != memo.end()) return it->second;
      return memo[y] = Chat(y);
    };
    return interpolate_from_evaluator(field(), degs, [&](const std::vector<Fe>& x) { return summand(tau, cached, x); });
  }

  // ---- witness commitment ----

  // Constraint rows: for b in H^{m2}, sum_{c in H^k} Chat(b, c).
  const std::pair<Mat, std::vector<std::vector<Fe>>>& commit_rows() const {
    std::call_once(rows_once_, [&] {
      auto b = p_.c_bounds();
      std::vector<std::vector<Fe>> bs;
      std::vector<Fe> cur(p_.m2, p_.H[0]);
      std::vector<size_t> idx(p_.m2, 0);
      for (;;) {
        bs.push_back(cur);
        size_t j = p_.m2;
        while (j-- > 0) {
          if (++idx[j] < p_.H.size()) {
            cur[j] = p_.H[idx[j]];
            break;
          }
          idx[j] = 0;
          cur[j] = p_.H[0];
        }
        if (j == static_cast<size_t>(-1)) break;
      }
      Mat rows;
      MultiPoly shape = MultiPoly::zero(b);
      for (auto& bb : bs) {
        std::vector<std::optional<Vec>> fac(p_.c_vars());
        for (size_t j = 0; j < p_.m2; ++j) fac[j] = powers(field(), bb[j], b.per_var[j] + 1);
        for (size_t j = p_.m2; j < p_.c_vars(); ++j) fac[j] = power_sums(field(), p_.H, b.per_var[j] + 1);
        Vec row(shape.c.size());
        std::vector<Vec> f2;
        for (auto& o : fac) f2.push_back(*o);
        for (size_t i = 0; i < row.size(); ++i) {
          auto e = shape.exps(i);
          Fe v = 1;
          for (size_t j = 0; j < e.size() && v; ++j) v = field().mul(v, f2[j][e[j]]);
          row[i] = v;
        }
        rows.push_back(row);
      }
      rows_ = {rows, bs};
    });
    return rows_;
  }

  // Lex index of b in H^{m2} equals its bit string value, so A(gamma_2(b)) = A[index].
  Vec decommitment_targets(const std::vector<uint8_t>& A) const {
    auto& bs = commit_rows().second;
    Vec t;
    for (size_t i = 0; i < bs.size(); ++i) t.push_back(i < A.size() ? A[i] : 0);
    return t;
  }

  // Uniform Chat with individual degree 2(|H|-1) and sum_{c in H^k} Chat(b, c) = target(b).
  MultiPoly commit_values(const Vec& target, RandomSource& rng) const {
    auto& rows = commit_rows().first;
    auto key = target;
    std::shared_ptr<AffineSolution> sol;
    {
      std::lock_guard<std::mutex> lk(mu_);
      auto it = sol_cache_.find(key);
      if (it == sol_cache_.end()) {
        sol = std::make_shared<AffineSolution>(solve_affine(field(), rows, target, p_.c_bounds().box_size()));
        sol_cache_[key] = sol;
      } else {
        sol = it->second;
      }
    }
    MultiPoly C = MultiPoly::zero(p_.c_bounds());
    C.c = sol->particular;
    for (auto& kv : sol->kernel) axpy(field(), C.c, field().random(rng), kv);
    return C;
  }

  MultiPoly commit_witness(const std::vector<uint8_t>& A, RandomSource& rng) const {
    return commit_values(decommitment_targets(A), rng);
  }

  size_t commitment_space_dim(const Vec& target) const {
    return solve_affine(field(), commit_rows().first, target, p_.c_bounds().box_size()).kernel.size();
  }

 private:
  OSatInstance inst_;
  OSatParams p_;
  BHat Bh_;
  LexMap g1_, g2_;
  Vec L0_;
  Fe inv_hk_ = 0;
  std::vector<Vec> LH_, Lbool_;
  mutable std::once_flag rows_once_;
  mutable std::pair<Mat, std::vector<std::vector<Fe>>> rows_;
  mutable std::mutex mu_;
  mutable std::map<Vec, std::shared_ptr<AffineSolution>> sol_cache_;
};

inline PointFn poly_fn(const Field& F, const MultiPoly& p) {
  return [&F, &p](const std::vector<Fe>& x) { return eval(F, p, x); };
}

// ---- proof ----

struct OSatProof {
  const OSatSystem* sys = nullptr;
  std::shared_ptr<MultiPoly> C;
  std::shared_ptr<Vec> pi_C;  // dense table over F^{m2+k}
  Seed master;
  // lazily materialized per-tau sumcheck proofs
  mutable std::map<std::vector<Fe>, std::shared_ptr<ZkscProof>> cache;
  std::function<std::shared_ptr<ZkscProof>(const std::vector<Fe>&)> builder;

  std::shared_ptr<ZkscProof> tau_proof(const std::vector<Fe>& tau) const {
    auto it = cache.find(tau);
    if (it != cache.end()) return it->second;
    auto p = builder(tau);
    cache[tau] = p;
    return p;
  }
};

inline std::vector<uint32_t> fe_path(const std::vector<Fe>& x) { return std::vector<uint32_t>(x.begin(), x.end()); }

inline Vec dense_table(const Field& F, const MultiPoly& C) { return eval_table(F, C); }

// Honest per-tau proof for a given committed polynomial.
inline std::shared_ptr<ZkscProof> osat_tau_proof(const OSatSystem& sys, const MultiPoly& C, const Seed& master,
                                                 const std::vector<Fe>& tau) {
  const Field& F = sys.field();
  auto S = sys.summand_poly(tau, poly_fn(F, C));
  auto inst = sys.sc_instance();
  Rng rng(master.derive("tau", fe_path(tau)));
  return std::make_shared<ZkscProof>(zksc_prove(inst, S, rng, sys.mask_degree()));
}

inline OSatProof osat_proof_from_commitment(const OSatSystem& sys, MultiPoly C, const Seed& master) {
  OSatProof pr;
  pr.sys = &sys;
  pr.C = std::make_shared<MultiPoly>(std::move(C));
  pr.pi_C = std::make_shared<Vec>(dense_table(sys.field(), *pr.C));
  pr.master = master;
  auto Cp = pr.C;
  const OSatSystem* s = &sys;
  pr.builder = [s, Cp, master](const std::vector<Fe>& tau) { return osat_tau_proof(*s, *Cp, master, tau); };
  return pr;
}

inline OSatProof osat_prove(const OSatSystem& sys, const std::vector<uint8_t>& A, const Seed& master) {
  if (!osat_check_direct(sys.instance(), A)) fail(Errc::WitnessInvalid, "witness does not satisfy B");
  Rng rng(master.derive("commit"));
  return osat_proof_from_commitment(sys, sys.commit_witness(A, rng), master);
}

// Oracles exposed to verifiers: pi_C over F^{m2+k}; pi_sigma and pi_P indexed by (tau, position).
struct OSatOracles {
  Oracle pi_C, pi_sigma, pi_P;
};

inline OSatOracles osat_oracles(const OSatProof& proof) {
  const OSatSystem& sys = *proof.sys;
  const Field& F = sys.field();
  uint32_t q = F.order();
  size_t tl = sys.params().tau_len(), m = sys.params().sc_vars();
  auto tab = proof.pi_C;
  size_t cv = sys.params().c_vars();
  Oracle pc("pi_C", std::vector<uint32_t>(cv, q), 1, [tab, q](const Index& i) {
    size_t k = 0;
    for (auto x : i) k = k * q + x;
    return Symbol{(*tab)[k]};
  }, Backing::Dense);
  auto pp = std::make_shared<OSatProof>(proof);
  auto split = [tl](const Index& i) {
    return std::make_pair(std::vector<Fe>(i.begin(), i.begin() + tl), Index(i.begin() + tl, i.end()));
  };
  auto sig_cache = std::make_shared<std::map<std::vector<Fe>, std::shared_ptr<Oracle>>>();
  auto p_cache = std::make_shared<std::map<std::vector<Fe>, std::shared_ptr<Oracle>>>();
  Oracle ps("pi_sigma", std::vector<uint32_t>(tl + m - 1, q), m + 1, [pp, split, sig_cache](const Index& i) {
    auto [tau, rest] = split(i);
    auto& o = (*sig_cache)[tau];
    if (!o) o = std::make_shared<Oracle>(pp->tau_proof(tau)->sigma_oracle());
    return o->query(rest);
  });
  Oracle pP("pi_P", std::vector<uint32_t>(tl + m, q), m + 1, [pp, split, p_cache](const Index& i) {
    auto [tau, rest] = split(i);
    auto& o = (*p_cache)[tau];
    if (!o) o = std::make_shared<Oracle>(pp->tau_proof(tau)->mask_oracle());
    return o->query(rest);
  });
  return {std::move(pc), std::move(ps), std::move(pP)};
}

// Sub-oracle view of a (tau, position) family at a fixed tau.
inline Oracle tau_slice(Oracle& family, const std::vector<Fe>& tau, const std::string& id) {
  std::vector<uint32_t> ext(family.extents().begin() + tau.size(), family.extents().end());
  Oracle* fam = &family;
  return Oracle(id, ext, family.width(), [fam, tau](const Index& i) {
    Index full(tau.begin(), tau.end());
    full.insert(full.end(), i.begin(), i.end());
    return fam->query(full);
  });
}

struct OSatBalance {
  size_t ldt_reps = 1, sc_reps = 1;
  size_t ldt_size = 0, sc_size = 0;
};

// Smallest repetition counts with each subtest at least a third of the view.
inline OSatBalance osat_balance(const OSatSystem& sys, const ZkscOptions& zo = {}) {
  size_t q = sys.field().order();
  size_t sc = q                                   // pi_sigma axis
              + q * (3 + 2)                       // input axis: 3 pi_C + pi_P(alpha), pi_P(rev alpha)
              + zo.ldt_f_reps * q * 3             // line test on the summand
              + zo.ldt_p_reps * q;                // line test on pi_P
  size_t ldt = q;
  OSatBalance b;
  for (size_t ns = 1;; ++ns) {
    for (size_t nl = 1; nl <= 1000; ++nl) {
      size_t tot = ns * sc + nl * ldt;
      if (3 * ns * sc >= tot && 3 * nl * ldt >= tot) {
        b.ldt_reps = nl;
        b.sc_reps = ns;
        b.ldt_size = nl * ldt;
        b.sc_size = ns * sc;
        return b;
      }
    }
  }
}

enum class OSatFail { None, LdtC, Sumcheck, LdtF, LdtP };

inline const char* osat_fail_name(OSatFail f) {
  switch (f) {
    case OSatFail::None: return "accept";
    case OSatFail::LdtC: return "ldt-C";
    case OSatFail::Sumcheck: return "sumcheck";
    case OSatFail::LdtF: return "ldt-summand";
    case OSatFail::LdtP: return "ldt-mask";
  }
  return "?";
}

struct OSatRun {
  std::vector<Fe> tau;
  std::vector<Fe> coins;
  ZkscResult zk;
};

struct OSatResult {
  bool accept = true;
  OSatFail fail = OSatFail::None;
  RscStep step = RscStep::None;
  LdtResult ldt_c;
  std::vector<OSatRun> runs;
  OSatBalance balance;
};

// Step 1: total degree test on pi_C (epsilon = 1/100, delta = 1/2).
inline LdtResult osat_ldt_c(const OSatSystem& sys, Oracle& pi_C, size_t reps, RandomSource& rng) {
  LdtParams lc{sys.params().c_vars(), sys.params().c_total_degree(), reps, Rational(1, 2), true};
  return ldt_scalar(sys.field(), pi_C, lc, rng);
}

inline OSatResult osat_verify(const OSatSystem& sys, OSatOracles& o, RandomSource& rng, const ZkscOptions& zo = {},
                              std::optional<OSatBalance> bal = std::nullopt) {
  const Field& F = sys.field();
  OSatResult res;
  res.balance = bal ? *bal : osat_balance(sys, zo);
  res.ldt_c = osat_ldt_c(sys, o.pi_C, res.balance.ldt_reps, rng);
  if (!res.ldt_c.accept) {
    res.accept = false;
    res.fail = OSatFail::LdtC;
  }
  auto inst = sys.sc_instance();
  PointFn chat = [&](const std::vector<Fe>& x) { return o.pi_C.query1(to_index(x)); };
  for (size_t rep = 0; rep < res.balance.sc_reps; ++rep) {
    OSatRun run;
    run.tau = random_coins(F, sys.params().tau_len(), rng);
    run.coins = random_coins(F, inst.m - 1, rng);
    auto tau = run.tau;
    InputFn summand = [&](const std::vector<Fe>& x) { return sys.summand(tau, chat, x); };
    Oracle f_or("summand", std::vector<uint32_t>(inst.m, F.order()), 1,
                [&](const Index& i) { return Symbol{summand(std::vector<Fe>(i.begin(), i.end()))}; });
    Oracle sig = tau_slice(o.pi_sigma, tau, "pi_sigma");
    Oracle pp = tau_slice(o.pi_P, tau, "pi_P");
    run.zk = zksc_verify(inst, summand, &f_or, sig, pp, run.coins, rng, zo);
    if (res.accept && !run.zk.accept) {
      res.accept = false;
      if (run.zk.step == RscStep::Ldt)
        res.fail = OSatFail::LdtF;
      else if (run.zk.step != RscStep::None)
        res.fail = OSatFail::Sumcheck;
      else
        res.fail = OSatFail::LdtP;
      res.step = run.zk.step;
    }
    res.runs.push_back(std::move(run));
  }
  return res;
}

// ---- commitment hiding ----

// Distribution of (Chat(q))_{q in Qs} over the whole affine commitment space, by enumeration.
inline std::map<Vec, uint64_t> commitment_answer_counts(const OSatSystem& sys, const std::vector<uint8_t>& A,
                                                        const std::vector<std::vector<Fe>>& Qs,
                                                        uint64_t cap = uint64_t(1) << 22) {
  const Field& F = sys.field();
  auto b = sys.params().c_bounds();
  auto sol = solve_affine(F, sys.commit_rows().first, sys.decommitment_targets(A), b.box_size());
  double space = std::pow(double(F.order()), double(sol.kernel.size()));
  if (space > double(cap)) fail(Errc::SearchSpaceTooLarge, "commitment space too large to enumerate");
  // answers are affine in the kernel coordinates
  Mat evals;
  for (auto& q : Qs) evals.push_back(eval_functional(F, b, q));
  Vec base;
  for (auto& e : evals) base.push_back(dot(F, e, sol.particular));
  std::vector<Vec> dir;
  for (auto& kv : sol.kernel) {
    Vec d;
    for (auto& e : evals) d.push_back(dot(F, e, kv));
    dir.push_back(d);
  }
  std::map<Vec, uint64_t> out;
  std::vector<Fe> digits(dir.size(), 0);
  for (uint64_t t = 0, n = uint64_t(space); t < n; ++t) {
    Vec y = base;
    for (size_t i = 0; i < dir.size(); ++i)
      if (digits[i]) axpy(F, y, digits[i], dir[i]);
    out[y]++;
    for (size_t i = 0; i < digits.size(); ++i) {
      if (++digits[i] < F.order()) break;
      digits[i] = 0;
    }
  }
  return out;
}

// Same comparison by linear algebra: both laws are uniform on an affine image; equal iff the
// images coincide.
inline bool commitment_images_equal(const OSatSystem& sys, const std::vector<uint8_t>& A1,
                                    const std::vector<uint8_t>& A2, const std::vector<std::vector<Fe>>& Qs) {
  const Field& F = sys.field();
  auto b = sys.params().c_bounds();
  auto image = [&](const std::vector<uint8_t>& A) {
    auto sol = solve_affine(F, sys.commit_rows().first, sys.decommitment_targets(A), b.box_size());
    Mat evals;
    for (auto& q : Qs) evals.push_back(eval_functional(F, b, q));
    Vec base;
    for (auto& e : evals) base.push_back(dot(F, e, sol.particular));
    Mat dir;
    for (auto& kv : sol.kernel) {
      Vec d;
      for (auto& e : evals) d.push_back(dot(F, e, kv));
      dir.push_back(d);
    }
    return std::make_pair(base, dir);
  };
  auto [b1, d1] = image(A1);
  auto [b2, d2] = image(A2);
  size_t n = Qs.size();
  size_t r1 = rank(F, d1, n), r2 = rank(F, d2, n);
  Mat both = d1;
  both.insert(both.end(), d2.begin(), d2.end());
  if (rank(F, both, n) != r1 || r1 != r2) return false;
  Vec diff(n);
  for (size_t i = 0; i < n; ++i) diff[i] = F.sub(b1[i], b2[i]);
  both = d1;
  both.push_back(diff);
  return rank(F, both, n) == r1;
}

// ---- brute-force equivalence of implicit satisfiability and the grid-sum condition ----

struct ClaimReport {
  bool holds = false;
  bool satisfiable = false;    // (i)
  bool commitment_found = false;  // (iii)
  std::vector<uint8_t> A;
  Vec decommitment;
};

// Every grid point (z, b, a) of H^{m1+3m2} x {0,1}^3.
inline std::vector<std::vector<Fe>> osat_grid(const OSatSystem& sys) {
  const auto& p = sys.params();
  std::vector<std::vector<Fe>> out;
  size_t n = p.tau_len();
  std::vector<size_t> idx(n, 0);
  auto size_of = [&](size_t j) { return sys.is_bool_coord(j) ? size_t(2) : p.H.size(); };
  auto val = [&](size_t j, size_t i) { return sys.is_bool_coord(j) ? Fe(i) : p.H[i]; };
  for (;;) {
    std::vector<Fe> w(n);
    for (size_t j = 0; j < n; ++j) w[j] = val(j, idx[j]);
    out.push_back(w);
    size_t j = n;
    while (j-- > 0) {
      if (++idx[j] < size_of(j)) break;
      idx[j] = 0;
    }
    if (j == static_cast<size_t>(-1)) break;
  }
  return out;
}

// all c in H^{3k}
inline std::vector<std::vector<Fe>> hk_points(const std::vector<Fe>& H, size_t n) {
  std::vector<std::vector<Fe>> out;
  std::vector<size_t> idx(n, 0);
  for (;;) {
    std::vector<Fe> c(n);
    for (size_t j = 0; j < n; ++j) c[j] = H[idx[j]];
    out.push_back(c);
    size_t j = n;
    while (j-- > 0) {
      if (++idx[j] < H.size()) break;
      idx[j] = 0;
    }
    if (j == static_cast<size_t>(-1)) break;
  }
  return out;
}

// sum_{c in H^{3k}} h_C(w, c), brute force.
inline Fe h_sum_over_c(const OSatSystem& sys, const PointFn& Chat, const std::vector<Fe>& w) {
  const Field& F = sys.field();
  Fe s = 0;
  for (auto& c : hk_points(sys.params().H, 3 * sys.params().k)) {
    std::vector<Fe> x = w;
    x.insert(x.end(), c.begin(), c.end());
    s = F.add(s, sys.h_C(Chat, x));
  }
  return s;
}

inline ClaimReport claim_equivalence_bruteforce(const OSatSystem& sys, uint64_t seed = 1) {
  const auto& inst = sys.instance();
  const auto& p = sys.params();
  const Field& F = sys.field();
  if (inst.s > 2) fail(Errc::SearchSpaceTooLarge, "needs 2^s <= 4");
  ClaimReport rep;
  size_t na = size_t(1) << inst.s;
  for (uint64_t a = 0; a < (uint64_t(1) << na) && !rep.satisfiable; ++a) {
    std::vector<uint8_t> A(na);
    for (size_t i = 0; i < na; ++i) A[i] = (a >> i) & 1;
    if (osat_check_direct(inst, A)) {
      rep.satisfiable = true;
      rep.A = A;
    }
  }
  // (iii): any Chat is determined, for the grid condition, by its decommitment on H^{m2};
  // walk every decommitment vector and test one commitment to it.
  size_t nb = 1;
  for (size_t j = 0; j < p.m2; ++j) nb *= p.H.size();
  double space = 1;
  for (size_t i = 0; i < nb; ++i) space *= F.order();
  if (space > double(1u << 20)) fail(Errc::SearchSpaceTooLarge, "too many decommitment vectors");
  auto grid = osat_grid(sys);
  Vec v(nb, 0);
  Rng rng(Seed::from_u64(seed));
  // satisfying decommitments first when known, so the search exits early
  std::vector<Vec> order;
  if (rep.satisfiable) order.push_back(sys.decommitment_targets(rep.A));
  for (;;) {
    if (rep.commitment_found) break;
    Vec cand = order.empty() ? v : order.back();
    if (!order.empty()) order.pop_back();
    MultiPoly C = sys.commit_values(cand, rng);
    PointFn chat = poly_fn(F, C);
    bool all_zero = true;
    for (auto& w : grid)
      if (h_sum_over_c(sys, chat, w) != 0) {
        all_zero = false;
        break;
      }
    if (all_zero) {
      rep.commitment_found = true;
      rep.decommitment = cand;
      break;
    }
    if (cand != v) continue;
    size_t k = nb;
    while (k-- > 0) {
      if (++v[k] < F.order()) break;
      v[k] = 0;
    }
    if (k == static_cast<size_t>(-1)) break;
  }
  rep.holds = rep.satisfiable == rep.commitment_found;
  return rep;
}

}  // namespace zkpcp
