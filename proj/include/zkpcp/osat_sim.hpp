#pragma once

#include <set>

#include "osat.hpp"
#include "polysim.hpp"

namespace zkpcp {

// Row-major outer product of per-variable vectors (variable 0 slowest).
inline Vec tensor_dense(const Field& F, const std::vector<Vec>& fac, Fe coef = 1) {
  Vec out{coef};
  for (auto& f : fac) {
    Vec nx(out.size() * f.size());
    for (size_t i = 0; i < out.size(); ++i)
      for (size_t j = 0; j < f.size(); ++j) nx[i * f.size() + j] = F.mul(out[i], f[j]);
    out = std::move(nx);
  }
  return out;
}

// Linear functional on the mask coefficients (Q, T_1..T_m) as a sum of rank-one terms.
struct MaskTerm {
  size_t block;  // 0 = Q, i = T_i
  Fe coef;
  std::vector<Vec> fac;
};
using MaskFunctional = std::vector<MaskTerm>;

// Exact sequential sampler for the answers of one masked sumcheck proof, given access to the
// summand only through point evaluations. Every answer is psi(F) + phi(mask) with the mask
// uniform: an answer whose phi is new is uniform; otherwise it is fixed by earlier answers and
// psi'(F) for the residual psi', which is a multiple of the full sum (known: zero) or is
// expanded into summand evaluations.
class MaskedSumcheckSim {
 public:
  MaskedSumcheckSim(const SumInstance& inst, std::vector<uint32_t> summand_deg, uint32_t mask_degree,
                    std::function<Fe(const std::vector<Fe>&)> summand, size_t probes = 48)
      : inst_(inst), F_(inst.F), sdeg_(std::move(summand_deg)), summand_(std::move(summand)),
        mb_(mask_bounds(inst.m, mask_degree, inst.H.size())), K_(probes), sk_basis_(*inst.F, probes) {
    const Field& F = *F_;
    Rng prng(Seed::from_u64(0x5eed).derive("probes"));
    probe_.resize(K_);
    for (auto& pr : probe_)
      for (auto& b : mb_) {
        std::vector<Vec> v;
        for (auto d : b.per_var) v.push_back(random_coins(F, d + 1, prng));
        pr.push_back(v);
      }
    for (auto d : sdeg_) ps_.push_back(power_sums(F, inst.H, d + 1));
    sum_dense_ = tensor_dense(F, ps_);
    Z_ = vanishing_coeffs(F, inst.H);
  }

  // pi_Sigma symbol at (c_1..c_{m-2}, alpha), padded with two zeros
  Symbol sigma(const std::vector<Fe>& idx) {
    size_t m = inst_.m;
    Symbol s(m + 1, 0);
    Fe alpha = idx.back();
    for (size_t i = 1; i < m; ++i) {
      std::vector<Fe> p(idx.begin(), idx.begin() + (i - 1));
      p.push_back(alpha);
      s[i - 1] = answer(sigma_mask(i, p), sigma_psi(i, p));
    }
    return s;
  }

  // pi_P(x) = (Q(x), T_1(x), ..., T_m(x))
  Symbol mask_point(const std::vector<Fe>& x) {
    Symbol s;
    for (size_t b = 0; b < mb_.size(); ++b) {
      std::vector<Vec> fac;
      for (size_t j = 0; j < x.size(); ++j) fac.push_back(powers(*F_, x[j], mb_[b].per_var[j] + 1));
      s.push_back(answer({MaskTerm{b, 1, fac}}, std::nullopt));
    }
    return s;
  }

  void set_rng(RandomSource* r) { rng_ = r; }
  size_t answered() const { return rows_.size(); }
  size_t dense_checks() const { return dense_checks_; }

 private:
  struct Row {
    MaskFunctional phi;
    Vec psi;  // empty = zero
    Fe y;
  };

  Vec pw_or_sum(size_t j, const std::vector<Fe>& p, size_t len) const {
    if (j < p.size()) return powers(*F_, p[j], len);
    return power_sums(*F_, inst_.H, len);
  }

  MaskFunctional sigma_mask(size_t i, const std::vector<Fe>& p) const {
    const Field& F = *F_;
    size_t m = inst_.m;
    MaskFunctional f;
    std::vector<Vec> fq, fr;
    for (size_t l = 0; l < m; ++l) {
      size_t len = mb_[0].per_var[l] + 1;
      fq.push_back(pw_or_sum(l, p, len));
      fr.push_back(pw_or_sum(m - 1 - l, p, len));
    }
    f.push_back({0, 1, fq});
    f.push_back({0, F.neg(1), fr});
    for (size_t j = 0; j < i; ++j) {
      std::vector<Vec> ft;
      for (size_t l = 0; l < m; ++l) ft.push_back(pw_or_sum(l, p, mb_[j + 1].per_var[l] + 1));
      f.push_back({j + 1, uni_eval(F, Z_, p[j]), ft});
    }
    return f;
  }

  Vec sigma_psi(size_t, const std::vector<Fe>& p) const {
    std::vector<Vec> fac;
    for (size_t l = 0; l < sdeg_.size(); ++l) fac.push_back(pw_or_sum(l, p, sdeg_[l] + 1));
    return tensor_dense(*F_, fac);
  }

  Vec sketch(const MaskFunctional& phi) const {
    const Field& F = *F_;
    Vec s(K_, 0);
    for (size_t k = 0; k < K_; ++k)
      for (auto& t : phi) {
        Fe v = t.coef;
        for (size_t l = 0; l < t.fac.size() && v; ++l) v = F.mul(v, dot(F, t.fac[l], probe_[k][t.block][l]));
        s[k] = F.add(s[k], v);
      }
    return s;
  }

  std::vector<Vec> dense(const MaskFunctional& phi) const {
    std::vector<Vec> out;
    for (auto& b : mb_) out.push_back(Vec(b.box_size(), 0));
    for (auto& t : phi) {
      Vec d = tensor_dense(*F_, t.fac, t.coef);
      for (size_t i = 0; i < d.size(); ++i) out[t.block][i] = F_->add(out[t.block][i], d[i]);
    }
    return out;
  }

  Vec flat(const std::vector<Vec>& blocks) const {
    Vec v;
    for (auto& b : blocks) v.insert(v.end(), b.begin(), b.end());
    return v;
  }

  size_t mask_dim() const {
    size_t n = 0;
    for (auto& b : mb_) n += b.box_size();
    return n;
  }

  Fe answer(const MaskFunctional& phi, std::optional<Vec> psi) {
    const Field& F = *F_;
    Vec coef;
    bool independent;
    if (!dense_mode_) {
      Vec s = sketch(phi);
      Vec res = sk_basis_.reduce(s, &coef);
      independent = !EchelonBasis::is_zero(res);
      if (!independent) {
        ++dense_checks_;
        Vec want = flat(dense(phi));
        Vec got(want.size(), 0);
        for (size_t j = 0; j < coef.size(); ++j)
          if (coef[j]) axpy(F, got, coef[j], flat(dense(rows_[sk_rows_[j]].phi)));
        if (got != want) enter_dense_mode();
      }
      if (!dense_mode_) {
        if (independent) {
          sk_basis_.insert(s);
          sk_rows_.push_back(rows_.size());
        }
        return finish(phi, std::move(psi), independent, coef, sk_rows_);
      }
    }
    Vec d = flat(dense(phi));
    Vec res = dn_basis_->reduce(d, &coef);
    independent = !EchelonBasis::is_zero(res);
    if (independent) {
      dn_basis_->insert(d);
      dn_rows_.push_back(rows_.size());
    }
    return finish(phi, std::move(psi), independent, coef, dn_rows_);
  }

  void enter_dense_mode() {
    dense_mode_ = true;
    dn_basis_ = std::make_unique<EchelonBasis>(*F_, mask_dim());
    for (size_t r = 0; r < rows_.size(); ++r)
      if (dn_basis_->insert(flat(dense(rows_[r].phi)))) dn_rows_.push_back(r);
  }

  Fe finish(const MaskFunctional& phi, std::optional<Vec> psi, bool independent, const Vec& coef,
            const std::vector<size_t>& basis_rows) {
    const Field& F = *F_;
    Fe y;
    if (independent) {
      y = F.random(*rng_);
    } else {
      // y = psi'(F) + sum coef_j y_j, psi' = psi - sum coef_j psi_j
      Vec pr = psi ? *psi : Vec(sum_dense_.size(), 0);
      y = 0;
      for (size_t j = 0; j < coef.size(); ++j) {
        if (!coef[j]) continue;
        auto& row = rows_[basis_rows[j]];
        y = F.add(y, F.mul(coef[j], row.y));
        if (!row.psi.empty()) axpy(F, pr, F.neg(coef[j]), row.psi);
      }
      y = F.add(y, residual_value(pr));
    }
    rows_.push_back({phi, psi ? std::move(*psi) : Vec{}, y});
    return y;
  }

  // psi'(F): zero for multiples of the full sum (the claim gamma = 0), else by interpolation.
  Fe residual_value(const Vec& pr) {
    const Field& F = *F_;
    size_t piv = 0;
    while (piv < pr.size() && pr[piv] == 0) ++piv;
    if (piv == pr.size()) return 0;
    if (sum_dense_[piv] != 0) {
      Fe c = F.div(pr[piv], sum_dense_[piv]);
      bool multiple = true;
      for (size_t i = 0; i < pr.size() && multiple; ++i) multiple = pr[i] == F.mul(c, sum_dense_[i]);
      if (multiple) return F.mul(c, inst_.gamma);
    }
    // psi'(F) = sum_p w_p F(p) over the grid prod {0..d_j}
    std::vector<Mat> Vinv;
    for (auto d : sdeg_) {
      Vec S(d + 1);
      std::iota(S.begin(), S.end(), 0u);
      Vinv.push_back(inverse_vandermonde(F, S));
    }
    Vec w = pr;
    // apply (V_j^{-1})^T along each axis
    std::vector<size_t> dims;
    for (auto d : sdeg_) dims.push_back(d + 1);
    for (size_t ax = 0; ax < dims.size(); ++ax) {
      size_t inner = 1;
      for (size_t j = ax + 1; j < dims.size(); ++j) inner *= dims[j];
      size_t outer = w.size() / (inner * dims[ax]);
      Vec nw(w.size(), 0);
      for (size_t o = 0; o < outer; ++o)
        for (size_t in = 0; in < inner; ++in)
          for (size_t p = 0; p < dims[ax]; ++p) {
            Fe s = 0;
            for (size_t e = 0; e < dims[ax]; ++e)
              s = F.add(s, F.mul(Vinv[ax][e][p], w[(o * dims[ax] + e) * inner + in]));
            nw[(o * dims[ax] + p) * inner + in] = s;
          }
      w = std::move(nw);
    }
    Fe v = 0;
    std::vector<Fe> pt(dims.size());
    for (size_t i = 0; i < w.size(); ++i) {
      if (!w[i]) continue;
      size_t x = i;
      for (size_t j = dims.size(); j-- > 0;) {
        pt[j] = static_cast<Fe>(x % dims[j]);
        x /= dims[j];
      }
      v = F.add(v, F.mul(w[i], summand_(pt)));
    }
    return v;
  }

  SumInstance inst_;
  const Field* F_;
  std::vector<uint32_t> sdeg_;
  std::function<Fe(const std::vector<Fe>&)> summand_;
  std::vector<DegreeBounds> mb_;
  size_t K_;
  std::vector<std::vector<std::vector<Vec>>> probe_;  // [probe][block][var]
  std::vector<Vec> ps_;
  Vec sum_dense_, Z_;
  EchelonBasis sk_basis_;
  std::vector<size_t> sk_rows_, dn_rows_;
  std::unique_ptr<EchelonBasis> dn_basis_;
  bool dense_mode_ = false;
  size_t dense_checks_ = 0;
  std::vector<Row> rows_;
  RandomSource* rng_ = nullptr;
};

// Simulator for the Oracle-3SAT proof: PolySim for pi_C and one masked-sumcheck sampler per tau,
// whose summand evaluations read pi_C. Refuses once |H|^k distinct pi_C points would be fixed.
class OSatSimulator {
 public:
  OSatSimulator(const OSatSystem& sys, RandomSource& rng, std::optional<MultiPoly> uniform_C = std::nullopt)
      : sys_(&sys), rng_(&rng), csim_(sys.field(), sys.params().c_bounds()), Z_(std::move(uniform_C)) {
    limit_ = 1;
    for (size_t i = 0; i < sys.params().k; ++i) limit_ *= sys.params().H.size();
  }

  size_t budget_limit() const { return limit_; }
  size_t c_points() const { return seen_.size(); }

  Fe query_C(const std::vector<Fe>& x) {
    if (!seen_.count(x)) {
      if (seen_.size() + 1 >= limit_) fail(Errc::BudgetExceeded, "simulated commitment queries reach |H|^k");
      seen_.insert(x);
    }
    return Z_ ? eval(sys_->field(), *Z_, x) : csim_.query(x, *rng_);
  }

  MaskedSumcheckSim& session(const std::vector<Fe>& tau) {
    auto& s = sessions_[tau];
    if (!s) {
      PointFn chat = [this](const std::vector<Fe>& x) { return query_C(x); };
      const OSatSystem* sys = sys_;
      s = std::make_unique<MaskedSumcheckSim>(sys_->sc_instance(), sys_->summand_degrees(), sys_->mask_degree(),
                                              [sys, tau, chat](const std::vector<Fe>& x) {
                                                return sys->summand(tau, chat, x);
                                              });
      s->set_rng(rng_);
    }
    return *s;
  }

  size_t sessions() const { return sessions_.size(); }

  // Oracles with the same ids and domains as the real proof.
  OSatOracles oracles() {
    const Field& F = sys_->field();
    uint32_t q = F.order();
    size_t tl = sys_->params().tau_len(), m = sys_->params().sc_vars();
    Oracle pc("pi_C", std::vector<uint32_t>(sys_->params().c_vars(), q), 1,
              [this](const Index& i) { return Symbol{query_C(std::vector<Fe>(i.begin(), i.end()))}; },
              Backing::Simulator);
    Oracle ps("pi_sigma", std::vector<uint32_t>(tl + m - 1, q), m + 1, [this, tl](const Index& i) {
      std::vector<Fe> tau(i.begin(), i.begin() + tl);
      return session(tau).sigma(std::vector<Fe>(i.begin() + tl, i.end()));
    }, Backing::Simulator);
    Oracle pp("pi_P", std::vector<uint32_t>(tl + m, q), m + 1, [this, tl](const Index& i) {
      std::vector<Fe> tau(i.begin(), i.begin() + tl);
      return session(tau).mask_point(std::vector<Fe>(i.begin() + tl, i.end()));
    }, Backing::Simulator);
    return {std::move(pc), std::move(ps), std::move(pp)};
  }

 private:
  const OSatSystem* sys_;
  RandomSource* rng_;
  PolySim csim_;
  std::optional<MultiPoly> Z_;
  size_t limit_;
  std::set<std::vector<Fe>> seen_;
  std::map<std::vector<Fe>, std::unique_ptr<MaskedSumcheckSim>> sessions_;
};

}  // namespace zkpcp
