#pragma once

#include <vector>

#include "linalg.hpp"
#include "poly.hpp"
#include "random.hpp"

namespace zkpcp {

struct PointConstraint {
  std::vector<Fe> point;
  Fe value = 0;
};

// Monomial-value vector: the linear functional Q -> Q(x) on the coefficient space.
inline Vec eval_functional(const Field& F, const DegreeBounds& b, const std::vector<Fe>& x) {
  if (x.size() != b.m()) fail(Errc::ArityMismatch, "point has wrong arity");
  MultiPoly shape = MultiPoly::zero(b);
  std::vector<Vec> pw(b.m());
  for (size_t j = 0; j < b.m(); ++j) pw[j] = powers(F, x[j], b.per_var[j] + 1);
  Vec f(shape.c.size());
  auto dims = b.dims();
  std::vector<uint32_t> e(b.m(), 0);
  for (size_t i = 0; i < f.size(); ++i) {
    if (i) {
      for (size_t j = b.m(); j-- > 0;) {
        if (++e[j] < dims[j]) break;
        e[j] = 0;
      }
    }
    if (b.total && !b.admits(e)) {
      f[i] = 0;
      continue;
    }
    Fe v = 1;
    for (size_t j = 0; j < b.m() && v; ++j) v = F.mul(v, pw[j][e[j]]);
    f[i] = v;
  }
  return f;
}

// Lazy sampler of a uniform element of a vector space seen through linear functionals.
class LinearSim {
 public:
  LinearSim(const Field& F, size_t dim) : F_(&F), basis_(F, dim) {}

  // Value of the functional, sampled uniformly unless forced by earlier answers.
  Fe query(const Vec& f, RandomSource& rng) {
    Vec coef;
    Vec r = basis_.reduce(f, &coef);
    if (EchelonBasis::is_zero(r)) return combine(coef);
    Fe v = F_->random(rng);
    basis_.insert(f);
    values_.push_back(v);
    return v;
  }

  // Adds a hard constraint; throws when it contradicts earlier ones.
  void constrain(const Vec& f, Fe v) {
    Vec coef;
    Vec r = basis_.reduce(f, &coef);
    if (EchelonBasis::is_zero(r)) {
      if (combine(coef) != v) fail(Errc::InconsistentConstraints, "constraint contradicts earlier ones");
      return;
    }
    basis_.insert(f);
    values_.push_back(v);
  }

  std::optional<Fe> forced(const Vec& f) const {
    Vec coef;
    Vec r = basis_.reduce(f, &coef);
    if (!EchelonBasis::is_zero(r)) return std::nullopt;
    return combine(coef);
  }

  size_t rank() const { return basis_.size(); }

 private:
  Fe combine(const Vec& coef) const {
    Fe s = 0;
    for (size_t i = 0; i < coef.size(); ++i) s = F_->add(s, F_->mul(coef[i], values_[i]));
    return s;
  }

  const Field* F_;
  EchelonBasis basis_;
  Vec values_;
};

// Evaluations of a uniformly random polynomial within bounds, conditioned on earlier answers.
class PolySim {
 public:
  PolySim(const Field& F, DegreeBounds b) : F_(&F), bounds_(std::move(b)), lin_(F, bounds_.box_size()) {}
  PolySim(const Field& F, DegreeBounds b, const std::vector<PointConstraint>& S) : PolySim(F, std::move(b)) {
    for (auto& c : S) lin_.constrain(eval_functional(F, bounds_, c.point), c.value);
  }

  Fe query(const std::vector<Fe>& alpha, RandomSource& rng) {
    return lin_.query(eval_functional(*F_, bounds_, alpha), rng);
  }
  std::optional<Fe> forced(const std::vector<Fe>& alpha) const {
    return lin_.forced(eval_functional(*F_, bounds_, alpha));
  }
  const DegreeBounds& bounds() const { return bounds_; }
  size_t rank() const { return lin_.rank(); }

 private:
  const Field* F_;
  DegreeBounds bounds_;
  LinearSim lin_;
};

inline Fe polysim_step(const Field& F, const DegreeBounds& b, const std::vector<PointConstraint>& S,
                       const std::vector<Fe>& alpha, RandomSource& rng) {
  PolySim sim(F, b, S);
  return sim.query(alpha, rng);
}

// Support of Q(alpha) over the affine solution set: a single forced value or the whole field.
struct ConditionalLaw {
  bool forced = false;
  Fe value = 0;
};

inline ConditionalLaw conditional_law(const Field& F, const DegreeBounds& b, const std::vector<PointConstraint>& S,
                                      const std::vector<Fe>& alpha) {
  Mat A;
  Vec rhs;
  for (auto& c : S) {
    A.push_back(eval_functional(F, b, c.point));
    rhs.push_back(c.value);
  }
  auto sol = solve_affine(F, A, rhs, b.box_size());
  Vec f = eval_functional(F, b, alpha);
  for (auto& k : sol.kernel)
    if (dot(F, f, k) != 0) return {false, 0};
  return {true, dot(F, f, sol.particular)};
}

}  // namespace zkpcp
