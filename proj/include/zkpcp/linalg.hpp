#pragma once

#include <optional>
#include <vector>

#include "field.hpp"

namespace zkpcp {

using Vec = std::vector<Fe>;
using Mat = std::vector<Vec>;

inline Fe dot(const Field& F, const Vec& a, const Vec& b) {
  Fe s = 0;
  for (size_t i = 0; i < a.size(); ++i) s = F.add(s, F.mul(a[i], b[i]));
  return s;
}

// a += c * b
inline void axpy(const Field& F, Vec& a, Fe c, const Vec& b) {
  if (c == 0) return;
  for (size_t i = 0; i < a.size(); ++i)
    if (b[i]) a[i] = F.add(a[i], F.mul(c, b[i]));
}

struct RrefResult {
  Mat r;                       // reduced rows, pivot entries 1
  std::vector<size_t> pivots;  // pivot column of each row
};

// Reduced row echelon form over the first `cols` columns (extra columns ride along).
inline RrefResult rref(const Field& F, Mat a, size_t cols) {
  RrefResult out;
  size_t row = 0;
  for (size_t c = 0; c < cols && row < a.size(); ++c) {
    size_t p = row;
    while (p < a.size() && a[p][c] == 0) ++p;
    if (p == a.size()) continue;
    std::swap(a[p], a[row]);
    Fe iv = F.inv(a[row][c]);
    for (auto& x : a[row]) x = F.mul(x, iv);
    for (size_t i = 0; i < a.size(); ++i)
      if (i != row && a[i][c]) axpy(F, a[i], F.neg(a[i][c]), a[row]);
    out.pivots.push_back(c);
    ++row;
  }
  a.resize(row);
  out.r = std::move(a);
  return out;
}

struct AffineSolution {
  Vec particular;
  Mat kernel;  // basis of the homogeneous solution space
};

// Solves A x = b; throws InconsistentConstraints when no solution exists.
inline AffineSolution solve_affine(const Field& F, const Mat& A, const Vec& b, size_t n) {
  Mat aug;
  aug.reserve(A.size());
  for (size_t i = 0; i < A.size(); ++i) {
    Vec row = A[i];
    row.resize(n, 0);
    row.push_back(b[i]);
    aug.push_back(std::move(row));
  }
  // A rank-deficient system with nonzero rhs leaves a row (0..0 | x != 0).
  Mat full = aug;
  auto rr = rref(F, std::move(full), n + 1);
  for (size_t i = 0; i < rr.pivots.size(); ++i)
    if (rr.pivots[i] == n) fail(Errc::InconsistentConstraints, "linear system has no solution");
  AffineSolution sol;
  sol.particular.assign(n, 0);
  std::vector<int> is_pivot(n, -1);
  for (size_t i = 0; i < rr.pivots.size(); ++i) {
    is_pivot[rr.pivots[i]] = static_cast<int>(i);
    sol.particular[rr.pivots[i]] = rr.r[i][n];
  }
  for (size_t fcol = 0; fcol < n; ++fcol) {
    if (is_pivot[fcol] >= 0) continue;
    Vec k(n, 0);
    k[fcol] = 1;
    for (size_t i = 0; i < rr.pivots.size(); ++i) k[rr.pivots[i]] = F.neg(rr.r[i][fcol]);
    sol.kernel.push_back(std::move(k));
  }
  return sol;
}

inline size_t rank(const Field& F, const Mat& A, size_t cols) { return rref(F, A, cols).pivots.size(); }

// Incremental echelon basis; reduce() reports membership and combination coefficients.
class EchelonBasis {
 public:
  explicit EchelonBasis(const Field& F, size_t dim) : F_(&F), dim_(dim) {}

  size_t size() const { return rows_.size(); }
  size_t dim() const { return dim_; }

  // Reduces v against the basis; returns residual and the coefficients (in
  // original insertion terms) such that v = residual + sum coef_i * orig_i.
  Vec reduce(Vec v, Vec* coef = nullptr) const {
    Vec c(rows_.size(), 0);
    for (size_t i = 0; i < rows_.size(); ++i) {
      Fe x = v[piv_[i]];
      if (x == 0) continue;
      axpy(*F_, v, F_->neg(x), rows_[i]);
      axpy(*F_, c, x, comb_[i]);
    }
    if (coef) *coef = std::move(c);
    return v;
  }

  // Inserts v if independent; returns true when inserted.
  bool insert(const Vec& v) {
    Vec c;
    Vec r = reduce(v, &c);
    size_t p = 0;
    while (p < dim_ && r[p] == 0) ++p;
    if (p == dim_) return false;
    Fe iv = F_->inv(r[p]);
    for (auto& x : r) x = F_->mul(x, iv);
    // combination: r_normalized = (v - sum c_j orig_j) / r[p]
    Vec comb(rows_.size() + 1, 0);
    for (size_t j = 0; j < c.size(); ++j) comb[j] = F_->neg(F_->mul(c[j], iv));
    comb[rows_.size()] = iv;
    for (auto& cm : comb_) cm.push_back(0);
    rows_.push_back(std::move(r));
    piv_.push_back(p);
    comb_.push_back(std::move(comb));
    return true;
  }

  static bool is_zero(const Vec& v) {
    for (Fe x : v)
      if (x) return false;
    return true;
  }

 private:
  const Field* F_;
  size_t dim_;
  Mat rows_;
  std::vector<size_t> piv_;
  Mat comb_;  // rows_[i] = sum comb_[i][j] * original_j
};

}  // namespace zkpcp
