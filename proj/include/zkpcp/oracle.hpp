#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "field.hpp"
#include "rational.hpp"

namespace zkpcp {

using Index = std::vector<uint32_t>;
using Symbol = std::vector<Fe>;

enum class Backing { Dense, Lazy, Simulator };

struct QueryRecord {
  std::string oracle;
  Index index;
  Symbol answer;
  uint64_t seq = 0;
};

class Transcript {
 public:
  void record(const std::string& id, const Index& idx, const Symbol& ans) {
    records_.push_back({id, idx, ans, records_.size()});
  }
  const std::vector<QueryRecord>& records() const { return records_; }
  size_t size() const { return records_.size(); }
  void clear() { records_.clear(); }

  std::string to_jsonl() const {
    std::string out;
    for (auto& r : records_) {
      nlohmann::json j = {{"oracle", r.oracle}, {"index", r.index}, {"answer", r.answer}, {"seq", r.seq}};
      out += j.dump() + "\n";
    }
    return out;
  }

 private:
  std::vector<QueryRecord> records_;
};

// Shared query allowance, e.g. the total budget of an adversary across oracles.
struct QueryBudget {
  std::optional<size_t> limit;
  size_t used = 0;
};

class Oracle {
 public:
  using Fn = std::function<Symbol(const Index&)>;

  Oracle(std::string id, std::vector<uint32_t> extents, size_t width, Fn fn, Backing kind = Backing::Lazy)
      : id_(std::move(id)), extents_(std::move(extents)), width_(width), fn_(std::move(fn)), kind_(kind) {}

  // Dense table over an index range [0, n).
  static Oracle dense(std::string id, std::vector<Symbol> table) {
    auto t = std::make_shared<std::vector<Symbol>>(std::move(table));
    size_t w = t->empty() ? 0 : (*t)[0].size();
    uint32_t n = static_cast<uint32_t>(t->size());
    return Oracle(std::move(id), {n}, w, [t](const Index& i) { return (*t)[i[0]]; }, Backing::Dense);
  }

  // Grid domain F^m with row-major dense table.
  static Oracle dense_grid(std::string id, uint32_t q, size_t m, std::shared_ptr<const std::vector<Symbol>> t) {
    size_t w = t->empty() ? 0 : (*t)[0].size();
    return Oracle(std::move(id), std::vector<uint32_t>(m, q), w,
                  [t, q](const Index& i) {
                    size_t k = 0;
                    for (auto x : i) k = k * q + x;
                    return (*t)[k];
                  },
                  Backing::Dense);
  }

  const std::string& id() const { return id_; }
  const std::vector<uint32_t>& extents() const { return extents_; }
  size_t width() const { return width_; }
  Backing kind() const { return kind_; }
  size_t served() const { return served_; }
  std::optional<size_t> budget() const { return budget_; }

  void set_budget(std::optional<size_t> b) { budget_ = b; }
  void share_budget(std::shared_ptr<QueryBudget> b) { shared_ = std::move(b); }
  void record_to(Transcript* t) { transcript_ = t; }
  void reset_counter() { served_ = 0; }

  bool in_domain(const Index& idx) const {
    if (idx.size() != extents_.size()) return false;
    for (size_t j = 0; j < idx.size(); ++j)
      if (idx[j] >= extents_[j]) return false;
    return true;
  }

  Symbol query(const Index& idx) {
    if (!in_domain(idx)) fail(Errc::OutOfDomain, "index outside domain of " + id_);
    if (budget_ && served_ + 1 > *budget_) fail(Errc::BudgetExceeded, "query budget exhausted on " + id_);
    if (shared_ && shared_->limit && shared_->used + 1 > *shared_->limit)
      fail(Errc::BudgetExceeded, "aggregate query budget exhausted");
    Symbol s = fn_(idx);
    ++served_;
    if (shared_) ++shared_->used;
    if (transcript_) transcript_->record(id_, idx, s);
    return s;
  }

  Fe query1(const Index& idx) { return query(idx).at(0); }

 private:
  std::string id_;
  std::vector<uint32_t> extents_;
  size_t width_;
  Fn fn_;
  Backing kind_;
  size_t served_ = 0;
  std::optional<size_t> budget_;
  std::shared_ptr<QueryBudget> shared_;
  Transcript* transcript_ = nullptr;
};

// Concatenation of oracles addressed by (sub-id, index).
class OracleSet {
 public:
  OracleSet() : aggregate_(std::make_shared<QueryBudget>()) {}

  void add(Oracle* o) {
    if (by_id_.count(o->id())) fail(Errc::DuplicateId, o->id());
    by_id_[o->id()] = o;
    order_.push_back(o->id());
    o->share_budget(aggregate_);
  }
  static OracleSet concat(const std::vector<Oracle*>& parts) {
    OracleSet s;
    for (auto* o : parts) s.add(o);
    return s;
  }

  Symbol query(const std::string& id, const Index& idx) { return get(id).query(idx); }
  Oracle& get(const std::string& id) {
    auto it = by_id_.find(id);
    if (it == by_id_.end()) fail(Errc::OutOfDomain, "unknown oracle " + id);
    return *it->second;
  }
  bool has(const std::string& id) const { return by_id_.count(id) > 0; }
  size_t aggregate_served() const { return aggregate_->used; }
  void set_aggregate_budget(std::optional<size_t> b) { aggregate_->limit = b; }
  const std::vector<std::string>& ids() const { return order_; }

 private:
  std::map<std::string, Oracle*> by_id_;
  std::vector<std::string> order_;
  std::shared_ptr<QueryBudget> aggregate_;
};

// Randomness plus ordered answers.
struct VerifierView {
  std::vector<uint64_t> randomness;
  std::vector<QueryRecord> answers;

  std::vector<Symbol> symbols() const {
    std::vector<Symbol> s;
    for (auto& r : answers) s.push_back(r.answer);
    return s;
  }
};

inline Rational view_distance(const std::vector<Symbol>& a, const std::vector<Symbol>& b) {
  if (a.size() != b.size()) fail(Errc::LengthMismatch, "views differ in length");
  if (a.empty()) return Rational(0);
  size_t d = 0;
  for (size_t i = 0; i < a.size(); ++i) {
    if (a[i].size() != b[i].size()) fail(Errc::LengthMismatch, "symbols differ in width");
    d += a[i] != b[i];
  }
  return Rational(d, a.size());
}

using AcceptPredicate = std::function<bool(const std::vector<Symbol>&)>;

struct DistanceResult {
  Rational value;
  bool exact = true;
};

// Exact distance by search over all views; symbols at position i range over
// alphabet[i] (explicit lists). Candidates closer to the original are tried first.
inline DistanceResult distance_to_accepting_exhaustive(const std::vector<Symbol>& view,
                                                       const std::vector<std::vector<Symbol>>& alphabet,
                                                       const AcceptPredicate& pred, double cap = double(1u << 24)) {
  if (alphabet.size() != view.size()) fail(Errc::LengthMismatch, "alphabet list length");
  double space = 1;
  for (auto& a : alphabet) space *= static_cast<double>(a.size());
  if (space > cap) fail(Errc::SearchSpaceTooLarge, "view space too large for exhaustive search");
  size_t n = view.size();
  if (n == 0) return {pred(view) ? Rational(0) : Rational(1), true};
  size_t best = n + 1;
  std::vector<Symbol> cur = view;
  // search by increasing number of changed positions
  std::function<void(size_t, size_t, size_t)> rec = [&](size_t pos, size_t changed, size_t limit) {
    if (best <= limit) return;
    if (pos == n) {
      if (changed == limit && pred(cur)) best = limit;
      return;
    }
    if (n - pos > limit - changed) rec(pos + 1, changed, limit);
    if (changed < limit) {
      for (auto& s : alphabet[pos]) {
        if (s == view[pos]) continue;
        cur[pos] = s;
        rec(pos + 1, changed + 1, limit);
        if (best <= limit) break;
      }
      cur[pos] = view[pos];
    }
  };
  for (size_t limit = 0; limit <= n && best > n; ++limit) rec(0, 0, limit);
  if (best > n) return {Rational(1), true};
  return {Rational(best, n), true};
}

// Upper bound from a supplied list of accepting candidates.
inline DistanceResult distance_to_accepting_structured(const std::vector<Symbol>& view,
                                                       const std::vector<std::vector<Symbol>>& candidates,
                                                       bool complete = false) {
  Rational best(1);
  bool any = false;
  for (auto& c : candidates) {
    Rational d = view_distance(view, c);
    if (!any || d < best) best = d;
    any = true;
  }
  return {best, complete};
}

}  // namespace zkpcp
