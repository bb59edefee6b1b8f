#pragma once

#include <cmath>

#include "osat_zoo.hpp"

namespace zkpcp {

// Counts random bits drawn (log2 of each range).
class CountingSource : public RandomSource {
 public:
  explicit CountingSource(RandomSource& s) : s_(&s) {}
  uint64_t below(uint64_t n) override {
    if (n > 1) bits_ += std::log2(double(n));
    return s_->below(n);
  }
  double bits() const { return bits_; }

 private:
  RandomSource* s_;
  double bits_ = 0;
};

// Oracles that serve a scripted sequence (or zeros) and record positions.
struct ScriptedOracles {
  std::vector<Pos> seen;
  const std::vector<Symbol>* script = nullptr;
  const std::vector<Pos>* expect = nullptr;

  OSatOracles make(const OSatSystem& sys) {
    uint32_t q = sys.field().order();
    size_t tl = sys.params().tau_len(), m = sys.params().sc_vars(), cv = sys.params().c_vars();
    auto mk = [this](std::string id, size_t n, uint32_t q, size_t w) {
      return Oracle(id, std::vector<uint32_t>(n, q), w, [this, id, w](const Index& i) {
        size_t k = seen.size();
        seen.push_back({id, i});
        if (!script) return Symbol(w, 0);
        if (k >= script->size() || !(expect->at(k) == seen.back()))
          fail(Errc::MissingAnswer, "replayed verifier left the recorded query plan");
        return (*script)[k];
      });
    };
    return {mk("pi_C", cv, q, 1), mk("pi_sigma", tl + m - 1, q, m + 1), mk("pi_P", tl + m, q, m + 1)};
  }
};

inline Rng osat_run_rng(const Seed& coins, uint64_t r) { return Rng(coins.derive("run", r)); }

// The osat verifier as a non-adaptive system over ("pi_C" | "pi_sigma" | "pi_P", index).
inline PcpSystem osat_pcp(const OSatSystem& sys, OSatBalance bal, Seed coins) {
  auto S = &sys;
  auto cache = std::make_shared<std::map<uint64_t, std::vector<Pos>>>();
  PcpSystem p;
  p.name = "osat";
  p.sym_bits = sys.field().element_bits() * (sys.params().sc_vars() + 1);
  size_t hk = 1;
  for (size_t i = 0; i < sys.params().k; ++i) hk *= sys.params().H.size();
  p.qstar = hk - 1;
  p.Q = [S, bal, coins, cache](uint64_t r) {
    if (auto it = cache->find(r); it != cache->end()) return it->second;
    ScriptedOracles rec;
    auto o = rec.make(*S);
    Rng rng = osat_run_rng(coins, r);
    osat_verify(*S, o, rng, {}, bal);
    if (cache->size() > 256) cache->clear();
    return (*cache)[r] = rec.seen;
  };
  auto Q = p.Q;
  p.D = [S, bal, coins, Q](uint64_t r, const std::vector<Symbol>& a) {
    auto plan = Q(r);
    ScriptedOracles rep;
    rep.script = &a;
    rep.expect = &plan;
    auto o = rep.make(*S);
    Rng rng = osat_run_rng(coins, r);
    return osat_verify(*S, o, rng, {}, bal).accept;
  };
  return p;
}

inline ProofAccess osat_access(std::shared_ptr<OSatOracles> o) {
  return [o](const Pos& p) -> Symbol {
    if (p.oracle == "pi_C") return o->pi_C.query(p.idx);
    if (p.oracle == "pi_sigma") return o->pi_sigma.query(p.idx);
    if (p.oracle == "pi_P") return o->pi_P.query(p.idx);
    fail(Errc::OutOfDomain, "unknown oracle " + p.oracle);
  };
}

inline std::function<size_t(const std::string&)> osat_widths(const OSatSystem& sys) {
  size_t w = sys.params().sc_vars() + 1;
  return [w](const std::string& o) { return o == "pi_C" ? size_t(1) : w; };
}

}  // namespace zkpcp
