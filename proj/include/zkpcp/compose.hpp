#pragma once

#include <bitset>
#include <functional>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "linalg.hpp"
#include "oracle.hpp"
#include "random.hpp"

namespace zkpcp {

// A proof position: oracle name plus index.
struct Pos {
  std::string oracle;
  Index idx;
  friend bool operator<(const Pos& a, const Pos& b) { return std::tie(a.oracle, a.idx) < std::tie(b.oracle, b.idx); }
  friend bool operator==(const Pos& a, const Pos& b) { return a.oracle == b.oracle && a.idx == b.idx; }
};

using ProofAccess = std::function<Symbol(const Pos&)>;

// Non-adaptive verifier: positions depend only on randomness r, decision is pure.
struct PcpSystem {
  std::string name;
  std::optional<uint64_t> R;  // number of random strings when enumerable
  size_t q = 0;
  size_t sym_bits = 0;
  Rational rho = Rational(0);
  size_t qstar = 0;
  std::function<std::vector<Pos>(uint64_t r)> Q;
  std::function<bool(uint64_t r, const std::vector<Symbol>& answers)> D;
};

inline std::vector<Symbol> read_view(const PcpSystem& S, const ProofAccess& pi, uint64_t r) {
  std::vector<Symbol> a;
  for (auto& p : S.Q(r)) a.push_back(pi(p));
  return a;
}

inline bool pcp_verify(const PcpSystem& S, const ProofAccess& pi, uint64_t r) { return S.D(r, read_view(S, pi, r)); }

// ---- locally computable proofs ----

// Reads of the base proof during one invocation; throws past the budget.
class BaseReader {
 public:
  BaseReader(const ProofAccess& base, size_t ell) : base_(&base), ell_(ell) {}
  Symbol operator()(const Pos& p) {
    if (++used_ > ell_) fail(Errc::LocalBudgetExceeded, "local map read more than its budget");
    Symbol s = (*base_)(p);
    reads_.push_back({p, s});
    return s;
  }
  size_t used() const { return used_; }
  const std::vector<std::pair<Pos, Symbol>>& reads() const { return reads_; }

 private:
  const ProofAccess* base_;
  size_t ell_;
  size_t used_ = 0;
  std::vector<std::pair<Pos, Symbol>> reads_;
};

struct LocalMap {
  std::string name;
  size_t ell = 1;
  std::function<Symbol(const Pos& derived, BaseReader& read)> f;
};

struct LocalAudit {
  size_t invocations = 0, max_reads = 0, violations = 0;
};

inline Symbol localmap_apply(const LocalMap& m, const ProofAccess& base, const Pos& p, LocalAudit* audit = nullptr) {
  BaseReader rd(base, m.ell);
  Symbol s = m.f(p, rd);
  if (audit) {
    audit->invocations++;
    audit->max_reads = std::max(audit->max_reads, rd.used());
  }
  return s;
}

inline ProofAccess derived_proof(const LocalMap& m, ProofAccess base, LocalAudit* audit = nullptr) {
  auto mm = std::make_shared<LocalMap>(m);
  return [mm, base, audit](const Pos& p) { return localmap_apply(*mm, base, p, audit); };
}

// Per-proof cache of base symbols.
inline ProofAccess memo_access(ProofAccess base) {
  auto m = std::make_shared<std::map<Pos, Symbol>>();
  return [m, base](const Pos& p) {
    auto it = m->find(p);
    if (it != m->end()) return it->second;
    return (*m)[p] = base(p);
  };
}

inline LocalMap identity_map() {
  return {"identity", 1, [](const Pos& p, BaseReader& rd) { return rd(p); }};
}

// Chaining: outer map g applied on top of f; budget ell_f * ell_g.
inline LocalMap chain_maps(const LocalMap& f, const LocalMap& g) {
  auto ff = std::make_shared<LocalMap>(f), gg = std::make_shared<LocalMap>(g);
  return {g.name + "." + f.name, f.ell * g.ell, [ff, gg](const Pos& p, BaseReader& rd) {
            ProofAccess mid = [&](const Pos& q) { return localmap_apply(*ff, [&](const Pos& b) { return rd(b); }, q); };
            return localmap_apply(*gg, mid, p);
          }};
}

// ---- adversaries and views ----

// Records draws on the first pass and replays them afterwards.
class CoinTape : public RandomSource {
 public:
  explicit CoinTape(RandomSource& src) : src_(&src) {}
  uint64_t below(uint64_t n) override {
    if (pos_ < tape_.size()) return tape_[pos_++];
    uint64_t v = src_->below(n);
    tape_.push_back(v);
    ++pos_;
    return v;
  }
  void rewind() { pos_ = 0; }
  const std::vector<uint64_t>& tape() const { return tape_; }

 private:
  RandomSource* src_;
  std::vector<uint64_t> tape_;
  size_t pos_ = 0;
};

using Querier = std::function<Symbol(const Pos&)>;

struct Adversary {
  std::string name;
  size_t budget = 0;
  std::function<void(const Querier&, RandomSource&)> run;
};

struct View {
  std::vector<uint64_t> coins;
  std::vector<std::pair<Pos, Symbol>> qa;

  // flat key for tabulation
  Vec key() const {
    Vec k;
    k.push_back(static_cast<Fe>(coins.size()));
    for (auto c : coins) k.push_back(static_cast<Fe>(c));
    for (auto& [p, s] : qa) {
      k.push_back(static_cast<Fe>(p.oracle.size()));
      k.insert(k.end(), p.oracle.begin(), p.oracle.end());
      k.push_back(static_cast<Fe>(p.idx.size()));
      k.insert(k.end(), p.idx.begin(), p.idx.end());
      k.push_back(static_cast<Fe>(s.size()));
      k.insert(k.end(), s.begin(), s.end());
    }
    return k;
  }
};

// Runs an adversary against a proof, enforcing its declared budget before serving.
inline View run_adversary(const Adversary& A, const ProofAccess& pi, RandomSource& coins) {
  View v;
  CoinTape tape(coins);
  Querier q = [&](const Pos& p) {
    if (v.qa.size() + 1 > A.budget) fail(Errc::BudgetExceeded, "adversary exceeded its declared budget");
    Symbol s = pi(p);
    v.qa.push_back({p, s});
    return s;
  };
  A.run(q, tape);
  v.coins = tape.tape();
  return v;
}

// Hybrid adversary over the base proof: each derived query is answered through f.
inline Adversary lifted_hybrid_adversary(const Adversary& Vstar, const LocalMap& f) {
  auto vs = std::make_shared<Adversary>(Vstar);
  auto ff = std::make_shared<LocalMap>(f);
  return {Vstar.name + "/hybrid", Vstar.budget * f.ell, [vs, ff](const Querier& base, RandomSource& coins) {
            Querier derived = [&](const Pos& p) { return localmap_apply(*ff, base, p); };
            vs->run(derived, coins);
          }};
}

// Base simulator: runs an adversary against simulated base oracles and returns its view.
using BaseSimulator = std::function<View(const Adversary&, RandomSource& sim_rng, RandomSource& adv_coins)>;

// Runs Sim0 on the hybrid adversary, then replays V* answering through f from the base answers.
inline View lifted_simulator(const BaseSimulator& sim0, const LocalMap& f, const Adversary& Vstar,
                             RandomSource& sim_rng, RandomSource& adv_coins) {
  CoinTape tape(adv_coins);
  View base = sim0(lifted_hybrid_adversary(Vstar, f), sim_rng, tape);
  std::map<Pos, Symbol> Q0;
  for (auto& [p, s] : base.qa) Q0[p] = s;
  ProofAccess from_q0 = [&](const Pos& p) {
    auto it = Q0.find(p);
    if (it == Q0.end()) fail(Errc::MissingAnswer, "replay asked a base position the simulation never answered");
    return it->second;
  };
  tape.rewind();
  return run_adversary(Vstar, derived_proof(f, from_q0), tape);
}

// ---- error-correcting code ----

struct EccSpec {
  size_t a = 0, b = 0;
  std::vector<std::vector<uint8_t>> P;  // a rows of b - a parity bits
  size_t min_distance = 0;
  bool exhaustive = false;  // otherwise a sampled estimate
  uint64_t seed = 0;

  std::vector<uint8_t> encode(const std::vector<uint8_t>& x) const {
    if (x.size() != a) fail(Errc::LengthMismatch, "message length");
    std::vector<uint8_t> c(x);
    c.resize(b, 0);
    for (size_t i = 0; i < a; ++i)
      if (x[i])
        for (size_t j = 0; j < b - a; ++j) c[a + j] ^= P[i][j];
    return c;
  }
  Rational relative_distance() const { return Rational(min_distance, b); }

  nlohmann::json to_json() const {
    nlohmann::json g = nlohmann::json::array();
    for (size_t i = 0; i < a; ++i) {
      std::vector<int> row(b, 0);
      row[i] = 1;
      for (size_t j = 0; j < b - a; ++j) row[a + j] = P[i][j];
      g.push_back(row);
    }
    return {{"a", a}, {"b", b}, {"generator", g}, {"min_distance", min_distance},
            {"distance_method", exhaustive ? "exhaustive" : "sampled-estimate"}, {"seed", seed}};
  }
};

inline size_t ecc_measure_distance(EccSpec& e, uint64_t samples = 200000) {
  constexpr size_t W = 256;
  if (e.b > W) fail(Errc::BadConfig, "codeword too long");
  std::vector<std::bitset<W>> rows(e.a);
  for (size_t i = 0; i < e.a; ++i) {
    rows[i].set(i);
    for (size_t j = 0; j < e.b - e.a; ++j)
      if (e.P[i][j]) rows[i].set(e.a + j);
  }
  size_t best = e.b;
  if (e.a <= 20) {
    // Gray-code walk over all nonzero messages
    std::bitset<W> cw;
    for (uint64_t g = 1; g < (uint64_t(1) << e.a); ++g) {
      cw ^= rows[__builtin_ctzll(g)];
      best = std::min(best, cw.count());
    }
    e.exhaustive = true;
  } else {
    Rng rng(Seed::from_u64(e.seed).derive("ecc-distance"));
    for (uint64_t t = 0; t < samples; ++t) {
      std::bitset<W> cw;
      bool any = false;
      for (size_t i = 0; i < e.a; ++i)
        if (rng.below(2)) {
          cw ^= rows[i];
          any = true;
        }
      if (any) best = std::min(best, cw.count());
    }
    for (auto& r : rows) best = std::min(best, r.count());
    e.exhaustive = false;
  }
  e.min_distance = best;
  return best;
}

inline EccSpec ecc_from_parity(size_t a, std::vector<std::vector<uint8_t>> P) {
  EccSpec e;
  e.a = a;
  e.b = a + (P.empty() ? 0 : P[0].size());
  e.P = std::move(P);
  ecc_measure_distance(e);
  return e;
}

inline EccSpec ecc_generate(size_t a, uint64_t seed) {
  if (a == 0 || a > 64) fail(Errc::BadConfig, "message length must be in 1..64");
  EccSpec best;
  for (uint64_t s = seed; s < seed + 64; ++s) {
    EccSpec e;
    e.a = a;
    e.b = 4 * a;
    e.seed = s;
    Rng rng(Seed::from_u64(s).derive("ecc"));
    e.P.assign(a, std::vector<uint8_t>(3 * a));
    for (auto& row : e.P)
      for (auto& bit : row) bit = static_cast<uint8_t>(rng.below(2));
    ecc_measure_distance(e);
    if (8 * e.min_distance >= e.b) return e;
    if (e.min_distance > best.min_distance || best.a == 0) best = e;
  }
  fail(Errc::DistanceTargetUnreachable, "best distance " + std::to_string(best.min_distance) + " of " +
                                            std::to_string(best.b));
}

// ---- alphabet reduction ----

// Fixed-width bit coding of symbols: each entry uses elem_bits bits, most significant first.
struct SymbolCodec {
  size_t elem_bits = 1;
  std::vector<uint8_t> to_bits(const Symbol& s) const {
    std::vector<uint8_t> out;
    for (Fe x : s)
      for (size_t t = elem_bits; t-- > 0;) out.push_back((x >> t) & 1);
    return out;
  }
  Symbol from_bits(const std::vector<uint8_t>& b) const {
    Symbol s(b.size() / elem_bits, 0);
    for (size_t i = 0; i < s.size(); ++i)
      for (size_t t = 0; t < elem_bits; ++t) s[i] = (s[i] << 1) | b[i * elem_bits + t];
    return s;
  }
};

struct AlphabetReduction {
  PcpSystem sys;
  LocalMap map;  // derived bit proof from the base proof, one base read per bit
  std::function<const EccSpec&(size_t a)> ecc;
};

// Derived positions: ("Pi_a/<oracle>", idx + [bit]) and ("tau/<oracle>", idx + [bit]).
inline AlphabetReduction alphabet_reduce(const PcpSystem& base, SymbolCodec codec,
                                         std::function<size_t(const std::string&)> width_of, uint64_t ecc_seed) {
  auto cache = std::make_shared<std::map<size_t, EccSpec>>();
  auto ecc = [cache, ecc_seed](size_t a) -> const EccSpec& {
    auto it = cache->find(a);
    if (it == cache->end()) it = cache->emplace(a, ecc_generate(a, ecc_seed + a)).first;
    return it->second;
  };
  auto bits_of = [codec, width_of](const std::string& o) { return codec.elem_bits * width_of(o); };
  AlphabetReduction ar;
  ar.ecc = ecc;
  // codewords depend only on the message, so they are shared across proofs
  auto words = std::make_shared<std::map<std::vector<uint8_t>, std::vector<uint8_t>>>();
  ar.map = {"ecc", 1, [codec, ecc, words](const Pos& p, BaseReader& rd) {
              bool tau = p.oracle.rfind("tau/", 0) == 0;
              std::string o = p.oracle.substr(tau ? 4 : 5);
              Index base(p.idx.begin(), p.idx.end() - 1);
              auto bits = codec.to_bits(rd({o, base}));
              size_t j = p.idx.back();
              if (!tau) return Symbol{bits.at(j)};
              auto it = words->find(bits);
              if (it == words->end()) {
                if (words->size() > (1u << 16)) words->clear();
                it = words->emplace(bits, ecc(bits.size()).encode(bits)).first;
              }
              return Symbol{it->second.at(j)};
            }};
  PcpSystem s;
  s.name = base.name + "+bits";
  s.R = base.R;
  s.sym_bits = 1;
  s.rho = Rational(0);
  s.qstar = base.qstar;
  auto Qb = base.Q;
  s.Q = [Qb, bits_of, ecc](uint64_t r) {
    std::vector<Pos> out;
    for (auto& p : Qb(r)) {
      size_t a = bits_of(p.oracle);
      for (size_t j = 0; j < a; ++j) {
        Index i = p.idx;
        i.push_back(static_cast<uint32_t>(j));
        out.push_back({"Pi_a/" + p.oracle, i});
      }
      for (size_t j = 0; j < ecc(a).b; ++j) {
        Index i = p.idx;
        i.push_back(static_cast<uint32_t>(j));
        out.push_back({"tau/" + p.oracle, i});
      }
    }
    return out;
  };
  auto Db = base.D;
  s.D = [Qb, Db, bits_of, ecc, codec](uint64_t r, const std::vector<Symbol>& ans) {
    std::vector<Symbol> blocks;
    size_t k = 0;
    bool consistent = true;
    for (auto& p : Qb(r)) {
      size_t a = bits_of(p.oracle);
      std::vector<uint8_t> msg, tau;
      for (size_t j = 0; j < a; ++j) msg.push_back(static_cast<uint8_t>(ans.at(k++).at(0)));
      for (size_t j = 0; j < ecc(a).b; ++j) tau.push_back(static_cast<uint8_t>(ans.at(k++).at(0)));
      if (ecc(a).encode(msg) != tau) consistent = false;
      blocks.push_back(codec.from_bits(msg));
    }
    return consistent && Db(r, blocks);
  };
  s.q = 0;
  ar.sys = s;
  return ar;
}

// ---- decision circuits ----

enum class Gate { Input, Const, Not, And, Or, Xor };

struct Circuit {
  size_t nin = 0;
  struct G {
    Gate op;
    size_t a = 0, b = 0;  // operand wires; Input: index, Const: value
  };
  std::vector<G> g;
  size_t out = 0;

  size_t add(Gate op, size_t a = 0, size_t b = 0) {
    g.push_back({op, a, b});
    return g.size() - 1;
  }
  size_t size() const { return g.size(); }

  std::vector<uint8_t> wires(const std::vector<uint8_t>& x) const {
    std::vector<uint8_t> w(g.size());
    for (size_t i = 0; i < g.size(); ++i) {
      auto& t = g[i];
      switch (t.op) {
        case Gate::Input: w[i] = x.at(t.a); break;
        case Gate::Const: w[i] = static_cast<uint8_t>(t.a); break;
        case Gate::Not: w[i] = !w[t.a]; break;
        case Gate::And: w[i] = w[t.a] & w[t.b]; break;
        case Gate::Or: w[i] = w[t.a] | w[t.b]; break;
        case Gate::Xor: w[i] = w[t.a] ^ w[t.b]; break;
      }
    }
    return w;
  }
  bool eval(const std::vector<uint8_t>& x) const { return wires(x)[out]; }

  // hard-wires input j to v
  Circuit restrict(size_t j, bool v) const {
    Circuit c = *this;
    for (auto& t : c.g)
      if (t.op == Gate::Input && t.a == j) t = {Gate::Const, size_t(v), 0};
    return c;
  }
};

// Bitwise equality of two n-bit words: NOR of the XORs.
inline Circuit equality_circuit(size_t n) {
  Circuit c;
  c.nin = 2 * n;
  std::vector<size_t> in;
  for (size_t i = 0; i < 2 * n; ++i) in.push_back(c.add(Gate::Input, i));
  size_t acc = c.add(Gate::Const, 0);
  for (size_t i = 0; i < n; ++i) acc = c.add(Gate::Or, acc, c.add(Gate::Xor, in[i], in[n + i]));
  c.out = c.add(Gate::Not, acc);
  return c;
}

// Straight-line compilation of a boolean function on n <= 16 inputs by Shannon expansion.
inline Circuit decision_to_circuit(const std::function<bool(const std::vector<uint8_t>&)>& D, size_t n) {
  if (n > 16) fail(Errc::SearchSpaceTooLarge, "at most 16 decision inputs");
  std::vector<uint8_t> tt(size_t(1) << n);
  std::vector<uint8_t> x(n);
  for (size_t v = 0; v < tt.size(); ++v) {
    for (size_t j = 0; j < n; ++j) x[j] = (v >> j) & 1;
    tt[v] = D(x);
  }
  Circuit c;
  c.nin = n;
  std::vector<size_t> in, nin;
  for (size_t j = 0; j < n; ++j) in.push_back(c.add(Gate::Input, j));
  size_t zero = c.add(Gate::Const, 0), one = c.add(Gate::Const, 1);
  for (size_t j = 0; j < n; ++j) nin.push_back(c.add(Gate::Not, in[j]));
  std::map<std::vector<uint8_t>, size_t> memo;
  std::function<size_t(size_t, size_t)> build = [&](size_t var, size_t off) -> size_t {
    size_t len = size_t(1) << (n - var);
    std::vector<uint8_t> key(tt.begin() + off, tt.begin() + off + len);
    key.push_back(static_cast<uint8_t>(var));
    if (auto it = memo.find(key); it != memo.end()) return it->second;
    bool all0 = true, all1 = true;
    for (size_t i = 0; i < len; ++i) {
      all0 = all0 && !tt[off + i];
      all1 = all1 && tt[off + i];
    }
    size_t w;
    if (all0)
      w = zero;
    else if (all1)
      w = one;
    else {
      // tt index bit (n-1-var) ... split on the highest remaining variable
      size_t j = n - 1 - var;
      size_t half = len / 2;
      size_t lo = build(var + 1, off), hi = build(var + 1, off + half);
      w = c.add(Gate::Or, c.add(Gate::And, nin[j], lo), c.add(Gate::And, in[j], hi));
    }
    memo[key] = w;
    return w;
  };
  c.out = build(0, 0);
  return c;
}

// ---- composition ----

// Restricted decision C_out,r on the outer view bits; gate-level form kept when compiled.
struct RestrictedDecision {
  size_t nin = 0;
  std::function<bool(const std::vector<uint8_t>&)> eval;
  std::shared_ptr<const Circuit> circuit;
};

// Inner proof of proximity for "C(y) = 1"; y is given as bits.
struct InnerPcpp {
  std::string name;
  Rational delta_in = Rational(0);
  uint64_t R_in = 1;
  // deterministic proof (symbols) for decision C and input y
  std::function<std::vector<Symbol>(const RestrictedDecision& C, const std::vector<uint8_t>& y)> prove;
  // positions: kind 0 = input bit, kind 1 = proof symbol
  std::function<std::vector<std::pair<int, size_t>>(const RestrictedDecision& C, uint64_t r_in)> Q;
  std::function<bool(const RestrictedDecision& C, uint64_t r_in, const std::vector<Symbol>& ans)> D;
};

// Reads the whole input view, empty proof, evaluates C.
inline InnerPcpp pass_through_inner() {
  InnerPcpp in;
  in.name = "pass-through";
  in.prove = [](const RestrictedDecision&, const std::vector<uint8_t>&) { return std::vector<Symbol>{}; };
  in.Q = [](const RestrictedDecision& C, uint64_t) {
    std::vector<std::pair<int, size_t>> q;
    for (size_t j = 0; j < C.nin; ++j) q.push_back({0, j});
    return q;
  };
  in.D = [](const RestrictedDecision& C, uint64_t, const std::vector<Symbol>& a) {
    std::vector<uint8_t> y;
    for (auto& s : a) y.push_back(static_cast<uint8_t>(s.at(0)));
    return C.eval(y);
  };
  return in;
}

inline const Circuit& need_circuit(const RestrictedDecision& C) {
  if (!C.circuit) fail(Errc::BadConfig, "inner verifier needs a gate-level decision");
  return *C.circuit;
}

// Proof = all wire values; verifier reads the input and every wire and checks each gate.
inline InnerPcpp wire_transcript_inner() {
  InnerPcpp in;
  in.name = "wire-transcript";
  in.prove = [](const RestrictedDecision& C, const std::vector<uint8_t>& y) {
    std::vector<Symbol> p;
    for (auto w : need_circuit(C).wires(y)) p.push_back({w});
    return p;
  };
  in.Q = [](const RestrictedDecision& C, uint64_t) {
    std::vector<std::pair<int, size_t>> q;
    for (size_t j = 0; j < C.nin; ++j) q.push_back({0, j});
    for (size_t j = 0; j < need_circuit(C).size(); ++j) q.push_back({1, j});
    return q;
  };
  in.D = [](const RestrictedDecision& C, uint64_t, const std::vector<Symbol>& a) {
    auto& c = need_circuit(C);
    std::vector<uint8_t> y, w;
    for (size_t j = 0; j < C.nin; ++j) y.push_back(static_cast<uint8_t>(a[j].at(0)));
    for (size_t j = 0; j < c.size(); ++j) w.push_back(static_cast<uint8_t>(a[C.nin + j].at(0)));
    return c.wires(y) == w && w[c.out] == 1;
  };
  return in;
}

struct Composed {
  PcpSystem sys;
  LocalMap map;  // inner proof symbols from the outer proof; budget q_out
  std::function<RestrictedDecision(uint64_t r)> decision;
};

// Outer symbols are fed to the inner as bits under `codec`; randomness r = r_out * R_in + r_in.
// Decisions on at most `compile_limit` bits are compiled to gates.
inline Composed compose(const PcpSystem& outer, const InnerPcpp& inner, SymbolCodec codec, size_t compile_limit = 16) {
  if (outer.rho < inner.delta_in) fail(Errc::ProximityExceedsRobustness, "inner proximity exceeds outer robustness");
  auto O = std::make_shared<PcpSystem>(outer);
  auto cache = std::make_shared<std::map<uint64_t, RestrictedDecision>>();
  auto decision = [O, cache, codec, compile_limit](uint64_t r) -> RestrictedDecision {
    if (auto it = cache->find(r); it != cache->end()) return it->second;
    auto qs = std::make_shared<std::vector<Pos>>(O->Q(r));
    size_t per = O->sym_bits;
    RestrictedDecision C;
    C.nin = qs->size() * per;
    C.eval = [O, qs, per, codec, r](const std::vector<uint8_t>& y) {
      std::vector<Symbol> a;
      for (size_t i = 0; i < qs->size(); ++i)
        a.push_back(codec.from_bits(std::vector<uint8_t>(y.begin() + i * per, y.begin() + (i + 1) * per)));
      return O->D(r, a);
    };
    if (C.nin <= compile_limit) C.circuit = std::make_shared<Circuit>(decision_to_circuit(C.eval, C.nin));
    if (cache->size() < 4096) (*cache)[r] = C;
    return C;
  };
  auto inn = std::make_shared<InnerPcpp>(inner);
  Composed c;
  c.decision = decision;
  c.map = {"compose", outer.q, [O, inn, decision, codec](const Pos& p, BaseReader& rd) {
             // ("pi_r", [r, j]): inner proof symbol j for outer randomness r
             uint64_t r = p.idx.at(0);
             std::vector<uint8_t> y;
             for (auto& bp : O->Q(r)) {
               auto b = codec.to_bits(rd(bp));
               y.insert(y.end(), b.begin(), b.end());
             }
             return inn->prove(decision(r), y).at(p.idx.at(1));
           }};
  PcpSystem s;
  s.name = outer.name + "*" + inner.name;
  if (outer.R) s.R = *outer.R * inner.R_in;
  s.sym_bits = 1;
  s.qstar = outer.qstar / std::max<size_t>(outer.q, 1);
  s.Q = [O, inn, decision](uint64_t rr) {
    uint64_t r = rr / inn->R_in, ri = rr % inn->R_in;
    auto qs = O->Q(r);
    std::vector<Pos> out;
    size_t per = O->sym_bits;
    for (auto [kind, j] : inn->Q(decision(r), ri)) {
      if (kind == 0) {
        Index i = qs.at(j / per).idx;
        i.push_back(static_cast<uint32_t>(j % per));
        out.push_back({"bits/" + qs[j / per].oracle, i});
      } else {
        out.push_back({"pi_r", {static_cast<uint32_t>(r), static_cast<uint32_t>(j)}});
      }
    }
    return out;
  };
  s.D = [inn, decision](uint64_t rr, const std::vector<Symbol>& a) {
    uint64_t r = rr / inn->R_in, ri = rr % inn->R_in;
    return inn->D(decision(r), ri, a);
  };
  s.q = 0;
  c.sys = s;
  return c;
}

// Composed proof access: outer bits plus lazily materialized inner proofs.
inline ProofAccess composed_proof(const Composed& c, ProofAccess outer, SymbolCodec codec, LocalAudit* audit = nullptr) {
  auto map = std::make_shared<LocalMap>(c.map);
  return [map, outer, codec, audit](const Pos& p) -> Symbol {
    if (p.oracle == "pi_r") return localmap_apply(*map, outer, p, audit);
    std::string o = p.oracle.substr(5);
    Index base(p.idx.begin(), p.idx.end() - 1);
    return Symbol{codec.to_bits(outer({o, base})).at(p.idx.back())};
  };
}

// Bit positions of the composed proof as a 1-local map over the outer proof.
inline LocalMap composed_bits_map(SymbolCodec codec) {
  return {"bits", 1, [codec](const Pos& p, BaseReader& rd) {
            Index base(p.idx.begin(), p.idx.end() - 1);
            return Symbol{codec.to_bits(rd({p.oracle.substr(5), base})).at(p.idx.back())};
          }};
}

}  // namespace zkpcp
