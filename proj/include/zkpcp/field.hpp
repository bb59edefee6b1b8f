#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "errors.hpp"
#include "random.hpp"

namespace zkpcp {

using Fe = uint32_t;

enum class FieldKind { Prime, Binary };

// Reduction polynomials used for GF(2^e), bit i = coefficient of x^i.
inline uint32_t default_irreducible(uint32_t e) {
  static const uint32_t table[17] = {0,      0x3,    0x7,    0xB,    0x13,   0x25,   0x43,   0x83,  0x11B,
                                     0x211,  0x409,  0x805,  0x1053, 0x201B, 0x4443, 0x8003, 0x1100B};
  if (e == 0 || e > 16) fail(Errc::BadConfig, "binary extension degree must be in [1,16]");
  return table[e];
}

struct FieldSpec {
  FieldKind kind = FieldKind::Prime;
  uint32_t p = 0;
  uint32_t e = 0;
  uint32_t irreducible = 0;
  std::optional<uint32_t> subfield_f;

  static FieldSpec prime(uint32_t p) { return {FieldKind::Prime, p, 0, 0, std::nullopt}; }
  static FieldSpec binary(uint32_t e, std::optional<uint32_t> f = std::nullopt, uint32_t irr = 0) {
    return {FieldKind::Binary, 0, e, irr ? irr : default_irreducible(e), f};
  }
};

inline void to_json(nlohmann::json& j, const FieldSpec& s) {
  if (s.kind == FieldKind::Prime) {
    j = {{"kind", "prime"}, {"p", s.p}};
  } else {
    j = {{"kind", "binary"}, {"e", s.e}, {"irreducible_bits", s.irreducible}};
  }
  if (s.subfield_f) j["subfield_f"] = *s.subfield_f;
}

inline void from_json(const nlohmann::json& j, FieldSpec& s) {
  std::string kind = j.at("kind").get<std::string>();
  if (kind == "prime") {
    s = FieldSpec::prime(j.at("p").get<uint32_t>());
  } else if (kind == "binary" || kind == "binary-extension") {
    uint32_t e = j.at("e").get<uint32_t>();
    uint32_t irr = j.contains("irreducible_bits") ? j["irreducible_bits"].get<uint32_t>() : 0;
    s = FieldSpec::binary(e, std::nullopt, irr);
  } else {
    fail(Errc::BadConfig, "unknown field kind " + kind);
  }
  if (j.contains("subfield_f") && !j["subfield_f"].is_null()) s.subfield_f = j["subfield_f"].get<uint32_t>();
}

namespace detail {

inline bool is_prime(uint32_t p) {
  if (p < 2) return false;
  for (uint64_t q = 2; q * q <= p; ++q)
    if (p % q == 0) return false;
  return true;
}

inline uint32_t gf2_degree(uint64_t a) {
  uint32_t d = 0;
  while (a >> (d + 1)) ++d;
  return d;
}

inline uint64_t gf2_mod(uint64_t a, uint64_t m) {
  uint32_t dm = gf2_degree(m);
  while (a && gf2_degree(a) >= dm) a ^= m << (gf2_degree(a) - dm);
  return a;
}

inline bool gf2_irreducible(uint64_t poly, uint32_t e) {
  if (poly == 0 || gf2_degree(poly) != e) return false;
  if (e == 1) return true;
  if (!(poly & 1)) return false;
  for (uint64_t q = 2; gf2_degree(q) <= e / 2; ++q)
    if (gf2_mod(poly, q) == 0) return false;
  return true;
}

}  // namespace detail

class Field {
 public:
  explicit Field(const FieldSpec& spec) : spec_(spec) {
    if (spec.kind == FieldKind::Prime) {
      if (!detail::is_prime(spec.p)) fail(Errc::CompositeModulus, std::to_string(spec.p));
      if (spec.p > (1u << 16) + 1) fail(Errc::BadConfig, "prime field order capped at 2^16+1");
      order_ = spec.p;
      if (spec.subfield_f) fail(Errc::BadSubfieldDegree, "subfields only for binary fields");
    } else {
      uint32_t e = spec.e;
      if (e == 0 || e > 16) fail(Errc::BadConfig, "binary extension degree must be in [1,16]");
      if (!detail::gf2_irreducible(spec.irreducible, e)) fail(Errc::ReducibleModulusPolynomial, std::to_string(spec.irreducible));
      order_ = 1u << e;
      build_tables();
      if (spec.subfield_f) {
        uint32_t f = *spec.subfield_f;
        if (f == 0 || e % f != 0) fail(Errc::BadSubfieldDegree, std::to_string(f) + " does not divide " + std::to_string(e));
        for (Fe x = 0; x < order_; ++x)
          if (pow(x, 1ull << f) == x) sub_.push_back(x);
      }
    }
  }

  const FieldSpec& spec() const { return spec_; }
  uint32_t order() const { return order_; }
  bool is_binary() const { return spec_.kind == FieldKind::Binary; }
  uint32_t characteristic() const { return is_binary() ? 2 : order_; }

  Fe zero() const { return 0; }
  Fe one() const { return 1; }

  Fe add(Fe a, Fe b) const {
    if (is_binary()) return a ^ b;
    uint32_t s = a + b;
    return s >= order_ ? s - order_ : s;
  }
  Fe neg(Fe a) const {
    if (is_binary() || a == 0) return a;
    return order_ - a;
  }
  Fe sub(Fe a, Fe b) const { return add(a, neg(b)); }
  Fe mul(Fe a, Fe b) const {
    if (is_binary()) {
      if (a == 0 || b == 0) return 0;
      return exp_[log_[a] + log_[b]];
    }
    return static_cast<Fe>((static_cast<uint64_t>(a) * b) % order_);
  }
  Fe inv(Fe a) const {
    if (a == 0) fail(Errc::DivisionByZero, "inverse of zero");
    if (is_binary()) return exp_[(order_ - 1 - log_[a]) % (order_ - 1)];
    return pow(a, order_ - 2);
  }
  Fe div(Fe a, Fe b) const { return mul(a, inv(b)); }
  Fe pow(Fe a, uint64_t k) const {
    Fe r = 1;
    while (k) {
      if (k & 1) r = mul(r, a);
      a = mul(a, a);
      k >>= 1;
    }
    return r;
  }
  // Integer n mapped through the prime subfield (n * 1).
  Fe from_int(int64_t n) const {
    if (is_binary()) return static_cast<Fe>(n & 1);
    int64_t m = n % static_cast<int64_t>(order_);
    if (m < 0) m += order_;
    return static_cast<Fe>(m);
  }
  bool valid(Fe a) const { return a < order_; }
  // Bits needed to write any element.
  uint32_t element_bits() const {
    uint32_t b = 0;
    while ((uint64_t(1) << b) < order_) ++b;
    return b;
  }
  Fe random(RandomSource& rng) const { return static_cast<Fe>(rng.below(order_)); }

  // Canonical subfield, ascending by representation.
  const std::vector<Fe>& subfield_elements() const {
    if (!spec_.subfield_f) fail(Errc::NoSubfieldConfigured, "field has no subfield configured");
    return sub_;
  }
  bool has_subfield() const { return spec_.subfield_f.has_value(); }

  // Serialization: elements are unsigned integers; binary packing little-endian.
  uint32_t bytes_per_element() const { return order_ <= 256 ? 1 : (order_ <= 65536 ? 2 : 4); }
  void encode(Fe a, std::vector<uint8_t>& out) const {
    for (uint32_t i = 0; i < bytes_per_element(); ++i) out.push_back(static_cast<uint8_t>(a >> (8 * i)));
  }
  Fe decode(const uint8_t* p) const {
    Fe a = 0;
    for (uint32_t i = 0; i < bytes_per_element(); ++i) a |= static_cast<Fe>(p[i]) << (8 * i);
    if (!valid(a)) fail(Errc::OutOfDomain, "decoded element out of range");
    return a;
  }

 private:
  void build_tables() {
    uint32_t n = order_ - 1;
    exp_.assign(2 * n + 2, 0);
    log_.assign(order_, 0);
    if (order_ == 2) {
      exp_[0] = exp_[1] = exp_[2] = 1;
      return;
    }
    auto slow_mul = [&](uint32_t a, uint32_t b) {
      uint64_t r = 0;
      for (uint32_t i = 0; i < spec_.e; ++i)
        if (b >> i & 1) r ^= static_cast<uint64_t>(a) << i;
      return static_cast<uint32_t>(detail::gf2_mod(r, spec_.irreducible));
    };
    for (uint32_t g = 2; g < order_; ++g) {
      uint32_t x = 1, k = 0;
      std::vector<uint8_t> seen(order_, 0);
      bool ok = true;
      for (k = 0; k < n; ++k) {
        if (seen[x]) {
          ok = false;
          break;
        }
        seen[x] = 1;
        exp_[k] = x;
        log_[x] = k;
        x = slow_mul(x, g);
      }
      if (ok && x == 1) break;
    }
    for (uint32_t k = n; k < exp_.size(); ++k) exp_[k] = exp_[k - n];
  }

  FieldSpec spec_;
  uint32_t order_ = 0;
  std::vector<uint32_t> exp_, log_;
  std::vector<Fe> sub_;
};

// Ordered distinguished subset of the field.
struct SubsetH {
  std::vector<Fe> elems;
  bool is_subfield = false;

  size_t size() const { return elems.size(); }

  static SubsetH of(const Field& F, std::vector<Fe> elems) {
    for (size_t i = 0; i < elems.size(); ++i) {
      if (!F.valid(elems[i])) fail(Errc::OutOfDomain, "H element outside field");
      for (size_t j = 0; j < i; ++j)
        if (elems[i] == elems[j]) fail(Errc::PreconditionViolated, "H elements must be distinct");
    }
    SubsetH h{std::move(elems), false};
    return h;
  }
  static SubsetH subfield(const Field& F) { return SubsetH{F.subfield_elements(), true}; }
  size_t index_of(Fe x) const {
    for (size_t i = 0; i < elems.size(); ++i)
      if (elems[i] == x) return i;
    return elems.size();
  }
};

}  // namespace zkpcp
