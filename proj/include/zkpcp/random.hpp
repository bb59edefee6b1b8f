#pragma once

#include <openssl/sha.h>

#include <array>
#include <cstdint>
#include <cstring>
#include <random>
#include <string>
#include <vector>

#include "errors.hpp"
#include "rational.hpp"

namespace zkpcp {

// 256-bit master seed; children come from a labeled counter-mode PRF.
struct Seed {
  std::array<uint8_t, 32> bytes{};

  static Seed from_u64(uint64_t x) {
    Seed s;
    for (int i = 0; i < 8; ++i) s.bytes[i] = static_cast<uint8_t>(x >> (8 * i));
    return s;
  }

  static Seed from_hex(const std::string& hex) {
    if (hex.size() != 64) fail(Errc::BadConfig, "seed hex must have 64 digits");
    Seed s;
    for (size_t i = 0; i < 32; ++i) s.bytes[i] = static_cast<uint8_t>(std::stoul(hex.substr(2 * i, 2), nullptr, 16));
    return s;
  }

  std::string hex() const {
    static const char* d = "0123456789abcdef";
    std::string out;
    for (uint8_t b : bytes) {
      out.push_back(d[b >> 4]);
      out.push_back(d[b & 15]);
    }
    return out;
  }

  Seed derive(const std::string& label, uint64_t counter = 0) const {
    std::vector<uint8_t> msg(bytes.begin(), bytes.end());
    uint64_t len = label.size();
    for (int i = 0; i < 8; ++i) msg.push_back(static_cast<uint8_t>(len >> (8 * i)));
    msg.insert(msg.end(), label.begin(), label.end());
    for (int i = 0; i < 8; ++i) msg.push_back(static_cast<uint8_t>(counter >> (8 * i)));
    Seed out;
    SHA256(msg.data(), msg.size(), out.bytes.data());
    return out;
  }

  Seed derive(const std::string& label, const std::vector<uint32_t>& path) const {
    Seed s = derive(label, path.size());
    for (uint32_t v : path) s = s.derive("/", v);
    return s;
  }

  friend bool operator==(const Seed& a, const Seed& b) { return a.bytes == b.bytes; }
};

// Source of uniform integers; implemented by a seeded stream and by the
// exhaustive enumerator used for exact distribution checks.
class RandomSource {
 public:
  virtual ~RandomSource() = default;
  virtual uint64_t below(uint64_t n) = 0;
};

class Rng : public RandomSource {
 public:
  explicit Rng(const Seed& s) {
    std::array<uint32_t, 8> w{};
    std::memcpy(w.data(), s.bytes.data(), 32);
    std::seed_seq seq(w.begin(), w.end());
    eng_.seed(seq);
  }
  explicit Rng(uint64_t x) : Rng(Seed::from_u64(x)) {}

  uint64_t below(uint64_t n) override {
    if (n <= 1) return 0;
    if ((n & (n - 1)) == 0) return eng_() & (n - 1);
    uint64_t lim = UINT64_MAX - UINT64_MAX % n;
    for (;;) {
      uint64_t x = eng_();
      if (x < lim) return x % n;
    }
  }
  uint64_t next() { return eng_(); }
  double uniform01() { return (eng_() >> 11) * (1.0 / 9007199254740992.0); }

 private:
  std::mt19937_64 eng_;
};

// Walks every branch of a randomized procedure. Each run replays a prefix of
// recorded choices; advance() moves to the next unexplored branch.
class Chooser : public RandomSource {
 public:
  uint64_t below(uint64_t n) override {
    if (n == 0) fail(Errc::PreconditionViolated, "below(0)");
    if (pos_ < path_.size()) {
      if (path_[pos_].second != n) fail(Errc::PreconditionViolated, "chooser replay diverged");
      return path_[pos_++].first;
    }
    path_.push_back({0, n});
    ++pos_;
    return 0;
  }

  // Probability of the branch just completed, as 1/prod(n_i).
  Rational weight() const {
    uint64_t den = 1;
    for (size_t i = 0; i < pos_; ++i) den *= path_[i].second;
    return Rational(1, den);
  }

  bool advance() {
    path_.resize(pos_);
    while (!path_.empty()) {
      auto& b = path_.back();
      if (b.first + 1 < b.second) {
        ++b.first;
        pos_ = 0;
        return true;
      }
      path_.pop_back();
    }
    return false;
  }

  void restart() { pos_ = 0; }

 private:
  std::vector<std::pair<uint64_t, uint64_t>> path_;
  size_t pos_ = 0;
};

// Runs run(src) once per branch and hands the result and its probability to sink.
template <class Run, class Sink>
void enumerate_branches(Run&& run, Sink&& sink) {
  Chooser ch;
  do {
    ch.restart();
    auto r = run(static_cast<RandomSource&>(ch));
    sink(r, ch.weight());
  } while (ch.advance());
}

}  // namespace zkpcp
