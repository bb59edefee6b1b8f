#pragma once

#include <map>
#include <string>
#include <vector>

#include "../polysim.hpp"

namespace zkpcp::checks {

using Dist = std::map<Vec, Rational>;

inline void accumulate(Dist& d, const Vec& k, const Rational& w) {
  auto it = d.find(k);
  if (it == d.end())
    d.emplace(k, w);
  else
    it->second = it->second + w;
}

// Total variation distance between exact distributions.
inline Rational tv_distance(const Dist& a, const Dist& b) {
  Rational s(0);
  auto absdiff = [](const Rational& x, const Rational& y) { return x < y ? y - x : x - y; };
  for (auto& [k, v] : a) {
    auto it = b.find(k);
    s = s + absdiff(v, it == b.end() ? Rational(0) : it->second);
  }
  for (auto& [k, v] : b)
    if (!a.count(k)) s = s + v;
  return s / Rational(2);
}

struct PolySimReport {
  bool joint_equal = true;
  bool conditionals_equal = true;
  Rational tv;
  size_t conditionals_checked = 0;
};

// Sequential PolySim answers vs. a single uniformly sampled polynomial, exactly.
inline PolySimReport polysim_exactness(const Field& F, const DegreeBounds& b, const std::vector<std::vector<Fe>>& queries) {
  PolySimReport rep;
  Dist truth;
  size_t total = 0;
  std::map<Vec, size_t> counts;
  zkpcp::for_each_poly(F, b, [&](const MultiPoly& p) {
    Vec ans;
    for (auto& q : queries) ans.push_back(eval(F, p, q));
    ++counts[ans];
    ++total;
  });
  for (auto& [k, c] : counts) truth.emplace(k, Rational(c, total));
  Dist sim;
  enumerate_branches(
      [&](RandomSource& rng) {
        PolySim ps(F, b);
        Vec ans;
        for (auto& q : queries) ans.push_back(ps.query(q, rng));
        return ans;
      },
      [&](const Vec& ans, const Rational& w) { accumulate(sim, ans, w); });
  rep.tv = tv_distance(truth, sim);
  rep.joint_equal = rep.tv == Rational(0);
  // conditionals from the solver's affine set vs. enumeration, for every realized prefix
  for (auto& [ans, pr] : truth) {
    for (size_t j = 0; j < queries.size(); ++j) {
      std::vector<PointConstraint> S;
      for (size_t i = 0; i < j; ++i) S.push_back({queries[i], ans[i]});
      auto law = conditional_law(F, b, S, queries[j]);
      std::map<Fe, size_t> cond;
      size_t n = 0;
      for (auto& [k, c] : counts) {
        bool match = true;
        for (size_t i = 0; i < j && match; ++i) match = k[i] == ans[i];
        if (!match) continue;
        cond[k[j]] += c;
        n += c;
      }
      bool ok;
      if (law.forced)
        ok = cond.size() == 1 && cond.begin()->first == law.value;
      else {
        ok = cond.size() == F.order();
        for (auto& [v, c] : cond) ok = ok && c * F.order() == n;
      }
      rep.conditionals_equal = rep.conditionals_equal && ok;
      ++rep.conditionals_checked;
    }
  }
  return rep;
}

}  // namespace zkpcp::checks
