#pragma once

#include <boost/math/distributions/binomial.hpp>
#include <boost/math/distributions/chi_squared.hpp>

#include <cmath>
#include <cstdint>
#include <map>

namespace zkpcp::stats {

struct ChiSquare {
  double stat = 0;
  size_t df = 0;
  double p = 1;
};

// Two-sample test on binned counts; samples may differ in size.
inline ChiSquare chi2_two_sample(const std::map<uint64_t, uint64_t>& a, const std::map<uint64_t, uint64_t>& b) {
  double na = 0, nb = 0;
  for (auto& [k, v] : a) na += double(v);
  for (auto& [k, v] : b) nb += double(v);
  ChiSquare r;
  if (na == 0 || nb == 0) return r;
  std::map<uint64_t, std::pair<double, double>> all;
  for (auto& [k, v] : a) all[k].first = double(v);
  for (auto& [k, v] : b) all[k].second = double(v);
  double ka = std::sqrt(nb / na), kb = std::sqrt(na / nb);
  for (auto& [k, c] : all) {
    double d = ka * c.first - kb * c.second;
    r.stat += d * d / (c.first + c.second);
  }
  if (all.size() < 2) return r;
  r.df = all.size() - 1;
  boost::math::chi_squared_distribution<double> dist(double(r.df));
  r.p = boost::math::cdf(boost::math::complement(dist, r.stat));
  return r;
}

inline double bonferroni(double alpha, size_t tests) { return tests ? alpha / double(tests) : alpha; }

struct Interval {
  double lo = 0, hi = 1;
};

// Clopper-Pearson interval for k successes in n trials.
inline Interval binomial_ci(uint64_t k, uint64_t n, double conf = 0.99) {
  using B = boost::math::binomial_distribution<double>;
  double a = (1 - conf) / 2;
  if (n == 0) return {0, 1};
  return {B::find_lower_bound_on_p(double(n), double(k), a), B::find_upper_bound_on_p(double(n), double(k), a)};
}

}  // namespace zkpcp::stats
