#pragma once

#include <chrono>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "config.hpp"

namespace zkpcp {

struct ReportRow {
  std::string experiment, system, label, metric;
  uint64_t n = 0, count = 0;
  std::optional<double> value;
  std::optional<std::string> exact_value;  // rational, when computed exactly
  bool exact = false;                      // exact vs. estimate
  std::optional<double> stat, p, threshold, lo, hi;
  std::optional<size_t> df;
  std::string seed_label;
  std::optional<bool> pass;  // empty: informational
  std::string note;
  nlohmann::json extra = nlohmann::json::object();
  double runtime_ms = 0;

  bool informational() const { return !pass.has_value(); }
};

struct Report {
  ExperimentConfig cfg;
  std::vector<ReportRow> rows;

  bool passed() const {
    for (auto& r : rows)
      if (r.pass && !*r.pass) return false;
    return true;
  }

  void append(const Report& o) { rows.insert(rows.end(), o.rows.begin(), o.rows.end()); }

  const ReportRow* find(const std::string& experiment, const std::string& label) const {
    for (auto& r : rows)
      if (r.experiment == experiment && r.label == label) return &r;
    return nullptr;
  }

  nlohmann::json to_json() const {
    nlohmann::json rs = nlohmann::json::array();
    for (auto& r : rows) {
      nlohmann::json j = {{"experiment", r.experiment}, {"system", r.system}, {"label", r.label},
                          {"metric", r.metric},         {"n", r.n},           {"count", r.count},
                          {"exact", r.exact},           {"seed_label", r.seed_label}};
      auto put = [&j](const char* k, const auto& v) {
        if (v) j[k] = *v;
      };
      put("value", r.value);
      put("exact_value", r.exact_value);
      put("stat", r.stat);
      put("p", r.p);
      put("threshold", r.threshold);
      put("ci_lo", r.lo);
      put("ci_hi", r.hi);
      put("df", r.df);
      j["status"] = r.pass ? (*r.pass ? "pass" : "fail") : "informational";
      if (!r.note.empty()) j["note"] = r.note;
      if (!r.extra.empty()) j["extra"] = r.extra;
      if (cfg.timing) j["runtime_ms"] = r.runtime_ms;
      rs.push_back(j);
    }
    return {{"config", cfg.to_json()}, {"rows", rs}, {"passed", passed()}};
  }

  std::string to_csv() const {
    std::ostringstream o;
    o << std::setprecision(10);
    o << "experiment,system,label,metric,n,count,value,exact_value,exact,stat,df,p,threshold,ci_lo,ci_hi,status,"
         "seed_label";
    if (cfg.timing) o << ",runtime_ms";
    o << "\n";
    auto opt = [&o](const auto& v) {
      if (v) o << *v;
      o << ",";
    };
    for (auto& r : rows) {
      o << r.experiment << "," << r.system << "," << r.label << "," << r.metric << "," << r.n << "," << r.count << ",";
      opt(r.value);
      opt(r.exact_value);
      o << (r.exact ? "exact" : "estimate") << ",";
      opt(r.stat);
      opt(r.df);
      opt(r.p);
      opt(r.threshold);
      opt(r.lo);
      opt(r.hi);
      o << (r.pass ? (*r.pass ? "pass" : "fail") : "informational") << "," << r.seed_label;
      if (cfg.timing) o << "," << r.runtime_ms;
      o << "\n";
    }
    return o.str();
  }

  void write() const {
    auto dump = [](const std::string& path, const std::string& s) {
      std::ofstream f(path, std::ios::binary);
      if (!f) fail(Errc::IoError, "cannot write " + path);
      f << s;
    };
    if (!cfg.json_out.empty()) dump(cfg.json_out, to_json().dump(2) + "\n");
    if (!cfg.csv_out.empty()) dump(cfg.csv_out, to_csv());
  }
};

class Stopwatch {
 public:
  Stopwatch() : t0_(std::chrono::steady_clock::now()) {}
  double ms() const {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0_).count();
  }

 private:
  std::chrono::steady_clock::time_point t0_;
};

}  // namespace zkpcp
