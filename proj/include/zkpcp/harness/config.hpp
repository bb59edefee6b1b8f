#pragma once

#include <json.hpp>
#include <string>

#include "../random.hpp"

namespace zkpcp {

struct ExperimentConfig {
  std::string system = "osat-micro";
  std::string experiment = "zk";  // zk | soundness | robustness | pipeline | all
  bool satisfiable = true;
  uint64_t trials = 1000;
  uint64_t zk_trials = 1000;
  Seed master = Seed::from_u64(1);
  double alpha = 0.001;
  double ci = 0.99;
  uint32_t bins = 16;
  bool timing = false;  // runtimes break byte-for-byte reproducibility, so they are opt-in
  std::string json_out, csv_out;

  void validate() const {
    if (trials < 1 || zk_trials < 1) fail(Errc::BadConfig, "trial counts must be at least 1");
    if (!(alpha > 0 && alpha < 1) || !(ci > 0 && ci < 1)) fail(Errc::BadConfig, "thresholds must lie in (0,1)");
    if (bins < 2) fail(Errc::BadConfig, "need at least 2 bins");
  }

  static ExperimentConfig from_json(const nlohmann::json& j) {
    ExperimentConfig c;
    c.system = j.value("system", c.system);
    c.experiment = j.value("experiment", c.experiment);
    c.satisfiable = j.value("satisfiable", c.satisfiable);
    c.trials = j.value("trials", c.trials);
    c.zk_trials = j.value("zk_trials", c.zk_trials);
    if (j.contains("seed")) {
      auto& s = j["seed"];
      c.master = s.is_string() ? Seed::from_hex(s.get<std::string>()) : Seed::from_u64(s.get<uint64_t>());
    }
    c.alpha = j.value("alpha", c.alpha);
    c.ci = j.value("ci", c.ci);
    c.bins = j.value("bins", c.bins);
    c.timing = j.value("timing", c.timing);
    c.json_out = j.value("json_out", c.json_out);
    c.csv_out = j.value("csv_out", c.csv_out);
    c.validate();
    return c;
  }

  nlohmann::json to_json() const {
    return {{"system", system}, {"experiment", experiment}, {"satisfiable", satisfiable}, {"trials", trials},
            {"zk_trials", zk_trials}, {"seed", master.hex()}, {"alpha", alpha}, {"ci", ci}, {"bins", bins}, {"timing", timing}};
  }
};

}  // namespace zkpcp
