#pragma once

#include <CLI11.hpp>
#include <openssl/sha.h>

#include <filesystem>
#include <fstream>
#include <iostream>

#include "criteria.hpp"

namespace zkpcp {

namespace cli {

enum Exit { Ok = 0, Error_ = 1, Reject = 2 };

inline std::vector<uint8_t> read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) fail(Errc::IoError, "cannot read " + path);
  return {std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
}

inline void write_file(const std::string& path, const std::string& s) {
  std::ofstream f(path, std::ios::binary);
  if (!f) fail(Errc::IoError, "cannot write " + path);
  f << s;
}

inline nlohmann::json read_json(const std::string& path) {
  auto b = read_file(path);
  try {
    return nlohmann::json::parse(b.begin(), b.end());
  } catch (const nlohmann::json::exception& e) {
    fail(Errc::BadConfig, path + ": " + e.what());
  }
}

inline std::string sha256_hex(const uint8_t* p, size_t n) {
  Seed d;
  SHA256(p, n, d.bytes.data());
  return d.hex();
}

inline Seed parse_seed(const std::string& s) {
  if (s.size() == 64) return Seed::from_hex(s);
  try {
    size_t used = 0;
    uint64_t v = std::stoull(s, &used, 0);
    if (used == s.size()) return Seed::from_u64(v);
  } catch (const std::exception&) {
  }
  fail(Errc::BadConfig, "seed must be an integer or 64 hex digits");
}

inline std::vector<uint8_t> parse_bits(const std::string& s) {
  std::vector<uint8_t> out;
  for (char c : s) {
    if (c == '0' || c == '1')
      out.push_back(uint8_t(c - '0'));
    else if (c != ',' && c != ' ')
      fail(Errc::BadConfig, "bit strings use 0 and 1");
  }
  return out;
}

// Instance + witness table, from a built-in name or a 3-CNF instance file.
struct Problem {
  std::string name;
  FieldSpec field = FieldSpec::binary(8, 1);
  size_t k = 1;
  OSatInstance inst;
  std::vector<uint8_t> A;
};

// {"cnf": {"nvars", "clauses"}, "assignment": [..], "k": 1, "field": {...}}
inline Problem problem_from_file(const std::string& path) {
  auto j = read_json(path);
  Problem P;
  P.name = std::filesystem::path(path).stem().string();
  Cnf phi = cnf_from_json(j.contains("cnf") ? j["cnf"] : j);
  auto enc = osat_encode_from_3sat(phi);
  P.inst = enc.inst;
  std::vector<uint8_t> asg(phi.nvars, 0);
  if (j.contains("assignment")) asg = j["assignment"].get<std::vector<uint8_t>>();
  if (asg.size() != phi.nvars) fail(Errc::LengthMismatch, "assignment must cover every variable");
  P.A = enc.translate(asg);
  P.k = j.value("k", size_t(1));
  if (j.contains("field")) P.field = j["field"].get<FieldSpec>();
  return P;
}

inline Problem problem_builtin(const std::string& name) {
  Problem P;
  P.name = name;
  if (name == "osat-micro")
    P.inst = osat_micro_instance(true);
  else if (name == "osat-micro-unsat")
    P.inst = osat_micro_instance(false);
  else
    fail(Errc::BadConfig, "unknown system " + name);
  P.A = {1};
  return P;
}

struct Built {
  std::shared_ptr<Field> F;
  std::shared_ptr<OSatSystem> sys;
};

inline Built build(const FieldSpec& fs, const OSatInstance& inst, size_t k) {
  Built b;
  b.F = std::make_shared<Field>(fs);
  b.sys = std::make_shared<OSatSystem>(inst, OSatParams::make(*b.F, inst, k, Arith::Multilinear));
  size_t w = b.sys->params().sc_vars() + 1;
  if (b.F->order() <= 25 * w)
    fail(Errc::FieldTooSmallForK, "pi_P symbols have width " + std::to_string(w) + "; the line test needs |F| > " +
                                      std::to_string(25 * w) + " (use fewer clauses or variables)");
  return b;
}

inline nlohmann::json instance_json(const OSatInstance& in) { return {{"r", in.r}, {"s", in.s}, {"B", cnf_to_json(in.B)}}; }

inline OSatInstance instance_from_json(const nlohmann::json& j) {
  OSatInstance in;
  in.r = j.at("r").get<size_t>();
  in.s = j.at("s").get<size_t>();
  in.B = cnf_from_json(j.at("B"));
  in.validate();
  return in;
}

inline void print_row(const ReportRow& r) {
  std::cout << (r.pass ? (*r.pass ? "pass " : "FAIL ") : "info ") << r.experiment << " " << r.system << " " << r.label;
  if (r.exact_value) std::cout << " value=" << *r.exact_value;
  if (r.p) std::cout << " p=" << *r.p;
  if (r.threshold) std::cout << " threshold=" << *r.threshold;
  std::cout << "\n";
}

}  // namespace cli

inline int cli_main(int argc, char** argv) {
  CLI::App app{"zkpcp: zero-knowledge PCP laboratory"};
  app.require_subcommand(1);

  // prove
  auto* prove = app.add_subcommand("prove", "commit to a witness and write a proof manifest plus pi_C grid");
  std::string p_system = "osat-micro", p_instance, p_out = "proof.json", p_seed = "1", p_witness;
  bool p_force = false;
  prove->add_option("--system", p_system, "osat-micro | osat-micro-unsat");
  prove->add_option("--instance", p_instance, "3-CNF instance file (JSON)");
  prove->add_option("--witness", p_witness, "oracle table A as bits, overrides the default");
  prove->add_option("--seed", p_seed, "master seed (integer or 64 hex digits)");
  prove->add_option("--out", p_out, "manifest path; the grid goes next to it");
  prove->add_flag("--force", p_force, "commit even when the table does not satisfy the instance");

  // verify
  auto* verify = app.add_subcommand("verify", "run the osat verifier against a stored proof");
  std::string v_proof = "proof.json", v_coins = "0", v_tamper;
  double v_rate = 0.05;
  uint64_t v_runs = 1;
  verify->add_option("--proof", v_proof, "manifest path")->required();
  verify->add_option("--coins", v_coins, "verifier seed");
  verify->add_option("--runs", v_runs, "independent verifier runs; all must accept")->check(CLI::PositiveNumber);
  verify->add_option("--tamper", v_tamper, "corrupt pi_C entries with this seed before verifying");
  verify->add_option("--tamper-rate", v_rate, "fraction of pi_C entries to corrupt")->check(CLI::Range(0.0, 1.0));

  // simulate
  auto* simulate = app.add_subcommand("simulate", "write adversary views against the simulator as JSONL");
  std::string s_system = "osat-micro", s_adv, s_out = "transcript.jsonl", s_seed = "1";
  uint64_t s_runs = 10;
  bool s_real = false;
  simulate->add_option("--system", s_system, "osat-micro | osat-micro-unsat");
  simulate->add_option("--adversary", s_adv, "adversary name, default every within-budget one");
  simulate->add_option("--runs", s_runs, "views per adversary")->check(CLI::PositiveNumber);
  simulate->add_option("--seed", s_seed, "master seed");
  simulate->add_option("--out", s_out, "JSONL output path");
  simulate->add_flag("--real", s_real, "answer from fresh honest proofs instead of the simulator");

  // experiment
  auto* experiment = app.add_subcommand("experiment", "run an experiment from a JSON config and write the report");
  std::string e_config, e_json, e_csv;
  bool e_timing = false;
  experiment->add_option("--config", e_config, "config JSON")->required();
  experiment->add_option("--json-out", e_json, "report JSON path");
  experiment->add_option("--csv-out", e_csv, "report CSV path");
  experiment->add_flag("--timing", e_timing, "include runtimes in the report");

  // selfcheck
  auto* selfcheck = app.add_subcommand("selfcheck", "quick exact checks of every acceptance property");
  bool c_full = false;
  int c_only = 0;
  selfcheck->add_flag("--full", c_full, "use the full acceptance sample sizes");
  selfcheck->add_option("--only", c_only, "run a single criterion by number")->check(CLI::Range(1, 13));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? cli::Ok : cli::Error_;
  }

  try {
    if (*prove) {
      auto P = p_instance.empty() ? cli::problem_builtin(p_system) : cli::problem_from_file(p_instance);
      if (!p_witness.empty()) P.A = cli::parse_bits(p_witness);
      auto B = cli::build(P.field, P.inst, P.k);
      Seed master = cli::parse_seed(p_seed);
      OSatProof pr;
      if (osat_check_direct(P.inst, P.A)) {
        pr = osat_prove(*B.sys, P.A, master);
      } else if (p_force) {
        Rng rng(master.derive("commit"));
        pr = osat_proof_from_commitment(*B.sys, B.sys->commit_witness(P.A, rng), master);
      } else {
        fail(Errc::WitnessInvalid, "witness does not satisfy the instance (use --force to commit anyway)");
      }
      auto grid = grid_to_bytes(*B.F, uint32_t(B.sys->params().c_vars()), *pr.pi_C);
      std::filesystem::path out(p_out);
      std::string gname = out.stem().string() + ".pi_C.grid";
      cli::write_file((out.parent_path() / gname).string(), std::string(grid.begin(), grid.end()));
      nlohmann::json man = {
          {"format", "zkpcp-osat-proof-1"},
          {"name", P.name},
          {"field", P.field},
          {"k", P.k},
          {"instance", cli::instance_json(P.inst)},
          {"seed", master.hex()},
          {"seed_commitment", cli::sha256_hex(master.bytes.data(), master.bytes.size())},
          {"pi_C", {{"file", gname}, {"m", B.sys->params().c_vars()}, {"sha256", cli::sha256_hex(grid.data(), grid.size())}}}};
      cli::write_file(p_out, man.dump(2) + "\n");
      std::cout << "wrote " << p_out << " and " << gname << "\n";
      return cli::Ok;
    }

    if (*verify) {
      auto man = cli::read_json(v_proof);
      if (man.value("format", "") != "zkpcp-osat-proof-1") fail(Errc::BadConfig, "unknown proof format");
      Seed master = Seed::from_hex(man.at("seed").get<std::string>());
      if (man.at("seed_commitment").get<std::string>() != cli::sha256_hex(master.bytes.data(), master.bytes.size()))
        fail(Errc::BadConfig, "seed does not match its commitment");
      auto inst = cli::instance_from_json(man.at("instance"));
      auto B = cli::build(man.at("field").get<FieldSpec>(), inst, man.at("k").get<size_t>());
      std::filesystem::path gpath = std::filesystem::path(v_proof).parent_path() / man.at("pi_C").at("file").get<std::string>();
      auto bytes = cli::read_file(gpath.string());
      if (cli::sha256_hex(bytes.data(), bytes.size()) != man["pi_C"].at("sha256").get<std::string>())
        std::cerr << "note: grid digest differs from the manifest\n";
      auto g = grid_from_bytes(bytes);
      const Field& F = *B.F;
      if (nlohmann::json(g.field) != nlohmann::json(F.spec()) || g.m != B.sys->params().c_vars()) fail(Errc::WidthMismatch, "grid does not fit the instance");
      Vec table = std::move(g.values);
      size_t changed = 0;
      if (!v_tamper.empty()) {
        Seed ts = cli::parse_seed(v_tamper);
        Rng rng(ts.derive("tamper"));
        for (auto& v : table)
          if (rng.uniform01() < v_rate) {
            v = F.add(v, Fe(1 + rng.below(F.order() - 1)));
            ++changed;
          }
        if (!changed) {
          size_t i = rng.below(table.size());
          table[i] = F.add(table[i], 1);
          ++changed;
        }
      }
      // the prover's polynomial is read back from the grid; the grid itself is what the verifier sees
      uint32_t q = F.order();
      auto per_var = B.sys->params().c_bounds().per_var;
      auto C = interpolate_from_evaluator(F, per_var, [&](const std::vector<Fe>& x) {
        size_t k = 0;
        for (auto v : x) k = k * q + v;
        return table[k];
      });
      auto pr = osat_proof_from_commitment(*B.sys, C, master);
      pr.pi_C = std::make_shared<Vec>(table);
      auto bal = osat_balance(*B.sys);
      Seed coins = cli::parse_seed(v_coins);
      uint64_t acc = 0;
      std::string where;
      for (uint64_t t = 0; t < v_runs; ++t) {
        auto o = osat_oracles(pr);
        Rng rng(coins.derive("verify", t));
        auto r = osat_verify(*B.sys, o, rng, {}, bal);
        acc += r.accept;
        if (!r.accept && where.empty()) where = osat_fail_name(r.fail);
      }
      nlohmann::json out = {{"accept", acc == v_runs}, {"runs", v_runs}, {"accepted_runs", acc}, {"tampered_entries", changed}};
      if (!where.empty()) out["first_failure"] = where;
      std::cout << out.dump() << "\n";
      return acc == v_runs ? cli::Ok : cli::Reject;
    }

    if (*simulate) {
      auto M = osat_micro(s_system != "osat-micro-unsat");
      if (s_system != "osat-micro" && s_system != "osat-micro-unsat") fail(Errc::BadConfig, "unknown system " + s_system);
      if (s_real && !M.satisfiable) fail(Errc::WitnessInvalid, "no honest proof for an unsatisfiable instance");
      auto zoo = osat_adversary_zoo(*M.sys);
      Seed master = cli::parse_seed(s_seed);
      std::ofstream f(s_out, std::ios::binary);
      if (!f) fail(Errc::IoError, "cannot write " + s_out);
      size_t used = 0;
      for (auto& A : zoo.within) {
        if (!s_adv.empty() && A.name != s_adv) continue;
        ++used;
        for (uint64_t t = 0; t < s_runs; ++t) {
          Rng coins(master.derive("simulate/coins/" + A.name, t));
          VerifierView v;
          if (s_real) {
            auto pr = osat_prove(*M.sys, M.witness, master.derive("simulate/proof/" + A.name, t));
            auto o = osat_oracles(pr);
            v = run_osat_adversary(A, o, coins);
          } else {
            Rng srng(master.derive("simulate/sim/" + A.name, t));
            OSatSimulator sim(*M.sys, srng);
            auto o = sim.oracles();
            v = run_osat_adversary(A, o, coins);
          }
          nlohmann::json ans = nlohmann::json::array();
          for (auto& a : v.answers) ans.push_back({{"oracle", a.oracle}, {"index", a.index}, {"answer", a.answer}});
          nlohmann::json line = {{"adversary", A.name}, {"run", t},          {"source", s_real ? "real" : "simulated"},
                                 {"randomness", v.randomness}, {"answers", ans}};
          f << line.dump() << "\n";
        }
      }
      if (!used) fail(Errc::BadConfig, "unknown adversary " + s_adv);
      std::cout << "wrote " << s_out << "\n";
      return cli::Ok;
    }

    if (*experiment) {
      auto cfg = ExperimentConfig::from_json(cli::read_json(e_config));
      if (!e_json.empty()) cfg.json_out = e_json;
      if (!e_csv.empty()) cfg.csv_out = e_csv;
      if (e_timing) cfg.timing = true;
      if (cfg.json_out.empty() && cfg.csv_out.empty()) cfg.json_out = "report.json";
      auto rep = run_experiment(cfg);
      rep.cfg = cfg;
      rep.write();
      for (auto& r : rep.rows) cli::print_row(r);
      std::cout << (rep.passed() ? "passed" : "failed") << "\n";
      return rep.passed() ? cli::Ok : cli::Reject;
    }

    if (*selfcheck) {
      auto sc = c_full ? CriteriaScale() : CriteriaScale::quick();
      auto cs = all_criteria();
      bool ok = true;
      for (size_t i = 0; i < cs.size(); ++i) {
        if (c_only && int(i + 1) != c_only) continue;
        auto r = cs[i](sc);
        ok = ok && r.pass;
        std::cout << criterion_line(r) << std::endl;
      }
      return ok ? cli::Ok : cli::Reject;
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return cli::Error_;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return cli::Error_;
  }
  return cli::Error_;
}

}  // namespace zkpcp
