// Copyright 2026 The rqcgap authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <CLI11.hpp>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "rqcgap/runner.hpp"

namespace {

void emit(const rqc::ordered_json& record) {
  std::cout << record.dump() << "\n";
}

/// Parses one "key=value" assignment for the bounds subcommand. The keys
/// "model" and "direction" keep string values; everything else must be a
/// number.
void add_assignment(rqc::ordered_json* params, const std::string& arg) {
  const auto eq = arg.find('=');
  if (eq == std::string::npos || eq == 0)
    throw std::invalid_argument("bounds: expected key=value, got: " + arg);
  const std::string key = arg.substr(0, eq);
  const std::string value = arg.substr(eq + 1);
  if (key == "model" || key == "direction") {
    (*params)[key] = value;
    return;
  }
  size_t pos = 0;
  double num = 0.0;
  try {
    num = std::stod(value, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos != value.size() || value.empty())
    throw std::invalid_argument("bounds: value of " + key +
                                " is not a number: " + value);
  (*params)[key] = num;
}

rqc::ordered_json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open file: " + path);
  rqc::ordered_json j;
  try {
    j = rqc::ordered_json::parse(in);
  } catch (const std::exception& e) {
    throw std::runtime_error("cannot parse " + path + ": " + e.what());
  }
  return j;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"rqcgap: convergence diagnostics for random quantum circuits"};
  app.require_subcommand(1);

  // --- gap ---------------------------------------------------------------
  long long gap_n = 0, gap_t = 0, gap_d = 0;
  std::string gap_model = "lr";
  double gap_tol = 1e-8;
  long long gap_max_iter = 1000000;
  std::uint64_t gap_seed = 0;
  long long gap_power_limit = 10000;
  long long gap_basis = 16;
  bool gap_json = false;
  CLI::App* gap = app.add_subcommand(
      "gap", "Second eigenvalue and spectral gap of a moment walk");
  gap->add_option("--n", gap_n, "number of sites")->required();
  gap->add_option("--t", gap_t, "number of copies")->required();
  gap->add_option("--d", gap_d, "local dimension")->required();
  gap->add_option("--model", gap_model, "walk model")
      ->check(CLI::IsMember({"lr", "plr"}));
  gap->add_option("--tol", gap_tol, "eigensolver residual tolerance");
  gap->add_option("--max-iter", gap_max_iter, "total iteration budget");
  gap->add_option("--seed", gap_seed, "RNG seed for the start vector");
  gap->add_option("--power-iter-limit", gap_power_limit,
                  "iterations before switching to Lanczos");
  gap->add_option("--lanczos-basis", gap_basis, "Lanczos basis size");
  gap->add_flag("--json", gap_json, "emit JSON (always on; kept for scripts)");

  // --- frame -------------------------------------------------------------
  long long frame_n = 0, frame_t = 0, frame_d = 0;
  CLI::App* frame = app.add_subcommand(
      "frame", "Permutation-frame diagnostics: column sum, deviation, rank");
  frame->add_option("--n", frame_n, "number of sites")->required();
  frame->add_option("--t", frame_t, "number of copies")->required();
  frame->add_option("--d", frame_d, "local dimension")->required();

  // --- mc ----------------------------------------------------------------
  std::string mc_model = "lr";
  std::string mc_gates;
  long long mc_n = 0, mc_d = 0, mc_steps = 0, mc_t = 0, mc_samples = 0;
  std::uint64_t mc_seed = 0;
  CLI::App* mc = app.add_subcommand(
      "mc", "Monte Carlo frame-potential estimate over sampled circuits");
  mc->add_option("--model", mc_model, "circuit model")
      ->check(CLI::IsMember({"lr", "plr", "gset"}));
  mc->add_option("--gates", mc_gates, "gate-set JSON file (model gset)");
  mc->add_option("--n", mc_n, "number of sites")->required();
  mc->add_option("--d", mc_d, "local dimension")->required();
  mc->add_option("--steps", mc_steps, "circuit steps per sample")->required();
  mc->add_option("--t", mc_t, "frame-potential order")->required();
  mc->add_option("--samples", mc_samples, "number of circuit pairs")
      ->required();
  mc->add_option("--seed", mc_seed, "base RNG seed");

  // --- tqo ---------------------------------------------------------------
  long long tqo_n = 0, tqo_d = 0, tqo_steps = 0, tqo_l = 0;
  std::uint64_t tqo_seed = 0;
  CLI::App* tqo = app.add_subcommand(
      "tqo", "Reduced-state indistinguishability of two evolved states");
  tqo->add_option("--n", tqo_n, "number of sites")->required();
  tqo->add_option("--d", tqo_d, "local dimension")->required();
  tqo->add_option("--steps", tqo_steps, "circuit steps")->required();
  tqo->add_option("--l", tqo_l, "region length (regions up to this size)")
      ->required();
  tqo->add_option("--seed", tqo_seed, "RNG seed for the circuit");

  // --- bounds ------------------------------------------------------------
  std::string bound_name;
  std::vector<std::string> bound_args;
  CLI::App* bounds = app.add_subcommand(
      "bounds", "Analytic bound calculators (see README for names)");
  bounds->add_option("name", bound_name, "bound name")->required();
  bounds->add_option("assignments", bound_args, "key=value parameters");

  // --- sweep -------------------------------------------------------------
  std::string sweep_config, sweep_out;
  CLI::App* sweep = app.add_subcommand(
      "sweep", "Run a subcommand over a parameter grid from a config file");
  sweep->add_option("--config", sweep_config, "sweep config JSON file")
      ->required();
  sweep->add_option("--out", sweep_out, "also write the records as CSV");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (gap->parsed()) {
      rqc::ordered_json params;
      params["n"] = gap_n;
      params["t"] = gap_t;
      params["d"] = gap_d;
      params["model"] = gap_model;
      params["tol"] = gap_tol;
      params["max_iter"] = gap_max_iter;
      params["seed"] = gap_seed;
      params["power_iter_limit"] = gap_power_limit;
      params["lanczos_basis"] = gap_basis;
      emit(rqc::execute("gap", params));
    } else if (frame->parsed()) {
      rqc::ordered_json params;
      params["n"] = frame_n;
      params["t"] = frame_t;
      params["d"] = frame_d;
      emit(rqc::execute("frame", params));
    } else if (mc->parsed()) {
      rqc::ordered_json params;
      params["model"] = mc_model;
      params["n"] = mc_n;
      params["d"] = mc_d;
      params["steps"] = mc_steps;
      params["t"] = mc_t;
      params["samples"] = mc_samples;
      params["seed"] = mc_seed;
      if (!mc_gates.empty()) params["gates"] = mc_gates;
      emit(rqc::execute("mc", params));
    } else if (tqo->parsed()) {
      rqc::ordered_json params;
      params["n"] = tqo_n;
      params["d"] = tqo_d;
      params["steps"] = tqo_steps;
      params["l"] = tqo_l;
      params["seed"] = tqo_seed;
      emit(rqc::execute("tqo", params));
    } else if (bounds->parsed()) {
      rqc::ordered_json params;
      params["bound"] = bound_name;
      for (const std::string& arg : bound_args) add_assignment(&params, arg);
      emit(rqc::execute("bounds", params));
    } else if (sweep->parsed()) {
      const rqc::ordered_json config = load_json_file(sweep_config);
      const std::vector<rqc::ordered_json> records =
          rqc::sweep_records(config);
      for (const rqc::ordered_json& rec : records) emit(rec);
      if (!sweep_out.empty()) {
        std::ofstream out(sweep_out);
        if (!out) throw std::runtime_error("cannot open file: " + sweep_out);
        out << rqc::sweep_csv(records);
        if (!out) throw std::runtime_error("cannot write file: " + sweep_out);
      }
    }
    return 0;
  } catch (const rqc::ConvergenceError& e) {
    std::cerr << "error: " << e.what() << "\n"
              << "best estimate so far: value=" << e.best().value
              << " residual=" << e.best().residual
              << " iterations=" << e.best().iterations << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
