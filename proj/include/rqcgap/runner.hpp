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

#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <nlohmann/json.hpp>
#include <stdexcept>
#include <string>
#include <vector>

#include "rqcgap/bounds.hpp"
#include "rqcgap/estimators.hpp"
#include "rqcgap/frame.hpp"
#include "rqcgap/spectra.hpp"

namespace rqc {

using ordered_json = nlohmann::ordered_json;

inline constexpr const char* kArtifactVersion = "0.1.0";

namespace detail {

/// JSON has no infinities or NaN; encode them as the strings "inf", "-inf",
/// "nan" so records stay parseable and round-trippable.
inline ordered_json json_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return x;
}

inline double require_num(const ordered_json& p, const std::string& key) {
  if (!p.contains(key))
    throw std::invalid_argument("missing parameter: " + key);
  if (!p[key].is_number())
    throw std::invalid_argument("parameter is not a number: " + key);
  return p[key].get<double>();
}

inline double num_or(const ordered_json& p, const std::string& key,
                     double def) {
  return p.contains(key) ? require_num(p, key) : def;
}

inline long long require_int(const ordered_json& p, const std::string& key) {
  const double v = require_num(p, key);
  const double r = std::nearbyint(v);
  if (std::abs(v - r) > 1e-9 || std::abs(r) > 9.0e15)
    throw std::invalid_argument("parameter is not an integer: " + key);
  return static_cast<long long>(r);
}

inline long long int_or(const ordered_json& p, const std::string& key,
                        long long def) {
  return p.contains(key) ? require_int(p, key) : def;
}

inline std::string str_or(const ordered_json& p, const std::string& key,
                          const std::string& def) {
  if (!p.contains(key)) return def;
  if (!p[key].is_string())
    throw std::invalid_argument("parameter is not a string: " + key);
  return p[key].get<std::string>();
}

inline CircuitModel parse_model(const std::string& name, bool allow_gset) {
  if (name == "lr") return CircuitModel::kLR;
  if (name == "plr") return CircuitModel::kPLR;
  if (allow_gset && name == "gset") return CircuitModel::kGLocal;
  throw std::invalid_argument("unknown model: " + name);
}

inline ordered_json bound_to_json(const BoundReport& r) {
  ordered_json j;
  j["name"] = r.name;
  ordered_json inputs = ordered_json::object();
  for (const auto& [k, v] : r.inputs) inputs[k] = json_number(v);
  j["inputs"] = inputs;
  j["value"] = json_number(r.value);
  j["log10_value"] = json_number(r.log10_value);
  j["direction"] = bound_direction_name(r.direction);
  j["preconditions_met"] = r.preconditions_met;
  j["vacuous"] = r.vacuous;
  j["log_base"] = log_base_name(r.log_base);
  j["notes"] = r.notes;
  ordered_json extras = ordered_json::object();
  for (const auto& [k, v] : r.extras) extras[k] = json_number(v);
  j["extras"] = extras;
  return j;
}

inline SolverOptions solver_options_from(const ordered_json& p) {
  SolverOptions opts;
  opts.tol = num_or(p, "tol", 1e-8);
  opts.max_iter = int_or(p, "max_iter", 1000000);
  opts.seed = static_cast<std::uint64_t>(int_or(p, "seed", 0));
  opts.power_iter_limit = int_or(p, "power_iter_limit", 10000);
  opts.lanczos_basis = static_cast<int>(int_or(p, "lanczos_basis", 16));
  if (opts.tol <= 0.0)
    throw std::invalid_argument("tol must be positive");
  if (opts.max_iter < 1)
    throw std::invalid_argument("max_iter must be at least 1");
  return opts;
}

inline ordered_json run_gap(const ordered_json& p) {
  const int n = static_cast<int>(require_int(p, "n"));
  const int t = static_cast<int>(require_int(p, "t"));
  const long long d = require_int(p, "d");
  const std::string model = str_or(p, "model", "lr");
  if (n < 2 || t < 1 || d < 2)
    throw std::invalid_argument("gap: need n >= 2, t >= 1, d >= 2");
  if (2.0 * t * n * std::log2(static_cast<double>(d)) > 26.0)
    throw std::length_error("gap: d^{2tn} exceeds the 2^26 memory guard");
  const SolverOptions opts = solver_options_from(p);
  const Shape shape(n, t, d);
  ordered_json result;
  if (model == "lr") {
    const SpectralReport rep =
        second_eigenvalue(MomentOperator::local_moment(shape), opts);
    result["quantity"] = "g_local";
    result["g_local"] = rep.value;
    result["gap_H"] = static_cast<double>(n - 1) * (1.0 - rep.value);
    result["residual"] = rep.residual;
    result["iterations"] = rep.iterations;
    result["method"] = rep.method;
    result["deflation_rank"] = rep.deflation_rank;
  } else if (model == "plr") {
    const SpectralReport rep =
        second_eigenvalue(MomentOperator::parallel_moment(shape), opts);
    result["quantity"] = "g_parallel";
    result["lambda2"] = rep.value;
    result["residual"] = rep.residual;
    result["iterations"] = rep.iterations;
    result["method"] = rep.method;
    result["deflation_rank"] = rep.deflation_rank;
  } else {
    throw std::invalid_argument("gap: model must be lr or plr");
  }
  return result;
}

inline ordered_json run_frame(const ordered_json& p) {
  const int n = static_cast<int>(require_int(p, "n"));
  const int t = static_cast<int>(require_int(p, "t"));
  const int d = static_cast<int>(require_int(p, "d"));
  if (n < 1 || d < 2)
    throw std::invalid_argument("frame: need n >= 1, d >= 2");
  if (t < 1 || t > 8) throw std::invalid_argument("frame: need 1 <= t <= 8");
  const auto group = enumerate_group(t);
  const long long order = static_cast<long long>(group.size());
  if (order * order > (1LL << 28))
    throw std::length_error(
        "frame: (t!)^2 Gram entries exceed the 2^28 memory guard");

  ordered_json result;
  result["group_order"] = order;
  result["column_sum"] = column_sum(t, d, n);
  const bool applicable = frame_bound_applicable(t, d, n);
  result["bounds_applicable"] = applicable;
  if (applicable) {
    result["column_sum_bound"] = column_sum_bound(t, d, n);
    result["column_sum_pass"] =
        column_sum(t, d, n) <= column_sum_bound(t, d, n) + 1e-12;
  } else {
    result["column_sum_bound"] = nullptr;
    result["column_sum_pass"] = nullptr;
  }

  // One eigenvalue pass serves both the deviation and the rank.
  const Eigen::MatrixXd gram = tensor_power_gram(t, d, n);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gram,
                                                    Eigen::EigenvaluesOnly);
  const Eigen::VectorXd& ev = es.eigenvalues();
  const double cutoff =
      kRankTolerance * std::max(ev.cwiseAbs().maxCoeff(), 0.0);
  double deviation = 0.0;
  long long rank = 0;
  for (Eigen::Index k = 0; k < ev.size(); ++k) {
    if (ev(k) > cutoff) {
      ++rank;
      deviation = std::max(deviation, std::abs(ev(k) - 1.0));
    }
  }
  result["rank"] = rank;
  result["deviation"] = deviation;
  if (applicable) {
    result["deviation_bound"] = frame_deviation_bound(t, d, n);
    result["deviation_pass"] = deviation <= frame_deviation_bound(t, d, n) + 1e-12;
  } else {
    result["deviation_bound"] = nullptr;
    result["deviation_pass"] = nullptr;
  }
  return result;
}

inline ordered_json run_mc(const ordered_json& p) {
  const std::string model_name = str_or(p, "model", "lr");
  const CircuitModel model = parse_model(model_name, /*allow_gset=*/true);
  const int n = static_cast<int>(require_int(p, "n"));
  const long long d = require_int(p, "d");
  const int steps = static_cast<int>(require_int(p, "steps"));
  const int t = static_cast<int>(require_int(p, "t"));
  const long long samples = require_int(p, "samples");
  const auto seed = static_cast<std::uint64_t>(int_or(p, "seed", 0));

  std::vector<Eigen::MatrixXcd> gate_set;
  const std::vector<Eigen::MatrixXcd>* set_ptr = nullptr;
  if (model == CircuitModel::kGLocal) {
    const std::string path = str_or(p, "gates", "");
    if (path.empty())
      throw std::invalid_argument("mc: model gset requires a gates file");
    gate_set = load_gate_set(path, d);
    set_ptr = &gate_set;
  }

  const EstimatorResult est =
      frame_potential(model, n, d, steps, t, samples, seed, set_ptr);
  ordered_json result;
  result["estimate"] = est.estimate;
  result["std_error"] = est.std_error;
  result["samples"] = est.samples;
  result["seed"] = est.seed;
  result["model"] = circuit_model_name(est.model);
  const long long dim = Shape::ipow_ll(d, n);
  if (dim >= t) {
    double haar = 1.0;
    for (int k = 2; k <= t; ++k) haar *= k;
    result["haar_reference"] = haar;
  } else {
    result["haar_reference"] = nullptr;
  }
  return result;
}

inline ordered_json run_tqo(const ordered_json& p) {
  const int n = static_cast<int>(require_int(p, "n"));
  const long long d = require_int(p, "d");
  const int steps = static_cast<int>(require_int(p, "steps"));
  const int l = static_cast<int>(require_int(p, "l"));
  const auto seed = static_cast<std::uint64_t>(int_or(p, "seed", 0));
  if (n < 4 || d < 2)
    throw std::invalid_argument("tqo: need n >= 4 and d >= 2");
  // The two orthogonal product states of the experiment: all-zeros and
  // all-(d-1).
  const QuditState psi0 = QuditState::basis_state(n, d, 0);
  QuditState psi1(n, d);
  psi1[psi1.dim() - 1] = {1.0, 0.0};
  const TqoResult r = tqo_experiment(n, d, steps, l, seed, psi0, psi1);

  const double threshold = std::pow(2.0, -static_cast<double>(n) / 8.0);
  ordered_json result;
  result["max_state0_distance"] = r.max_state0_distance;
  result["max_state1_distance"] = r.max_state1_distance;
  result["max_offdiag_norm"] = r.max_offdiag_norm;
  result["threshold"] = threshold;
  result["state0_below"] = r.max_state0_distance <= threshold;
  result["state1_below"] = r.max_state1_distance <= threshold;
  result["offdiag_below"] = r.max_offdiag_norm <= threshold;
  result["all_below"] = r.max_state0_distance <= threshold &&
                        r.max_state1_distance <= threshold &&
                        r.max_offdiag_norm <= threshold;
  return result;
}

inline ordered_json run_bounds(const ordered_json& p) {
  const std::string bound = str_or(p, "bound", "");
  const std::string model_name = str_or(p, "model", "lr");
  std::vector<BoundReport> reports;

  if (bound == "tpe" || bound == "tpe_gap_bound") {
    const CircuitModel m = parse_model(model_name, false);
    const int n = static_cast<int>(require_int(p, "n"));
    const int t = static_cast<int>(require_int(p, "t"));
    const long long d = require_int(p, "d");
    reports.push_back(tpe_gap_bound(n, t, d, m, LogBase::kNatural));
    reports.push_back(tpe_gap_bound(n, t, d, m, LogBase::kBase2));
  } else if (bound == "design_length") {
    const CircuitModel m = parse_model(model_name, false);
    const int n = static_cast<int>(require_int(p, "n"));
    const int t = static_cast<int>(require_int(p, "t"));
    const long long d = require_int(p, "d");
    const double eps = require_num(p, "eps");
    reports.push_back(design_length(n, t, d, eps, m, LogBase::kNatural));
    reports.push_back(design_length(n, t, d, eps, m, LogBase::kBase2));
  } else if (bound == "g_design" || bound == "g_design_conversion") {
    const double g = require_num(p, "g");
    const long long big_n = require_int(p, "N");
    const int t = static_cast<int>(require_int(p, "t"));
    const std::string dir = str_or(p, "direction", "upper");
    if (dir != "upper" && dir != "lower")
      throw std::invalid_argument("bounds: direction must be upper or lower");
    reports.push_back(g_design_conversion(
        g, big_n, t,
        dir == "upper" ? BoundDirection::kUpper : BoundDirection::kLower));
  } else if (bound == "nachtergaele" || bound == "nachtergaele_compose") {
    const double gap = require_num(p, "gap");
    const int t = static_cast<int>(require_int(p, "t"));
    const long long d = require_int(p, "d");
    reports.push_back(nachtergaele_compose(gap, t, d, LogBase::kNatural));
    reports.push_back(nachtergaele_compose(gap, t, d, LogBase::kBase2));
  } else if (bound == "path_coupling" ||
             bound == "path_coupling_contraction") {
    const int n = static_cast<int>(require_int(p, "n"));
    const long long d = require_int(p, "d");
    const long long k = require_int(p, "k");
    reports.push_back(path_coupling_contraction(n, d, k));
  } else if (bound == "wasserstein" || bound == "wasserstein_to_g") {
    const double w =
        p.contains("W") ? require_num(p, "W") : require_num(p, "w");
    const int t = static_cast<int>(require_int(p, "t"));
    reports.push_back(wasserstein_to_g(w, t));
  } else if (bound == "converse" || bound == "converse_lower_bound") {
    const int n = static_cast<int>(require_int(p, "n"));
    const int t = static_cast<int>(require_int(p, "t"));
    const long long d = require_int(p, "d");
    const double eps = require_num(p, "eps");
    reports.push_back(converse_lower_bound(n, t, d, eps));
  } else if (bound == "support_lb" || bound == "design_support_lb") {
    const long long big_n = require_int(p, "N");
    const int t = static_cast<int>(require_int(p, "t"));
    const double eps = require_num(p, "eps");
    reports.push_back(design_support_lb(big_n, t, eps));
  } else if (bound == "covering" || bound == "covering_size") {
    const int n = static_cast<int>(require_int(p, "n"));
    const long long r = require_int(p, "r");
    const long long d = require_int(p, "d");
    const double eps = require_num(p, "eps");
    reports.push_back(covering_size(n, r, d, eps, LogBase::kNatural));
    reports.push_back(covering_size(n, r, d, eps, LogBase::kBase2));
  } else if (bound == "hiding" || bound == "hiding_bound") {
    const int n = static_cast<int>(require_int(p, "n"));
    const long long d = require_int(p, "d");
    const double s = require_num(p, "s");
    const long long r = require_int(p, "r");
    const double delta = require_num(p, "delta");
    reports.push_back(hiding_bound(n, d, s, r, delta, LogBase::kNatural));
    reports.push_back(hiding_bound(n, d, s, r, delta, LogBase::kBase2));
  } else {
    throw std::invalid_argument("bounds: unknown bound name: " + bound);
  }

  ordered_json result;
  result["bound"] = reports.front().name;
  ordered_json arr = ordered_json::array();
  for (const BoundReport& r : reports) arr.push_back(bound_to_json(r));
  result["reports"] = arr;
  return result;
}

}  // namespace detail

/// Runs one subcommand with JSON parameters and wraps the result in a
/// RunRecord. Identical subcommand + params always regenerate the identical
/// result payload (wall_time_s is the only field that may differ).
inline ordered_json execute(const std::string& subcommand,
                            const ordered_json& params) {
  const auto start = std::chrono::steady_clock::now();
  ordered_json result;
  if (subcommand == "gap") {
    result = detail::run_gap(params);
  } else if (subcommand == "frame") {
    result = detail::run_frame(params);
  } else if (subcommand == "mc") {
    result = detail::run_mc(params);
  } else if (subcommand == "tqo") {
    result = detail::run_tqo(params);
  } else if (subcommand == "bounds") {
    result = detail::run_bounds(params);
  } else {
    throw std::invalid_argument("unknown subcommand: " + subcommand);
  }
  const std::chrono::duration<double> elapsed =
      std::chrono::steady_clock::now() - start;

  ordered_json record;
  record["artifact_version"] = kArtifactVersion;
  record["subcommand"] = subcommand;
  record["params"] = params;
  record["seed"] = detail::int_or(params, "seed", 0);
  record["wall_time_s"] = elapsed.count();
  record["result"] = result;
  return record;
}

/// Re-runs the subcommand and params stored in a RunRecord.
inline ordered_json replay(const ordered_json& record) {
  return execute(record.at("subcommand").get<std::string>(),
                 record.at("params"));
}

/// Expands a sweep configuration into one RunRecord per grid point.
/// Config shape: {"subcommand": s, "params": {...}, "grid": {k: [v...]}}.
/// Grid keys iterate in sorted order with the LAST key varying fastest.
inline std::vector<ordered_json> sweep_records(const ordered_json& config) {
  if (!config.is_object() || !config.contains("subcommand"))
    throw std::invalid_argument("sweep: config needs a subcommand");
  const std::string subcommand = config["subcommand"].get<std::string>();
  ordered_json base = config.value("params", ordered_json::object());

  std::vector<std::string> keys;
  std::vector<std::vector<ordered_json>> values;
  if (config.contains("grid")) {
    const auto& grid = config["grid"];
    if (!grid.is_object())
      throw std::invalid_argument("sweep: grid must be an object of arrays");
    for (const auto& [k, v] : grid.items()) keys.push_back(k);
    std::sort(keys.begin(), keys.end());
    for (const std::string& k : keys) {
      if (!grid[k].is_array() || grid[k].empty())
        throw std::invalid_argument("sweep: grid values must be non-empty arrays");
      values.emplace_back(grid[k].begin(), grid[k].end());
    }
  }

  std::vector<ordered_json> records;
  std::vector<size_t> idx(keys.size(), 0);
  while (true) {
    ordered_json params = base;
    for (size_t i = 0; i < keys.size(); ++i) params[keys[i]] = values[i][idx[i]];
    records.push_back(execute(subcommand, params));
    // Odometer increment, last key fastest.
    size_t pos = keys.size();
    while (pos > 0) {
      --pos;
      if (++idx[pos] < values[pos].size()) break;
      idx[pos] = 0;
      if (pos == 0) return records;
    }
    if (keys.empty()) return records;
  }
}

namespace detail {

inline void flatten_json(const ordered_json& j, const std::string& prefix,
                         std::vector<std::pair<std::string, ordered_json>>* out) {
  if (j.is_object()) {
    for (const auto& [k, v] : j.items())
      flatten_json(v, prefix.empty() ? k : prefix + "." + k, out);
  } else if (j.is_array()) {
    for (size_t i = 0; i < j.size(); ++i)
      flatten_json(j[i], prefix + "." + std::to_string(i), out);
  } else {
    out->emplace_back(prefix, j);
  }
}

inline std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string quoted = "\"";
  for (char c : s) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  quoted += '"';
  return quoted;
}

inline std::string csv_cell(const ordered_json& v) {
  if (v.is_null()) return "";
  if (v.is_string()) return csv_escape(v.get<std::string>());
  return v.dump();
}

}  // namespace detail

/// Renders sweep records as CSV: one row per record, columns fixed as
/// "subcommand", the sorted flattened parameter keys (prefixed "params."),
/// then the result keys in their payload order (prefixed "result.").
/// All records must come from the same sweep (identical key structure).
inline std::string sweep_csv(const std::vector<ordered_json>& records) {
  if (records.empty()) return "subcommand\n";

  std::vector<std::pair<std::string, ordered_json>> first_params;
  detail::flatten_json(records.front().at("params"), "params", &first_params);
  std::sort(first_params.begin(), first_params.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<std::pair<std::string, ordered_json>> first_result;
  detail::flatten_json(records.front().at("result"), "result", &first_result);

  std::string csv = "subcommand";
  for (const auto& [k, v] : first_params) csv += "," + detail::csv_escape(k);
  for (const auto& [k, v] : first_result) csv += "," + detail::csv_escape(k);
  csv += '\n';

  for (const ordered_json& rec : records) {
    std::vector<std::pair<std::string, ordered_json>> params;
    detail::flatten_json(rec.at("params"), "params", &params);
    std::sort(params.begin(), params.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    std::vector<std::pair<std::string, ordered_json>> result;
    detail::flatten_json(rec.at("result"), "result", &result);
    if (params.size() != first_params.size() ||
        result.size() != first_result.size())
      throw std::invalid_argument("sweep_csv: records have mixed layouts");
    csv += rec.at("subcommand").get<std::string>();
    for (const auto& [k, v] : params) csv += "," + detail::csv_cell(v);
    for (const auto& [k, v] : result) csv += "," + detail::csv_cell(v);
    csv += '\n';
  }
  return csv;
}

}  // namespace rqc
