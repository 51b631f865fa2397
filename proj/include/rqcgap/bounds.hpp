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

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "rqcgap/circuit.hpp"

namespace rqc {

/// Several published inequalities are stated with an unspecified logarithm.
/// Every affected calculator evaluates under a caller-chosen convention so
/// the flattering one is never picked silently; unaffected calculators
/// ignore the parameter and say so in their notes.
enum class LogBase { kNatural, kBase2 };

inline const char* log_base_name(LogBase b) {
  return b == LogBase::kNatural ? "ln" : "log2";
}

inline double log_in_base(LogBase b, double x) {
  return b == LogBase::kNatural ? std::log(x) : std::log2(x);
}

enum class BoundDirection { kUpper, kLower };

inline const char* bound_direction_name(BoundDirection d) {
  return d == BoundDirection::kUpper ? "upper" : "lower";
}

/// One evaluated analytic bound. `value` is the bound in linear scale
/// (+infinity when it exceeds 1e300); `log10_value` is always the log10 of
/// the underlying linear quantity, so astronomically large bounds stay
/// comparable. For covering_size the linear quantity is the covering-set
/// cardinality and `value` itself is its logarithm (see that function).
/// Premise violations are reported through `preconditions_met` and `notes`,
/// never silently ignored; `vacuous` marks probability-type bounds >= 1 and
/// size/length-type bounds <= 1 that carry no information.
struct BoundReport {
  std::string name;
  std::vector<std::pair<std::string, double>> inputs;
  double value = std::numeric_limits<double>::quiet_NaN();
  double log10_value = std::numeric_limits<double>::quiet_NaN();
  BoundDirection direction = BoundDirection::kUpper;
  bool preconditions_met = true;
  bool vacuous = false;
  LogBase log_base = LogBase::kNatural;
  std::string notes;
  std::vector<std::pair<std::string, double>> extras;
};

namespace detail {

constexpr double kLn10 = 2.302585092994045684;
/// exp() overflows double beyond ln(1e300) ~ 690.8.
constexpr double kMaxExpArg = 690.0;

/// Fills value/log10_value from a natural-log magnitude.
inline void set_from_ln(BoundReport& r, double ln_value) {
  r.log10_value = ln_value / kLn10;
  r.value = (ln_value < kMaxExpArg) ? std::exp(ln_value)
                                    : std::numeric_limits<double>::infinity();
}

inline void set_zero(BoundReport& r) {
  r.value = 0.0;
  r.log10_value = -std::numeric_limits<double>::infinity();
}

inline void fail_precondition(BoundReport& r, const std::string& reason) {
  r.preconditions_met = false;
  r.value = std::numeric_limits<double>::quiet_NaN();
  r.log10_value = std::numeric_limits<double>::quiet_NaN();
  if (!r.notes.empty()) r.notes += "; ";
  r.notes += reason;
}

/// ln of the binomial coefficient C(a, b) via lgamma.
inline double ln_binomial(long long a, long long b) {
  if (b < 0 || b > a) return -std::numeric_limits<double>::infinity();
  return std::lgamma(static_cast<double>(a) + 1.0) -
         std::lgamma(static_cast<double>(b) + 1.0) -
         std::lgamma(static_cast<double>(a - b) + 1.0);
}

}  // namespace detail

/// Upper bound on the convergence quantity g of the LR walk,
/// 1 - 1/(n t^4 log t), or of the PLR walk, 1 - 1/(12 t^4 log t).
/// Undefined at t = 1 (log t = 0); the report flags that premise.
inline BoundReport tpe_gap_bound(int n, int t, long long d, CircuitModel model,
                                 LogBase base = LogBase::kNatural) {
  if (n < 2) throw std::invalid_argument("tpe_gap_bound: need n >= 2");
  if (t < 1) throw std::invalid_argument("tpe_gap_bound: need t >= 1");
  if (d < 2) throw std::invalid_argument("tpe_gap_bound: need d >= 2");
  if (model == CircuitModel::kGLocal)
    throw std::invalid_argument("tpe_gap_bound: only LR and PLR have a bound");
  BoundReport r;
  r.name = "tpe_gap_bound";
  r.direction = BoundDirection::kUpper;
  r.log_base = base;
  r.inputs = {{"n", static_cast<double>(n)},
              {"t", static_cast<double>(t)},
              {"d", static_cast<double>(d)}};
  r.notes = std::string("model=") + circuit_model_name(model) +
            "; log=" + log_base_name(base);
  if (model == CircuitModel::kPLR) r.notes += "; prefactor 12, n-independent";
  if (t < 2) {
    detail::fail_precondition(r, "t >= 2 required (log t vanishes at t = 1)");
    return r;
  }
  const double prefactor =
      (model == CircuitModel::kLR) ? static_cast<double>(n) : 12.0;
  const double t4 = std::pow(static_cast<double>(t), 4.0);
  const double margin =
      1.0 / (prefactor * t4 * log_in_base(base, static_cast<double>(t)));
  r.value = 1.0 - margin;
  r.log10_value = std::log10(r.value);
  r.vacuous = r.value >= 1.0;
  r.extras = {{"one_minus_value", margin}};
  return r;
}

/// Circuit length guaranteeing an eps-approximate t-design:
/// LR: n log(t) t^4 (2nt log d + log(1/eps)); PLR: prefactor 12 instead of n.
inline BoundReport design_length(int n, int t, long long d, double eps,
                                 CircuitModel model,
                                 LogBase base = LogBase::kNatural) {
  if (n < 2) throw std::invalid_argument("design_length: need n >= 2");
  if (t < 1) throw std::invalid_argument("design_length: need t >= 1");
  if (d < 2) throw std::invalid_argument("design_length: need d >= 2");
  if (!(eps > 0.0) || eps > 1.0)
    throw std::invalid_argument("design_length: need 0 < eps <= 1");
  if (model == CircuitModel::kGLocal)
    throw std::invalid_argument("design_length: only LR and PLR have a bound");
  BoundReport r;
  r.name = "design_length";
  r.direction = BoundDirection::kUpper;
  r.log_base = base;
  r.inputs = {{"n", static_cast<double>(n)},
              {"t", static_cast<double>(t)},
              {"d", static_cast<double>(d)},
              {"eps", eps}};
  r.notes = std::string("model=") + circuit_model_name(model) +
            "; log=" + log_base_name(base);
  if (t < 2) {
    detail::fail_precondition(r, "t >= 2 required (log t vanishes at t = 1)");
    return r;
  }
  const double prefactor =
      (model == CircuitModel::kLR) ? static_cast<double>(n) : 12.0;
  const double t4 = std::pow(static_cast<double>(t), 4.0);
  const double inner =
      2.0 * n * t * log_in_base(base, static_cast<double>(d)) +
      log_in_base(base, 1.0 / eps);
  r.value =
      prefactor * log_in_base(base, static_cast<double>(t)) * t4 * inner;
  r.log10_value = std::log10(r.value);
  r.vacuous = r.value <= 1.0;
  return r;
}

/// Two-sided conversion between the moment-operator distance g and the
/// design error G at total dimension N: g/(2 N^{t/2}) <= G <= N^{2t} g.
/// `direction` selects which endpoint goes in `value`; both endpoints and
/// the diamond-norm factor 2*input are reported in `extras`.
inline BoundReport g_design_conversion(double g, long long big_n, int t,
                                       BoundDirection direction) {
  if (g < 0.0) throw std::invalid_argument("g_design_conversion: need g >= 0");
  if (big_n < 2)
    throw std::invalid_argument("g_design_conversion: need N >= 2");
  if (t < 1) throw std::invalid_argument("g_design_conversion: need t >= 1");
  BoundReport r;
  r.name = "g_design_conversion";
  r.direction = direction;
  r.inputs = {{"g", g}, {"N", static_cast<double>(big_n)},
              {"t", static_cast<double>(t)}};
  r.notes = "log-base irrelevant (no free logarithm)";
  const double ln_n = std::log(static_cast<double>(big_n));
  double upper, lower, ln_upper, ln_lower;
  if (g == 0.0) {
    upper = lower = 0.0;
    ln_upper = ln_lower = -std::numeric_limits<double>::infinity();
  } else {
    ln_upper = std::log(g) + 2.0 * t * ln_n;
    ln_lower = std::log(g) - std::log(2.0) - 0.5 * t * ln_n;
    upper = (ln_upper < detail::kMaxExpArg)
                ? std::exp(ln_upper)
                : std::numeric_limits<double>::infinity();
    lower = std::exp(ln_lower);
  }
  if (direction == BoundDirection::kUpper) {
    r.value = upper;
    r.log10_value = ln_upper / detail::kLn10;
  } else {
    r.value = lower;
    r.log10_value = ln_lower / detail::kLn10;
  }
  r.extras = {{"upper", upper},
              {"lower", lower},
              {"diamond_distance_factor", 2.0 * g}};
  return r;
}

/// Composes a measured small-chain spectral gap into a lower bound on the
/// gap of every longer chain: gap_small * log(d) / (8 log(t)). The chain
/// length to measure is m = ceil(2 log(t)/log(d)), reported in extras along
/// with both published (and mutually inconsistent) validity thresholds on n.
inline BoundReport nachtergaele_compose(double gap_small, int t, long long d,
                                        LogBase base = LogBase::kNatural) {
  if (gap_small < 0.0)
    throw std::invalid_argument("nachtergaele_compose: need gap_small >= 0");
  if (t < 1) throw std::invalid_argument("nachtergaele_compose: need t >= 1");
  if (d < 2) throw std::invalid_argument("nachtergaele_compose: need d >= 2");
  BoundReport r;
  r.name = "nachtergaele_compose";
  r.direction = BoundDirection::kLower;
  r.log_base = base;
  r.inputs = {{"gap_small", gap_small},
              {"t", static_cast<double>(t)},
              {"d", static_cast<double>(d)}};
  r.notes = std::string("log=") + log_base_name(base) +
            "; valid for n above both reported thresholds "
            "(two inconsistent published premises, both kept)";
  if (t < 2) {
    detail::fail_precondition(r, "t >= 2 required (log t vanishes at t = 1)");
    return r;
  }
  const double log_t = log_in_base(base, static_cast<double>(t));
  const double log_d = log_in_base(base, static_cast<double>(d));
  r.value = gap_small * log_d / (8.0 * log_t);
  r.log10_value = std::log10(r.value);
  r.extras = {
      {"m_chain_length", std::ceil(2.0 * log_t / log_d)},
      {"n_threshold_a", std::ceil(10.0 * log_t)},
      {"n_threshold_b", std::ceil(2.0 * t * log_t)},
  };
  return r;
}

/// Wasserstein contraction of the coupled walk after (n-1)k steps:
/// (1 - 1/(e^n (d^2+1)^{n-2}))^{k/(n-1)} * sqrt(2) d^{n/2}.
inline BoundReport path_coupling_contraction(int n, long long d, long long k) {
  if (n < 2)
    throw std::invalid_argument("path_coupling_contraction: need n >= 2");
  if (d < 2)
    throw std::invalid_argument("path_coupling_contraction: need d >= 2");
  if (k < 0)
    throw std::invalid_argument("path_coupling_contraction: need k >= 0");
  BoundReport r;
  r.name = "path_coupling_contraction";
  r.direction = BoundDirection::kUpper;
  r.inputs = {{"n", static_cast<double>(n)},
              {"d", static_cast<double>(d)},
              {"k", static_cast<double>(k)}};
  r.notes = "log-base irrelevant (no free logarithm)";
  const double ln_inner =
      -static_cast<double>(n) -
      (n - 2) * std::log(static_cast<double>(d * d + 1));
  const double contraction_base = -std::expm1(ln_inner);  // 1 - e^{ln_inner}
  const double ln_value =
      (static_cast<double>(k) / (n - 1)) * std::log1p(-std::exp(ln_inner)) +
      0.5 * std::log(2.0) +
      0.5 * n * std::log(static_cast<double>(d));
  detail::set_from_ln(r, ln_value);
  r.extras = {{"contraction_base", contraction_base}};
  return r;
}

/// Lipschitz transfer from Wasserstein distance to g: g <= 2 t W.
inline BoundReport wasserstein_to_g(double w, int t) {
  if (w < 0.0) throw std::invalid_argument("wasserstein_to_g: need W >= 0");
  if (t < 1) throw std::invalid_argument("wasserstein_to_g: need t >= 1");
  BoundReport r;
  r.name = "wasserstein_to_g";
  r.direction = BoundDirection::kUpper;
  r.inputs = {{"W", w}, {"t", static_cast<double>(t)}};
  r.notes = "log-base irrelevant (no logarithm)";
  r.value = 2.0 * t * w;
  r.log10_value = (r.value > 0.0)
                      ? std::log10(r.value)
                      : -std::numeric_limits<double>::infinity();
  r.vacuous = r.value >= 1.0;  // g never exceeds 1
  return r;
}

/// Minimum circuit size of any eps-approximate t-design: nt/(5 d^4 ln(nt)).
/// The published formula fixes the natural logarithm. Premises eps <= 1/4
/// and t <= d^{n/2} are flagged, not assumed.
inline BoundReport converse_lower_bound(int n, int t, long long d,
                                        double eps) {
  if (n < 1) throw std::invalid_argument("converse_lower_bound: need n >= 1");
  if (t < 1) throw std::invalid_argument("converse_lower_bound: need t >= 1");
  if (d < 2) throw std::invalid_argument("converse_lower_bound: need d >= 2");
  if (eps < 0.0)
    throw std::invalid_argument("converse_lower_bound: need eps >= 0");
  BoundReport r;
  r.name = "converse_lower_bound";
  r.direction = BoundDirection::kLower;
  r.inputs = {{"n", static_cast<double>(n)},
              {"t", static_cast<double>(t)},
              {"d", static_cast<double>(d)},
              {"eps", eps}};
  r.notes = "log fixed to ln by the statement";
  const double nt = static_cast<double>(n) * static_cast<double>(t);
  if (nt < 2.0) {
    detail::fail_precondition(r, "nt >= 2 required (ln(nt) vanishes)");
    return r;
  }
  if (eps > 0.25)
    detail::fail_precondition(r, "premise eps <= 1/4 violated");
  const double half_n_ln_d = 0.5 * n * std::log(static_cast<double>(d));
  if (std::log(static_cast<double>(t)) > half_n_ln_d)
    detail::fail_precondition(r, "premise t <= d^{n/2} violated");
  if (!r.preconditions_met) return r;
  const double d4 = std::pow(static_cast<double>(d), 4.0);
  r.value = nt / (5.0 * d4 * std::log(nt));
  r.log10_value = std::log10(r.value);
  r.vacuous = r.value <= 1.0;  // any circuit has size >= 1
  r.extras = {{"t_ceiling", std::exp(half_n_ln_d)}};
  return r;
}

/// Support-size lower bound for an eps-approximate t-design at dimension N:
/// (1-eps) * binom(N+t-1, t)^2, evaluated through lgamma.
inline BoundReport design_support_lb(long long big_n, int t, double eps) {
  if (big_n < 2)
    throw std::invalid_argument("design_support_lb: need N >= 2");
  if (t < 1) throw std::invalid_argument("design_support_lb: need t >= 1");
  if (eps < 0.0 || eps > 1.0)
    throw std::invalid_argument("design_support_lb: need 0 <= eps <= 1");
  BoundReport r;
  r.name = "design_support_lb";
  r.direction = BoundDirection::kLower;
  r.inputs = {{"N", static_cast<double>(big_n)},
              {"t", static_cast<double>(t)},
              {"eps", eps}};
  r.notes = "log-base irrelevant (no free logarithm)";
  if (eps == 1.0) {
    detail::set_zero(r);
    r.vacuous = true;
    return r;
  }
  const double ln_binom = detail::ln_binomial(big_n + t - 1, t);
  detail::set_from_ln(r, std::log1p(-eps) + 2.0 * ln_binom);
  r.vacuous = r.value <= 1.0;
  return r;
}

/// Logarithm (in the chosen base) of the diamond-norm eps-covering size:
/// log[ binom(n,2)^r (10r/eps)^{r d^4} ]. The returned `value` IS the log;
/// log10_value refers to the covering cardinality itself.
inline BoundReport covering_size(int n, long long r_size, long long d,
                                 double eps, LogBase base = LogBase::kNatural) {
  if (n < 2) throw std::invalid_argument("covering_size: need n >= 2");
  if (r_size < 1) throw std::invalid_argument("covering_size: need r >= 1");
  if (d < 2) throw std::invalid_argument("covering_size: need d >= 2");
  if (!(eps > 0.0)) throw std::invalid_argument("covering_size: need eps > 0");
  BoundReport r;
  r.name = "covering_size";
  r.direction = BoundDirection::kUpper;
  r.log_base = base;
  r.inputs = {{"n", static_cast<double>(n)},
              {"r", static_cast<double>(r_size)},
              {"d", static_cast<double>(d)},
              {"eps", eps}};
  r.notes = std::string("value is log_") +
            (base == LogBase::kNatural ? "e" : "2") +
            " of the covering cardinality";
  const double ln_pairs = detail::ln_binomial(n, 2);
  const double d4 = std::pow(static_cast<double>(d), 4.0);
  const double ln_count =
      r_size * ln_pairs +
      r_size * d4 * std::log(10.0 * static_cast<double>(r_size) / eps);
  const double conv = (base == LogBase::kNatural) ? 1.0 : 1.0 / std::log(2.0);
  r.value = ln_count * conv;
  r.log10_value = ln_count / detail::kLn10;
  return r;
}

/// Failure-probability bound of the hiding argument, in log space:
/// (r/delta)^{2 r d^4} * 3 (560 t / (d^n delta^2))^{t/4}, where the design
/// order t = (s/(n^3 log(d) log(s)))^{1/6} is derived from the circuit size
/// s under the chosen log convention. The raw (non-integer) t is used and
/// reported; t < 1 is a flagged premise failure.
inline BoundReport hiding_bound(int n, long long d, double s, long long r_size,
                                double delta,
                                LogBase base = LogBase::kNatural) {
  if (n < 2) throw std::invalid_argument("hiding_bound: need n >= 2");
  if (d < 2) throw std::invalid_argument("hiding_bound: need d >= 2");
  if (!(s > 1.0)) throw std::invalid_argument("hiding_bound: need s > 1");
  if (r_size < 1) throw std::invalid_argument("hiding_bound: need r >= 1");
  if (!(delta > 0.0)) throw std::invalid_argument("hiding_bound: need delta > 0");
  BoundReport r;
  r.name = "hiding_bound";
  r.direction = BoundDirection::kUpper;
  r.log_base = base;
  r.inputs = {{"n", static_cast<double>(n)},
              {"d", static_cast<double>(d)},
              {"s", s},
              {"r", static_cast<double>(r_size)},
              {"delta", delta}};
  r.notes = std::string("log=") + log_base_name(base) +
            "; probability-type bound";
  const double log_d = log_in_base(base, static_cast<double>(d));
  const double log_s = log_in_base(base, s);
  const double t_eff = std::pow(
      s / (std::pow(static_cast<double>(n), 3.0) * log_d * log_s), 1.0 / 6.0);
  r.extras = {{"t_effective", t_eff}};
  if (t_eff < 1.0) {
    detail::fail_precondition(r, "derived design order t < 1 (s too small)");
    return r;
  }
  const double d4 = std::pow(static_cast<double>(d), 4.0);
  const double ln_value =
      2.0 * r_size * d4 * std::log(static_cast<double>(r_size) / delta) +
      std::log(3.0) +
      (t_eff / 4.0) * (std::log(560.0 * t_eff) -
                       n * std::log(static_cast<double>(d)) -
                       2.0 * std::log(delta));
  detail::set_from_ln(r, ln_value);
  r.vacuous = r.log10_value >= 0.0;  // probability bounds above 1 say nothing
  return r;
}

}  // namespace rqc
