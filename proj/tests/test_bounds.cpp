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

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <limits>

#include "rqcgap/bounds.hpp"
#include "rqcgap/spectra.hpp"

using rqc::BoundDirection;
using rqc::BoundReport;
using rqc::CircuitModel;
using rqc::LogBase;

namespace {

double extra(const BoundReport& r, const std::string& key) {
  for (const auto& [k, v] : r.extras)
    if (k == key) return v;
  FAIL("missing extra: " << key);
  return 0.0;
}

}  // namespace

TEST_CASE("moment bound on g under both log conventions", "[bounds]") {
  const BoundReport lr_ln =
      rqc::tpe_gap_bound(4, 2, 2, CircuitModel::kLR, LogBase::kNatural);
  CHECK(lr_ln.value == Catch::Approx(0.97745788998610995).epsilon(1e-9));
  CHECK(lr_ln.direction == BoundDirection::kUpper);
  CHECK(lr_ln.preconditions_met);
  CHECK_FALSE(lr_ln.vacuous);

  const BoundReport lr_l2 =
      rqc::tpe_gap_bound(4, 2, 2, CircuitModel::kLR, LogBase::kBase2);
  CHECK(lr_l2.value == Catch::Approx(0.984375).epsilon(1e-12));

  const BoundReport plr_ln =
      rqc::tpe_gap_bound(4, 2, 2, CircuitModel::kPLR, LogBase::kNatural);
  CHECK(plr_ln.value == Catch::Approx(0.99248596332870332).epsilon(1e-9));
  const BoundReport plr_l2 =
      rqc::tpe_gap_bound(9, 2, 2, CircuitModel::kPLR, LogBase::kBase2);
  CHECK(plr_l2.value == Catch::Approx(0.99479166666666667).epsilon(1e-12));
  // PLR is n-independent.
  CHECK(rqc::tpe_gap_bound(4, 2, 2, CircuitModel::kPLR).value ==
        rqc::tpe_gap_bound(9, 2, 2, CircuitModel::kPLR).value);

  // The LR threshold grid used by downstream comparisons.
  CHECK(rqc::tpe_gap_bound(3, 2, 2, CircuitModel::kLR).value ==
        Catch::Approx(0.96994385331481326).epsilon(1e-9));
  CHECK(rqc::tpe_gap_bound(5, 2, 2, CircuitModel::kLR).value ==
        Catch::Approx(0.98196631198888796).epsilon(1e-9));
  CHECK(rqc::tpe_gap_bound(6, 2, 2, CircuitModel::kLR).value ==
        Catch::Approx(0.98497192665740663).epsilon(1e-9));

  // t = 1 is a flagged premise failure, not a number.
  const BoundReport t1 = rqc::tpe_gap_bound(4, 1, 2, CircuitModel::kLR);
  CHECK_FALSE(t1.preconditions_met);
  CHECK(std::isnan(t1.value));

  CHECK_THROWS_AS(rqc::tpe_gap_bound(4, 2, 2, CircuitModel::kGLocal),
                  std::invalid_argument);

  // Monotone: looser for longer chains and higher moments.
  CHECK(rqc::tpe_gap_bound(5, 2, 2, CircuitModel::kLR).value >
        rqc::tpe_gap_bound(4, 2, 2, CircuitModel::kLR).value);
  CHECK(rqc::tpe_gap_bound(4, 3, 2, CircuitModel::kLR).value >
        rqc::tpe_gap_bound(4, 2, 2, CircuitModel::kLR).value);
}

TEST_CASE("design length pins and domain checks", "[bounds]") {
  CHECK(rqc::design_length(10, 2, 2, 0.01, CircuitModel::kLR).value ==
        Catch::Approx(3585.6290059431074).epsilon(1e-9));
  CHECK(rqc::design_length(10, 2, 2, 0.01, CircuitModel::kLR, LogBase::kBase2)
            .value == Catch::Approx(7463.016990363956).epsilon(1e-9));
  CHECK(rqc::design_length(10, 2, 2, 0.01, CircuitModel::kPLR).value ==
        Catch::Approx(4302.7548071317289).epsilon(1e-9));
  CHECK(rqc::design_length(10, 2, 2, 0.01, CircuitModel::kPLR, LogBase::kBase2)
            .value == Catch::Approx(8955.6203884367471).epsilon(1e-9));
  // eps = 1 drops the log(1/eps) term entirely.
  CHECK(rqc::design_length(10, 2, 2, 1.0, CircuitModel::kLR).value ==
        Catch::Approx(3074.8992890764891).epsilon(1e-9));

  CHECK_THROWS_AS(rqc::design_length(10, 2, 2, 0.0, CircuitModel::kLR),
                  std::invalid_argument);
  CHECK_THROWS_AS(rqc::design_length(10, 2, 2, 1.5, CircuitModel::kLR),
                  std::invalid_argument);
  CHECK_FALSE(rqc::design_length(10, 1, 2, 0.01, CircuitModel::kLR)
                  .preconditions_met);

  // Longer chains and tighter eps need longer circuits.
  CHECK(rqc::design_length(12, 2, 2, 0.01, CircuitModel::kLR).value >
        rqc::design_length(10, 2, 2, 0.01, CircuitModel::kLR).value);
  CHECK(rqc::design_length(10, 2, 2, 0.001, CircuitModel::kLR).value >
        rqc::design_length(10, 2, 2, 0.01, CircuitModel::kLR).value);

  // Log-space evaluation against the direct product.
  const double direct = 10.0 * std::log(2.0) * 16.0 *
                        (2.0 * 10.0 * 2.0 * std::log(2.0) + std::log(100.0));
  CHECK(rqc::design_length(10, 2, 2, 0.01, CircuitModel::kLR).value ==
        Catch::Approx(direct).epsilon(1e-10));
}

TEST_CASE("g to design-error conversion", "[bounds]") {
  const BoundReport up =
      rqc::g_design_conversion(0.5, 4, 2, BoundDirection::kUpper);
  CHECK(up.value == Catch::Approx(128.0).epsilon(1e-12));
  const BoundReport lo =
      rqc::g_design_conversion(0.5, 4, 2, BoundDirection::kLower);
  CHECK(lo.value == Catch::Approx(0.0625).epsilon(1e-12));
  CHECK(extra(up, "upper") == Catch::Approx(128.0).epsilon(1e-12));
  CHECK(extra(up, "lower") == Catch::Approx(0.0625).epsilon(1e-12));
  CHECK(extra(up, "diamond_distance_factor") ==
        Catch::Approx(1.0).epsilon(1e-12));

  const BoundReport zero =
      rqc::g_design_conversion(0.0, 4, 2, BoundDirection::kUpper);
  CHECK(zero.value == 0.0);
  CHECK(std::isinf(zero.log10_value));
  CHECK(zero.log10_value < 0.0);

  CHECK_THROWS_AS(rqc::g_design_conversion(-0.1, 4, 2, BoundDirection::kUpper),
                  std::invalid_argument);

  // Direct evaluation cross-check.
  const BoundReport up2 =
      rqc::g_design_conversion(0.37, 8, 3, BoundDirection::kUpper);
  CHECK(up2.value == Catch::Approx(0.37 * std::pow(8.0, 6.0)).epsilon(1e-10));
}

TEST_CASE("small-chain gap composition", "[bounds]") {
  const BoundReport b = rqc::nachtergaele_compose(0.3, 2, 2);
  CHECK(b.value == Catch::Approx(0.0375).epsilon(1e-12));
  CHECK(b.direction == BoundDirection::kLower);
  CHECK(extra(b, "m_chain_length") == 2.0);
  CHECK(extra(b, "n_threshold_a") == 7.0);
  CHECK(extra(b, "n_threshold_b") == 3.0);

  const BoundReport b2 = rqc::nachtergaele_compose(0.3, 2, 2, LogBase::kBase2);
  CHECK(b2.value == Catch::Approx(0.0375).epsilon(1e-12));
  CHECK(extra(b2, "m_chain_length") == 2.0);
  CHECK(extra(b2, "n_threshold_a") == 10.0);
  CHECK(extra(b2, "n_threshold_b") == 4.0);

  // t = 4, d = 2 under log2: denominator 8 * log2(4) = 16.
  const BoundReport b3 = rqc::nachtergaele_compose(0.3, 4, 2, LogBase::kBase2);
  CHECK(b3.value == Catch::Approx(0.3 / 16.0).epsilon(1e-12));

  CHECK(rqc::nachtergaele_compose(0.0, 2, 2).value == 0.0);
  CHECK_FALSE(rqc::nachtergaele_compose(0.3, 1, 2).preconditions_met);
  CHECK_THROWS_AS(rqc::nachtergaele_compose(-0.1, 2, 2),
                  std::invalid_argument);
  CHECK(rqc::nachtergaele_compose(0.4, 2, 2).value >
        rqc::nachtergaele_compose(0.3, 2, 2).value);
}

TEST_CASE("path coupling contraction", "[bounds]") {
  CHECK(rqc::path_coupling_contraction(3, 2, 0).value ==
        Catch::Approx(4.0).epsilon(1e-12));
  CHECK(extra(rqc::path_coupling_contraction(3, 2, 0), "contraction_base") ==
        Catch::Approx(0.99004258632642721).epsilon(1e-12));
  CHECK(rqc::path_coupling_contraction(3, 2, 5).value ==
        Catch::Approx(3.9011682532785704).epsilon(1e-9));
  CHECK(extra(rqc::path_coupling_contraction(4, 2, 0), "contraction_base") ==
        Catch::Approx(0.99926737444445063).epsilon(1e-12));

  for (long long k = 0; k < 4; ++k)
    CHECK(rqc::path_coupling_contraction(3, 2, k + 1).value <
          rqc::path_coupling_contraction(3, 2, k).value);

  CHECK_THROWS_AS(rqc::path_coupling_contraction(3, 2, -1),
                  std::invalid_argument);

  // Direct evaluation cross-check.
  const double base_d = 1.0 - 1.0 / (std::exp(3.0) * 5.0);
  const double direct =
      std::pow(base_d, 5.0 / 2.0) * std::sqrt(2.0) * std::pow(2.0, 1.5);
  CHECK(rqc::path_coupling_contraction(3, 2, 5).value ==
        Catch::Approx(direct).epsilon(1e-10));
}

TEST_CASE("Wasserstein transfer to g", "[bounds]") {
  CHECK(rqc::wasserstein_to_g(0.1, 3).value ==
        Catch::Approx(0.6).epsilon(1e-12));
  const BoundReport big = rqc::wasserstein_to_g(1.0, 1);
  CHECK(big.value == Catch::Approx(2.0).epsilon(1e-12));
  CHECK(big.vacuous);  // g can never exceed 1
  const BoundReport zero = rqc::wasserstein_to_g(0.0, 2);
  CHECK(zero.value == 0.0);
  CHECK_FALSE(zero.vacuous);
  CHECK_THROWS_AS(rqc::wasserstein_to_g(-1.0, 2), std::invalid_argument);
}

TEST_CASE("converse circuit-size lower bound", "[bounds]") {
  const BoundReport b = rqc::converse_lower_bound(10, 4, 2, 0.25);
  CHECK(b.value == Catch::Approx(0.1355425153409084).epsilon(1e-9));
  CHECK(b.preconditions_met);
  CHECK(b.vacuous);  // below one circuit, so informative only asymptotically
  CHECK(b.direction == BoundDirection::kLower);

  CHECK_FALSE(rqc::converse_lower_bound(10, 4, 2, 0.3).preconditions_met);
  CHECK_FALSE(rqc::converse_lower_bound(4, 5, 2, 0.25).preconditions_met);

  // Monotone in n; doubling t more than doubles nothing but stays above 1x.
  CHECK(rqc::converse_lower_bound(12, 4, 2, 0.25).value >
        rqc::converse_lower_bound(10, 4, 2, 0.25).value);
  CHECK(rqc::converse_lower_bound(10, 8, 2, 0.25).value >
        rqc::converse_lower_bound(10, 4, 2, 0.25).value);
}

TEST_CASE("design support lower bound", "[bounds]") {
  const BoundReport b = rqc::design_support_lb(4, 2, 0.0);
  CHECK(b.value == Catch::Approx(100.0).epsilon(1e-9));
  CHECK(b.log10_value == Catch::Approx(2.0).epsilon(1e-9));
  CHECK(rqc::design_support_lb(2, 1, 0.5).value ==
        Catch::Approx(2.0).epsilon(1e-9));

  const BoundReport all_eps = rqc::design_support_lb(4, 2, 1.0);
  CHECK(all_eps.value == 0.0);
  CHECK(all_eps.vacuous);

  CHECK_THROWS_AS(rqc::design_support_lb(4, 2, 1.5), std::invalid_argument);
  CHECK_THROWS_AS(rqc::design_support_lb(4, 2, -0.1), std::invalid_argument);

  CHECK(rqc::design_support_lb(5, 2, 0.0).value >
        rqc::design_support_lb(4, 2, 0.0).value);
  CHECK(rqc::design_support_lb(4, 3, 0.0).value >
        rqc::design_support_lb(4, 2, 0.0).value);
}

TEST_CASE("covering size in log space", "[bounds]") {
  const BoundReport ln_report = rqc::covering_size(4, 2, 2, 1.0);
  CHECK(ln_report.value == Catch::Approx(99.446951692183822).epsilon(1e-9));
  const BoundReport l2_report =
      rqc::covering_size(4, 2, 2, 1.0, LogBase::kBase2);
  CHECK(l2_report.value == Catch::Approx(143.47162403783791).epsilon(1e-9));
  // Same cardinality, so the same log10 either way.
  CHECK(ln_report.log10_value ==
        Catch::Approx(l2_report.log10_value).epsilon(1e-12));

  // binom(2,2) = 1 and 10r/eps = 1: a single point covers everything.
  CHECK(std::abs(rqc::covering_size(2, 1, 2, 10.0).value) <= 1e-12);

  CHECK(rqc::covering_size(4, 3, 2, 1.0).value >
        rqc::covering_size(4, 2, 2, 1.0).value);
  CHECK_THROWS_AS(rqc::covering_size(4, 0, 2, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(rqc::covering_size(4, 2, 2, 0.0), std::invalid_argument);
}

TEST_CASE("hiding probability bound", "[bounds]") {
  const double s = std::pow(20.0, 7.0);
  const BoundReport ln_report = rqc::hiding_bound(20, 2, s, 20, 0.1);
  CHECK(extra(ln_report, "t_effective") ==
        Catch::Approx(4.7164537555186347).epsilon(1e-9));
  CHECK(ln_report.log10_value ==
        Catch::Approx(1472.4302697084615).epsilon(1e-9));
  CHECK(std::isinf(ln_report.value));
  CHECK(ln_report.vacuous);

  const BoundReport l2_report =
      rqc::hiding_bound(20, 2, s, 20, 0.1, LogBase::kBase2);
  CHECK(extra(l2_report, "t_effective") ==
        Catch::Approx(4.174047634157359).epsilon(1e-9));
  CHECK(l2_report.log10_value ==
        Catch::Approx(1472.4561005615651).epsilon(1e-9));

  // s too small to reach design order one.
  CHECK_FALSE(rqc::hiding_bound(20, 2, 2.0, 20, 0.1).preconditions_met);
  CHECK_THROWS_AS(rqc::hiding_bound(20, 2, s, 20, 0.0),
                  std::invalid_argument);

  // More hidden regions can only weaken the bound.
  CHECK(rqc::hiding_bound(20, 2, s, 21, 0.1).log10_value >
        rqc::hiding_bound(20, 2, s, 20, 0.1).log10_value);

  // Log-space agrees with direct evaluation where nothing overflows.
  const BoundReport small = rqc::hiding_bound(3, 2, 1000.0, 1, 0.9);
  REQUIRE(small.preconditions_met);
  const double t_eff = extra(small, "t_effective");
  const double direct = std::pow(1.0 / 0.9, 32.0) * 3.0 *
                        std::pow(560.0 * t_eff / (8.0 * 0.81), t_eff / 4.0);
  CHECK(small.value == Catch::Approx(direct).epsilon(1e-10));
}

TEST_CASE("computed spectra sit inside the analytic bounds", "[bounds]") {
  rqc::SolverOptions opts;
  opts.power_iter_limit = 50;
  opts.lanczos_basis = 8;

  // Small-chain input for the composition: the two-site gap is exactly 1.
  const double gap2 = rqc::hamiltonian_gap(2, 2, 2).value;
  const double composed_ln =
      rqc::nachtergaele_compose(gap2, 2, 2, LogBase::kNatural).value;
  const double composed_l2 =
      rqc::nachtergaele_compose(gap2, 2, 2, LogBase::kBase2).value;

  for (int n : {4, 6}) {
    const double g =
        rqc::second_eigenvalue(
            rqc::MomentOperator::local_moment(rqc::Shape(n, 2, 2)), opts)
            .value;
    const double gap = static_cast<double>(n - 1) * (1.0 - g);
    INFO("n=" << n << " g=" << g << " gap=" << gap);
    CHECK(g <=
          rqc::tpe_gap_bound(n, 2, 2, CircuitModel::kLR, LogBase::kNatural)
              .value);
    CHECK(g <= rqc::tpe_gap_bound(n, 2, 2, CircuitModel::kLR, LogBase::kBase2)
                   .value);
    CHECK(gap >= composed_ln);
    CHECK(gap >= composed_l2);
  }
}
