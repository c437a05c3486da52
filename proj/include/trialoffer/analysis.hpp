// Copyright 2026 The Trialoffer Authors
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

// Post-processing of simulation results: the urn view of the purchase
// process, monopoly and beta-limit checks, efficiency and predictability
// tables.

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "trialoffer/market.hpp"
#include "trialoffer/simulator.hpp"

namespace trialoffer {

/// Purchases seen as draws from an urn: a purchase of j adds
/// qhat_j = v_j q_j balls of colour j, X_j = a_j qhat_j balls are present and
/// Z_j = X_j / sum X is the chance the next purchase is j.
struct UrnView {
  std::vector<double> qhat;
  std::vector<double> balls;  // X
  std::vector<double> shares; // Z
};

/// Product i at position i, appeals A_i + d_i. Throws DomainError when every
/// qhat is zero.
UrnView urn_view(const ProductCatalog& catalog, const VisibilityProfile& vis,
                 const MarketState& state);
UrnView urn_view(const ProductCatalog& catalog, const VisibilityProfile& vis,
                 const MarketState& state, const Ranking& ranking);

/// Highest-quality product, lowest index among ties.
std::size_t top_quality_product(const ProductCatalog& catalog);

struct MonopolyStats {
  std::size_t top_product = 0;
  /// Per world: first step after which the top product holds at least
  /// `threshold` of all downloads, nullopt if never. Exact with Full traces,
  /// at snapshot resolution otherwise.
  std::vector<std::optional<std::int64_t>> first_step;
  std::vector<double> final_share;
};

/// Requires 0.5 < threshold < 1.
MonopolyStats monopoly_stats(const ExperimentResult& result, double threshold);

/// Top product's download share in every world after `step` trials, read
/// from the snapshots (which must contain that step).
std::vector<double> shares_at(const ExperimentResult& result, std::size_t product,
                              std::int64_t step);

struct BetaFit {
  double alpha = 0.0;  // Beta parameters A1/q, A2/q
  double beta = 0.0;
  double ks_distance = 0.0;
  double ks_statistic = 0.0;  // sqrt(W) * distance
  double p_value = 0.0;
  double critical_value = 0.0;  // asymptotic, at `significance`
  double significance = 0.01;
  bool accepted = false;
};

/// Kolmogorov-Smirnov fit of product-1 market shares to Beta(A1/q, A2/q).
/// Needs at least 200 shares.
BetaFit beta_limit_test(std::span<const double> final_shares, double appeal1, double appeal2,
                        double quality, double significance = 0.01);

/// Same test on an experiment; checks the two-product, equal-quality,
/// equal-visibility setup and N min(q) >= 100 max(A).
BetaFit beta_limit_test(const ExperimentResult& result, double significance = 0.01);

struct EfficiencyRow {
  PolicyKind policy = PolicyKind::Quality;
  Condition condition = Condition::SocialInfluence;
  double downloads_per_trial = 0.0;  // mean over worlds
  double std_error = 0.0;
  std::int64_t worlds = 0;
};

/// Downloads per trial for each result. All results must share the catalog
/// and number of steps.
std::vector<EfficiencyRow> efficiency_table(std::span<const ExperimentResult> results);

struct SongSpread {
  std::size_t product = 0;
  double quality = 0.0;
  double min = 0.0;
  double q25 = 0.0;
  double median = 0.0;
  double q75 = 0.0;
  double max = 0.0;
};

struct PredictabilityReport {
  /// Songs in increasing quality order.
  std::vector<SongSpread> songs;
  /// Fraction of worlds where the top-quality song has strictly more
  /// downloads than every other song.
  double top_win_rate = 0.0;
  /// Mean over songs of the cross-world standard deviation of market share.
  double unpredictability = 0.0;
};

/// Requires at least two worlds.
PredictabilityReport predictability_report(const ExperimentResult& result);

struct CurveStat {
  std::int64_t step = 0;
  double mean = 0.0;
  double std_error = 0.0;
};

/// Mean cumulative downloads across worlds at each curve point.
std::vector<CurveStat> mean_download_curve(const ExperimentResult& result);

}  // namespace trialoffer
