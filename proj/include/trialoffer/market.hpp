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

// Choice model of a trial-offer market.
//
// A consumer sees every product in a list. Product i sits at position
// sigma_i, is tried with probability proportional to v[sigma_i] * a_i and,
// once tried, is purchased with probability q_i. Under social influence
// the appeal a_i is A_i + d_i where d_i counts past purchases.
//
// Indices are 0-based in code. Positions and products are printed 1-based
// by the serializers.

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace trialoffer {

/// Per-product quality q_i in [0, 1] and static appeal A_i > 0.
class ProductCatalog {
 public:
  ProductCatalog(std::vector<double> qualities, std::vector<double> appeals);

  std::size_t size() const noexcept { return qualities_.size(); }
  std::span<const double> qualities() const noexcept { return qualities_; }
  std::span<const double> appeals() const noexcept { return appeals_; }
  double quality(std::size_t i) const { return qualities_.at(i); }
  double appeal(std::size_t i) const { return appeals_.at(i); }

  bool operator==(const ProductCatalog&) const = default;

 private:
  std::vector<double> qualities_;
  std::vector<double> appeals_;
};

/// Visibility v_p > 0 of each list position p.
class VisibilityProfile {
 public:
  explicit VisibilityProfile(std::vector<double> visibilities);

  /// All positions equally visible (no position bias).
  static VisibilityProfile uniform(std::size_t n, double value = 1.0);

  std::size_t size() const noexcept { return visibilities_.size(); }
  std::span<const double> values() const noexcept { return visibilities_; }
  double operator[](std::size_t position) const { return visibilities_[position]; }

  /// True iff v_1 >= v_2 >= ... >= v_n.
  bool is_monotone() const noexcept { return monotone_; }

  /// max_p v_p / min_p v_p; the approximation factor of the quality ranking.
  double spread() const noexcept;

  bool operator==(const VisibilityProfile& other) const {
    return visibilities_ == other.visibilities_;
  }

 private:
  std::vector<double> visibilities_;
  bool monotone_ = true;
};

/// Bijection product -> position. position_of(i) is sigma_i.
class Ranking {
 public:
  /// From sigma (0-based positions indexed by product). Must be a permutation.
  static Ranking from_positions(std::vector<std::size_t> positions);
  /// From a list (0-based products indexed by position).
  static Ranking from_list(std::span<const std::size_t> list);
  /// From 1-based sigma as written in serialized artifacts.
  static Ranking from_one_based(std::span<const std::size_t> sigma);
  static Ranking identity(std::size_t n);

  std::size_t size() const noexcept { return positions_.size(); }
  std::size_t position_of(std::size_t product) const { return positions_.at(product); }
  std::span<const std::size_t> positions() const noexcept { return positions_; }

  /// Position -> product view.
  std::vector<std::size_t> list() const;
  std::vector<std::size_t> one_based() const;

  bool operator==(const Ranking&) const = default;
  auto operator<=>(const Ranking&) const = default;

 private:
  explicit Ranking(std::vector<std::size_t> positions) : positions_(std::move(positions)) {}
  std::vector<std::size_t> positions_;
};

/// Purchase counts d_i and number of consumer arrivals t.
struct MarketState {
  std::vector<std::int64_t> downloads;
  std::int64_t trials = 0;

  static MarketState empty(std::size_t n) { return {std::vector<std::int64_t>(n, 0), 0}; }
  std::int64_t total_downloads() const noexcept;
  /// Throws DomainError on negative counts or more purchases than trials.
  void validate() const;

  bool operator==(const MarketState&) const = default;
};

enum class Condition { SocialInfluence, Independent };

std::string_view to_string(Condition c) noexcept;
/// Accepts "SI"/"IN" (any case) and the long names.
Condition parse_condition(std::string_view text);

/// Whether a zero appeal is tolerated. Only analysis code (the tightness
/// instance of the approximation bound) needs Allow.
enum class ZeroAppeal { Reject, Allow };

/// a_i = A_i + d_i under social influence, A_i under the independent condition.
std::vector<double> effective_appeals(const ProductCatalog& catalog, const MarketState& state,
                                      Condition condition);

/// p_i(sigma, a) = v[sigma_i] a_i / sum_j v[sigma_j] a_j.
std::vector<double> trial_probabilities(const Ranking& ranking, const VisibilityProfile& vis,
                                        std::span<const double> appeals,
                                        ZeroAppeal zero = ZeroAppeal::Reject);

/// lambda(sigma) = sum_i p_i(sigma) q_i, the expected purchases of one trial.
double expected_purchases(const Ranking& ranking, const VisibilityProfile& vis,
                          std::span<const double> appeals, std::span<const double> qualities,
                          ZeroAppeal zero = ZeroAppeal::Reject);

/// Distribution of the next purchased product when product i sits at
/// position i and the list stays fixed until someone buys:
/// v_i a_i q_i / sum_j v_j a_j q_j. Throws DomainError when no product can
/// ever be purchased.
std::vector<double> next_purchase_distribution(const VisibilityProfile& vis,
                                               std::span<const double> appeals,
                                               std::span<const double> qualities);

/// Expected purchases of the next trial after one more trial under the same
/// ranking and social influence:
///   sum_j P_j lambda(a + e_j) + (1 - sum_j P_j) lambda(a),  P_j = p_j q_j.
double one_step_expected(const Ranking& ranking, const VisibilityProfile& vis,
                         std::span<const double> appeals, std::span<const double> qualities);

}  // namespace trialoffer
