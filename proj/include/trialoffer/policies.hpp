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

#pragma once

#include <cstddef>
#include <span>
#include <string_view>

#include "trialoffer/market.hpp"
#include "trialoffer/rng.hpp"

namespace trialoffer {

enum class PolicyKind { Quality, Popularity, Performance, Random };

std::string_view to_string(PolicyKind kind) noexcept;
PolicyKind parse_policy(std::string_view text);

/// Which policy ranks the list, under which condition, and how often the
/// list is recomputed (every refresh_rate trials).
struct PolicySchedule {
  PolicyKind kind = PolicyKind::Quality;
  Condition condition = Condition::SocialInfluence;
  std::int64_t refresh_rate = 1;
  /// Break popularity ties with a per-world random order instead of
  /// product index, so the all-zero start shows a shuffled list.
  bool initial_shuffle = false;

  void validate() const;
  bool operator==(const PolicySchedule&) const = default;
};

/// Give the product with the k-th largest key the k-th most visible
/// position. Key ties go to the product earlier in tie_order (product index
/// when tie_order is empty); visibility ties go to the lower position.
Ranking rank_by_keys(std::span<const double> keys, const VisibilityProfile& vis,
                     std::span<const std::size_t> tie_order = {});

/// Highest quality in the most visible position.
Ranking quality_ranking(const ProductCatalog& catalog, const VisibilityProfile& vis);

/// Most purchased product in the most visible position.
Ranking popularity_ranking(const MarketState& state, const VisibilityProfile& vis,
                           std::span<const std::size_t> tie_order = {});

/// Ranking maximizing expected_purchases for the given appeals.
///
/// Dinkelbach iteration: for a guess lambda the parametric problem
/// max_sigma sum_i v[sigma_i] a_i (q_i - lambda) is solved exactly by
/// pairing visibilities and the keys a_i (q_i - lambda) in the same order.
/// lambda is then replaced by the value of that ranking until the ranking
/// stops changing. Throws ConvergenceError after 100 iterations.
Ranking performance_ranking(const VisibilityProfile& vis, std::span<const double> appeals,
                            std::span<const double> qualities,
                            ZeroAppeal zero = ZeroAppeal::Reject);

/// Exhaustive argmax over all n! rankings, first in lexicographic order of
/// sigma among exact ties. Throws SizeError for n > 10.
Ranking brute_force_ranking(const VisibilityProfile& vis, std::span<const double> appeals,
                            std::span<const double> qualities,
                            ZeroAppeal zero = ZeroAppeal::Reject);

/// Uniformly random ranking (Fisher-Yates on the position list).
Ranking random_ranking(std::size_t n, Rng& rng);

/// Ranking to show for the next trial. Recomputes with the scheduled policy
/// when state.trials is a multiple of the refresh rate; otherwise returns
/// current. Under the independent condition the policy sees no purchase
/// counts: appeals are A_i and popularity sees an all-zero state.
Ranking next_ranking(const PolicySchedule& schedule, const ProductCatalog& catalog,
                     const VisibilityProfile& vis, const MarketState& state,
                     const Ranking& current, Rng& rng,
                     std::span<const std::size_t> tie_order = {});

}  // namespace trialoffer
