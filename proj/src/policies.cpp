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

#include "trialoffer/policies.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>
#include <string>
#include <vector>

#include "trialoffer/errors.hpp"

namespace trialoffer {

namespace {

constexpr int kMaxDinkelbachIterations = 100;
constexpr std::size_t kMaxBruteForceSize = 10;

// Positions ordered from most to least visible; ties by position index.
std::vector<std::size_t> positions_by_visibility(const VisibilityProfile& vis) {
  std::vector<std::size_t> order(vis.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return vis[a] > vis[b]; });
  return order;
}

}  // namespace

std::string_view to_string(PolicyKind kind) noexcept {
  switch (kind) {
    case PolicyKind::Quality: return "quality";
    case PolicyKind::Popularity: return "popularity";
    case PolicyKind::Performance: return "performance";
    case PolicyKind::Random: return "random";
  }
  return "?";
}

PolicyKind parse_policy(std::string_view text) {
  std::string t(text);
  std::transform(t.begin(), t.end(), t.begin(), [](unsigned char ch) { return std::tolower(ch); });
  if (t == "quality" || t == "q-rank") return PolicyKind::Quality;
  if (t == "popularity" || t == "download" || t == "d-rank") return PolicyKind::Popularity;
  if (t == "performance" || t == "p-rank") return PolicyKind::Performance;
  if (t == "random" || t == "rand-rank") return PolicyKind::Random;
  throw UsageError("unknown policy '" + std::string(text) + "'");
}

void PolicySchedule::validate() const {
  if (refresh_rate < 1) throw UsageError("refresh_rate must be >= 1");
}

Ranking rank_by_keys(std::span<const double> keys, const VisibilityProfile& vis,
                     std::span<const std::size_t> tie_order) {
  const std::size_t n = keys.size();
  if (vis.size() != n) throw DimensionError("keys/visibility length mismatch");
  std::vector<std::size_t> products;
  if (tie_order.empty()) {
    products.resize(n);
    std::iota(products.begin(), products.end(), std::size_t{0});
  } else {
    if (tie_order.size() != n) throw DimensionError("tie order length mismatch");
    products.assign(tie_order.begin(), tie_order.end());
  }
  std::stable_sort(products.begin(), products.end(),
                   [&](std::size_t a, std::size_t b) { return keys[a] > keys[b]; });
  const auto slots = positions_by_visibility(vis);
  std::vector<std::size_t> positions(n);
  for (std::size_t k = 0; k < n; ++k) positions[products[k]] = slots[k];
  return Ranking::from_positions(std::move(positions));
}

Ranking quality_ranking(const ProductCatalog& catalog, const VisibilityProfile& vis) {
  return rank_by_keys(catalog.qualities(), vis);
}

Ranking popularity_ranking(const MarketState& state, const VisibilityProfile& vis,
                           std::span<const std::size_t> tie_order) {
  std::vector<double> keys(state.downloads.begin(), state.downloads.end());
  return rank_by_keys(keys, vis, tie_order);
}

Ranking performance_ranking(const VisibilityProfile& vis, std::span<const double> appeals,
                            std::span<const double> qualities, ZeroAppeal zero) {
  const std::size_t n = appeals.size();
  if (qualities.size() != n) throw DimensionError("qualities/appeals length mismatch");
  Ranking current = rank_by_keys(qualities, vis);
  double lambda = expected_purchases(current, vis, appeals, qualities, zero);
  std::vector<double> keys(n);
  for (int iter = 0; iter < kMaxDinkelbachIterations; ++iter) {
    for (std::size_t i = 0; i < n; ++i) keys[i] = appeals[i] * (qualities[i] - lambda);
    Ranking next = rank_by_keys(keys, vis);
    if (next == current) return current;
    const double next_lambda = expected_purchases(next, vis, appeals, qualities, zero);
    // The parametric optimum can only improve lambda; a non-increase means
    // the new ranking ties the current one up to rounding.
    if (!(next_lambda > lambda)) return current;
    current = std::move(next);
    lambda = next_lambda;
  }
  throw ConvergenceError("performance ranking did not converge in 100 iterations");
}

Ranking brute_force_ranking(const VisibilityProfile& vis, std::span<const double> appeals,
                            std::span<const double> qualities, ZeroAppeal zero) {
  const std::size_t n = appeals.size();
  if (n > kMaxBruteForceSize) {
    throw SizeError("brute-force ranking limited to n <= 10, got " + std::to_string(n));
  }
  std::vector<std::size_t> sigma(n);
  std::iota(sigma.begin(), sigma.end(), std::size_t{0});
  std::vector<std::size_t> best = sigma;
  double best_value = -1.0;
  do {
    const double value =
        expected_purchases(Ranking::from_positions(sigma), vis, appeals, qualities, zero);
    if (value > best_value) {
      best_value = value;
      best = sigma;
    }
  } while (std::next_permutation(sigma.begin(), sigma.end()));
  return Ranking::from_positions(std::move(best));
}

Ranking random_ranking(std::size_t n, Rng& rng) {
  if (n == 0) throw UsageError("random ranking needs n >= 1");
  std::vector<std::size_t> positions(n);
  std::iota(positions.begin(), positions.end(), std::size_t{0});
  for (std::size_t i = n - 1; i > 0; --i) {
    const auto j = static_cast<std::size_t>(rng.below(i + 1));
    std::swap(positions[i], positions[j]);
  }
  return Ranking::from_positions(std::move(positions));
}

Ranking next_ranking(const PolicySchedule& schedule, const ProductCatalog& catalog,
                     const VisibilityProfile& vis, const MarketState& state,
                     const Ranking& current, Rng& rng, std::span<const std::size_t> tie_order) {
  if (state.trials % schedule.refresh_rate != 0) return current;
  switch (schedule.kind) {
    case PolicyKind::Quality:
      return quality_ranking(catalog, vis);
    case PolicyKind::Popularity:
      if (schedule.condition == Condition::Independent) {
        return popularity_ranking(MarketState::empty(catalog.size()), vis, tie_order);
      }
      return popularity_ranking(state, vis, tie_order);
    case PolicyKind::Performance: {
      const auto appeals = effective_appeals(catalog, state, schedule.condition);
      return performance_ranking(vis, appeals, catalog.qualities());
    }
    case PolicyKind::Random:
      return random_ranking(catalog.size(), rng);
  }
  return current;
}

}  // namespace trialoffer
