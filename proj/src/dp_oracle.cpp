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

#include "trialoffer/dp_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <utility>

#include "trialoffer/errors.hpp"

namespace trialoffer {

namespace {

constexpr std::size_t kMaxOptimalProducts = 6;
constexpr std::size_t kMaxRandomPolicyProducts = 8;
constexpr double kMaxStates = 1e7;

void check_instance(const ProductCatalog& catalog, const VisibilityProfile& vis,
                    const HorizonSpec& spec) {
  if (catalog.size() != vis.size()) throw DimensionError("catalog/visibility length mismatch");
  if (spec.horizon < 1) throw UsageError("horizon must be >= 1");
  const double states =
      std::pow(static_cast<double>(spec.horizon + 1), static_cast<double>(catalog.size()));
  if (states > kMaxStates) {
    throw SizeError("state space (T+1)^n = " + std::to_string(states) + " exceeds 1e7");
  }
}

std::vector<Ranking> all_rankings(std::size_t n) {
  std::vector<std::size_t> sigma(n);
  std::iota(sigma.begin(), sigma.end(), std::size_t{0});
  std::vector<Ranking> out;
  do {
    out.push_back(Ranking::from_positions(sigma));
  } while (std::next_permutation(sigma.begin(), sigma.end()));
  return out;
}

// Expected value of one trial shown `ranking` with trial appeals `appeals`
// followed by the continuation `next(d')`.
template <class Continuation>
double one_trial(const Ranking& ranking, const VisibilityProfile& vis,
                 std::span<const double> appeals, std::span<const double> qualities,
                 std::vector<std::int64_t>& downloads, Continuation&& next) {
  const auto p = trial_probabilities(ranking, vis, appeals);
  const double stay = next(downloads);
  double value = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    ++downloads[i];
    const double bought = next(downloads);
    --downloads[i];
    value += p[i] * (qualities[i] * (1.0 + bought) + (1.0 - qualities[i]) * stay);
  }
  return value;
}

std::vector<double> appeals_for(const ProductCatalog& catalog,
                                const std::vector<std::int64_t>& downloads,
                                Condition condition) {
  std::vector<double> a(catalog.appeals().begin(), catalog.appeals().end());
  if (condition == Condition::SocialInfluence) {
    for (std::size_t i = 0; i < a.size(); ++i) a[i] += static_cast<double>(downloads[i]);
  }
  return a;
}

class OptimalSolver {
 public:
  OptimalSolver(const ProductCatalog& catalog, const VisibilityProfile& vis,
                const HorizonSpec& spec)
      : catalog_(catalog), vis_(vis), spec_(spec), rankings_(all_rankings(catalog.size())) {}

  double value(std::int64_t t, std::vector<std::int64_t>& d) {
    if (t > spec_.horizon) return 0.0;
    StateKey key{t, d};
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    const auto appeals = appeals_for(catalog_, d, Condition::SocialInfluence);
    auto next = [&](std::vector<std::int64_t>& dd) { return value(t + 1, dd); };
    double best = -1.0;
    for (const auto& r : rankings_) {
      best = std::max(best, one_trial(r, vis_, appeals, catalog_.qualities(), d, next));
    }
    memo_.emplace(std::move(key), best);
    return best;
  }

  std::map<StateKey, double> take_memo() { return std::move(memo_); }

 private:
  const ProductCatalog& catalog_;
  const VisibilityProfile& vis_;
  const HorizonSpec& spec_;
  std::vector<Ranking> rankings_;
  std::map<StateKey, double> memo_;
};

class PolicySolver {
 public:
  PolicySolver(const PolicySchedule& schedule, const ProductCatalog& catalog,
               const VisibilityProfile& vis, const HorizonSpec& spec)
      : schedule_(schedule), catalog_(catalog), vis_(vis), spec_(spec) {
    if (schedule.kind == PolicyKind::Random) rankings_ = all_rankings(catalog.size());
  }

  // `shown` is the ranking in force before step t; ignored on refresh steps.
  double value(std::int64_t t, std::vector<std::int64_t>& d, const Ranking& shown) {
    if (t > spec_.horizon) return 0.0;
    const bool refresh = (t - 1) % schedule_.refresh_rate == 0;
    std::pair<StateKey, Ranking> key{StateKey{t, d}, refresh ? Ranking::identity(0) : shown};
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;

    double v = 0.0;
    if (refresh && schedule_.kind == PolicyKind::Random) {
      for (const auto& r : rankings_) v += evaluate(t, d, r);
      v /= static_cast<double>(rankings_.size());
    } else if (refresh) {
      const MarketState state{d, t - 1};
      Rng unused(0);
      v = evaluate(t, d, next_ranking(schedule_, catalog_, vis_, state, shown, unused));
    } else {
      v = evaluate(t, d, shown);
    }
    if (spec_.keep_state_values && refresh) states_[key.first] = v;
    memo_.emplace(std::move(key), v);
    return v;
  }

  std::map<StateKey, double> take_states() { return std::move(states_); }

 private:
  double evaluate(std::int64_t t, std::vector<std::int64_t>& d, const Ranking& ranking) {
    const auto appeals = appeals_for(catalog_, d, schedule_.condition);
    auto next = [&](std::vector<std::int64_t>& dd) { return value(t + 1, dd, ranking); };
    return one_trial(ranking, vis_, appeals, catalog_.qualities(), d, next);
  }

  const PolicySchedule& schedule_;
  const ProductCatalog& catalog_;
  const VisibilityProfile& vis_;
  const HorizonSpec& spec_;
  std::vector<Ranking> rankings_;
  std::map<std::pair<StateKey, Ranking>, double> memo_;
  std::map<StateKey, double> states_;
};

}  // namespace

ValueReport optimal_value(const ProductCatalog& catalog, const VisibilityProfile& vis,
                          const HorizonSpec& spec) {
  check_instance(catalog, vis, spec);
  if (catalog.size() > kMaxOptimalProducts) {
    throw SizeError("optimal_value enumerates permutations only for n <= 6");
  }
  OptimalSolver solver(catalog, vis, spec);
  std::vector<std::int64_t> d(catalog.size(), 0);
  ValueReport report;
  report.value = solver.value(1, d);
  if (spec.keep_state_values) report.state_values = solver.take_memo();
  return report;
}

ValueReport policy_value(const PolicySchedule& schedule, const ProductCatalog& catalog,
                         const VisibilityProfile& vis, const HorizonSpec& spec) {
  schedule.validate();
  check_instance(catalog, vis, spec);
  if (schedule.kind == PolicyKind::Random && catalog.size() > kMaxRandomPolicyProducts) {
    throw SizeError("exact random-policy value limited to n <= 8");
  }
  if (schedule.kind == PolicyKind::Popularity && schedule.initial_shuffle) {
    throw UsageError("exact value of shuffled popularity ties is not supported");
  }
  PolicySolver solver(schedule, catalog, vis, spec);
  std::vector<std::int64_t> d(catalog.size(), 0);
  ValueReport report;
  report.value = solver.value(1, d, Ranking::identity(catalog.size()));
  if (spec.keep_state_values) report.state_values = solver.take_states();
  return report;
}

}  // namespace trialoffer
