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

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "doctest.h"
#include "generators.hpp"
#include "trialoffer/errors.hpp"
#include "trialoffer/policies.hpp"

using namespace trialoffer;
using testing::kExampleA;
using testing::kExampleQ;
using testing::kExampleV;

namespace {

std::vector<std::size_t> one_based(std::initializer_list<std::size_t> xs) { return xs; }

double value_of(const Ranking& r, const testing::Instance& inst) {
  return expected_purchases(r, VisibilityProfile(inst.v), inst.a, inst.q);
}

}  // namespace

TEST_CASE("policy names") {
  for (auto k : {PolicyKind::Quality, PolicyKind::Popularity, PolicyKind::Performance,
                 PolicyKind::Random}) {
    CHECK(parse_policy(to_string(k)) == k);
  }
  CHECK_THROWS_AS(parse_policy("greedy"), UsageError);
  PolicySchedule s;
  s.refresh_rate = 0;
  CHECK_THROWS_AS(s.validate(), UsageError);
}

TEST_CASE("sorted-key assignment") {
  const VisibilityProfile vis({0.5, 0.9, 0.1});
  // Largest key goes to position 2 (most visible), then position 1, then 3.
  const auto r = rank_by_keys(std::vector{1.0, 3.0, 2.0}, vis);
  CHECK(r.position_of(1) == 1);
  CHECK(r.position_of(2) == 0);
  CHECK(r.position_of(0) == 2);

  // Ties go to the lower index, or to the earlier entry of tie_order.
  const VisibilityProfile flat({0.9, 0.5, 0.1});
  CHECK(rank_by_keys(std::vector{1.0, 1.0, 1.0}, flat) == Ranking::identity(3));
  const std::vector<std::size_t> order{2, 0, 1};
  CHECK(rank_by_keys(std::vector{1.0, 1.0, 1.0}, flat, order).list() == order);
}

TEST_CASE("quality and popularity rankings") {
  const VisibilityProfile vis(kExampleV);
  CHECK(quality_ranking(ProductCatalog(kExampleQ, kExampleA), vis) == Ranking::identity(3));
  CHECK(quality_ranking(ProductCatalog({0.1, 0.9, 0.5}, {1, 1, 1}), vis).one_based() ==
        one_based({3, 1, 2}));
  CHECK(popularity_ranking(MarketState{{1, 5, 5}, 30}, vis).one_based() == one_based({3, 1, 2}));
  CHECK(popularity_ranking(MarketState::empty(3), vis) == Ranking::identity(3));
}

TEST_CASE("performance ranking on the worked example") {
  const VisibilityProfile vis(kExampleV);
  const auto r = performance_ranking(vis, kExampleA, kExampleQ);
  CHECK(r.one_based() == one_based({2, 1, 3}));
  CHECK(std::fabs(expected_purchases(r, vis, kExampleA, kExampleQ) - 0.463) <= 5e-4);
  CHECK(brute_force_ranking(vis, kExampleA, kExampleQ) == r);
}

TEST_CASE("performance ranking matches exhaustive search") {
  Rng rng(21);
  for (int k = 0; k < 300; ++k) {
    const auto inst = testing::random_instance(rng, 1, 7);
    const VisibilityProfile vis(inst.v);
    const double dk = value_of(performance_ranking(vis, inst.a, inst.q), inst);
    const double bf = value_of(brute_force_ranking(vis, inst.a, inst.q), inst);
    CHECK(std::fabs(dk - bf) <= 1e-10);
    CHECK(dk >= value_of(quality_ranking(ProductCatalog(inst.q, inst.a), vis), inst) - 1e-12);
    CHECK(dk >= value_of(Ranking::identity(inst.size()), inst) - 1e-12);
  }
}

TEST_CASE("quality ranking within the visibility spread of the optimum") {
  Rng rng(22);
  for (int k = 0; k < 2000; ++k) {
    const auto inst = testing::random_instance(rng, 1, 12, true);
    const VisibilityProfile vis(inst.v);
    const double best = value_of(performance_ranking(vis, inst.a, inst.q), inst);
    const double qual = value_of(quality_ranking(ProductCatalog(inst.q, inst.a), vis), inst);
    CHECK(best / qual <= vis.spread() + 1e-10);
  }
}

TEST_CASE("exhaustive search size limit") {
  const std::vector<double> x(11, 0.5);
  CHECK_THROWS_AS(brute_force_ranking(VisibilityProfile(x), x, x), SizeError);
}

TEST_CASE("random ranking is uniform") {
  Rng rng(23);
  std::map<std::vector<std::size_t>, int> counts;
  const int draws = 60000;
  for (int k = 0; k < draws; ++k) ++counts[random_ranking(3, rng).list()];
  REQUIRE(counts.size() == 6);
  // 4 standard errors of a binomial(60000, 1/6).
  const double sd = std::sqrt(draws * (1.0 / 6) * (5.0 / 6));
  for (const auto& [_, c] : counts) CHECK(std::fabs(c - draws / 6.0) <= 4 * sd);
}

TEST_CASE("next_ranking honours refresh rate and condition") {
  const ProductCatalog catalog({0.2, 0.9}, {1.0, 1.0});
  const VisibilityProfile vis({1.0, 0.5});
  Rng rng(24);
  const Ranking current = Ranking::identity(2);

  PolicySchedule pop{PolicyKind::Popularity, Condition::SocialInfluence, 3, false};
  const MarketState state{{0, 4}, 6};
  CHECK(next_ranking(pop, catalog, vis, state, current, rng).one_based() == one_based({2, 1}));
  const MarketState off{{0, 4}, 7};
  CHECK(next_ranking(pop, catalog, vis, off, current, rng) == current);

  pop.condition = Condition::Independent;
  CHECK(next_ranking(pop, catalog, vis, state, current, rng) == Ranking::identity(2));

  PolicySchedule qual{PolicyKind::Quality, Condition::SocialInfluence, 1, false};
  CHECK(next_ranking(qual, catalog, vis, state, current, rng).one_based() == one_based({2, 1}));

  // Under social influence the performance ranking sees A + d.
  const ProductCatalog example(kExampleQ, kExampleA);
  const VisibilityProfile evis(kExampleV);
  const Ranking three = Ranking::identity(3);
  PolicySchedule perf{PolicyKind::Performance, Condition::SocialInfluence, 1, false};
  const MarketState lead{{5, 0, 0}, 12};
  const auto si = next_ranking(perf, example, evis, lead, three, rng);
  CHECK(si == brute_force_ranking(evis, std::vector{5.01, 0.1, 0.9}, kExampleQ));
  perf.condition = Condition::Independent;
  const auto in = next_ranking(perf, example, evis, lead, three, rng);
  CHECK(in.one_based() == one_based({2, 1, 3}));
  CHECK(si != in);
}
