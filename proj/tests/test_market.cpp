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

#include <cmath>
#include <numeric>

#include "doctest.h"
#include "generators.hpp"
#include "trialoffer/errors.hpp"
#include "trialoffer/market.hpp"
#include "trialoffer/rng.hpp"

using namespace trialoffer;
using testing::kExampleA;
using testing::kExampleQ;
using testing::kExampleV;

namespace {

double sum(const std::vector<double>& x) { return std::accumulate(x.begin(), x.end(), 0.0); }

// Next-purchase probability by summing the series over the number m of
// failed trials before the purchase, until the tail is below 1e-12.
std::vector<double> next_purchase_by_series(const std::vector<double>& v,
                                            const std::vector<double>& a,
                                            const std::vector<double>& q) {
  double weight = 0.0;
  double fail = 0.0;
  for (std::size_t j = 0; j < v.size(); ++j) {
    weight += v[j] * a[j];
    fail += v[j] * a[j] * (1.0 - q[j]);
  }
  const double no_purchase = fail / weight;
  std::vector<double> p(v.size(), 0.0);
  double factor = 1.0;
  for (int m = 0; factor > 1e-12 * (1.0 - no_purchase) && m < 10'000'000; ++m) {
    for (std::size_t i = 0; i < v.size(); ++i) p[i] += factor * v[i] * a[i] * q[i] / weight;
    factor *= no_purchase;
  }
  return p;
}

// Expected purchases at the next trial by enumerating every successor state.
double next_trial_by_enumeration(const Ranking& sigma, const VisibilityProfile& vis,
                                 std::vector<double> a, const std::vector<double>& q) {
  const auto p = trial_probabilities(sigma, vis, a);
  const double stay = expected_purchases(sigma, vis, a, q);
  double value = 0.0;
  double bought = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) {
    a[j] += 1.0;
    value += p[j] * q[j] * expected_purchases(sigma, vis, a, q);
    a[j] -= 1.0;
    bought += p[j] * q[j];
  }
  return value + (1.0 - bought) * stay;
}

}  // namespace

TEST_CASE("catalog and profile invariants") {
  CHECK_THROWS_AS(ProductCatalog({0.5}, {1.0, 2.0}), DimensionError);
  CHECK_THROWS_AS(ProductCatalog({}, {}), DomainError);
  CHECK_THROWS_AS(ProductCatalog({1.5}, {1.0}), DomainError);
  CHECK_THROWS_AS(ProductCatalog({0.5}, {0.0}), DomainError);
  CHECK_THROWS_AS(VisibilityProfile({1.0, 0.0}), DomainError);

  CHECK(VisibilityProfile({0.7, 0.2, 0.01}).is_monotone());
  CHECK_FALSE(VisibilityProfile({0.5, 0.9}).is_monotone());
  CHECK(VisibilityProfile({0.8, 0.2, 0.4}).spread() == doctest::Approx(4.0));
}

TEST_CASE("ranking views") {
  const Ranking r = Ranking::from_one_based(std::vector<std::size_t>{2, 1, 3});
  CHECK(r.position_of(0) == 1);
  CHECK(r.list() == std::vector<std::size_t>{1, 0, 2});
  CHECK(Ranking::from_list(r.list()) == r);
  CHECK(r.one_based() == std::vector<std::size_t>{2, 1, 3});
  CHECK_THROWS_AS(Ranking::from_positions({0, 0, 1}), DomainError);
  CHECK_THROWS_AS(Ranking::from_positions({0, 3, 1}), DomainError);
}

TEST_CASE("market state validation") {
  MarketState s{{2, 1}, 3};
  CHECK_NOTHROW(s.validate());
  s.trials = 2;
  CHECK_THROWS_AS(s.validate(), DomainError);
}

TEST_CASE("effective appeals") {
  const ProductCatalog catalog(kExampleQ, kExampleA);
  CHECK(effective_appeals(catalog, MarketState::empty(3), Condition::SocialInfluence) == kExampleA);
  const MarketState s{{3, 1, 0}, 10};
  const auto si = effective_appeals(catalog, s, Condition::SocialInfluence);
  CHECK(si[0] == doctest::Approx(3.01));
  CHECK(si[1] == doctest::Approx(1.1));
  CHECK(si[2] == doctest::Approx(0.9));
  CHECK(effective_appeals(catalog, s, Condition::Independent) == kExampleA);
  CHECK_THROWS_AS(effective_appeals(catalog, MarketState::empty(2), Condition::SocialInfluence),
                  DimensionError);
}

TEST_CASE("trial probabilities") {
  const VisibilityProfile vis(kExampleV);
  const Ranking sigma = Ranking::from_one_based(std::vector<std::size_t>{2, 1, 3});
  const auto p = trial_probabilities(sigma, vis, kExampleA);
  // weights v[sigma_i] a_i = (0.2*0.01, 0.7*0.1, 0.01*0.9)
  CHECK(p[0] == doctest::Approx(0.002 / 0.081).epsilon(1e-12));
  CHECK(p[1] == doctest::Approx(0.07 / 0.081).epsilon(1e-12));
  CHECK(p[2] == doctest::Approx(0.009 / 0.081).epsilon(1e-12));
  // P*_i = p_i q_i as quoted for the worked example
  CHECK(std::fabs(p[0] * kExampleQ[0] - 0.0198) <= 5e-4);
  CHECK(std::fabs(p[1] * kExampleQ[1] - 0.432) <= 5e-4);
  CHECK(std::fabs(p[2] * kExampleQ[2] - 0.0111) <= 5e-4);

  CHECK(trial_probabilities(Ranking::identity(1), VisibilityProfile({0.3}), std::vector{5.0})[0] ==
        1.0);
  const auto half = trial_probabilities(Ranking::identity(2), VisibilityProfile({1.0, 1.0}),
                                        std::vector{2.0, 2.0});
  CHECK(half[0] == 0.5);
  CHECK(half[1] == 0.5);

  CHECK_THROWS_AS(trial_probabilities(Ranking::identity(2), VisibilityProfile({1.0, 1.0}),
                                      std::vector{1.0, 0.0}),
                  DomainError);
  CHECK_THROWS_AS(trial_probabilities(Ranking::identity(2), VisibilityProfile({1.0, 1.0}),
                                      std::vector{1.0, -1.0}),
                  DomainError);
  CHECK_THROWS_AS(trial_probabilities(Ranking::identity(2), VisibilityProfile({1.0, 1.0, 1.0}),
                                      std::vector{1.0, 1.0}),
                  DimensionError);
  CHECK_NOTHROW(trial_probabilities(Ranking::identity(2), VisibilityProfile({1.0, 1.0}),
                                    std::vector{1.0, 0.0}, ZeroAppeal::Allow));
}

TEST_CASE("expected purchases on the worked example") {
  const VisibilityProfile vis(kExampleV);
  const auto perf = Ranking::from_one_based(std::vector<std::size_t>{2, 1, 3});
  CHECK(std::fabs(expected_purchases(perf, vis, kExampleA, kExampleQ) - 0.463) <= 5e-4);
  CHECK(std::fabs(expected_purchases(Ranking::identity(3), vis, kExampleA, kExampleQ) - 0.458) <=
        5e-4);
  const std::vector<double> flat(3, 0.37);
  CHECK(expected_purchases(perf, vis, kExampleA, flat) == doctest::Approx(0.37).epsilon(1e-14));
}

TEST_CASE("next purchase distribution") {
  const auto sym = next_purchase_distribution(VisibilityProfile({1.0, 1.0}),
                                              std::vector{1.0, 1.0}, std::vector{0.5, 0.5});
  CHECK(sym[0] == 0.5);
  CHECK(sym[1] == 0.5);

  // Quality-ranked example: weights v a q = (0.0056, 0.01, 0.0009).
  const auto p = next_purchase_distribution(VisibilityProfile(kExampleV), kExampleA, kExampleQ);
  const auto oracle = next_purchase_by_series(kExampleV, kExampleA, kExampleQ);
  const double frozen[] = {0.3394, 0.6061, 0.0545};
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(std::fabs(p[i] - oracle[i]) <= 1e-10);
    CHECK(std::fabs(p[i] - frozen[i]) <= 1e-3);
  }

  const auto zero = next_purchase_distribution(VisibilityProfile({0.4, 0.9}),
                                               std::vector{0.3, 2.0}, std::vector{1.0, 0.0});
  CHECK(zero[0] == 1.0);
  CHECK(zero[1] == 0.0);

  CHECK_THROWS_AS(next_purchase_distribution(VisibilityProfile({1.0, 1.0}), std::vector{1.0, 1.0},
                                             std::vector{0.0, 0.0}),
                  DomainError);
}

TEST_CASE("one-step expected value") {
  const VisibilityProfile vis(kExampleV);
  const Ranking quality = Ranking::identity(3);
  const double closed = one_step_expected(quality, vis, kExampleA, kExampleQ);
  const double enumerated = next_trial_by_enumeration(quality, vis, kExampleA, kExampleQ);
  CHECK(std::fabs(closed - enumerated) <= 1e-12);
  CHECK(closed >= 0.458 - 1e-12);

  const std::vector<double> flat(3, 0.25);
  CHECK(one_step_expected(quality, vis, kExampleA, flat) == doctest::Approx(0.25).epsilon(1e-14));
  CHECK(one_step_expected(Ranking::identity(1), VisibilityProfile({0.5}), std::vector{2.0},
                          std::vector{0.3}) == doctest::Approx(0.3).epsilon(1e-14));
}

TEST_CASE("property: probability vectors are normalized") {
  Rng rng(11);
  for (int k = 0; k < 2000; ++k) {
    const auto inst = testing::random_instance(rng, 1, 64);
    const VisibilityProfile vis(inst.v);
    CHECK(std::fabs(sum(trial_probabilities(Ranking::identity(inst.size()), vis, inst.a)) - 1.0) <=
          1e-12);
    CHECK(std::fabs(sum(next_purchase_distribution(vis, inst.a, inst.q)) - 1.0) <= 1e-12);
  }
}

TEST_CASE("property: closed-form next trial matches enumeration") {
  Rng rng(12);
  for (int k = 0; k < 500; ++k) {
    const auto inst = testing::random_instance(rng, 1, 16);
    const VisibilityProfile vis(inst.v);
    const Ranking sigma = Ranking::identity(inst.size());
    CHECK(std::fabs(one_step_expected(sigma, vis, inst.a, inst.q) -
                    next_trial_by_enumeration(sigma, vis, inst.a, inst.q)) <= 1e-12);
  }
}

TEST_CASE("property: position bias and social influence help the quality ranking") {
  Rng rng(13);
  for (int k = 0; k < 2000; ++k) {
    const auto inst = testing::random_instance(rng, 1, 32, true);
    const VisibilityProfile vis(inst.v);
    const Ranking sigma = Ranking::identity(inst.size());
    const double lambda = expected_purchases(sigma, vis, inst.a, inst.q);
    double num = 0.0;
    double den = 0.0;
    for (std::size_t i = 0; i < inst.size(); ++i) {
      num += inst.a[i] * inst.q[i];
      den += inst.a[i];
    }
    CHECK(lambda >= num / den - 1e-12);
    CHECK(one_step_expected(sigma, vis, inst.a, inst.q) >= lambda - 1e-12);
  }
}

TEST_CASE("property: homogeneous of degree zero in appeals and visibilities") {
  Rng rng(14);
  for (int k = 0; k < 500; ++k) {
    const auto inst = testing::random_instance(rng, 1, 32);
    const double c = 0.01 + 100.0 * rng.uniform();
    auto a2 = inst.a;
    auto v2 = inst.v;
    for (auto& x : a2) x *= c;
    for (auto& x : v2) x *= c;
    const VisibilityProfile vis(inst.v);
    const VisibilityProfile vis2(v2);
    const Ranking sigma = Ranking::identity(inst.size());
    const auto p = trial_probabilities(sigma, vis, inst.a);
    const auto pa = trial_probabilities(sigma, vis, a2);
    const auto pv = trial_probabilities(sigma, vis2, inst.a);
    const auto np = next_purchase_distribution(vis, inst.a, inst.q);
    const auto npa = next_purchase_distribution(vis, a2, inst.q);
    const auto npv = next_purchase_distribution(vis2, inst.a, inst.q);
    for (std::size_t i = 0; i < inst.size(); ++i) {
      CHECK(std::fabs(p[i] - pa[i]) <= 1e-12);
      CHECK(std::fabs(p[i] - pv[i]) <= 1e-12);
      CHECK(std::fabs(np[i] - npa[i]) <= 1e-12);
      CHECK(std::fabs(np[i] - npv[i]) <= 1e-12);
    }
    const double lam = expected_purchases(sigma, vis, inst.a, inst.q);
    CHECK(std::fabs(lam - expected_purchases(sigma, vis, a2, inst.q)) <= 1e-12);
    CHECK(std::fabs(lam - expected_purchases(sigma, vis2, inst.a, inst.q)) <= 1e-12);
  }
}
