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

#include "trialoffer/market.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numeric>
#include <string>

#include "trialoffer/errors.hpp"

namespace trialoffer {

namespace {

void require_same_size(std::size_t a, std::size_t b, const char* what) {
  if (a != b) {
    throw DimensionError(std::string(what) + ": length " + std::to_string(a) + " vs " +
                         std::to_string(b));
  }
}

// w_i = v[sigma_i] * a_i, validated.
std::vector<double> trial_weights(const Ranking& ranking, const VisibilityProfile& vis,
                                  std::span<const double> appeals, ZeroAppeal zero) {
  const std::size_t n = appeals.size();
  require_same_size(ranking.size(), n, "ranking/appeals");
  require_same_size(vis.size(), n, "visibility/appeals");
  std::vector<double> w(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double a = appeals[i];
    if (!(a > 0.0) && !(zero == ZeroAppeal::Allow && a == 0.0)) {
      throw DomainError("appeal of product " + std::to_string(i + 1) + " must be positive");
    }
    w[i] = vis[ranking.position_of(i)] * a;
  }
  return w;
}

double sum_of(std::span<const double> x) { return std::accumulate(x.begin(), x.end(), 0.0); }

}  // namespace

ProductCatalog::ProductCatalog(std::vector<double> qualities, std::vector<double> appeals)
    : qualities_(std::move(qualities)), appeals_(std::move(appeals)) {
  require_same_size(qualities_.size(), appeals_.size(), "qualities/appeals");
  if (qualities_.empty()) throw DomainError("catalog must contain at least one product");
  for (std::size_t i = 0; i < qualities_.size(); ++i) {
    if (!(qualities_[i] >= 0.0 && qualities_[i] <= 1.0)) {
      throw DomainError("quality of product " + std::to_string(i + 1) + " outside [0, 1]");
    }
    if (!(appeals_[i] > 0.0) || !std::isfinite(appeals_[i])) {
      throw DomainError("appeal of product " + std::to_string(i + 1) + " must be positive");
    }
  }
}

VisibilityProfile::VisibilityProfile(std::vector<double> visibilities)
    : visibilities_(std::move(visibilities)) {
  if (visibilities_.empty()) throw DomainError("visibility profile is empty");
  for (std::size_t p = 0; p < visibilities_.size(); ++p) {
    if (!(visibilities_[p] > 0.0) || !std::isfinite(visibilities_[p])) {
      throw DomainError("visibility of position " + std::to_string(p + 1) + " must be positive");
    }
  }
  monotone_ = std::is_sorted(visibilities_.begin(), visibilities_.end(), std::greater<>());
}

VisibilityProfile VisibilityProfile::uniform(std::size_t n, double value) {
  return VisibilityProfile(std::vector<double>(n, value));
}

double VisibilityProfile::spread() const noexcept {
  const auto [lo, hi] = std::minmax_element(visibilities_.begin(), visibilities_.end());
  return *hi / *lo;
}

Ranking Ranking::from_positions(std::vector<std::size_t> positions) {
  std::vector<bool> seen(positions.size(), false);
  for (std::size_t p : positions) {
    if (p >= positions.size() || seen[p]) throw DomainError("ranking is not a permutation");
    seen[p] = true;
  }
  return Ranking(std::move(positions));
}

Ranking Ranking::from_list(std::span<const std::size_t> list) {
  std::vector<std::size_t> positions(list.size(), list.size());
  for (std::size_t p = 0; p < list.size(); ++p) {
    if (list[p] >= list.size() || positions[list[p]] != list.size()) {
      throw DomainError("list is not a permutation");
    }
    positions[list[p]] = p;
  }
  return Ranking(std::move(positions));
}

Ranking Ranking::from_one_based(std::span<const std::size_t> sigma) {
  std::vector<std::size_t> positions(sigma.size());
  for (std::size_t i = 0; i < sigma.size(); ++i) {
    if (sigma[i] == 0) throw DomainError("1-based ranking contains 0");
    positions[i] = sigma[i] - 1;
  }
  return from_positions(std::move(positions));
}

Ranking Ranking::identity(std::size_t n) {
  std::vector<std::size_t> positions(n);
  std::iota(positions.begin(), positions.end(), std::size_t{0});
  return Ranking(std::move(positions));
}

std::vector<std::size_t> Ranking::list() const {
  std::vector<std::size_t> out(positions_.size());
  for (std::size_t i = 0; i < positions_.size(); ++i) out[positions_[i]] = i;
  return out;
}

std::vector<std::size_t> Ranking::one_based() const {
  std::vector<std::size_t> out(positions_);
  for (auto& p : out) ++p;
  return out;
}

std::int64_t MarketState::total_downloads() const noexcept {
  return std::accumulate(downloads.begin(), downloads.end(), std::int64_t{0});
}

void MarketState::validate() const {
  if (trials < 0) throw DomainError("negative trial count");
  for (auto d : downloads) {
    if (d < 0) throw DomainError("negative download count");
  }
  if (total_downloads() > trials) throw DomainError("more purchases than trials");
}

std::string_view to_string(Condition c) noexcept {
  return c == Condition::SocialInfluence ? "SI" : "IN";
}

Condition parse_condition(std::string_view text) {
  std::string t(text);
  std::transform(t.begin(), t.end(), t.begin(), [](unsigned char ch) { return std::tolower(ch); });
  if (t == "si" || t == "social" || t == "social-influence" || t == "socialinfluence") {
    return Condition::SocialInfluence;
  }
  if (t == "in" || t == "independent") return Condition::Independent;
  throw UsageError("unknown condition '" + std::string(text) + "' (expected SI or IN)");
}

std::vector<double> effective_appeals(const ProductCatalog& catalog, const MarketState& state,
                                      Condition condition) {
  require_same_size(state.downloads.size(), catalog.size(), "downloads/catalog");
  std::vector<double> a(catalog.appeals().begin(), catalog.appeals().end());
  if (condition == Condition::SocialInfluence) {
    for (std::size_t i = 0; i < a.size(); ++i) a[i] += static_cast<double>(state.downloads[i]);
  }
  return a;
}

std::vector<double> trial_probabilities(const Ranking& ranking, const VisibilityProfile& vis,
                                        std::span<const double> appeals, ZeroAppeal zero) {
  auto w = trial_weights(ranking, vis, appeals, zero);
  const double total = sum_of(w);
  if (!(total > 0.0)) throw DomainError("all trial weights are zero");
  for (auto& x : w) x /= total;
  return w;
}

double expected_purchases(const Ranking& ranking, const VisibilityProfile& vis,
                          std::span<const double> appeals, std::span<const double> qualities,
                          ZeroAppeal zero) {
  require_same_size(qualities.size(), appeals.size(), "qualities/appeals");
  const auto w = trial_weights(ranking, vis, appeals, zero);
  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    num += w[i] * qualities[i];
    den += w[i];
  }
  if (!(den > 0.0)) throw DomainError("all trial weights are zero");
  return num / den;
}

std::vector<double> next_purchase_distribution(const VisibilityProfile& vis,
                                               std::span<const double> appeals,
                                               std::span<const double> qualities) {
  const std::size_t n = appeals.size();
  require_same_size(vis.size(), n, "visibility/appeals");
  require_same_size(qualities.size(), n, "qualities/appeals");
  std::vector<double> p(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (appeals[i] < 0.0 || qualities[i] < 0.0) throw DomainError("negative appeal or quality");
    p[i] = vis[i] * appeals[i] * qualities[i];
  }
  const double total = sum_of(p);
  if (!(total > 0.0)) throw DomainError("no product can be purchased");
  for (auto& x : p) x /= total;
  return p;
}

double one_step_expected(const Ranking& ranking, const VisibilityProfile& vis,
                         std::span<const double> appeals, std::span<const double> qualities) {
  require_same_size(qualities.size(), appeals.size(), "qualities/appeals");
  const auto w = trial_weights(ranking, vis, appeals, ZeroAppeal::Reject);
  double weight = 0.0;     // sum_i v_i a_i
  double purchase = 0.0;   // sum_i v_i a_i q_i
  for (std::size_t i = 0; i < w.size(); ++i) {
    weight += w[i];
    purchase += w[i] * qualities[i];
  }
  const double lambda = purchase / weight;
  double after_purchase = 0.0;
  for (std::size_t j = 0; j < w.size(); ++j) {
    const double vj = vis[ranking.position_of(j)];
    after_purchase += (w[j] * qualities[j] / weight) * (purchase + vj * qualities[j]) /
                      (weight + vj);
  }
  return after_purchase + (1.0 - lambda) * lambda;
}

}  // namespace trialoffer
