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

#include "trialoffer/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "trialoffer/errors.hpp"
#include "trialoffer/stats.hpp"

namespace trialoffer {

namespace {

constexpr std::size_t kMinBetaWorlds = 200;

double share_of(std::span<const std::int64_t> downloads, std::size_t product) {
  const auto total = std::accumulate(downloads.begin(), downloads.end(), std::int64_t{0});
  return total > 0 ? static_cast<double>(downloads[product]) / static_cast<double>(total) : 0.0;
}

}  // namespace

UrnView urn_view(const ProductCatalog& catalog, const VisibilityProfile& vis,
                 const MarketState& state) {
  return urn_view(catalog, vis, state, Ranking::identity(catalog.size()));
}

UrnView urn_view(const ProductCatalog& catalog, const VisibilityProfile& vis,
                 const MarketState& state, const Ranking& ranking) {
  const std::size_t n = catalog.size();
  if (vis.size() != n || ranking.size() != n) {
    throw DimensionError("urn view: catalog, visibility and ranking sizes differ");
  }
  const auto appeals = effective_appeals(catalog, state, Condition::SocialInfluence);
  UrnView view{std::vector<double>(n), std::vector<double>(n), std::vector<double>(n)};
  double total = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    view.qhat[j] = vis[ranking.position_of(j)] * catalog.quality(j);
    view.balls[j] = appeals[j] * view.qhat[j];
    total += view.balls[j];
  }
  if (!(total > 0.0)) throw DomainError("urn view: every product has zero purchase weight");
  for (std::size_t j = 0; j < n; ++j) view.shares[j] = view.balls[j] / total;
  return view;
}

std::size_t top_quality_product(const ProductCatalog& catalog) {
  const auto q = catalog.qualities();
  return static_cast<std::size_t>(std::max_element(q.begin(), q.end()) - q.begin());
}

MonopolyStats monopoly_stats(const ExperimentResult& result, double threshold) {
  if (!(threshold > 0.5 && threshold < 1.0)) {
    throw UsageError("monopoly threshold must lie in (0.5, 1)");
  }
  MonopolyStats stats;
  const std::size_t top = top_quality_product(result.config.catalog);
  stats.top_product = top;
  for (const auto& world : result.worlds) {
    std::optional<std::int64_t> first;
    if (!world.events.empty()) {
      std::int64_t top_count = 0;
      std::int64_t total = 0;
      for (const auto& e : world.events) {
        if (!e.purchased) continue;
        ++total;
        if (e.tried == top) ++top_count;
        if (static_cast<double>(top_count) >= threshold * static_cast<double>(total)) {
          first = e.step;
          break;
        }
      }
    } else {
      for (const auto& snap : world.snapshots) {
        const auto total =
            std::accumulate(snap.downloads.begin(), snap.downloads.end(), std::int64_t{0});
        if (total > 0 && share_of(snap.downloads, top) >= threshold) {
          first = snap.step;
          break;
        }
      }
    }
    stats.first_step.push_back(first);
    stats.final_share.push_back(share_of(world.final_downloads, top));
  }
  return stats;
}

std::vector<double> shares_at(const ExperimentResult& result, std::size_t product,
                              std::int64_t step) {
  std::vector<double> out;
  out.reserve(result.worlds.size());
  for (const auto& world : result.worlds) {
    const auto it = std::find_if(world.snapshots.begin(), world.snapshots.end(),
                                 [&](const Snapshot& s) { return s.step == step; });
    if (it == world.snapshots.end()) {
      throw UsageError("no snapshot at step " + std::to_string(step));
    }
    out.push_back(share_of(it->downloads, product));
  }
  return out;
}

BetaFit beta_limit_test(std::span<const double> final_shares, double appeal1, double appeal2,
                        double quality, double significance) {
  if (final_shares.size() < kMinBetaWorlds) {
    throw UsageError("beta limit test needs at least 200 worlds, got " +
                     std::to_string(final_shares.size()));
  }
  if (!(appeal1 > 0.0) || !(appeal2 > 0.0) || !(quality > 0.0 && quality <= 1.0)) {
    throw UsageError("beta limit test needs positive appeals and quality in (0, 1]");
  }
  if (!(significance > 0.0 && significance < 1.0)) {
    throw UsageError("significance must lie in (0, 1)");
  }
  BetaFit fit;
  fit.alpha = appeal1 / quality;
  fit.beta = appeal2 / quality;
  fit.significance = significance;
  std::vector<double> sample(final_shares.begin(), final_shares.end());
  fit.ks_distance = stats::ks_distance(
      std::move(sample), [&](double x) { return stats::beta_cdf(x, fit.alpha, fit.beta); });
  fit.ks_statistic = std::sqrt(static_cast<double>(final_shares.size())) * fit.ks_distance;
  fit.p_value = stats::kolmogorov_survival(fit.ks_statistic);
  fit.critical_value = stats::kolmogorov_critical(significance);
  fit.accepted = fit.ks_statistic < fit.critical_value;
  return fit;
}

BetaFit beta_limit_test(const ExperimentResult& result, double significance) {
  const auto& cfg = result.config;
  const auto q = cfg.catalog.qualities();
  const auto a = cfg.catalog.appeals();
  const auto v = cfg.visibility.values();
  if (cfg.catalog.size() != 2) throw UsageError("beta limit test needs exactly two products");
  if (q[0] != q[1]) throw UsageError("beta limit test needs equal qualities");
  if (v[0] != v[1]) throw UsageError("beta limit test needs equal visibilities");
  if (cfg.schedule.condition != Condition::SocialInfluence) {
    throw UsageError("beta limit test needs the social-influence condition");
  }
  if (static_cast<double>(cfg.steps) * q[0] < 100.0 * std::max(a[0], a[1])) {
    throw UsageError("beta limit test needs steps * q >= 100 * max(A)");
  }
  std::vector<double> shares;
  for (const auto& w : result.worlds) shares.push_back(share_of(w.final_downloads, 0));
  return beta_limit_test(shares, a[0], a[1], q[0], significance);
}

std::vector<EfficiencyRow> efficiency_table(std::span<const ExperimentResult> results) {
  std::vector<EfficiencyRow> rows;
  if (results.empty()) return rows;
  const auto& base = results.front().config;
  for (const auto& r : results) {
    if (!(r.config.catalog == base.catalog) || r.config.steps != base.steps) {
      throw UsageError("efficiency table needs results with the same catalog and steps");
    }
    std::vector<double> rates;
    rates.reserve(r.worlds.size());
    for (const auto& w : r.worlds) {
      const auto total =
          std::accumulate(w.final_downloads.begin(), w.final_downloads.end(), std::int64_t{0});
      rates.push_back(static_cast<double>(total) / static_cast<double>(r.config.steps));
    }
    const auto s = stats::summarize(rates);
    rows.push_back({r.config.schedule.kind, r.config.schedule.condition, s.mean, s.std_error,
                    static_cast<std::int64_t>(r.worlds.size())});
  }
  return rows;
}

PredictabilityReport predictability_report(const ExperimentResult& result) {
  if (result.worlds.size() < 2) throw UsageError("predictability report needs >= 2 worlds");
  const auto& catalog = result.config.catalog;
  const std::size_t n = catalog.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return catalog.quality(a) < catalog.quality(b);
  });

  PredictabilityReport report;
  const std::size_t top = top_quality_product(catalog);
  std::size_t wins = 0;
  for (const auto& w : result.worlds) {
    bool strict_max = true;
    for (std::size_t j = 0; j < n; ++j) {
      if (j != top && w.final_downloads[j] >= w.final_downloads[top]) strict_max = false;
    }
    if (strict_max) ++wins;
  }
  report.top_win_rate = static_cast<double>(wins) / static_cast<double>(result.worlds.size());

  double spread_sum = 0.0;
  for (std::size_t product : order) {
    std::vector<double> downloads;
    std::vector<double> shares;
    for (const auto& w : result.worlds) {
      downloads.push_back(static_cast<double>(w.final_downloads[product]));
      shares.push_back(share_of(w.final_downloads, product));
    }
    spread_sum += stats::summarize(shares).sd;
    report.songs.push_back({product, catalog.quality(product),
                            stats::quantile(downloads, 0.0), stats::quantile(downloads, 0.25),
                            stats::median(downloads), stats::quantile(downloads, 0.75),
                            stats::quantile(downloads, 1.0)});
  }
  report.unpredictability = spread_sum / static_cast<double>(n);
  return report;
}

std::vector<CurveStat> mean_download_curve(const ExperimentResult& result) {
  std::vector<CurveStat> out;
  if (result.worlds.empty()) return out;
  const auto& first = result.worlds.front().download_curve;
  for (std::size_t k = 0; k < first.size(); ++k) {
    std::vector<double> totals;
    totals.reserve(result.worlds.size());
    for (const auto& w : result.worlds) {
      if (w.download_curve.size() != first.size() || w.download_curve[k].step != first[k].step) {
        throw UsageError("worlds have different curve checkpoints");
      }
      totals.push_back(static_cast<double>(w.download_curve[k].total_downloads));
    }
    const auto s = stats::summarize(totals);
    out.push_back({first[k].step, s.mean, s.std_error});
  }
  return out;
}

}  // namespace trialoffer
