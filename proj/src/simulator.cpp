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

#include "trialoffer/simulator.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cstring>
#include <exception>
#include <numeric>
#include <string>

#include "trialoffer/errors.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace trialoffer {

namespace {

class Fnv1a {
 public:
  void bytes(const void* data, std::size_t len) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < len; ++i) {
      hash_ ^= p[i];
      hash_ *= 0x100000001b3ULL;
    }
  }
  template <class T>
  void value(const T& v) {
    bytes(&v, sizeof(T));
  }
  void doubles(std::span<const double> xs) {
    value(xs.size());
    for (double x : xs) value(x);
  }
  std::uint64_t digest() const { return hash_; }

 private:
  std::uint64_t hash_ = 0xcbf29ce484222325ULL;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

}  // namespace

std::string_view to_string(TraceGranularity g) noexcept {
  switch (g) {
    case TraceGranularity::Full: return "full";
    case TraceGranularity::DownloadsOnly: return "downloads-only";
    case TraceGranularity::Final: return "final";
  }
  return "?";
}

TraceGranularity parse_granularity(std::string_view text) {
  std::string t(text);
  std::transform(t.begin(), t.end(), t.begin(), [](unsigned char ch) { return std::tolower(ch); });
  if (t == "full") return TraceGranularity::Full;
  if (t == "downloads-only" || t == "downloads") return TraceGranularity::DownloadsOnly;
  if (t == "final") return TraceGranularity::Final;
  throw UsageError("unknown trace granularity '" + std::string(text) + "'");
}

void SimulationConfig::validate() const {
  if (catalog.size() != visibility.size()) {
    throw DimensionError("catalog has " + std::to_string(catalog.size()) +
                         " products but visibility has " + std::to_string(visibility.size()) +
                         " positions");
  }
  schedule.validate();
  if (steps < 1) throw UsageError("steps must be >= 1");
  if (worlds < 1) throw UsageError("worlds must be >= 1");
  if (curve_interval < 1) throw UsageError("curve_interval must be >= 1");
}

std::uint64_t SimulationConfig::digest() const {
  Fnv1a h;
  h.doubles(catalog.qualities());
  h.doubles(catalog.appeals());
  h.doubles(visibility.values());
  h.value(static_cast<int>(schedule.kind));
  h.value(static_cast<int>(schedule.condition));
  h.value(schedule.refresh_rate);
  h.value(static_cast<int>(schedule.initial_shuffle));
  h.value(steps);
  h.value(worlds);
  h.value(master_seed);
  h.value(static_cast<int>(granularity));
  h.value(curve_interval);
  return h.digest();
}

TrialEvent step(MarketState& state, const Ranking& ranking, const ProductCatalog& catalog,
                const VisibilityProfile& vis, Condition condition, Rng& rng) {
  const std::size_t n = catalog.size();
  const auto appeals = catalog.appeals();
  const double u_choice = rng.uniform();
  const double u_buy = rng.uniform();

  // Inverse CDF over the unnormalized weights v[sigma_i] (A_i + d_i).
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double a = appeals[i];
    if (condition == Condition::SocialInfluence) a += static_cast<double>(state.downloads[i]);
    total += vis[ranking.position_of(i)] * a;
  }
  const double target = u_choice * total;
  double cumulative = 0.0;
  std::size_t tried = n - 1;
  for (std::size_t i = 0; i < n; ++i) {
    double a = appeals[i];
    if (condition == Condition::SocialInfluence) a += static_cast<double>(state.downloads[i]);
    cumulative += vis[ranking.position_of(i)] * a;
    if (target < cumulative) {
      tried = i;
      break;
    }
  }

  ++state.trials;
  TrialEvent event{state.trials, tried, u_buy < catalog.quality(tried)};
  if (event.purchased) ++state.downloads[tried];
  return event;
}

WorldTrace run_world(const SimulationConfig& config, std::int64_t world_index) {
  config.validate();
  if (world_index < 1 || world_index > config.worlds) {
    throw UsageError("world index " + std::to_string(world_index) + " outside 1.." +
                     std::to_string(config.worlds));
  }
  const auto world_key = static_cast<std::uint64_t>(world_index);
  Rng choice = Rng::for_world(config.master_seed, world_key, Stream::Choice);
  Rng policy_rng = Rng::for_world(config.master_seed, world_key, Stream::Policy);

  const std::size_t n = config.catalog.size();
  std::vector<std::size_t> tie_order;
  if (config.schedule.initial_shuffle) tie_order = random_ranking(n, policy_rng).list();

  const auto granularity = config.granularity;
  const std::int64_t interval =
      granularity == TraceGranularity::Full ? 1 : config.curve_interval;

  WorldTrace trace;
  trace.world_id = world_index;
  if (granularity == TraceGranularity::Full) {
    trace.events.reserve(static_cast<std::size_t>(config.steps));
  }

  MarketState state = MarketState::empty(n);
  Ranking ranking = Ranking::identity(n);
  std::int64_t total = 0;
  for (std::int64_t t = 0; t < config.steps; ++t) {
    ranking = next_ranking(config.schedule, config.catalog, config.visibility, state, ranking,
                           policy_rng, tie_order);
    const TrialEvent event = step(state, ranking, config.catalog, config.visibility,
                                  config.schedule.condition, choice);
    if (event.purchased) ++total;
    if (granularity == TraceGranularity::Full) trace.events.push_back(event);
    const bool last = state.trials == config.steps;
    if (granularity != TraceGranularity::Final && (state.trials % interval == 0 || last)) {
      trace.download_curve.push_back({state.trials, total});
      trace.snapshots.push_back({state.trials, state.downloads});
    }
  }
  if (granularity == TraceGranularity::Final) trace.download_curve.push_back({state.trials, total});
  trace.final_downloads = std::move(state.downloads);
  return trace;
}

ExperimentResult run_experiment(const SimulationConfig& config, int threads) {
  config.validate();
  const auto start = Clock::now();
  ExperimentResult result{config, config.digest(), {}, 0.0};
  result.worlds.resize(static_cast<std::size_t>(config.worlds));
  const std::int64_t worlds = config.worlds;

  std::exception_ptr failure;
#ifdef _OPENMP
  const int team = threads > 0 ? threads : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic, 1) num_threads(team)
#endif
  for (std::int64_t w = 0; w < worlds; ++w) {
    try {
      result.worlds[static_cast<std::size_t>(w)] = run_world(config, w + 1);
    } catch (...) {
#ifdef _OPENMP
#pragma omp critical(trialoffer_failure)
#endif
      if (!failure) failure = std::current_exception();
    }
  }
  (void)threads;
  if (failure) std::rethrow_exception(failure);

  result.wall_seconds = seconds_since(start);
  return result;
}

ExperimentResult run_experiment_serial(const SimulationConfig& config) {
  config.validate();
  const auto start = Clock::now();
  ExperimentResult result{config, config.digest(), {}, 0.0};
  result.worlds.reserve(static_cast<std::size_t>(config.worlds));
  for (std::int64_t w = 1; w <= config.worlds; ++w) result.worlds.push_back(run_world(config, w));
  result.wall_seconds = seconds_since(start);
  return result;
}

ExperimentResult run_experiment_in_order(const SimulationConfig& config,
                                         std::span<const std::int64_t> order) {
  config.validate();
  if (order.size() != static_cast<std::size_t>(config.worlds)) {
    throw UsageError("world order must list every world exactly once");
  }
  const auto start = Clock::now();
  ExperimentResult result{config, config.digest(), {}, 0.0};
  result.worlds.resize(order.size());
  std::vector<bool> seen(order.size(), false);
  for (std::int64_t id : order) {
    if (id < 1 || id > config.worlds || seen[static_cast<std::size_t>(id - 1)]) {
      throw UsageError("world order must list every world exactly once");
    }
    seen[static_cast<std::size_t>(id - 1)] = true;
    result.worlds[static_cast<std::size_t>(id - 1)] = run_world(config, id);
  }
  result.wall_seconds = seconds_since(start);
  return result;
}

}  // namespace trialoffer
