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

// Agent-based Monte Carlo engine.
//
// Each trial picks a product from trial_probabilities() under the current
// list and appeals, then buys it with probability q_i. A world is a fully
// sequential run of `steps` trials; worlds are independent and each one
// draws from its own streams keyed by (master_seed, world_id), so results
// do not depend on execution order or thread count.

#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include "trialoffer/market.hpp"
#include "trialoffer/policies.hpp"
#include "trialoffer/rng.hpp"

namespace trialoffer {

enum class TraceGranularity {
  Full,           // every TrialEvent, curve and snapshots at every step
  DownloadsOnly,  // curve and snapshots every curve_interval steps
  Final,          // final downloads and the last curve point only
};

std::string_view to_string(TraceGranularity g) noexcept;
TraceGranularity parse_granularity(std::string_view text);

struct SimulationConfig {
  ProductCatalog catalog;
  VisibilityProfile visibility;
  PolicySchedule schedule;
  std::int64_t steps = 1;
  std::int64_t worlds = 1;
  std::uint64_t master_seed = 0;
  TraceGranularity granularity = TraceGranularity::DownloadsOnly;
  std::int64_t curve_interval = 100;

  void validate() const;
  /// FNV-1a over every field; equal configs give equal digests.
  std::uint64_t digest() const;
  bool operator==(const SimulationConfig&) const = default;
};

struct TrialEvent {
  std::int64_t step = 0;  // 1-based
  std::size_t tried = 0;  // 0-based product
  bool purchased = false;

  bool operator==(const TrialEvent&) const = default;
};

struct CurvePoint {
  std::int64_t step = 0;
  std::int64_t total_downloads = 0;

  bool operator==(const CurvePoint&) const = default;
};

/// Purchase counts after `step` trials.
struct Snapshot {
  std::int64_t step = 0;
  std::vector<std::int64_t> downloads;

  bool operator==(const Snapshot&) const = default;
};

struct WorldTrace {
  std::int64_t world_id = 1;  // 1-based
  std::vector<std::int64_t> final_downloads;
  std::vector<CurvePoint> download_curve;
  std::vector<Snapshot> snapshots;
  std::vector<TrialEvent> events;

  bool operator==(const WorldTrace&) const = default;
};

struct ExperimentResult {
  SimulationConfig config;
  std::uint64_t config_digest = 0;
  std::vector<WorldTrace> worlds;
  double wall_seconds = 0.0;
};

/// One trial: draws the tried product with one uniform (inverse CDF) and the
/// purchase with a second uniform, then updates the state.
TrialEvent step(MarketState& state, const Ranking& ranking, const ProductCatalog& catalog,
                const VisibilityProfile& vis, Condition condition, Rng& rng);

/// Runs world `world_index` (1-based) of the configuration.
WorldTrace run_world(const SimulationConfig& config, std::int64_t world_index);

/// All worlds, spread over OpenMP threads (threads = 0: runtime default).
ExperimentResult run_experiment(const SimulationConfig& config, int threads = 0);

/// All worlds on the calling thread, in index order. Reference for
/// run_experiment.
ExperimentResult run_experiment_serial(const SimulationConfig& config);

/// Worlds in the given order (1-based ids); traces are still stored by id.
ExperimentResult run_experiment_in_order(const SimulationConfig& config,
                                         std::span<const std::int64_t> order);

}  // namespace trialoffer
