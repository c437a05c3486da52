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

// Exact finite-horizon values of small social-influence markets.
//
//   u_t(d) = max_sigma sum_i p_i(sigma, d) (q_i (1 + u_{t+1}(d + e_i))
//                                          + (1 - q_i) u_{t+1}(d))
//   u_{T+1}(d) = 0
//
// optimal_value() solves the recurrence with a full permutation search per
// state; policy_value() replaces the max by the ranking a fixed policy shows.

#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "trialoffer/market.hpp"
#include "trialoffer/policies.hpp"

namespace trialoffer {

struct HorizonSpec {
  std::int64_t horizon = 1;
  /// Record u_t(d) for every visited (t, d).
  bool keep_state_values = false;

  /// Largest number of purchases a state can hold.
  std::int64_t max_state_bound() const noexcept { return horizon; }
};

struct StateKey {
  std::int64_t step = 1;  // t, 1-based
  std::vector<std::int64_t> downloads;

  auto operator<=>(const StateKey&) const = default;
};

struct ValueReport {
  double value = 0.0;
  std::map<StateKey, double> state_values;
};

/// Optimal expected purchases over the horizon, starting from zero
/// purchases. Requires n <= 6 and (T + 1)^n <= 1e7; throws SizeError.
ValueReport optimal_value(const ProductCatalog& catalog, const VisibilityProfile& vis,
                          const HorizonSpec& spec);

/// Exact expected purchases of a scheduled policy over the horizon.
/// Random policies average over all n! lists at each refresh (n <= 8).
ValueReport policy_value(const PolicySchedule& schedule, const ProductCatalog& catalog,
                         const VisibilityProfile& vis, const HorizonSpec& spec);

}  // namespace trialoffer
