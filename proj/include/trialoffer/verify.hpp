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

// Named verification suites for the model's theoretical properties.
//
//   example1           worked three-product instance, every quoted number
//   theorem1           position bias helps the quality ranking
//   theorem2           expected purchases never drop under quality ranking
//   lemma1             next-purchase distribution vs Monte Carlo
//   monopoly           two-product market locks in on the better product
//   beta               equal-quality market share follows the beta limit
//   alpha-bound        quality ranking within v_1/v_n of the optimum, tight
//   dinkelbach-oracle  performance ranking vs exhaustive search

#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace trialoffer {

struct SuiteReport {
  std::string suite;
  std::uint64_t seed = 0;
  std::int64_t checks = 0;
  std::int64_t failures = 0;
  double tolerance = 0.0;
  /// First few failure descriptions, plus informational notes.
  std::vector<std::string> messages;
  double seconds = 0.0;

  bool passed() const noexcept { return failures == 0 && checks > 0; }
  /// Single-line JSON object.
  std::string to_json() const;
};

const std::vector<std::string_view>& suite_names();

/// Throws UsageError for an unknown suite name.
SuiteReport run_suite(std::string_view name, std::uint64_t seed, int threads = 0);

}  // namespace trialoffer
