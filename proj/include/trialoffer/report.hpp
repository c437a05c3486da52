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

// CSV tables written by the command-line tool. Every table has a header
// row, ids are 1-based and reals carry 17 significant digits.
//
//   downloads_curve.csv   step,mean_cumulative_downloads,stderr
//   final_downloads.csv   world_id,song_id,quality,downloads
//   downloads_curves.csv  policy,condition,step,mean_cumulative_downloads,stderr
//   final_downloads_by_policy.csv
//                         policy,condition,world_id,song_id,quality,downloads
//   efficiency_table.csv  policy,condition,downloads_per_trial,stderr
//   predictability.csv    policy,condition,top_win_rate,unpredictability

#pragma once

#include <cstdint>
#include <ostream>
#include <span>
#include <string>

#include "trialoffer/analysis.hpp"
#include "trialoffer/simulator.hpp"

namespace trialoffer::report {

inline constexpr std::string_view kToolVersion = "1.0.0";

std::string format_real(double x);

void write_downloads_curve(std::ostream& out, std::span<const CurveStat> curve);
void write_final_downloads(std::ostream& out, const ExperimentResult& result);

void write_curves_header(std::ostream& out);
void write_curves_rows(std::ostream& out, PolicyKind policy, Condition condition,
                       std::span<const CurveStat> curve);

void write_final_by_policy_header(std::ostream& out);
void write_final_by_policy_rows(std::ostream& out, const ExperimentResult& result);

void write_efficiency_table(std::ostream& out, std::span<const EfficiencyRow> rows);

void write_predictability_header(std::ostream& out);
void write_predictability_row(std::ostream& out, PolicyKind policy, Condition condition,
                              const PredictabilityReport& report);

/// FNV-1a of raw bytes, as 16 lowercase hex digits.
std::string content_digest(std::string_view bytes);

}  // namespace trialoffer::report
