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

#include "trialoffer/report.hpp"

#include <cstdio>

namespace trialoffer::report {

std::string format_real(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void write_downloads_curve(std::ostream& out, std::span<const CurveStat> curve) {
  out << "step,mean_cumulative_downloads,stderr\n";
  for (const auto& c : curve) {
    out << c.step << ',' << format_real(c.mean) << ',' << format_real(c.std_error) << '\n';
  }
}

void write_final_downloads(std::ostream& out, const ExperimentResult& result) {
  out << "world_id,song_id,quality,downloads\n";
  const auto& catalog = result.config.catalog;
  for (const auto& w : result.worlds) {
    for (std::size_t i = 0; i < w.final_downloads.size(); ++i) {
      out << w.world_id << ',' << i + 1 << ',' << format_real(catalog.quality(i)) << ','
          << w.final_downloads[i] << '\n';
    }
  }
}

void write_curves_header(std::ostream& out) {
  out << "policy,condition,step,mean_cumulative_downloads,stderr\n";
}

void write_curves_rows(std::ostream& out, PolicyKind policy, Condition condition,
                       std::span<const CurveStat> curve) {
  for (const auto& c : curve) {
    out << to_string(policy) << ',' << to_string(condition) << ',' << c.step << ','
        << format_real(c.mean) << ',' << format_real(c.std_error) << '\n';
  }
}

void write_final_by_policy_header(std::ostream& out) {
  out << "policy,condition,world_id,song_id,quality,downloads\n";
}

void write_final_by_policy_rows(std::ostream& out, const ExperimentResult& result) {
  const auto& cfg = result.config;
  for (const auto& w : result.worlds) {
    for (std::size_t i = 0; i < w.final_downloads.size(); ++i) {
      out << to_string(cfg.schedule.kind) << ',' << to_string(cfg.schedule.condition) << ','
          << w.world_id << ',' << i + 1 << ',' << format_real(cfg.catalog.quality(i)) << ','
          << w.final_downloads[i] << '\n';
    }
  }
}

void write_efficiency_table(std::ostream& out, std::span<const EfficiencyRow> rows) {
  out << "policy,condition,downloads_per_trial,stderr\n";
  for (const auto& r : rows) {
    out << to_string(r.policy) << ',' << to_string(r.condition) << ','
        << format_real(r.downloads_per_trial) << ',' << format_real(r.std_error) << '\n';
  }
}

void write_predictability_header(std::ostream& out) {
  out << "policy,condition,top_win_rate,unpredictability\n";
}

void write_predictability_row(std::ostream& out, PolicyKind policy, Condition condition,
                              const PredictabilityReport& report) {
  out << to_string(policy) << ',' << to_string(condition) << ','
      << format_real(report.top_win_rate) << ',' << format_real(report.unpredictability)
      << '\n';
}

std::string content_digest(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace trialoffer::report
