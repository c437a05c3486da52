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

// trialoffer simulate | compare | verify
//
// Exit status: 0 success, 1 verification failure, 2 usage or config error.

#include <chrono>
#include <cstdint>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "trialoffer/analysis.hpp"
#include "trialoffer/errors.hpp"
#include "trialoffer/report.hpp"
#include "trialoffer/scenario.hpp"
#include "trialoffer/simulator.hpp"
#include "trialoffer/verify.hpp"

namespace fs = std::filesystem;
using namespace trialoffer;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitVerifyFailed = 1;
constexpr int kExitUsage = 2;

struct Options {
  std::string config_path;
  std::string out_dir = ".";
  std::string policies;
  std::string suite;
  std::optional<std::uint64_t> seed;
  std::optional<std::int64_t> worlds;
  std::optional<std::int64_t> steps;
  int threads = 0;
};

std::string utc_now() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot read config file " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return text.str();
}

void write_file(const fs::path& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw UsageError("cannot write " + path.string());
  out << bytes;
  if (!out) throw UsageError("failed writing " + path.string());
}

ExperimentConfig load_with_overrides(const Options& opt, const std::string& bytes) {
  ExperimentConfig cfg = parse_config(bytes);
  if (opt.worlds) cfg.worlds = *opt.worlds;
  if (opt.steps) cfg.steps = *opt.steps;
  if (opt.seed) cfg.master_seed = *opt.seed;
  return cfg;
}

struct Manifest {
  std::string command;
  std::string config_bytes;
  std::string started;
  std::vector<std::string> outputs;
  std::vector<std::uint64_t> simulation_digests;
  const Options* opt = nullptr;

  void write(const fs::path& dir) {
    nlohmann::json j;
    j["tool"] = "trialoffer";
    j["tool_version"] = std::string(report::kToolVersion);
    j["command"] = command;
    j["config_digest"] = report::content_digest(config_bytes);
    std::vector<std::string> digests;
    for (auto d : simulation_digests) {
      char buf[17];
      std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(d));
      digests.emplace_back(buf);
    }
    j["simulation_digests"] = digests;
    j["started_at"] = started;
    j["finished_at"] = utc_now();
    j["threads"] = opt->threads;
    nlohmann::json overrides = nlohmann::json::object();
    if (opt->worlds) overrides["worlds"] = *opt->worlds;
    if (opt->steps) overrides["steps"] = *opt->steps;
    if (opt->seed) overrides["master_seed"] = *opt->seed;
    j["overrides"] = overrides;
    j["outputs"] = outputs;
    write_file(dir / "manifest.json", j.dump(2) + "\n");
  }
};

void log_run(const ExperimentResult& r) {
  const auto& cfg = r.config;
  std::cerr << "ran " << cfg.worlds << " worlds x " << cfg.steps << " steps, policy "
            << to_string(cfg.schedule.kind) << '(' << to_string(cfg.schedule.condition)
            << ") in " << r.wall_seconds << " s\n";
}

int cmd_simulate(const Options& opt) {
  Manifest manifest{"simulate", read_file(opt.config_path), utc_now(), {}, {}, &opt};
  const auto sim = load_with_overrides(opt, manifest.config_bytes).resolve();
  const fs::path out(opt.out_dir);
  fs::create_directories(out);

  const auto result = run_experiment(sim, opt.threads);
  log_run(result);
  manifest.simulation_digests.push_back(result.config_digest);

  std::ostringstream curve;
  report::write_downloads_curve(curve, mean_download_curve(result));
  write_file(out / "downloads_curve.csv", curve.str());
  std::ostringstream finals;
  report::write_final_downloads(finals, result);
  write_file(out / "final_downloads.csv", finals.str());
  manifest.outputs = {"downloads_curve.csv", "final_downloads.csv", "manifest.json"};
  manifest.write(out);
  return kExitOk;
}

std::vector<std::pair<PolicyKind, Condition>> parse_pairs(const std::string& list,
                                                          Condition fallback) {
  std::vector<std::pair<PolicyKind, Condition>> pairs;
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    const auto colon = item.find(':');
    const PolicyKind kind = parse_policy(item.substr(0, colon));
    const Condition cond =
        colon == std::string::npos ? fallback : parse_condition(item.substr(colon + 1));
    pairs.emplace_back(kind, cond);
  }
  return pairs;
}

int cmd_compare(const Options& opt) {
  Manifest manifest{"compare", read_file(opt.config_path), utc_now(), {}, {}, &opt};
  const ExperimentConfig base = load_with_overrides(opt, manifest.config_bytes);
  const auto pairs = parse_pairs(opt.policies, base.condition);
  if (pairs.size() < 2) {
    throw UsageError("compare needs at least two policy/condition pairs, e.g. "
                     "--policies quality:SI,quality:IN");
  }
  const fs::path out(opt.out_dir);
  fs::create_directories(out);

  std::vector<ExperimentResult> results;
  for (const auto& [kind, cond] : pairs) {
    ExperimentConfig cfg = base;
    cfg.policy = kind;
    cfg.condition = cond;
    results.push_back(run_experiment(cfg.resolve(), opt.threads));
    log_run(results.back());
    manifest.simulation_digests.push_back(results.back().config_digest);
  }

  std::ostringstream curves, finals, predict, table;
  report::write_curves_header(curves);
  report::write_final_by_policy_header(finals);
  report::write_predictability_header(predict);
  for (const auto& r : results) {
    const auto& s = r.config.schedule;
    report::write_curves_rows(curves, s.kind, s.condition, mean_download_curve(r));
    report::write_final_by_policy_rows(finals, r);
    if (r.worlds.size() >= 2) {
      report::write_predictability_row(predict, s.kind, s.condition, predictability_report(r));
    }
  }
  report::write_efficiency_table(table, efficiency_table(results));
  write_file(out / "downloads_curves.csv", curves.str());
  write_file(out / "final_downloads_by_policy.csv", finals.str());
  write_file(out / "predictability.csv", predict.str());
  write_file(out / "efficiency_table.csv", table.str());
  manifest.outputs = {"downloads_curves.csv", "final_downloads_by_policy.csv",
                      "predictability.csv", "efficiency_table.csv", "manifest.json"};
  manifest.write(out);
  return kExitOk;
}

int cmd_verify(const Options& opt) {
  std::vector<std::string> suites;
  if (opt.suite == "all") {
    for (auto s : suite_names()) suites.emplace_back(s);
  } else {
    suites.push_back(opt.suite);
  }
  const std::uint64_t seed = opt.seed.value_or(1);
  bool all_passed = true;
  nlohmann::json reports = nlohmann::json::array();
  for (const auto& name : suites) {
    const SuiteReport r = run_suite(name, seed, opt.threads);
    std::cout << r.to_json() << '\n';
    reports.push_back(nlohmann::json::parse(r.to_json()));
    all_passed = all_passed && r.passed();
  }
  if (!opt.out_dir.empty()) {
    const fs::path out(opt.out_dir);
    fs::create_directories(out);
    write_file(out / ("verify_" + opt.suite + ".json"), reports.dump(2) + "\n");
  }
  return all_passed ? kExitOk : kExitVerifyFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Trial-offer market simulation and ranking-policy toolkit"};
  app.require_subcommand(1);
  Options opt;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--out", opt.out_dir, "Output directory");
    sub->add_option("--threads", opt.threads, "Worker threads (0 = auto)")->check(CLI::NonNegativeNumber);
    sub->add_option("--seed", opt.seed, "Master seed (overrides the config)");
  };

  auto* simulate = app.add_subcommand("simulate", "Run one configured experiment");
  simulate->add_option("--config", opt.config_path, "Configuration file")->required();
  simulate->add_option("--worlds", opt.worlds, "Override the number of worlds");
  simulate->add_option("--steps", opt.steps, "Override the number of steps");
  add_common(simulate);

  auto* compare = app.add_subcommand("compare", "Run several policies on one configuration");
  compare->add_option("--config", opt.config_path, "Configuration file")->required();
  compare->add_option("--policies", opt.policies,
                      "Comma-separated policy[:SI|IN] list, e.g. quality:SI,random:SI")
      ->required();
  compare->add_option("--worlds", opt.worlds, "Override the number of worlds");
  compare->add_option("--steps", opt.steps, "Override the number of steps");
  add_common(compare);

  auto* verify = app.add_subcommand("verify", "Run a verification suite");
  std::vector<std::string> choices{"all"};
  for (auto s : suite_names()) choices.emplace_back(s);
  verify->add_option("--suite", opt.suite, "Suite name")
      ->required()
      ->check(CLI::IsMember(choices));
  add_common(verify);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*simulate) return cmd_simulate(opt);
    if (*compare) return cmd_compare(opt);
    return cmd_verify(opt);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
}
