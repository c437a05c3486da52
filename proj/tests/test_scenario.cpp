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

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>

#include "doctest.h"
#include "json.hpp"
#include "trialoffer/errors.hpp"
#include "trialoffer/scenario.hpp"

using namespace trialoffer;

namespace {

std::string error_of(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ParseError& e) {
    return e.what();
  }
  return {};
}

nlohmann::json default_json() { return nlohmann::json::parse(dump_config(default_experiment_config())); }

}  // namespace

TEST_CASE("default visibility profile") {
  const auto vis = musiclab_visibility({});
  REQUIRE(vis.size() == 50);
  const auto v = vis.values();
  CHECK(v[0] == doctest::Approx(0.8).epsilon(1e-15));
  CHECK(*std::min_element(v.begin(), v.end()) == doctest::Approx(0.2).epsilon(1e-15));
  CHECK(vis.spread() == doctest::Approx(4.0).epsilon(1e-14));
  for (std::size_t p = 1; p < 47; ++p) CHECK(v[p] < v[p - 1]);
  CHECK(v[46] == doctest::Approx(0.2).epsilon(1e-15));
  for (std::size_t p = 47; p < 50; ++p) {
    CHECK(v[p] > v[p - 1]);
    CHECK(v[p] < v[20]);
  }
  CHECK(v[49] == doctest::Approx(0.25));
  CHECK_FALSE(vis.is_monotone());
}

TEST_CASE("visibility variants") {
  VisibilitySpec flat_tail;
  flat_tail.uptick_count = 0;
  const auto flat_vis = musiclab_visibility(flat_tail);
  const auto v = flat_vis.values();
  for (std::size_t p = 1; p < v.size(); ++p) CHECK(v[p] < v[p - 1]);
  CHECK(v.back() == doctest::Approx(0.2));

  VisibilitySpec two;
  two.n = 2;
  const auto two_vis = musiclab_visibility(two);
  const auto v2 = two_vis.values();
  CHECK(v2[0] == doctest::Approx(0.8));
  CHECK(v2[1] == doctest::Approx(0.2));

  VisibilitySpec bad;
  bad.v_min = 0.9;
  CHECK_THROWS_AS(musiclab_visibility(bad), UsageError);
  bad = VisibilitySpec{};
  bad.n = 1;
  CHECK_THROWS_AS(musiclab_visibility(bad), UsageError);
  bad = VisibilitySpec{};
  bad.v_min = 0.0;
  CHECK_THROWS_AS(musiclab_visibility(bad), UsageError);
}

TEST_CASE("setting generators") {
  for (auto kind : {SettingKind::GaussianIndependent, SettingKind::GaussianAnticorrelated,
                    SettingKind::UniformIndependent, SettingKind::UniformAnticorrelated}) {
    CHECK(parse_setting(to_string(kind)) == kind);
    const auto g = setting_catalog(kind, 50, 7);
    CHECK(g.catalog == setting_catalog(kind, 50, 7).catalog);
    CHECK(g.catalog != setting_catalog(kind, 50, 8).catalog);
    for (std::size_t i = 0; i < 50; ++i) {
      CHECK(g.catalog.quality(i) >= kSettingFloor);
      CHECK(g.catalog.quality(i) <= 1.0);
      CHECK(g.catalog.appeal(i) >= kSettingFloor);
      CHECK(g.catalog.appeal(i) <= 1.0);
    }
  }
  CHECK(parse_setting("2") == SettingKind::GaussianAnticorrelated);
  CHECK_THROWS_AS(parse_setting("5"), UsageError);

  // Gaussian batches are min-max normalized: both ends are hit.
  const auto gauss = setting_catalog(SettingKind::GaussianIndependent, 50, 3).catalog;
  const auto q = gauss.qualities();
  CHECK(*std::min_element(q.begin(), q.end()) == doctest::Approx(kSettingFloor));
  CHECK(*std::max_element(q.begin(), q.end()) == doctest::Approx(1.0));

  // Anticorrelated variants keep the independent qualities.
  for (auto [ind, anti] : {std::pair{SettingKind::GaussianIndependent, SettingKind::GaussianAnticorrelated},
                           std::pair{SettingKind::UniformIndependent, SettingKind::UniformAnticorrelated}}) {
    const auto a = setting_catalog(anti, 200, 11);
    const auto i = setting_catalog(ind, 200, 11);
    std::size_t clamped = 0;
    for (std::size_t k = 0; k < 200; ++k) {
      CHECK(a.catalog.quality(k) == i.catalog.quality(k));
      const double sum = a.catalog.quality(k) + a.catalog.appeal(k);
      if (std::fabs(sum - 1.0) > 1e-12) {
        ++clamped;
        CHECK(a.catalog.appeal(k) == kSettingFloor);
      }
      CHECK(std::fabs(sum - 1.0) <= kSettingFloor + 1e-12);
    }
    CHECK(a.clamped == clamped);
    CHECK(i.clamped == 0);
  }
}

TEST_CASE("config round trip") {
  ExperimentConfig c = default_experiment_config();
  CHECK(parse_config(dump_config(c)) == c);

  c.master_seed = std::numeric_limits<std::uint64_t>::max();
  c.setting_seed = 0xfedcba9876543210ULL;
  c.product_count.reset();
  c.qualities = {0.1, 0.30000000000000004, 1.0 / 3.0};
  c.appeals = {1e-300, 2.5, 7.0};
  c.visibility_spec.reset();
  c.visibility = {0.9, 0.5, 0.1};
  c.policy = PolicyKind::Performance;
  c.condition = Condition::Independent;
  c.refresh_rate = 17;
  c.initial_shuffle = true;
  c.granularity = TraceGranularity::Full;
  c.curve_interval = 3;
  CHECK(parse_config(dump_config(c)) == c);

  const auto path = std::filesystem::temp_directory_path() / "trialoffer_roundtrip.json";
  save_config(c, path);
  CHECK(load_config(path) == c);
  std::filesystem::remove(path);
  CHECK_THROWS_AS(load_config(path), ParseError);
}

TEST_CASE("resolve builds the simulation config") {
  const auto sim = default_experiment_config().resolve();
  CHECK(sim.catalog.size() == 50);
  CHECK(sim.visibility == musiclab_visibility({}));
  CHECK(sim.steps == 20000);

  ExperimentConfig c = default_experiment_config();
  c.product_count = 10;  // visibility spec still says 50
  CHECK_THROWS(c.resolve());
}

TEST_CASE("strict config parsing") {
  auto j = default_json();
  j.erase("steps");
  CHECK(error_of(j.dump()).find("'steps'") != std::string::npos);

  j = default_json();
  j["colour"] = "blue";
  CHECK(error_of(j.dump()).find("'colour'") != std::string::npos);

  j = default_json();
  j["worlds"] = "many";
  CHECK(error_of(j.dump()).find("'worlds'") != std::string::npos);

  j = default_json();
  j["policy"] = "greedy";
  CHECK(error_of(j.dump()).find("'policy'") != std::string::npos);

  j = default_json();
  j["master_seed"] = -1;
  CHECK(error_of(j.dump()).find("'master_seed'") != std::string::npos);

  j = default_json();
  j.erase("setting");
  CHECK(error_of(j.dump()).find("'setting'") != std::string::npos);

  const std::string broken = "{\n  \"steps\": 10,\n  oops\n}";
  const auto msg = error_of(broken);
  CHECK(msg.find("line 3") != std::string::npos);
}
