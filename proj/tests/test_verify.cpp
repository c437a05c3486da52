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

#include "doctest.h"
#include "json.hpp"
#include "trialoffer/errors.hpp"
#include "trialoffer/verify.hpp"

using namespace trialoffer;

TEST_CASE("deterministic suites pass") {
  for (const char* name : {"example1", "theorem1", "theorem2", "alpha-bound", "dinkelbach-oracle",
                           "monopoly"}) {
    const auto r = run_suite(name, 1);
    INFO(r.to_json());
    CHECK(r.passed());
    CHECK(r.checks > 0);
    CHECK(r.suite == name);
  }
}

TEST_CASE("suite sizes") {
  CHECK(run_suite("theorem1", 1).checks == 11000);
  CHECK(run_suite("theorem2", 1).checks == 10000);
  CHECK(run_suite("dinkelbach-oracle", 1).checks == 200);
  CHECK(run_suite("alpha-bound", 1).checks == 10001);
}

TEST_CASE("reports are machine readable") {
  const auto r = run_suite("example1", 7);
  const auto j = nlohmann::json::parse(r.to_json());
  CHECK(j.at("suite") == "example1");
  CHECK(j.at("seed") == 7);
  CHECK(j.at("checks") == r.checks);
  CHECK(j.at("failures") == 0);
  CHECK(j.at("tolerance") == 5e-4);
  CHECK(j.at("passed") == true);
  CHECK(r.to_json().find('\n') == std::string::npos);
}

TEST_CASE("statistical suites report their evidence") {
  const auto lemma = run_suite("lemma1", 1);
  CHECK(lemma.checks >= 40);
  CHECK(lemma.tolerance == 3.0);
  // Same seed, same report.
  CHECK(run_suite("lemma1", 1).failures == lemma.failures);
}

TEST_CASE("suite registry") {
  CHECK(suite_names().size() == 8);
  CHECK_THROWS_AS(run_suite("theorem9", 1), UsageError);
}
