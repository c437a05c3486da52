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

#include "trialoffer/scenario.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <initializer_list>
#include <random>
#include <sstream>

#include "json.hpp"
#include "trialoffer/errors.hpp"

namespace trialoffer {

using nlohmann::json;

void VisibilitySpec::validate() const {
  if (n < 2) throw UsageError("visibility profile needs n >= 2");
  if (!(v_min > 0.0) || !(v_max >= v_min)) throw UsageError("need v_max >= v_min > 0");
  if (uptick_gain < 0.0) throw UsageError("uptick_gain must be non-negative");
  if (uptick_count > 0 && n > 2 && v_min + uptick_gain >= v_max) {
    throw UsageError("uptick rises above the top visibility");
  }
}

VisibilityProfile musiclab_visibility(const VisibilitySpec& spec) {
  spec.validate();
  // At least two decreasing positions; short lists drop the uptick.
  const std::size_t uptick = std::min(spec.uptick_count, spec.n - 2);
  const std::size_t m = spec.n - uptick;
  const double tau = spec.decay_tau > 0.0 ? spec.decay_tau : static_cast<double>(spec.n) / 5.0;
  const double tail = std::exp(-static_cast<double>(m - 1) / tau);
  std::vector<double> v(spec.n);
  v[0] = spec.v_max;
  v[m - 1] = spec.v_min;
  for (std::size_t p = 1; p + 1 < m; ++p) {
    const double shape = (std::exp(-static_cast<double>(p) / tau) - tail) / (1.0 - tail);
    v[p] = spec.v_min + (spec.v_max - spec.v_min) * shape;
  }
  for (std::size_t k = 1; k <= uptick; ++k) {
    v[m - 1 + k] =
        spec.v_min + spec.uptick_gain * static_cast<double>(k) / static_cast<double>(uptick);
  }
  return VisibilityProfile(std::move(v));
}

std::string_view to_string(SettingKind kind) noexcept {
  switch (kind) {
    case SettingKind::GaussianIndependent: return "gaussian-independent";
    case SettingKind::GaussianAnticorrelated: return "gaussian-anticorrelated";
    case SettingKind::UniformIndependent: return "uniform-independent";
    case SettingKind::UniformAnticorrelated: return "uniform-anticorrelated";
  }
  return "?";
}

SettingKind parse_setting(std::string_view text) {
  std::string t(text);
  std::transform(t.begin(), t.end(), t.begin(), [](unsigned char ch) { return std::tolower(ch); });
  for (auto kind : {SettingKind::GaussianIndependent, SettingKind::GaussianAnticorrelated,
                    SettingKind::UniformIndependent, SettingKind::UniformAnticorrelated}) {
    if (t == to_string(kind)) return kind;
  }
  if (t == "1") return SettingKind::GaussianIndependent;
  if (t == "2") return SettingKind::GaussianAnticorrelated;
  if (t == "3") return SettingKind::UniformIndependent;
  if (t == "4") return SettingKind::UniformAnticorrelated;
  throw UsageError("unknown setting '" + std::string(text) + "'");
}

namespace {

constexpr double kGaussianMean = 0.5;
constexpr double kGaussianSd = 0.2;

std::vector<double> gaussian_normalized(std::size_t n, Rng& rng) {
  std::normal_distribution<double> normal(kGaussianMean, kGaussianSd);
  std::vector<double> x(n);
  for (auto& xi : x) xi = normal(rng);
  const auto [lo, hi] = std::minmax_element(x.begin(), x.end());
  const double min = *lo;
  const double range = *hi - *lo;
  for (auto& xi : x) {
    xi = range > 0.0 ? kSettingFloor + (1.0 - kSettingFloor) * (xi - min) / range
                     : std::clamp(xi, kSettingFloor, 1.0);
  }
  return x;
}

std::vector<double> uniform_draws(std::size_t n, Rng& rng) {
  std::vector<double> x(n);
  for (auto& xi : x) xi = kSettingFloor + (1.0 - kSettingFloor) * rng.uniform();
  return x;
}

}  // namespace

GeneratedCatalog setting_catalog(SettingKind kind, std::size_t n, Rng& rng) {
  if (n == 0) throw UsageError("setting catalog needs n >= 1");
  const bool gaussian = kind == SettingKind::GaussianIndependent ||
                        kind == SettingKind::GaussianAnticorrelated;
  auto draw = [&] { return gaussian ? gaussian_normalized(n, rng) : uniform_draws(n, rng); };
  std::vector<double> q = draw();
  std::vector<double> a = draw();
  std::size_t clamped = 0;
  if (kind == SettingKind::GaussianAnticorrelated || kind == SettingKind::UniformAnticorrelated) {
    for (std::size_t i = 0; i < n; ++i) {
      a[i] = 1.0 - q[i];
      if (a[i] < kSettingFloor) {
        a[i] = kSettingFloor;
        ++clamped;
      }
    }
  }
  return {ProductCatalog(std::move(q), std::move(a)), clamped};
}

GeneratedCatalog setting_catalog(SettingKind kind, std::size_t n, std::uint64_t seed) {
  Rng rng = Rng::for_world(seed, 0, Stream::Setting);
  return setting_catalog(kind, n, rng);
}

SimulationConfig ExperimentConfig::resolve() const {
  ProductCatalog catalog = product_count
                               ? setting_catalog(setting, *product_count, setting_seed).catalog
                               : ProductCatalog(qualities, appeals);
  VisibilityProfile vis = visibility_spec ? musiclab_visibility(*visibility_spec)
                                          : VisibilityProfile(visibility);
  SimulationConfig out{std::move(catalog),
                       std::move(vis),
                       PolicySchedule{policy, condition, refresh_rate, initial_shuffle},
                       steps,
                       worlds,
                       master_seed,
                       granularity,
                       curve_interval};
  out.validate();
  return out;
}

ExperimentConfig default_experiment_config() {
  ExperimentConfig c;
  c.product_count = 50;
  c.visibility_spec = VisibilitySpec{};
  return c;
}

namespace {

[[noreturn]] void field_error(const std::string& field, const std::string& what) {
  throw ParseError("config field '" + field + "': " + what);
}

void reject_unknown(const json& obj, const std::string& where,
                    std::initializer_list<std::string_view> allowed) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (std::find(allowed.begin(), allowed.end(), it.key()) == allowed.end()) {
      field_error(where.empty() ? it.key() : where + "." + it.key(), "unknown field");
    }
  }
}

const json& require(const json& obj, const std::string& where, const std::string& key) {
  const auto it = obj.find(key);
  const std::string name = where.empty() ? key : where + "." + key;
  if (it == obj.end()) field_error(name, "missing required field");
  return *it;
}

const json& require_object(const json& obj, const std::string& where, const std::string& key) {
  const json& v = require(obj, where, key);
  if (!v.is_object()) field_error(where.empty() ? key : where + "." + key, "expected an object");
  return v;
}

double as_real(const json& v, const std::string& name) {
  if (!v.is_number()) field_error(name, "expected a number");
  return v.get<double>();
}

std::int64_t as_int(const json& v, const std::string& name) {
  if (!v.is_number_integer()) field_error(name, "expected an integer");
  return v.get<std::int64_t>();
}

std::uint64_t as_u64(const json& v, const std::string& name) {
  if (!v.is_number_unsigned()) field_error(name, "expected an unsigned 64-bit integer");
  return v.get<std::uint64_t>();
}

std::string as_string(const json& v, const std::string& name) {
  if (!v.is_string()) field_error(name, "expected a string");
  return v.get<std::string>();
}

bool as_bool(const json& v, const std::string& name) {
  if (!v.is_boolean()) field_error(name, "expected true or false");
  return v.get<bool>();
}

std::vector<double> as_reals(const json& v, const std::string& name) {
  if (!v.is_array()) field_error(name, "expected an array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    out.push_back(as_real(v[i], name + "[" + std::to_string(i) + "]"));
  }
  return out;
}

template <class F>
auto parse_enum(const json& v, const std::string& name, F&& parse) {
  const std::string text = as_string(v, name);
  try {
    return parse(text);
  } catch (const UsageError& e) {
    field_error(name, e.what());
  }
}

}  // namespace

ExperimentConfig parse_config(std::string_view json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("malformed config: ") + e.what());
  }
  if (!root.is_object()) throw ParseError("config must be a JSON object");
  reject_unknown(root, "",
                 {"products", "setting", "visibility", "policy", "condition", "refresh_rate",
                  "initial_shuffle", "steps", "worlds", "master_seed", "trace_granularity",
                  "curve_interval"});

  ExperimentConfig c;
  const json& products = require_object(root, "", "products");
  if (products.contains("n")) {
    reject_unknown(products, "products", {"n"});
    const auto n = as_int(products["n"], "products.n");
    if (n < 1) field_error("products.n", "must be >= 1");
    c.product_count = static_cast<std::size_t>(n);
    const json& setting = require_object(root, "", "setting");
    reject_unknown(setting, "setting", {"kind", "seed"});
    c.setting = parse_enum(require(setting, "setting", "kind"), "setting.kind",
                           [](const std::string& s) { return parse_setting(s); });
    c.setting_seed = as_u64(require(setting, "setting", "seed"), "setting.seed");
  } else {
    reject_unknown(products, "products", {"q", "A"});
    c.qualities = as_reals(require(products, "products", "q"), "products.q");
    c.appeals = as_reals(require(products, "products", "A"), "products.A");
    if (c.qualities.size() != c.appeals.size()) {
      field_error("products.A", "length differs from products.q");
    }
    if (root.contains("setting")) {
      const json& setting = require_object(root, "", "setting");
      reject_unknown(setting, "setting", {"kind", "seed"});
      if (setting.contains("kind")) {
        c.setting = parse_enum(setting["kind"], "setting.kind",
                               [](const std::string& s) { return parse_setting(s); });
      }
      if (setting.contains("seed")) c.setting_seed = as_u64(setting["seed"], "setting.seed");
    }
  }

  const json& visibility = require_object(root, "", "visibility");
  if (visibility.contains("v")) {
    reject_unknown(visibility, "visibility", {"v"});
    c.visibility = as_reals(visibility["v"], "visibility.v");
  } else {
    reject_unknown(visibility, "visibility", {"spec"});
    const json& spec = require_object(visibility, "visibility", "spec");
    reject_unknown(spec, "visibility.spec",
                   {"n", "v_max", "v_min", "decay_tau", "uptick_count", "uptick_gain"});
    VisibilitySpec vs;
    const std::size_t products_n =
        c.product_count ? *c.product_count : c.qualities.size();
    vs.n = products_n;
    if (spec.contains("n")) {
      const auto n = as_int(spec["n"], "visibility.spec.n");
      if (n < 0 || static_cast<std::size_t>(n) != products_n) {
        field_error("visibility.spec.n", "must equal the number of products");
      }
    }
    if (spec.contains("v_max")) vs.v_max = as_real(spec["v_max"], "visibility.spec.v_max");
    if (spec.contains("v_min")) vs.v_min = as_real(spec["v_min"], "visibility.spec.v_min");
    if (spec.contains("decay_tau")) {
      vs.decay_tau = as_real(spec["decay_tau"], "visibility.spec.decay_tau");
    }
    if (spec.contains("uptick_count")) {
      const auto u = as_int(spec["uptick_count"], "visibility.spec.uptick_count");
      if (u < 0) field_error("visibility.spec.uptick_count", "must be >= 0");
      vs.uptick_count = static_cast<std::size_t>(u);
    }
    if (spec.contains("uptick_gain")) {
      vs.uptick_gain = as_real(spec["uptick_gain"], "visibility.spec.uptick_gain");
    }
    c.visibility_spec = vs;
  }

  c.policy = parse_enum(require(root, "", "policy"), "policy",
                        [](const std::string& s) { return parse_policy(s); });
  c.condition = parse_enum(require(root, "", "condition"), "condition",
                           [](const std::string& s) { return parse_condition(s); });
  c.refresh_rate = as_int(require(root, "", "refresh_rate"), "refresh_rate");
  if (c.refresh_rate < 1) field_error("refresh_rate", "must be >= 1");
  c.steps = as_int(require(root, "", "steps"), "steps");
  if (c.steps < 1) field_error("steps", "must be >= 1");
  c.worlds = as_int(require(root, "", "worlds"), "worlds");
  if (c.worlds < 1) field_error("worlds", "must be >= 1");
  c.master_seed = as_u64(require(root, "", "master_seed"), "master_seed");
  c.granularity = parse_enum(require(root, "", "trace_granularity"), "trace_granularity",
                             [](const std::string& s) { return parse_granularity(s); });
  if (root.contains("initial_shuffle")) {
    c.initial_shuffle = as_bool(root["initial_shuffle"], "initial_shuffle");
  }
  if (root.contains("curve_interval")) {
    c.curve_interval = as_int(root["curve_interval"], "curve_interval");
    if (c.curve_interval < 1) field_error("curve_interval", "must be >= 1");
  }
  return c;
}

std::string dump_config(const ExperimentConfig& c) {
  json root = json::object();
  if (c.product_count) {
    root["products"] = {{"n", *c.product_count}};
  } else {
    root["products"] = {{"q", c.qualities}, {"A", c.appeals}};
  }
  root["setting"] = {{"kind", std::string(to_string(c.setting))}, {"seed", c.setting_seed}};
  if (c.visibility_spec) {
    const auto& s = *c.visibility_spec;
    root["visibility"] = {{"spec",
                           {{"n", s.n},
                            {"v_max", s.v_max},
                            {"v_min", s.v_min},
                            {"decay_tau", s.decay_tau},
                            {"uptick_count", s.uptick_count},
                            {"uptick_gain", s.uptick_gain}}}};
  } else {
    root["visibility"] = {{"v", c.visibility}};
  }
  root["policy"] = std::string(to_string(c.policy));
  root["condition"] = std::string(to_string(c.condition));
  root["refresh_rate"] = c.refresh_rate;
  root["initial_shuffle"] = c.initial_shuffle;
  root["steps"] = c.steps;
  root["worlds"] = c.worlds;
  root["master_seed"] = c.master_seed;
  root["trace_granularity"] = std::string(to_string(c.granularity));
  root["curve_interval"] = c.curve_interval;
  return root.dump(2) + "\n";
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot read config file " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str());
}

void save_config(const ExperimentConfig& config, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw UsageError("cannot write config file " + path.string());
  out << dump_config(config);
  if (!out) throw UsageError("failed writing config file " + path.string());
}

}  // namespace trialoffer
