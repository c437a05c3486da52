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

#include "trialoffer/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numeric>

#include "json.hpp"
#include "trialoffer/analysis.hpp"
#include "trialoffer/dp_oracle.hpp"
#include "trialoffer/errors.hpp"
#include "trialoffer/market.hpp"
#include "trialoffer/policies.hpp"
#include "trialoffer/rng.hpp"
#include "trialoffer/simulator.hpp"
#include "trialoffer/stats.hpp"

namespace trialoffer {

namespace {

constexpr std::size_t kMaxMessages = 10;

class Checker {
 public:
  explicit Checker(SuiteReport& report) : report_(report) {}

  void expect(bool ok, const std::function<std::string()>& describe) {
    ++report_.checks;
    if (ok) return;
    ++report_.failures;
    if (report_.messages.size() < kMaxMessages) report_.messages.push_back(describe());
  }

  void expect_near(double actual, double expected, double tol, const std::string& what) {
    expect(std::fabs(actual - expected) <= tol, [&] {
      char buf[160];
      std::snprintf(buf, sizeof buf, "%s: got %.10g, expected %.10g +- %.1e", what.c_str(),
                    actual, expected, tol);
      return std::string(buf);
    });
  }

  void note(std::string text) { report_.messages.push_back(std::move(text)); }

 private:
  SuiteReport& report_;
};

std::string fmt(const char* format, double a, double b = 0.0, double c = 0.0) {
  char buf[200];
  std::snprintf(buf, sizeof buf, format, a, b, c);
  return buf;
}

// Value in (0, 1].
double unit(Rng& rng) { return 1.0 - rng.uniform(); }

struct Instance {
  std::vector<double> v;
  std::vector<double> q;
  std::vector<double> a;
};

Instance random_instance(Rng& rng, std::size_t max_n, bool sorted) {
  const std::size_t n = 1 + static_cast<std::size_t>(rng.below(max_n));
  Instance inst{std::vector<double>(n), std::vector<double>(n), std::vector<double>(n)};
  for (std::size_t i = 0; i < n; ++i) {
    inst.v[i] = unit(rng);
    inst.q[i] = unit(rng);
    inst.a[i] = unit(rng);
  }
  if (sorted) {
    std::sort(inst.v.begin(), inst.v.end(), std::greater<>());
    std::sort(inst.q.begin(), inst.q.end(), std::greater<>());
  }
  return inst;
}

// ---------------------------------------------------------------------------

void example1(Checker& check) {
  constexpr double tol = 5e-4;
  const VisibilityProfile vis({0.7, 0.2, 0.01});
  const std::vector<double> q{0.8, 0.5, 0.1};
  const ProductCatalog catalog(q, {0.01, 0.1, 0.9});
  const auto base = effective_appeals(catalog, MarketState::empty(3), Condition::SocialInfluence);

  const Ranking perf = performance_ranking(vis, base, q);
  check.expect(perf.one_based() == std::vector<std::size_t>{2, 1, 3},
               [] { return std::string("performance ranking at s0 is not [2,1,3]"); });
  const Ranking quality = quality_ranking(catalog, vis);
  check.expect(quality.one_based() == std::vector<std::size_t>{1, 2, 3},
               [] { return std::string("quality ranking is not [1,2,3]"); });

  check.expect_near(expected_purchases(perf, vis, base, q), 0.463, tol, "lambda*");
  check.expect_near(expected_purchases(quality, vis, base, q), 0.458, tol, "lambda^q(s0)");

  const auto p_perf = trial_probabilities(perf, vis, base);
  const double purchase_perf[] = {0.0198, 0.432, 0.0111};
  const auto p_qual = trial_probabilities(quality, vis, base);
  const double purchase_qual[] = {0.156, 0.278, 0.025};
  for (std::size_t i = 0; i < 3; ++i) {
    check.expect_near(p_perf[i] * q[i], purchase_perf[i], tol, "P*_" + std::to_string(i + 1));
    check.expect_near(p_qual[i] * q[i], purchase_qual[i], tol, "P^q_" + std::to_string(i + 1));
  }

  // States after the first trial: s0 nothing bought, s_i product i bought.
  const double lambda_perf[] = {0.463, 0.783, 0.496, 0.423};
  const double lambda_qual[] = {0.458, 0.783, 0.494, 0.380};
  for (std::size_t s = 0; s < 4; ++s) {
    MarketState state = MarketState::empty(3);
    if (s > 0) state.downloads[s - 1] = 1;
    const auto a = effective_appeals(catalog, state, Condition::SocialInfluence);
    const Ranking best = performance_ranking(vis, a, q);
    check.expect_near(expected_purchases(best, vis, a, q), lambda_perf[s], tol,
                      "lambda*(s" + std::to_string(s) + ")");
    check.expect_near(expected_purchases(quality, vis, a, q), lambda_qual[s], tol,
                      "lambda^q(s" + std::to_string(s) + ")");
  }

  const HorizonSpec two{2};
  const PolicySchedule perf_policy{PolicyKind::Performance, Condition::SocialInfluence, 1};
  const PolicySchedule qual_policy{PolicyKind::Quality, Condition::SocialInfluence, 1};
  check.expect_near(policy_value(perf_policy, catalog, vis, two).value, 0.946, tol,
                    "two-period performance");
  check.expect_near(policy_value(qual_policy, catalog, vis, two).value, 0.975, tol,
                    "two-period quality");
}

void theorem1(Checker& check, Rng& rng) {
  constexpr double slack = 1e-12;
  for (int k = 0; k < 10000; ++k) {
    Instance inst = random_instance(rng, 32, true);
    const bool flat = k % 10 == 0;
    if (flat) std::fill(inst.v.begin(), inst.v.end(), inst.v.front());
    const VisibilityProfile vis(inst.v);
    const double lambda =
        expected_purchases(Ranking::identity(inst.q.size()), vis, inst.a, inst.q);
    double num = 0.0;
    double den = 0.0;
    for (std::size_t i = 0; i < inst.q.size(); ++i) {
      num += inst.a[i] * inst.q[i];
      den += inst.a[i];
    }
    const double unbiased = num / den;
    check.expect(lambda >= unbiased - slack,
                 [&] { return fmt("position bias lowered lambda: %.17g < %.17g", lambda, unbiased); });
    if (flat) {
      check.expect(std::fabs(lambda - unbiased) <= slack, [&] {
        return fmt("flat visibility should give equality: %.17g vs %.17g", lambda, unbiased);
      });
    }
  }
}

void theorem2(Checker& check, Rng& rng) {
  constexpr double slack = 1e-12;
  for (int k = 0; k < 10000; ++k) {
    const Instance inst = random_instance(rng, 32, true);
    const VisibilityProfile vis(inst.v);
    const Ranking sigma = Ranking::identity(inst.q.size());
    const double now = expected_purchases(sigma, vis, inst.a, inst.q);
    const double next = one_step_expected(sigma, vis, inst.a, inst.q);
    check.expect(next >= now - slack,
                 [&] { return fmt("expected purchases dropped: %.17g -> %.17g", now, next); });
  }
}

void lemma1(Checker& check, Rng& rng) {
  constexpr int kInstances = 20;
  constexpr std::int64_t kPurchases = 100000;
  for (int k = 0; k < kInstances; ++k) {
    const std::size_t n = 2 + static_cast<std::size_t>(rng.below(4));
    std::vector<double> v(n), q(n), a(n);
    for (std::size_t i = 0; i < n; ++i) {
      v[i] = unit(rng);
      q[i] = 0.1 + 0.9 * unit(rng);
      a[i] = unit(rng);
    }
    const VisibilityProfile vis(v);
    const ProductCatalog catalog(q, a);
    const auto expected = next_purchase_distribution(vis, a, q);
    const Ranking identity = Ranking::identity(n);
    std::vector<std::int64_t> counts(n, 0);
    for (std::int64_t m = 0; m < kPurchases; ++m) {
      MarketState state = MarketState::empty(n);
      for (;;) {
        const TrialEvent e = step(state, identity, catalog, vis, Condition::SocialInfluence, rng);
        if (e.purchased) {
          ++counts[e.tried];
          break;
        }
      }
    }
    for (std::size_t i = 0; i < n; ++i) {
      const double p = expected[i];
      const double freq = static_cast<double>(counts[i]) / static_cast<double>(kPurchases);
      const double se = std::sqrt(p * (1.0 - p) / static_cast<double>(kPurchases));
      check.expect(std::fabs(freq - p) <= 3.0 * se, [&] {
        return fmt("instance %g: frequency %.6f vs probability %.6f", k, freq, p);
      });
    }
  }
}

SimulationConfig two_product_config(double q1, double q2, std::int64_t steps,
                                    std::int64_t worlds, std::uint64_t seed) {
  return SimulationConfig{ProductCatalog({q1, q2}, {1.0, 1.0}),
                          VisibilityProfile::uniform(2),
                          PolicySchedule{PolicyKind::Quality, Condition::SocialInfluence, 1},
                          steps,
                          worlds,
                          seed,
                          TraceGranularity::DownloadsOnly,
                          1000};
}

void monopoly(Checker& check, std::uint64_t seed, int threads) {
  const auto result = run_experiment(two_product_config(0.6, 0.3, 50000, 100, seed), threads);
  const auto stats = monopoly_stats(result, 0.9);
  const auto dominant = std::count_if(stats.final_share.begin(), stats.final_share.end(),
                                      [](double s) { return s > 0.9; });
  check.expect(dominant >= 95, [&] {
    return fmt("top share > 0.9 in %g of 100 worlds (need 95)", static_cast<double>(dominant));
  });
  const double early = stats::median(shares_at(result, stats.top_product, 5000));
  const double late = stats::median(stats.final_share);
  check.expect(late > early, [&] { return fmt("median share %.6f at 50000 <= %.6f at 5000", late, early); });
  check.note(fmt("worlds with share > 0.9: %g; median share 5000 -> 50000: %.6f -> %.6f",
                 static_cast<double>(dominant), early, late));
}

void beta(Checker& check, std::uint64_t seed, int threads) {
  const auto result = run_experiment(two_product_config(0.5, 0.5, 50000, 400, seed), threads);
  const auto fit = beta_limit_test(result);
  check.expect(fit.accepted, [&] {
    return fmt("KS statistic %.6f exceeds critical %.6f (p = %.4g)", fit.ks_statistic,
               fit.critical_value, fit.p_value);
  });
  check.note(fmt("Beta(%g, %g) KS statistic %.6f", fit.alpha, fit.beta, fit.ks_statistic) +
             fmt(" p-value %.6f", fit.p_value));

  // Each purchase raises a_j by one, so the share urn adds one ball of
  // weight q per draw on top of A_j q: the classical urn limit is
  // Beta(A_1, A_2). Reported for comparison only.
  std::vector<double> shares;
  for (const auto& w : result.worlds) {
    shares.push_back(static_cast<double>(w.final_downloads[0]) /
                     static_cast<double>(w.final_downloads[0] + w.final_downloads[1]));
  }
  const double a1 = result.config.catalog.appeal(0);
  const double a2 = result.config.catalog.appeal(1);
  const double d = stats::ks_distance(shares, [&](double x) { return stats::beta_cdf(x, a1, a2); });
  const double t = std::sqrt(static_cast<double>(shares.size())) * d;
  check.note(fmt("Beta(%g, %g) KS statistic %.6f", a1, a2, t) +
             fmt(" p-value %.6f", stats::kolmogorov_survival(t)));
}

void alpha_bound(Checker& check, Rng& rng) {
  constexpr double slack = 1e-10;
  for (int k = 0; k < 10000; ++k) {
    const Instance inst = random_instance(rng, 8, true);
    const VisibilityProfile vis(inst.v);
    const double best = expected_purchases(performance_ranking(vis, inst.a, inst.q), vis, inst.a,
                                           inst.q);
    const double qual = expected_purchases(Ranking::identity(inst.q.size()), vis, inst.a, inst.q);
    const double alpha = inst.v.front() / inst.v.back();
    check.expect(best / qual <= alpha + slack,
                 [&] { return fmt("ratio %.17g exceeds alpha %.17g", best / qual, alpha); });
  }
  // Tightness: q = (1, eps, 0), a = (1, x, 0), v = (1, 1, v3).
  const double eps = 1e-6;
  const double x = 1e4;
  const double v3 = 0.25;
  const VisibilityProfile vis({1.0, 1.0, v3});
  const std::vector<double> q{1.0, eps, 0.0};
  const std::vector<double> a{1.0, x, 0.0};
  const double qual = expected_purchases(Ranking::identity(3), vis, a, q, ZeroAppeal::Allow);
  const Ranking opt = brute_force_ranking(vis, a, q, ZeroAppeal::Allow);
  const double best = expected_purchases(opt, vis, a, q, ZeroAppeal::Allow);
  check.expect(best / qual >= 0.95 / v3,
               [&] { return fmt("tightness ratio %.6f below %.6f", best / qual, 0.95 / v3); });
  check.note(fmt("tightness ratio %.6f, limit (1+x)/(1+v3 x) = %.6f, alpha = %.1f", best / qual,
                 (1.0 + x) / (1.0 + v3 * x), 1.0 / v3));
}

void dinkelbach_oracle(Checker& check, Rng& rng) {
  constexpr double tol = 1e-10;
  for (int k = 0; k < 200; ++k) {
    const Instance inst = random_instance(rng, 6, false);
    const VisibilityProfile vis(inst.v);
    const double fast =
        expected_purchases(performance_ranking(vis, inst.a, inst.q), vis, inst.a, inst.q);
    const double exact =
        expected_purchases(brute_force_ranking(vis, inst.a, inst.q), vis, inst.a, inst.q);
    check.expect_near(fast, exact, tol, "instance " + std::to_string(k));
  }
}

double tolerance_of(std::string_view name) {
  if (name == "example1") return 5e-4;
  if (name == "theorem1" || name == "theorem2") return 1e-12;
  if (name == "alpha-bound" || name == "dinkelbach-oracle") return 1e-10;
  if (name == "lemma1") return 3.0;  // standard errors
  if (name == "monopoly") return 0.9;
  return 0.01;  // beta: significance
}

}  // namespace

std::string SuiteReport::to_json() const {
  nlohmann::json j{{"suite", suite},         {"seed", seed},     {"checks", checks},
                   {"failures", failures},   {"tolerance", tolerance},
                   {"passed", passed()},     {"messages", messages}, {"seconds", seconds}};
  return j.dump();
}

const std::vector<std::string_view>& suite_names() {
  static const std::vector<std::string_view> names{
      "example1", "theorem1", "theorem2",    "lemma1",
      "monopoly", "beta",     "alpha-bound", "dinkelbach-oracle"};
  return names;
}

SuiteReport run_suite(std::string_view name, std::uint64_t seed, int threads) {
  const auto& names = suite_names();
  if (std::find(names.begin(), names.end(), name) == names.end()) {
    throw UsageError("unknown suite '" + std::string(name) + "'");
  }
  SuiteReport report;
  report.suite = std::string(name);
  report.seed = seed;
  report.tolerance = tolerance_of(name);
  Checker check(report);
  Rng rng = Rng::for_world(seed, 0, Stream::Policy);
  const auto start = std::chrono::steady_clock::now();

  if (name == "example1") example1(check);
  else if (name == "theorem1") theorem1(check, rng);
  else if (name == "theorem2") theorem2(check, rng);
  else if (name == "lemma1") lemma1(check, rng);
  else if (name == "monopoly") monopoly(check, seed, threads);
  else if (name == "beta") beta(check, seed, threads);
  else if (name == "alpha-bound") alpha_bound(check, rng);
  else dinkelbach_oracle(check, rng);

  report.seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

}  // namespace trialoffer
