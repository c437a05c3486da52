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

#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

namespace trialoffer::stats {

/// Regularized incomplete beta I_x(a, b), evaluated with the modified Lentz
/// continued fraction (absolute error below 1e-10 for a, b in (0, 1e4]).
double incomplete_beta(double a, double b, double x);

/// Distribution function of Beta(a, b).
inline double beta_cdf(double x, double a, double b) { return incomplete_beta(a, b, x); }

/// Limiting Kolmogorov tail P(K > t) = 2 sum_{k>=1} (-1)^{k-1} e^{-2 k^2 t^2}.
double kolmogorov_survival(double t);

/// Asymptotic critical value c with P(K > c) = alpha.
double kolmogorov_critical(double alpha);

/// sup_x |F_n(x) - F(x)| for a sample and a continuous distribution function.
template <class Cdf>
double ks_distance(std::vector<double> sample, Cdf&& cdf);

struct Summary {
  double mean = 0.0;
  double sd = 0.0;  // sample standard deviation (n - 1)
  double std_error = 0.0;  // sd / sqrt(n)
};

Summary summarize(std::span<const double> xs);

/// Linear-interpolated quantile (type 7) of a sample, p in [0, 1].
double quantile(std::vector<double> xs, double p);

double median(std::vector<double> xs);

template <class Cdf>
double ks_distance(std::vector<double> sample, Cdf&& cdf) {
  std::sort(sample.begin(), sample.end());
  const double n = static_cast<double>(sample.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const double f = cdf(sample[i]);
    d = std::max({d, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
  }
  return d;
}

}  // namespace trialoffer::stats
