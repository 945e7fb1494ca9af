/*
   Copyright 2026 The kinscat Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#include "kinscat/quadrature.hpp"

#include <limits>

#include "kinscat/errors.hpp"

namespace kinscat {

GaussLegendre gauss_legendre(int n) {
  if (n < 1) throw InvalidInput("Gauss-Legendre order must be positive");
  GaussLegendre rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  const int half = (n + 1) / 2;
  for (int i = 0; i < half; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) p0 = 1.0;
      // P_n = p1, P_{n-1} = p0
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) <= 1e-16 * std::abs(x) + 1e-300) break;
    }
    // Recompute the derivative at the converged node.
    double p0 = 1.0;
    double p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = n == 1 ? 1.0 : n * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
  return rule;
}

double wynn_epsilon(std::span<const double> s, double *error) {
  const std::size_t n = s.size();
  if (n == 0) throw InvalidInput("Wynn extrapolation needs at least one term");
  if (n < 3) {
    if (error) *error = n == 2 ? std::abs(s[1] - s[0]) : std::numeric_limits<double>::infinity();
    return s.back();
  }
  // eps[k][j]: column k, row j. Column 0 holds the partial sums.
  std::vector<std::vector<double>> eps(n + 1);
  eps[0].assign(n + 1, 0.0);  // eps_{-1} = 0
  eps[1].assign(s.begin(), s.end());
  double best = s.back();
  double previous = s[n - 2];
  for (std::size_t k = 2; k <= n; ++k) {
    const auto &a = eps[k - 2];
    const auto &b = eps[k - 1];
    const std::size_t rows = b.size() - 1;
    eps[k].resize(rows);
    bool ok = true;
    for (std::size_t j = 0; j < rows; ++j) {
      const double diff = b[j + 1] - b[j];
      if (diff == 0.0) {
        ok = false;
        break;
      }
      eps[k][j] = a[j + 1] + 1.0 / diff;
      if (!std::isfinite(eps[k][j])) {
        ok = false;
        break;
      }
    }
    if (!ok) break;
    // Odd k in this indexing carries the estimates (eps_0, eps_2, ...).
    if (k % 2 == 1 && !eps[k].empty()) {
      previous = eps[k].size() >= 2 ? eps[k][eps[k].size() - 2] : best;
      best = eps[k].back();
    }
    if (rows <= 1) break;
  }
  if (error) *error = std::abs(best - previous);
  return best;
}

}  // namespace kinscat
