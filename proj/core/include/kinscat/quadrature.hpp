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

#pragma once

#include <cmath>
#include <numbers>
#include <span>
#include <vector>

#include "kinscat/vec3.hpp"

namespace kinscat {

/// Gauss-Legendre rule on [-1, 1]; nodes ascending.
struct GaussLegendre {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// n-point rule by Newton iteration on P_n. Accurate to a few ulps for n <= 1024.
GaussLegendre gauss_legendre(int n);

/// Product rule on S^2: Gauss-Legendre in cos(polar) x trapezoid in azimuth.
struct SphereRule {
  int polar_order{64};
  int azimuth_order{128};
};

/// Integral over the unit sphere of f(direction, mu, phi), polar axis `frame.w`.
/// mu is the cosine to frame.w, phi the azimuth from frame.u.
template <class F>
double integrate_sphere(const Frame &frame, F &&f, const SphereRule &rule = {}) {
  const GaussLegendre gl = gauss_legendre(rule.polar_order);
  const double dphi = 2.0 * std::numbers::pi / rule.azimuth_order;
  double total = 0.0;
  for (std::size_t i = 0; i < gl.nodes.size(); ++i) {
    const double mu = gl.nodes[i];
    const double sin_theta = std::sqrt((1.0 - mu) * (1.0 + mu));
    double ring = 0.0;
    for (int j = 0; j < rule.azimuth_order; ++j) {
      const double phi = dphi * j;
      const Vec3 dir = frame.to_world(sin_theta * std::cos(phi),
                                      sin_theta * std::sin(phi), mu);
      ring += f(dir, mu, phi);
    }
    total += gl.weights[i] * ring * dphi;
  }
  return total;
}

/// Wynn epsilon extrapolation of a sequence of partial sums.
/// Returns the last well-defined even-column estimate; `error` gets the change
/// between the final two estimates.
double wynn_epsilon(std::span<const double> partial_sums, double *error = nullptr);

}  // namespace kinscat
