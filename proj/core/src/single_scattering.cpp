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

#include <cmath>
#include <limits>
#include <numbers>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "kinscat/errors.hpp"
#include "kinscat/estimators.hpp"
#include "kinscat/kernel.hpp"

namespace kinscat {

namespace {

using Rule = boost::math::quadrature::gauss_kronrod<double, 15>;

}  // namespace

QuadratureValue single_scattering_quadrature(const Medium &medium, const Vec3 &k,
                                             const Vec3 &k_out,
                                             const QuadratureOptions &options) {
  if (!is_finite(k) || !(norm2(k) > 0.0) || !is_finite(k_out) || !(norm2(k_out) > 0.0)) {
    throw InvalidInput("momenta must be finite and nonzero");
  }
  if (!(options.rel_tol > 0.0) || options.max_depth < 1) {
    throw InvalidInput("quadrature tolerance and depth must be positive");
  }
  const Dispersion &disp = medium.dispersion();
  const double e_in = disp.energy(k);
  if (!(std::abs(disp.energy(k_out) - e_in) <= 1e-9 * e_in)) {
    throw InvalidInput("outgoing momentum is not on the incoming energy shell");
  }
  if (dot(normalized(k_out), normalized(k)) >= 1.0 - 1e-14) {
    throw InvalidInput("forward direction k' = k is excluded (forward singularity)");
  }
  const ShapeFunction &shape = medium.shape();
  const double radius = shape.bounding_radius();
  if (!std::isfinite(radius)) throw InvalidInput("quadrature needs a shape with bounded support");

  const double amplitude = collision_kernel(medium, k, k_out);
  if (amplitude == 0.0 || shape.density() == 0.0) return {0.0, 0.0};
  const double nu = options.attenuation ? total_rate(medium, k) : 0.0;
  const Vec3 v_in = disp.group_velocity(k);
  const Vec3 v_out = disp.group_velocity(k_out);
  const Frame frame = make_frame(normalized(k));
  const Vec3 center = shape.bounding_center();
  const double inf = std::numeric_limits<double>::infinity();
  const double inner_tol = 0.1 * options.rel_tol;
  const unsigned depth = static_cast<unsigned>(options.max_depth);
  double worst_inner = 0.0;  // largest absolute error of a single line integral

  // Straight lines along k through the transverse disk of the bounding sphere.
  auto line = [&](double a, double b) {
    const Vec3 base = center + frame.to_world(a, b, 0.0);
    const auto c = shape.chord(base, frame.w);
    if (!c || c->length() == 0.0) return 0.0;
    // s = lo + L (1 - cos t) / 2 smooths the square-root behaviour of the exit
    // distance where the outgoing ray grazes the boundary at a chord end.
    const double half = 0.5 * c->length();
    auto f = [&](double t) {
      const Vec3 x = base + (c->lo + half * (1.0 - std::cos(t))) * frame.w;
      const double a_in = shape.ray_integral(x, -v_in, 0.0, inf);
      const double a_out = shape.ray_integral(x, v_out, 0.0, inf);
      return shape.density() * std::exp(-nu * (a_in + a_out)) * half * std::sin(t);
    };
    double err = 0.0;
    const double v = Rule::integrate(f, 0.0, std::numbers::pi, depth, inner_tol, &err);
    worst_inner = std::max(worst_inner, err);
    return v;
  };
  // r = R sin(alpha) absorbs the square-root edge of a ball's chord length.
  auto ring = [&](double phi) {
    auto g = [&](double alpha) {
      const double r = radius * std::sin(alpha);
      return line(r * std::cos(phi), r * std::sin(phi)) * r * radius * std::cos(alpha);
    };
    return Rule::integrate(g, 0.0, 0.5 * std::numbers::pi, depth, inner_tol);
  };
  double err = 0.0;
  const double integral = Rule::integrate(ring, 0.0, 2.0 * std::numbers::pi, depth,
                                          options.rel_tol, &err);
  // Line errors integrate over at most the disk area.
  const double line_error = worst_inner * std::numbers::pi * radius * radius;
  const double total_error = err + line_error;
  if (!std::isfinite(integral) || total_error > options.rel_tol * std::abs(integral)) {
    throw NumericalError("single-scattering quadrature did not reach the requested tolerance");
  }
  return {amplitude * integral, amplitude * total_error};
}

}  // namespace kinscat
