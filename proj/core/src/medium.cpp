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

#include "kinscat/medium.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "kinscat/errors.hpp"

namespace kinscat {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Aabb {
  Vec3 lo;
  Vec3 hi;
};

Aabb box_of(const Box &b) { return {b.corner, b.corner + b.extents}; }
Aabb box_of(const Slab &s) {
  return {{-s.half_width, -s.half_width, 0.0}, {s.half_width, s.half_width, s.thickness}};
}

bool inside(const Aabb &b, const Vec3 &q) {
  return q.x >= b.lo.x && q.x <= b.hi.x && q.y >= b.lo.y && q.y <= b.hi.y &&
         q.z >= b.lo.z && q.z <= b.hi.z;
}

// Slab method; an axis with zero velocity either never constrains or always excludes.
std::optional<Interval> chord_of(const Aabb &b, const Vec3 &q, const Vec3 &v) {
  double tmin = -kInf;
  double tmax = kInf;
  const double qs[3] = {q.x, q.y, q.z};
  const double vs[3] = {v.x, v.y, v.z};
  const double los[3] = {b.lo.x, b.lo.y, b.lo.z};
  const double his[3] = {b.hi.x, b.hi.y, b.hi.z};
  for (int i = 0; i < 3; ++i) {
    if (vs[i] == 0.0) {
      if (qs[i] < los[i] || qs[i] > his[i]) return std::nullopt;
      continue;
    }
    double ta = (los[i] - qs[i]) / vs[i];
    double tb = (his[i] - qs[i]) / vs[i];
    if (ta > tb) std::swap(ta, tb);
    tmin = std::max(tmin, ta);
    tmax = std::min(tmax, tb);
  }
  if (tmin > tmax) return std::nullopt;
  return Interval{tmin, tmax};
}

std::optional<Interval> chord_of(const Ball &ball, const Vec3 &q, const Vec3 &v) {
  const Vec3 d = q - ball.center;
  const double a = norm2(v);
  const double b = dot(d, v);
  const double c = norm2(d) - ball.radius * ball.radius;
  const double disc = b * b - a * c;
  if (disc < 0.0) return std::nullopt;
  const double root = std::sqrt(disc);
  // Roots of a t^2 + 2 b t + c, in the cancellation-free form.
  const double qv = -(b + std::copysign(root, b));
  if (qv == 0.0) return Interval{0.0, 0.0};
  double t1 = qv / a;
  double t2 = c / qv;
  if (t1 > t2) std::swap(t1, t2);
  return Interval{t1, t2};
}

void check_positive(double value, const char *what, bool allow_inf = false) {
  if (!(value > 0.0) || std::isnan(value) || (!allow_inf && !std::isfinite(value))) {
    throw InvalidInput(std::string(what) + " must be positive" +
                       (allow_inf ? "" : " and finite"));
  }
}

}  // namespace

double Dispersion::energy(const Vec3 &p) const {
  return kind_ == DispersionKind::quadratic ? 0.5 * norm2(p) : norm(p);
}

Vec3 Dispersion::group_velocity(const Vec3 &p) const {
  if (kind_ == DispersionKind::quadratic) return p;
  const double n = norm(p);
  if (!(n > 0.0)) throw InvalidInput("group velocity of the linear dispersion is undefined at p = 0");
  return p * (1.0 / n);
}

double Dispersion::speed(double r) const {
  return kind_ == DispersionKind::quadratic ? r : 1.0;
}

double Dispersion::shell_radius(double energy) const {
  if (!(energy >= 0.0)) throw InvalidInput("shell energy must be nonnegative");
  return kind_ == DispersionKind::quadratic ? std::sqrt(2.0 * energy) : energy;
}

double Dispersion::shell_jacobian(double energy) const {
  if (!(energy >= 0.0)) throw InvalidInput("shell energy must be nonnegative");
  return kind_ == DispersionKind::quadratic ? std::sqrt(2.0 * energy) : energy * energy;
}

Covariance::Covariance(CovarianceFamily family, double amplitude, double scale)
    : family_(family), amplitude_(amplitude), scale_(scale) {
  if (!(amplitude >= 0.0) || !std::isfinite(amplitude)) {
    throw InvalidInput("covariance amplitude must be finite and nonnegative");
  }
  check_positive(scale, "covariance scale", true);
}

double Covariance::radial(double k) const {
  const double x = (k / scale_) * (k / scale_);
  if (family_ == CovarianceFamily::gaussian) return amplitude_ * std::exp(-0.5 * x);
  const double d = 1.0 + x;
  return amplitude_ / (d * d);
}

double Covariance::operator()(const Vec3 &k) const {
  if (!is_finite(k)) throw InvalidInput("covariance argument must be finite");
  return radial(norm(k));
}

ShapeFunction::ShapeFunction(Geometry geometry, double density)
    : geometry_(geometry), density_(density) {
  if (!(density >= 0.0) || !std::isfinite(density)) {
    throw InvalidInput("shape density must be finite and nonnegative");
  }
  std::visit(
      [](const auto &g) {
        using G = std::decay_t<decltype(g)>;
        if constexpr (std::is_same_v<G, Ball>) {
          if (!is_finite(g.center)) throw InvalidInput("ball center must be finite");
          check_positive(g.radius, "ball radius");
        } else if constexpr (std::is_same_v<G, Box>) {
          if (!is_finite(g.corner)) throw InvalidInput("box corner must be finite");
          check_positive(g.extents.x, "box extent");
          check_positive(g.extents.y, "box extent");
          check_positive(g.extents.z, "box extent");
        } else {
          check_positive(g.thickness, "slab thickness");
          check_positive(g.half_width, "slab half width", true);
        }
      },
      geometry_);
}

double ShapeFunction::operator()(const Vec3 &q) const {
  if (!is_finite(q)) throw InvalidInput("rho evaluated at a non-finite position");
  const bool in = std::visit(
      [&](const auto &g) {
        using G = std::decay_t<decltype(g)>;
        if constexpr (std::is_same_v<G, Ball>) {
          return norm2(q - g.center) <= g.radius * g.radius;
        } else {
          return inside(box_of(g), q);
        }
      },
      geometry_);
  return in ? density_ : 0.0;
}

std::optional<Interval> ShapeFunction::chord(const Vec3 &q, const Vec3 &v) const {
  return std::visit(
      [&](const auto &g) -> std::optional<Interval> {
        using G = std::decay_t<decltype(g)>;
        if constexpr (std::is_same_v<G, Ball>) {
          return chord_of(g, q, v);
        } else {
          return chord_of(box_of(g), q, v);
        }
      },
      geometry_);
}

double ShapeFunction::ray_integral(const Vec3 &q, const Vec3 &v, double t0,
                                   double t1) const {
  if (!is_finite(q) || !is_finite(v)) throw InvalidInput("ray origin and direction must be finite");
  if (!(norm2(v) > 0.0)) throw InvalidInput("ray direction must be nonzero");
  if (std::isnan(t0) || std::isnan(t1) || t0 > t1) {
    throw InvalidInput("ray integral requires t0 <= t1");
  }
  if (density_ == 0.0) return 0.0;
  const auto c = chord(q, v);
  if (!c) return 0.0;
  const double lo = std::max(t0, c->lo);
  const double hi = std::min(t1, c->hi);
  return hi > lo ? density_ * (hi - lo) : 0.0;
}

Vec3 ShapeFunction::bounding_center() const {
  return std::visit(
      [](const auto &g) -> Vec3 {
        using G = std::decay_t<decltype(g)>;
        if constexpr (std::is_same_v<G, Ball>) {
          return g.center;
        } else if constexpr (std::is_same_v<G, Slab>) {
          return {0.0, 0.0, 0.5 * g.thickness};
        } else {
          const Aabb b = box_of(g);
          return 0.5 * (b.lo + b.hi);
        }
      },
      geometry_);
}

double ShapeFunction::bounding_radius() const {
  return std::visit(
      [](const auto &g) -> double {
        using G = std::decay_t<decltype(g)>;
        if constexpr (std::is_same_v<G, Ball>) {
          return g.radius;
        } else {
          const Aabb b = box_of(g);
          return 0.5 * norm(b.hi - b.lo);
        }
      },
      geometry_);
}

double ShapeFunction::volume() const {
  return std::visit(
      [](const auto &g) -> double {
        using G = std::decay_t<decltype(g)>;
        if constexpr (std::is_same_v<G, Ball>) {
          return 4.0 / 3.0 * std::numbers::pi * g.radius * g.radius * g.radius;
        } else {
          const Vec3 e = box_of(g).hi - box_of(g).lo;
          return e.x * e.y * e.z;
        }
      },
      geometry_);
}

std::string_view ShapeFunction::kind_name() const {
  return std::visit(
      [](const auto &g) -> std::string_view {
        using G = std::decay_t<decltype(g)>;
        if constexpr (std::is_same_v<G, Ball>) return "ball";
        else if constexpr (std::is_same_v<G, Box>) return "box";
        else return "slab";
      },
      geometry_);
}

Medium::Medium(ShapeFunction shape, Covariance covariance, Dispersion dispersion,
               Model model)
    : shape_(std::move(shape)),
      covariance_(covariance),
      dispersion_(dispersion),
      model_(model) {
  if (model_ == Model::wave && dispersion_.kind() != DispersionKind::linear) {
    throw ConfigError("model = wave requires the linear dispersion");
  }
}

std::string_view to_string(DispersionKind k) {
  return k == DispersionKind::quadratic ? "quadratic" : "linear";
}
std::string_view to_string(CovarianceFamily f) {
  return f == CovarianceFamily::gaussian ? "gaussian" : "exponential";
}
std::string_view to_string(Model m) {
  return m == Model::schroedinger ? "schroedinger" : "wave";
}

}  // namespace kinscat
