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

#include <optional>
#include <string_view>
#include <variant>

#include "kinscat/vec3.hpp"

namespace kinscat {

enum class DispersionKind { quadratic, linear };

/// Isotropic dispersion relation omega(|p|).
///
/// quadratic: omega = |p|^2 / 2, grad omega = p
/// linear:    omega = |p|,       grad omega = p / |p|
class Dispersion {
 public:
  constexpr explicit Dispersion(DispersionKind kind) : kind_(kind) {}
  static constexpr Dispersion quadratic() { return Dispersion(DispersionKind::quadratic); }
  static constexpr Dispersion linear() { return Dispersion(DispersionKind::linear); }

  constexpr DispersionKind kind() const { return kind_; }

  double energy(const Vec3 &p) const;
  /// Group velocity. Throws InvalidInput at p = 0 for the linear branch.
  Vec3 group_velocity(const Vec3 &p) const;
  /// |d omega / d r| at momentum magnitude r.
  double speed(double r) const;
  /// Momentum magnitude on the shell omega = energy.
  double shell_radius(double energy) const;
  /// r^2 / |d omega / d r| on the shell: converts delta(omega - E) dp into dOmega.
  double shell_jacobian(double energy) const;

  friend constexpr bool operator==(const Dispersion &, const Dispersion &) = default;

 private:
  DispersionKind kind_;
};

enum class CovarianceFamily { gaussian, exponential };

/// Fourier-space covariance theta_hat(k) of the disorder.
///
/// gaussian:    amplitude * exp(-|k|^2 / (2 s^2))
/// exponential: amplitude / (1 + |k|^2 / s^2)^2  (real-space exp(-s|x|) correlation)
/// An infinite scale gives the constant kernel theta_hat = amplitude.
class Covariance {
 public:
  Covariance(CovarianceFamily family, double amplitude, double scale);
  static Covariance gaussian(double amplitude, double scale) {
    return {CovarianceFamily::gaussian, amplitude, scale};
  }
  static Covariance exponential(double amplitude, double scale) {
    return {CovarianceFamily::exponential, amplitude, scale};
  }

  CovarianceFamily family() const { return family_; }
  double amplitude() const { return amplitude_; }
  double scale() const { return scale_; }

  double operator()(const Vec3 &k) const;
  double radial(double k_magnitude) const;

  Covariance with_amplitude(double amplitude) const {
    return {family_, amplitude, scale_};
  }

 private:
  CovarianceFamily family_;
  double amplitude_;
  double scale_;
};

struct Ball {
  Vec3 center;
  double radius{1.0};
};

struct Box {
  Vec3 corner;
  Vec3 extents{1.0, 1.0, 1.0};
};

/// 0 <= z <= thickness, |x|, |y| <= half_width.
struct Slab {
  double thickness{1.0};
  double half_width{1.0};
};

/// Parameter interval [lo, hi] along a ray.
struct Interval {
  double lo;
  double hi;
  double length() const { return hi > lo ? hi - lo : 0.0; }
};

/// Piecewise-constant shape function: rho = density inside a convex body, 0 outside.
class ShapeFunction {
 public:
  using Geometry = std::variant<Ball, Box, Slab>;

  explicit ShapeFunction(Geometry geometry, double density = 1.0);

  const Geometry &geometry() const { return geometry_; }
  double density() const { return density_; }
  double rho_max() const { return density_; }

  /// rho(q). Throws InvalidInput for non-finite q.
  double operator()(const Vec3 &q) const;

  /// Parameter interval on which q + v t lies inside the body, if any.
  std::optional<Interval> chord(const Vec3 &q, const Vec3 &v) const;

  /// Exact integral of rho(q + v t) dt over [t0, t1]; infinite limits allowed.
  double ray_integral(const Vec3 &q, const Vec3 &v, double t0, double t1) const;

  Vec3 bounding_center() const;
  double bounding_radius() const;
  double volume() const;
  std::string_view kind_name() const;

 private:
  Geometry geometry_;
  double density_;
};

enum class Model { schroedinger, wave };

/// Complete problem definition. Immutable after construction.
class Medium {
 public:
  Medium(ShapeFunction shape, Covariance covariance, Dispersion dispersion,
         Model model = Model::schroedinger);

  const ShapeFunction &shape() const { return shape_; }
  const Covariance &covariance() const { return covariance_; }
  const Dispersion &dispersion() const { return dispersion_; }
  Model model() const { return model_; }

  /// Extra collision-rate factor on the shell: omega^2 for waves, 1 otherwise.
  double rate_factor(double energy) const {
    return model_ == Model::wave ? energy * energy : 1.0;
  }

  Medium with_covariance(const Covariance &c) const {
    return {shape_, c, dispersion_, model_};
  }
  Medium with_shape(const ShapeFunction &s) const {
    return {s, covariance_, dispersion_, model_};
  }
  Medium with_model(Model m) const { return {shape_, covariance_, dispersion_, m}; }

 private:
  ShapeFunction shape_;
  Covariance covariance_;
  Dispersion dispersion_;
  Model model_;
};

std::string_view to_string(DispersionKind k);
std::string_view to_string(CovarianceFamily f);
std::string_view to_string(Model m);

}  // namespace kinscat
