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

#include <span>
#include <vector>

#include "kinscat/medium.hpp"
#include "kinscat/quadrature.hpp"
#include "kinscat/random.hpp"

namespace kinscat {

/// Total collision rate nu(p) per unit rho, including the wave omega^2 factor.
/// Throws InvalidInput for p = 0 (degenerate shell).
double total_rate(const Medium &medium, const Vec3 &p, const SphereRule &rule = {});

/// Momentum-relaxation rate: the total-rate integral weighted by (1 - cos theta).
double transport_rate(const Medium &medium, const Vec3 &p, const SphereRule &rule = {});

/// Collision kernel into p_out with the overall 2 pi delta(omega - omega') removed:
/// rate_factor * (2 pi)^{-3/2} * theta_hat(p - p_out).
///
/// Every rate estimator (binned, next-event, single-scattering quadrature)
/// normalises through this one function.
double collision_kernel(const Medium &medium, const Vec3 &p, const Vec3 &p_out);

struct KernelOptions {
  SphereRule sphere{};
  int table_size{2048};
};

/// Collision machinery for one energy shell. Immutable once built.
///
/// The outgoing cosine is drawn from a tabulated CDF on `table_size` equally
/// spaced nodes in [-1, 1] with linear interpolation; the azimuth is uniform.
/// Both covariance families are radial in k, so theta_hat(p - p') depends on
/// the scattering cosine alone.
class ShellKernel {
 public:
  ShellKernel(Medium medium, double energy, const KernelOptions &options = {});

  const Medium &medium() const { return medium_; }
  double energy() const { return energy_; }
  double radius() const { return radius_; }
  /// |grad omega| on the shell.
  double speed() const { return speed_; }
  double total_rate() const { return total_rate_; }
  double transport_rate() const { return transport_rate_; }
  /// speed / total_rate.
  double mean_free_path() const { return speed_ / total_rate_; }

  /// As the free function, but the wave factor uses the shell energy, so it
  /// stays exact for momenta that sit on the shell only to rounding.
  double collision_kernel(const Vec3 &p, const Vec3 &p_out) const;

  /// Inverse CDF of the scattering cosine at u in [0, 1).
  double sample_cosine(double u) const;

  std::span<const double> cdf() const { return cdf_; }
  std::span<const double> cosine_nodes() const { return nodes_; }

 private:
  Medium medium_;
  double energy_;
  double radius_;
  double speed_;
  double total_rate_;
  double transport_rate_;
  std::vector<double> nodes_;
  std::vector<double> cdf_;
};

/// Draws the post-collision momentum on the kernel's shell.
/// Throws InvalidInput when omega(p) is off the shell by more than 1e-9 relative.
Vec3 sample_outgoing(const ShellKernel &kernel, const Vec3 &p, Philox4x32 &rng);

}  // namespace kinscat
