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

#include "kinscat/medium.hpp"
#include "kinscat/vec3.hpp"

namespace kinscat {

/// Diffusive description of transport on one energy shell.
struct DiffusionParams {
  double diffusion{0.0};       ///< D = v^2 / (3 nu_tr)
  double mean_free_path{0.0};  ///< l* = v / nu
  double total_rate{0.0};      ///< nu
  double speed{0.0};           ///< v = |grad omega|

  /// Builds the parameters from rates directly. Throws InvalidInput unless all
  /// arguments are positive and finite.
  static DiffusionParams from_rates(double speed, double total_rate, double transport_rate);
};

/// Parameters at momentum k. Throws InvalidInput when nu(k) = 0.
DiffusionParams diffusion_params(const Medium &medium, const Vec3 &k);

/// Half-space Laplace Green's function vanishing on z = 0:
/// 1 / (4 pi |r - r'|) - 1 / (4 pi |r - image(r')|).
/// Throws InvalidInput for r = r' or a nonpositive height.
double dirichlet_green(const Vec3 &r, const Vec3 &r_prime);

/// 1 + (1 - exp(-x)) / x with x = 2 l* |kappa|; series below x = 1e-4.
double cone_bracket(double lstar_kappa);

/// Coherent part of the cone relative to its value at kappa = 0:
/// (1 - exp(-x)) / x with x = 2 l* |kappa|.
double cone_shape(double lstar_kappa);

/// |kappa| at which the coherent part of the cone has halved; scales as 1 / l*.
double cone_half_width(double mean_free_path);

/// (nu^2 / D) l* (1 + (1 - exp(-2 l* |kappa|)) / (2 l* |kappa|)).
double cone_closed_form(const DiffusionParams &params, double kappa);
/// kappa must lie in the boundary plane (kappa.z = 0); throws InvalidInput otherwise.
double cone_closed_form(const DiffusionParams &params, const Vec3 &kappa);

struct ConeIntegral {
  double value{0.0};
  double error{0.0};  ///< estimated absolute quadrature error
};

/// The same rate from the Green's function integral over the boundary-parallel
/// plane at height l*, source at (0, 0, l*). The angular integral is done
/// analytically (J0 weight); the radial integrals use Gauss-Kronrod panels,
/// with the oscillatory tail summed between Bessel zeros and Wynn-extrapolated.
/// Throws NumericalError when the error estimate exceeds 1e-8 relative.
ConeIntegral cone_quadrature(const DiffusionParams &params, double kappa);
ConeIntegral cone_quadrature(const DiffusionParams &params, const Vec3 &kappa);

}  // namespace kinscat
