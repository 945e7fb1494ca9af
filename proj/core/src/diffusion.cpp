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

#include "kinscat/diffusion.hpp"

#include <cmath>
#include <cstdint>
#include <numbers>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/bessel.hpp>
#include <boost/math/tools/roots.hpp>

#include "kinscat/errors.hpp"
#include "kinscat/kernel.hpp"
#include "kinscat/quadrature.hpp"

namespace kinscat {

namespace {

using Rule = boost::math::quadrature::gauss_kronrod<double, 15>;

constexpr double kSeriesThreshold = 1e-4;
constexpr double kQuadratureTolerance = 1e-8;
constexpr unsigned kPanelDepth = 15;
constexpr double kPanelTolerance = 1e-13;

void check_params(const DiffusionParams &p) {
  if (!(p.mean_free_path > 0.0) || !std::isfinite(p.mean_free_path)) {
    throw InvalidInput("mean free path must be positive and finite");
  }
  if (!(p.diffusion > 0.0) || !std::isfinite(p.diffusion) || !(p.total_rate > 0.0) ||
      !std::isfinite(p.total_rate)) {
    throw InvalidInput("diffusion parameters must be positive and finite");
  }
}

double check_kappa(const Vec3 &kappa) {
  if (!is_finite(kappa)) throw InvalidInput("kappa must be finite");
  const double m = std::hypot(kappa.x, kappa.y);
  if (std::abs(kappa.z) > 1e-12 * std::max(1.0, m)) {
    throw InvalidInput("kappa must lie in the boundary plane (kappa.z = 0)");
  }
  return m;
}

double prefactor(const DiffusionParams &p) { return p.total_rate * p.total_rate / p.diffusion; }

// 1 - r / sqrt(r^2 + a^2) without cancellation.
double dip(double r, double a) {
  const double s = std::hypot(r, a);
  return a * a / (s * (s + r));
}

struct Panel {
  double value{0.0};
  double error{0.0};
};

template <class F>
Panel panel(F &&f, double lo, double hi) {
  Panel p;
  p.value = Rule::integrate(f, lo, hi, kPanelDepth, kPanelTolerance, &p.error);
  return p;
}

// integral over [0, inf) of (1 - r / sqrt(r^2 + a^2)) dr. With r = a tan(t) the
// integrand becomes a / (1 + sin t) on [0, pi / 2].
Panel incoherent_integral(double a) {
  return panel([a](double t) { return a / (1.0 + std::sin(t)); }, 0.0, 0.5 * std::numbers::pi);
}

// integral over [0, inf) of (1 - r / sqrt(r^2 + a^2)) J0(kappa r) dr.
Panel coherent_integral(double a, double kappa) {
  if (kappa == 0.0) return incoherent_integral(a);
  auto f = [a, kappa](double r) { return dip(r, a) * boost::math::cyl_bessel_j(0, kappa * r); };

  // Head: up to the first zero of J0, cut geometrically where dip() changes scale.
  const double first_zero = boost::math::cyl_bessel_j_zero(0.0, 1) / kappa;
  Panel head;
  double lo = 0.0;
  for (double cut = a; lo < first_zero; cut *= 10.0) {
    const double hi = std::min(cut, first_zero);
    const Panel p = panel(f, lo, hi);
    head.value += p.value;
    head.error += p.error;
    lo = hi;
  }

  // Tail: one panel between consecutive zeros; the partial sums alternate.
  constexpr int kShort = 40;
  constexpr int kLong = 64;
  std::vector<double> sums;
  sums.reserve(kLong);
  double running = head.value;
  double panel_error = head.error;
  double left = first_zero;
  for (int m = 2; m <= kLong + 1; ++m) {
    const double right = boost::math::cyl_bessel_j_zero(0.0, m) / kappa;
    const Panel p = panel(f, left, right);
    running += p.value;
    panel_error += p.error;
    sums.push_back(running);
    left = right;
  }
  double err_short = 0.0;
  double err_long = 0.0;
  const double short_est = wynn_epsilon(std::span<const double>(sums).first(kShort), &err_short);
  const double long_est = wynn_epsilon(sums, &err_long);
  Panel out;
  out.value = long_est;
  out.error = panel_error + std::max(err_long, std::abs(long_est - short_est));
  return out;
}

}  // namespace

DiffusionParams DiffusionParams::from_rates(double speed, double total_rate,
                                            double transport_rate) {
  for (double x : {speed, total_rate, transport_rate}) {
    if (!(x > 0.0) || !std::isfinite(x)) {
      throw InvalidInput("speed and rates must be positive and finite");
    }
  }
  return {speed * speed / (3.0 * transport_rate), speed / total_rate, total_rate, speed};
}

DiffusionParams diffusion_params(const Medium &medium, const Vec3 &k) {
  const double nu = total_rate(medium, k);
  if (!(nu > 0.0)) throw InvalidInput("no scattering: total rate is zero");
  const double nu_tr = transport_rate(medium, k);
  if (!(nu_tr > 0.0)) throw InvalidInput("no momentum relaxation: transport rate is zero");
  const double v = norm(medium.dispersion().group_velocity(k));
  return DiffusionParams::from_rates(v, nu, nu_tr);
}

double dirichlet_green(const Vec3 &r, const Vec3 &r_prime) {
  if (!is_finite(r) || !is_finite(r_prime)) throw InvalidInput("points must be finite");
  if (!(r.z > 0.0) || !(r_prime.z > 0.0)) throw InvalidInput("heights must be positive");
  const double direct = norm(r - r_prime);
  if (direct == 0.0) throw InvalidInput("Green's function is singular at r = r'");
  const double image = norm(r - Vec3{r_prime.x, r_prime.y, -r_prime.z});
  return (1.0 / direct - 1.0 / image) / (4.0 * std::numbers::pi);
}

double cone_shape(double lstar_kappa) {
  const double x = 2.0 * std::abs(lstar_kappa);
  if (!std::isfinite(x)) return x == x ? 0.0 : x;
  if (x < kSeriesThreshold) return 1.0 - x / 2.0 + x * x / 6.0;
  return -std::expm1(-x) / x;
}

double cone_bracket(double lstar_kappa) { return 1.0 + cone_shape(lstar_kappa); }

double cone_half_width(double mean_free_path) {
  if (!(mean_free_path > 0.0) || !std::isfinite(mean_free_path)) {
    throw InvalidInput("mean free path must be positive and finite");
  }
  std::uintmax_t iterations = 200;
  const auto [lo, hi] = boost::math::tools::toms748_solve(
      [](double y) { return cone_shape(y) - 0.5; }, 0.1, 10.0,
      boost::math::tools::eps_tolerance<double>(52), iterations);
  return 0.5 * (lo + hi) / mean_free_path;
}

double cone_closed_form(const DiffusionParams &params, double kappa) {
  check_params(params);
  if (std::isnan(kappa)) throw InvalidInput("kappa must not be NaN");
  return prefactor(params) * params.mean_free_path *
         cone_bracket(params.mean_free_path * std::abs(kappa));
}

double cone_closed_form(const DiffusionParams &params, const Vec3 &kappa) {
  return cone_closed_form(params, check_kappa(kappa));
}

ConeIntegral cone_quadrature(const DiffusionParams &params, double kappa) {
  check_params(params);
  if (!std::isfinite(kappa)) throw InvalidInput("kappa must be finite");
  const double a = 2.0 * params.mean_free_path;
  // G_D((0,0,l*); (r,l*)) = (1/r - 1/sqrt(r^2 + a^2)) / (4 pi); the plane
  // integral with weight 1 + J0(kappa r) leaves (1/2) of each radial integral.
  const Panel one = incoherent_integral(a);
  const Panel cosine = coherent_integral(a, std::abs(kappa));
  const double scale = 0.5 * prefactor(params);
  ConeIntegral out{scale * (one.value + cosine.value), scale * (one.error + cosine.error)};
  if (!std::isfinite(out.value) || out.error > kQuadratureTolerance * std::abs(out.value)) {
    throw NumericalError("cone quadrature did not converge");
  }
  return out;
}

ConeIntegral cone_quadrature(const DiffusionParams &params, const Vec3 &kappa) {
  return cone_quadrature(params, check_kappa(kappa));
}

}  // namespace kinscat
