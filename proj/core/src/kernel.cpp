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

#include "kinscat/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "kinscat/errors.hpp"

namespace kinscat {

namespace {

// (2 pi)^{-3/2}
const double kFourierNorm = std::pow(2.0 * std::numbers::pi, -1.5);

struct ShellGeometry {
  double energy;
  double radius;
  Frame frame;
};

ShellGeometry shell_of(const Medium &medium, const Vec3 &p) {
  if (!is_finite(p)) throw InvalidInput("momentum must be finite");
  if (!(norm2(p) > 0.0)) throw InvalidInput("degenerate energy shell at p = 0");
  const double energy = medium.dispersion().energy(p);
  return {energy, medium.dispersion().shell_radius(energy), make_frame(normalized(p))};
}

// 2 pi (2 pi)^{-3/2} J(E) * integral over the shell, before the wave factor.
template <class Weight>
double shell_rate(const Medium &medium, const Vec3 &p, const SphereRule &rule,
                  Weight &&weight) {
  const ShellGeometry shell = shell_of(medium, p);
  const Covariance &cov = medium.covariance();
  if (cov.amplitude() == 0.0) return 0.0;
  const double sphere = integrate_sphere(
      shell.frame,
      [&](const Vec3 &dir, double mu, double) {
        return cov(p - shell.radius * dir) * weight(mu);
      },
      rule);
  return 2.0 * std::numbers::pi * kFourierNorm *
         medium.dispersion().shell_jacobian(shell.energy) * sphere;
}

double apply_rate_factor(const Medium &medium, const Vec3 &p, double rate) {
  if (medium.model() != Model::wave) return rate;
  const double omega = medium.dispersion().energy(p);
  return (omega * omega) * rate;
}

}  // namespace

double total_rate(const Medium &medium, const Vec3 &p, const SphereRule &rule) {
  return apply_rate_factor(medium, p,
                           shell_rate(medium, p, rule, [](double) { return 1.0; }));
}

double transport_rate(const Medium &medium, const Vec3 &p, const SphereRule &rule) {
  return apply_rate_factor(
      medium, p, shell_rate(medium, p, rule, [](double mu) { return 1.0 - mu; }));
}

double collision_kernel(const Medium &medium, const Vec3 &p, const Vec3 &p_out) {
  const double energy = medium.dispersion().energy(p);
  return medium.rate_factor(energy) * kFourierNorm * medium.covariance()(p - p_out);
}

double ShellKernel::collision_kernel(const Vec3 &p, const Vec3 &p_out) const {
  return medium_.rate_factor(energy_) * kFourierNorm * medium_.covariance()(p - p_out);
}

ShellKernel::ShellKernel(Medium medium, double energy, const KernelOptions &options)
    : medium_(std::move(medium)), energy_(energy) {
  if (!(energy > 0.0) || !std::isfinite(energy)) {
    throw InvalidInput("shell energy must be positive and finite");
  }
  if (options.table_size < 2) throw InvalidInput("cosine table needs at least two nodes");
  const Dispersion &disp = medium_.dispersion();
  radius_ = disp.shell_radius(energy_);
  speed_ = disp.speed(radius_);
  const Vec3 p{0.0, 0.0, radius_};
  total_rate_ = kinscat::total_rate(medium_, p, options.sphere);
  transport_rate_ = kinscat::transport_rate(medium_, p, options.sphere);

  const int n = options.table_size;
  const double h = 2.0 / (n - 1);
  nodes_.resize(n);
  cdf_.resize(n);
  for (int i = 0; i < n; ++i) nodes_[i] = i == n - 1 ? 1.0 : -1.0 + h * i;

  // Per-interval 8-point Gauss-Legendre of theta_hat(r sqrt(2 (1 - mu))).
  static const GaussLegendre gl8 = gauss_legendre(8);
  const Covariance &cov = medium_.covariance();
  const double r = radius_;
  cdf_[0] = 0.0;
  for (int i = 0; i + 1 < n; ++i) {
    const double a = nodes_[i];
    const double b = nodes_[i + 1];
    double piece = 0.0;
    for (std::size_t j = 0; j < gl8.nodes.size(); ++j) {
      const double mu = 0.5 * (a + b) + 0.5 * (b - a) * gl8.nodes[j];
      piece += gl8.weights[j] * cov.radial(r * std::sqrt(2.0 * (1.0 - mu)));
    }
    cdf_[i + 1] = cdf_[i] + 0.5 * (b - a) * piece;
  }
  const double total = cdf_.back();
  if (total > 0.0) {
    for (double &c : cdf_) c /= total;
  } else {
    // theta_hat vanishes on the shell: no collisions ever happen, keep a valid table.
    for (int i = 0; i < n; ++i) cdf_[i] = static_cast<double>(i) / (n - 1);
  }
  cdf_.back() = 1.0;
}

double ShellKernel::sample_cosine(double u) const {
  const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
  std::size_t i = it == cdf_.begin() ? 0 : static_cast<std::size_t>(it - cdf_.begin()) - 1;
  i = std::min(i, cdf_.size() - 2);
  const double width = cdf_[i + 1] - cdf_[i];
  double mu = nodes_[i];
  if (width > 0.0) mu += (nodes_[i + 1] - nodes_[i]) * (u - cdf_[i]) / width;
  return std::clamp(mu, -1.0, 1.0);
}

Vec3 sample_outgoing(const ShellKernel &kernel, const Vec3 &p, Philox4x32 &rng) {
  const double e = kernel.medium().dispersion().energy(p);
  if (!(std::abs(e - kernel.energy()) <= 1e-9 * kernel.energy())) {
    throw InvalidInput("incoming momentum is not on the kernel's energy shell");
  }
  const Frame frame = make_frame(normalized(p));
  const double mu = kernel.sample_cosine(rng.uniform());
  const double phi = 2.0 * std::numbers::pi * rng.uniform();
  const double s = std::sqrt((1.0 - mu) * (1.0 + mu));
  const Vec3 dir = frame.to_world(s * std::cos(phi), s * std::sin(phi), mu);
  return dir * (kernel.radius() / norm(dir));
}

}  // namespace kinscat
