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

#include <gtest/gtest.h>

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <numbers>
#include <vector>

#include "kinscat/errors.hpp"
#include "kinscat/kernel.hpp"

namespace kinscat {
namespace {

constexpr double kPi = std::numbers::pi;
const double kFourierNorm = std::pow(2.0 * kPi, -1.5);

Medium make_medium(Covariance cov, Dispersion d = Dispersion::quadratic(),
                   Model m = Model::schroedinger) {
  return Medium(ShapeFunction(Ball{{0, 0, 0}, 1.0}), cov, d, m);
}

TEST(TotalRate, ConstantCovarianceClosedForm) {
  for (double theta0 : {0.1, 1.0, 3.5}) {
    const Medium m = make_medium(Covariance::gaussian(theta0, INFINITY));
    for (double p : {0.25, 1.0, 2.0, 7.0}) {
      const double expected = 8.0 * kPi * kPi * kFourierNorm * theta0 * p;
      EXPECT_NEAR(total_rate(m, {0, 0, p}), expected, 1e-8 * expected);
      EXPECT_NEAR(total_rate(m, Vec3{1, 2, 2} * (p / 3.0)), expected, 1e-8 * expected);
    }
  }
}

TEST(TotalRate, ZeroCovarianceGivesZero) {
  const Medium m = make_medium(Covariance::gaussian(0.0, 1.0));
  EXPECT_EQ(total_rate(m, {0, 0, 1}), 0.0);
  EXPECT_EQ(transport_rate(m, {0, 0, 1}), 0.0);
  const ShellKernel k(m, 0.5);
  EXPECT_EQ(k.total_rate(), 0.0);
}

TEST(TotalRate, ConvergesWhenOrderDoubles) {
  for (double s : {0.5, 1.0, 2.0}) {
    const Medium m = make_medium(Covariance::gaussian(1.0, s));
    const Vec3 p{0.3, -0.4, 1.1};
    const double coarse = total_rate(m, p, {32, 64});
    const double fine = total_rate(m, p, {64, 128});
    const double finer = total_rate(m, p, {128, 256});
    EXPECT_NEAR(fine, finer, 1e-10 * finer) << "s = " << s;
    EXPECT_NEAR(coarse, finer, 1e-6 * finer) << "s = " << s;
  }
}

// Independent route: adaptive Gauss-Kronrod over the polar angle measured from
// the z axis (not from p) and the azimuth.
double adaptive_rate(const Medium &m, const Vec3 &p) {
  using boost::math::quadrature::gauss_kronrod;
  const double r = norm(p);
  const auto inner = [&](double theta) {
    const auto f = [&](double phi) {
      const Vec3 dir{std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi),
                     std::cos(theta)};
      return m.covariance()(p - r * dir);
    };
    return gauss_kronrod<double, 31>::integrate(f, 0.0, 2.0 * kPi, 15, 1e-12) * std::sin(theta);
  };
  const double sphere = gauss_kronrod<double, 31>::integrate(inner, 0.0, kPi, 15, 1e-12);
  const double energy = m.dispersion().energy(p);
  return 2.0 * kPi * kFourierNorm * m.dispersion().shell_jacobian(energy) * sphere *
         m.rate_factor(energy);
}

TEST(TotalRate, MatchesAdaptiveQuadrature) {
  const Vec3 p{0.6, 0.2, -0.9};
  for (const Medium &m : {make_medium(Covariance::gaussian(1.0, 1.0)),
                          make_medium(Covariance::gaussian(2.0, 0.5)),
                          make_medium(Covariance::exponential(1.0, 1.5)),
                          make_medium(Covariance::exponential(0.3, 1.0), Dispersion::linear(),
                                      Model::wave)}) {
    const double oracle = adaptive_rate(m, p);
    EXPECT_NEAR(total_rate(m, p), oracle, 1e-6 * oracle);
  }
}

TEST(TransportRate, EqualsTotalForIsotropicScattering) {
  const Medium m = make_medium(Covariance::gaussian(1.7, INFINITY));
  const Vec3 p{0, 1.2, 0};
  EXPECT_NEAR(transport_rate(m, p), total_rate(m, p), 1e-10 * total_rate(m, p));
}

TEST(TransportRate, BelowTotalForForwardPeakedScattering) {
  for (double s : {0.3, 1.0}) {
    const Medium m = make_medium(Covariance::gaussian(1.0, s));
    const Vec3 p{0, 0, 2.0};
    EXPECT_LT(transport_rate(m, p), total_rate(m, p));
    EXPECT_GT(transport_rate(m, p), 0.0);
  }
}

TEST(TotalRate, RejectsZeroMomentum) {
  const Medium m = make_medium(Covariance::gaussian(1.0, 1.0));
  EXPECT_THROW(total_rate(m, {0, 0, 0}), InvalidInput);
  EXPECT_THROW(total_rate(m, {NAN, 0, 0}), InvalidInput);
}

TEST(CollisionKernel, Value) {
  const Medium m = make_medium(Covariance::gaussian(2.0, 1.0));
  EXPECT_NEAR(collision_kernel(m, {0, 0, 1}, {0, 0, -1}), kFourierNorm * 2.0 * std::exp(-2.0),
              1e-15);
  const Medium w = make_medium(Covariance::gaussian(2.0, 1.0), Dispersion::linear(), Model::wave);
  EXPECT_NEAR(collision_kernel(w, {0, 0, 2}, {0, 2, 0}), 4.0 * kFourierNorm * 2.0 * std::exp(-4.0),
              1e-15);
}

TEST(CollisionKernel, IntegratesToTotalRate) {
  // nu = 2 pi J(E) * integral of the kernel over directions on the shell.
  const Medium m = make_medium(Covariance::exponential(1.0, 0.8));
  const Vec3 p{0, 0.8, 0.6};
  const double r = norm(p);
  const double sphere = integrate_sphere(
      make_frame(normalized(p)), [&](const Vec3 &dir, double, double) {
        return collision_kernel(m, p, r * dir);
      });
  const double jac = m.dispersion().shell_jacobian(m.dispersion().energy(p));
  EXPECT_NEAR(2.0 * kPi * jac * sphere, total_rate(m, p), 1e-12 * total_rate(m, p));
}

TEST(ShellKernel, RatesAndMeanFreePath) {
  const Medium m = make_medium(Covariance::gaussian(1.0, 1.0));
  const ShellKernel k(m, 0.5);
  EXPECT_DOUBLE_EQ(k.radius(), 1.0);
  EXPECT_DOUBLE_EQ(k.speed(), 1.0);
  EXPECT_NEAR(k.total_rate(), total_rate(m, {1, 0, 0}), 1e-13 * k.total_rate());
  EXPECT_DOUBLE_EQ(k.mean_free_path(), k.speed() / k.total_rate());
  EXPECT_THROW(ShellKernel(m, 0.0), InvalidInput);
  EXPECT_THROW(ShellKernel(m, -1.0), InvalidInput);
  EXPECT_THROW(ShellKernel(m, 1.0, {{}, 1}), InvalidInput);
}

TEST(ShellKernel, CdfIsMonotoneAndNormalised) {
  const ShellKernel k(make_medium(Covariance::gaussian(1.0, 0.5)), 2.0);
  const auto cdf = k.cdf();
  EXPECT_EQ(cdf.front(), 0.0);
  EXPECT_EQ(cdf.back(), 1.0);
  for (std::size_t i = 1; i < cdf.size(); ++i) ASSERT_GE(cdf[i], cdf[i - 1]);
  EXPECT_EQ(k.sample_cosine(0.0), -1.0);
  EXPECT_NEAR(k.sample_cosine(1.0 - 1e-16), 1.0, 1e-12);
}

// Pearson chi-square of sampled cosines against the exact shell density.
TEST(SampleOutgoing, CosineHistogramMatchesKernel) {
  using boost::math::quadrature::gauss_kronrod;
  const Medium m = make_medium(Covariance::gaussian(1.0, 0.7));
  const ShellKernel kernel(m, 1.0);
  const double r = kernel.radius();
  const auto density = [&](double mu) {
    return m.covariance().radial(r * std::sqrt(2.0 * (1.0 - mu)));
  };
  const int bins = 64;
  std::vector<double> expected(bins);
  double total = 0.0;
  for (int b = 0; b < bins; ++b) {
    const double lo = -1.0 + 2.0 * b / bins;
    expected[b] = gauss_kronrod<double, 15>::integrate(density, lo, lo + 2.0 / bins, 10, 1e-13);
    total += expected[b];
  }
  const int n = 400000;
  std::vector<double> observed(bins, 0.0);
  Philox4x32 rng = make_stream(5, 0);
  const Vec3 p = Vec3{1, -1, 1} * (r / std::sqrt(3.0));
  for (int i = 0; i < n; ++i) {
    const Vec3 out = sample_outgoing(kernel, p, rng);
    const double mu = dot(out, p) / (r * r);
    observed[std::min(bins - 1, static_cast<int>((mu + 1.0) * 0.5 * bins))] += 1.0;
  }
  double chi2 = 0.0;
  int dof = -1;
  for (int b = 0; b < bins; ++b) {
    const double e = n * expected[b] / total;
    if (e < 5.0) continue;
    chi2 += (observed[b] - e) * (observed[b] - e) / e;
    ++dof;
  }
  const boost::math::chi_squared dist(dof);
  EXPECT_GT(boost::math::cdf(boost::math::complement(dist, chi2)), 1e-3)
      << "chi2 = " << chi2 << ", dof = " << dof;
}

TEST(SampleOutgoing, AzimuthIsUniformAndEnergyConserved) {
  const ShellKernel kernel(make_medium(Covariance::gaussian(1.0, INFINITY)), 0.5);
  Philox4x32 rng = make_stream(6, 0);
  const Vec3 p{0, 0, 1};
  Vec3 mean;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const Vec3 out = sample_outgoing(kernel, p, rng);
    ASSERT_NEAR(norm(out), 1.0, 1e-14);
    mean += out * (1.0 / n);
  }
  // Isotropic: each component has variance 1/3.
  const double se = std::sqrt(1.0 / 3.0 / n);
  EXPECT_LT(std::abs(mean.x), 4 * se);
  EXPECT_LT(std::abs(mean.y), 4 * se);
  EXPECT_LT(std::abs(mean.z), 4 * se);
}

TEST(SampleOutgoing, TotalRateByAcceptanceSampling) {
  // Uniform directions on the shell; the mean of the kernel reproduces nu.
  const Medium m = make_medium(Covariance::exponential(1.3, 1.0));
  const Vec3 p{0.5, 0.5, std::sqrt(0.5)};
  Philox4x32 rng = make_stream(7, 0);
  const int n = 400000;
  double sum = 0.0, sum_sq = 0.0;
  for (int i = 0; i < n; ++i) {
    const double mu = 2.0 * rng.uniform() - 1.0;
    const double phi = 2.0 * kPi * rng.uniform();
    const double s = std::sqrt(1.0 - mu * mu);
    const double f = m.covariance()(p - Vec3{s * std::cos(phi), s * std::sin(phi), mu});
    sum += f;
    sum_sq += f * f;
  }
  const double mean = sum / n;
  const double se = std::sqrt((sum_sq / n - mean * mean) / n);
  const double scale = 2.0 * kPi * kFourierNorm * 4.0 * kPi;  // J(E) = 1 here
  EXPECT_NEAR(scale * mean, total_rate(m, p), 4.0 * scale * se);
}

TEST(SampleOutgoing, RejectsOffShellMomentum) {
  const ShellKernel kernel(make_medium(Covariance::gaussian(1.0, 1.0)), 0.5);
  Philox4x32 rng = make_stream(8, 0);
  EXPECT_THROW(sample_outgoing(kernel, {0, 0, 1.01}, rng), InvalidInput);
  EXPECT_NO_THROW(sample_outgoing(kernel, {0, 0, 1.0}, rng));
}

}  // namespace
}  // namespace kinscat
