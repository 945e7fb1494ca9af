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

#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include "kinscat/errors.hpp"
#include "kinscat/medium.hpp"

namespace kinscat {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Vec3 random_direction(std::mt19937_64 &gen) {
  std::normal_distribution<double> n;
  return normalized(Vec3{n(gen), n(gen), n(gen)});
}

// Integral of rho along q + v t over [t0, t1] using only point evaluations:
// fine cells, with every cell whose end values differ split at the bisected jump.
double rho_line_integral(const ShapeFunction &shape, const Vec3 &q, const Vec3 &v, double t0,
                         double t1, int cells = 200000) {
  const double h = (t1 - t0) / cells;
  auto rho = [&](double t) { return shape(q + v * t); };
  double total = 0.0;
  double left = rho(t0);
  for (int i = 0; i < cells; ++i) {
    const double a = t0 + h * i;
    const double b = i + 1 == cells ? t1 : a + h;
    const double right = rho(b);
    if (left == right) {
      total += left * (b - a);
    } else {
      double lo = a, hi = b;
      for (int k = 0; k < 80 && hi - lo > 0.0; ++k) {
        const double mid = 0.5 * (lo + hi);
        (rho(mid) == left ? lo : hi) = mid;
      }
      total += left * (lo - a) + right * (b - lo);
    }
    left = right;
  }
  return total;
}

TEST(Dispersion, QuadraticRelations) {
  const Dispersion d = Dispersion::quadratic();
  EXPECT_DOUBLE_EQ(d.energy({1, 2, 2}), 4.5);
  EXPECT_EQ(d.group_velocity({1, -2, 3}), (Vec3{1, -2, 3}));
  EXPECT_DOUBLE_EQ(d.shell_radius(2.0), 2.0);
  EXPECT_DOUBLE_EQ(d.shell_jacobian(2.0), 2.0);
  EXPECT_DOUBLE_EQ(d.shell_jacobian(0.5), 1.0);
}

TEST(Dispersion, LinearRelations) {
  const Dispersion d = Dispersion::linear();
  EXPECT_DOUBLE_EQ(d.energy({0, 3, 4}), 5.0);
  EXPECT_NEAR(norm(d.group_velocity({0, 3, 4}) - Vec3{0, 0.6, 0.8}), 0.0, 1e-15);
  EXPECT_DOUBLE_EQ(d.shell_radius(2.5), 2.5);
  EXPECT_DOUBLE_EQ(d.shell_jacobian(2.0), 4.0);
  EXPECT_THROW(d.group_velocity({0, 0, 0}), InvalidInput);
}

TEST(Dispersion, ShellJacobianIsRadiusSquaredOverSpeed) {
  for (const Dispersion d : {Dispersion::quadratic(), Dispersion::linear()}) {
    for (double e : {0.1, 0.5, 1.0, 2.0, 7.0}) {
      const double r = d.shell_radius(e);
      EXPECT_NEAR(d.shell_jacobian(e), r * r / d.speed(r), 1e-14 * r * r);
    }
  }
}

TEST(Dispersion, GradientMatchesCentralDifference) {
  std::mt19937_64 gen(11);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (const Dispersion d : {Dispersion::quadratic(), Dispersion::linear()}) {
    for (int i = 0; i < 100; ++i) {
      const Vec3 p{u(gen), u(gen), u(gen)};
      const double h = 1e-5;
      const Vec3 fd{(d.energy(p + Vec3{h, 0, 0}) - d.energy(p - Vec3{h, 0, 0})) / (2 * h),
                    (d.energy(p + Vec3{0, h, 0}) - d.energy(p - Vec3{0, h, 0})) / (2 * h),
                    (d.energy(p + Vec3{0, 0, h}) - d.energy(p - Vec3{0, 0, h})) / (2 * h)};
      const Vec3 g = d.group_velocity(p);
      EXPECT_LE(norm(fd - g), 1e-6 * norm(g)) << "p = " << p.x << " " << p.y << " " << p.z;
    }
  }
}

TEST(Covariance, GaussianValues) {
  const Covariance c = Covariance::gaussian(1.0, 1.0);
  EXPECT_DOUBLE_EQ(c({0, 0, 0}), 1.0);
  const Covariance c2 = Covariance::gaussian(2.0, 1.0);
  EXPECT_NEAR(c2({1, 0, 0}), 2.0 * std::exp(-0.5), 1e-15);
  EXPECT_NEAR(c2({0, 0, 1}), 1.2130613194252668, 1e-15);
}

TEST(Covariance, ExponentialCorrelationValues) {
  const Covariance c = Covariance::exponential(3.0, 2.0);
  EXPECT_DOUBLE_EQ(c({0, 0, 0}), 3.0);
  EXPECT_NEAR(c({2, 0, 0}), 3.0 / 4.0, 1e-15);
  EXPECT_NEAR(c({0, 0, 4}), 3.0 / 25.0, 1e-15);
}

TEST(Covariance, InfiniteScaleIsConstant) {
  const Covariance c = Covariance::gaussian(0.7, kInf);
  EXPECT_DOUBLE_EQ(c({0, 0, 0}), 0.7);
  EXPECT_DOUBLE_EQ(c({100, -3, 5}), 0.7);
}

TEST(Covariance, EvenAndNonnegative) {
  std::mt19937_64 gen(12);
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  for (const Covariance c : {Covariance::gaussian(1.3, 0.7), Covariance::exponential(0.4, 1.9)}) {
    for (int i = 0; i < 1000; ++i) {
      const Vec3 k{u(gen), u(gen), u(gen)};
      ASSERT_EQ(c(k), c(-k));
      ASSERT_GE(c(k), 0.0);
    }
    EXPECT_LT(c({500, 0, 0}), 1e-6 * c({0, 0, 0}));
  }
}

TEST(Covariance, RejectsInvalidParameters) {
  EXPECT_THROW(Covariance::gaussian(-1.0, 1.0), InvalidInput);
  EXPECT_THROW(Covariance::gaussian(NAN, 1.0), InvalidInput);
  EXPECT_THROW(Covariance::gaussian(1.0, 0.0), InvalidInput);
  EXPECT_THROW(Covariance::exponential(1.0, -2.0), InvalidInput);
  EXPECT_THROW(Covariance::gaussian(1.0, 1.0)({NAN, 0, 0}), InvalidInput);
}

TEST(Shape, PointEvaluation) {
  const ShapeFunction ball(Ball{{0, 0, 0}, 1.0});
  EXPECT_EQ(ball({0, 0, 0}), 1.0);
  EXPECT_EQ(ball({0, 0, 2}), 0.0);
  EXPECT_EQ(ball({0, 0, 1}), 1.0);  // closed set
  const ShapeFunction slab(Slab{1.0, 10.0});
  EXPECT_EQ(slab({0, 0, 0.5}), 1.0);
  EXPECT_EQ(slab({0, 0, -0.1}), 0.0);
  EXPECT_EQ(slab({10.5, 0, 0.5}), 0.0);
  const ShapeFunction box(Box{{1, 1, 1}, {1, 2, 3}}, 0.5);
  EXPECT_EQ(box({1.5, 2.5, 3.5}), 0.5);
  EXPECT_EQ(box({0.5, 2.5, 3.5}), 0.0);
  EXPECT_EQ(box.rho_max(), 0.5);
  EXPECT_THROW(ball({INFINITY, 0, 0}), InvalidInput);
}

TEST(Shape, RejectsInvalidGeometry) {
  EXPECT_THROW(ShapeFunction(Ball{{0, 0, 0}, 0.0}), InvalidInput);
  EXPECT_THROW(ShapeFunction(Ball{{NAN, 0, 0}, 1.0}), InvalidInput);
  EXPECT_THROW(ShapeFunction(Box{{0, 0, 0}, {1, 0, 1}}), InvalidInput);
  EXPECT_THROW(ShapeFunction(Slab{-1.0, 1.0}), InvalidInput);
  EXPECT_THROW(ShapeFunction(Ball{{0, 0, 0}, 1.0}, -1.0), InvalidInput);
}

TEST(RayIntegral, Examples) {
  const ShapeFunction slab(Slab{1.0, kInf});
  EXPECT_DOUBLE_EQ(slab.ray_integral({0, 0, -1}, {0, 0, 1}, 0.0, kInf), 1.0);
  const ShapeFunction ball(Ball{{0, 0, 0}, 1.0});
  EXPECT_DOUBLE_EQ(ball.ray_integral({0, 0, 0}, {0, 0, 1}, 0.0, kInf), 1.0);
  EXPECT_DOUBLE_EQ(ball.ray_integral({0, 0, -2}, {0, 0, 1}, 0.0, kInf), 2.0);
  EXPECT_NEAR(rho_line_integral(ball, {0, 0, -2}, {0, 0, 1}, 0.0, 5.0), 2.0, 1e-9);
  // Velocity scales time, not length.
  EXPECT_DOUBLE_EQ(ball.ray_integral({0, 0, -2}, {0, 0, 2}, 0.0, kInf), 1.0);
  EXPECT_DOUBLE_EQ(ball.ray_integral({0, 0, -2}, {0, 0, 1}, -kInf, kInf), 2.0);
  EXPECT_DOUBLE_EQ(ball.ray_integral({5, 0, -2}, {0, 0, 1}, 0.0, kInf), 0.0);
}

TEST(RayIntegral, ZeroDensityAndErrors) {
  const ShapeFunction empty(Ball{{0, 0, 0}, 1.0}, 0.0);
  EXPECT_EQ(empty.ray_integral({0, 0, 0}, {0, 0, 1}, -kInf, kInf), 0.0);
  const ShapeFunction ball(Ball{{0, 0, 0}, 1.0});
  EXPECT_THROW(ball.ray_integral({0, 0, 0}, {0, 0, 0}, 0.0, 1.0), InvalidInput);
  EXPECT_THROW(ball.ray_integral({0, 0, 0}, {0, 0, 1}, 1.0, 0.0), InvalidInput);
  EXPECT_THROW(ball.ray_integral({NAN, 0, 0}, {0, 0, 1}, 0.0, 1.0), InvalidInput);
}

class RayIntegralShapes : public ::testing::TestWithParam<ShapeFunction> {};

TEST_P(RayIntegralShapes, SplitsAtZero) {
  const ShapeFunction &shape = GetParam();
  std::mt19937_64 gen(21);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const Vec3 c = shape.bounding_center();
  const double r = std::min(shape.bounding_radius(), 5.0);
  for (int i = 0; i < 1000; ++i) {
    const Vec3 q = c + r * Vec3{u(gen), u(gen), u(gen)};
    const Vec3 v = random_direction(gen) * (0.5 + u(gen) * u(gen));
    const double whole = shape.ray_integral(q, v, -kInf, kInf);
    const double parts = shape.ray_integral(q, v, -kInf, 0.0) + shape.ray_integral(q, v, 0.0, kInf);
    ASSERT_NEAR(whole, parts, 1e-12 * std::max(1.0, whole));
  }
}

TEST_P(RayIntegralShapes, MatchesPointwiseQuadrature) {
  const ShapeFunction &shape = GetParam();
  std::mt19937_64 gen(22);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const Vec3 c = shape.bounding_center();
  const double r = shape.bounding_radius();
  for (int i = 0; i < 100; ++i) {
    const Vec3 q = c + 0.8 * r * Vec3{u(gen), u(gen), u(gen)} * (1.0 / std::sqrt(3.0));
    const Vec3 v = random_direction(gen);
    const double span = 2.5 * r;
    const double exact_fwd = shape.ray_integral(q, v, 0.0, kInf);
    const double exact_all = shape.ray_integral(q, v, -kInf, kInf);
    const double fwd = rho_line_integral(shape, q, v, 0.0, span);
    const double all = rho_line_integral(shape, q, v, -span, span);
    ASSERT_NEAR(exact_fwd, fwd, 1e-8 * std::max(1.0, fwd));
    ASSERT_NEAR(exact_all, all, 1e-8 * std::max(1.0, all));
  }
}

INSTANTIATE_TEST_SUITE_P(Geometries, RayIntegralShapes,
                         ::testing::Values(ShapeFunction(Ball{{0.5, -1, 2}, 1.5}),
                                           ShapeFunction(Box{{-1, 0, 1}, {2, 1, 3}}, 0.75),
                                           ShapeFunction(Slab{2.0, 3.0})));

TEST(Shape, BoundingSphereContainsSupport) {
  std::mt19937_64 gen(23);
  std::uniform_real_distribution<double> u(-6.0, 6.0);
  for (const ShapeFunction &s : {ShapeFunction(Ball{{1, 2, 3}, 2.0}),
                                 ShapeFunction(Box{{-1, 0, 1}, {2, 1, 3}}),
                                 ShapeFunction(Slab{2.0, 3.0})}) {
    for (int i = 0; i < 20000; ++i) {
      const Vec3 q{u(gen), u(gen), u(gen)};
      if (s(q) > 0.0) {
        ASSERT_LE(norm(q - s.bounding_center()), s.bounding_radius() * (1 + 1e-15));
      }
    }
  }
}

TEST(Shape, VolumeAndNames) {
  EXPECT_NEAR(ShapeFunction(Ball{{0, 0, 0}, 2.0}).volume(), 32.0 * M_PI / 3.0, 1e-13);
  EXPECT_DOUBLE_EQ(ShapeFunction(Box{{0, 0, 0}, {1, 2, 3}}).volume(), 6.0);
  EXPECT_DOUBLE_EQ(ShapeFunction(Slab{2.0, 1.0}).volume(), 8.0);
  EXPECT_EQ(ShapeFunction(Slab{2.0, 1.0}).kind_name(), "slab");
  EXPECT_EQ(ShapeFunction(Slab{2.0, kInf}).bounding_center(), (Vec3{0, 0, 1}));
}

TEST(Medium, WaveRequiresLinearDispersion) {
  const ShapeFunction ball(Ball{{0, 0, 0}, 1.0});
  const Covariance c = Covariance::gaussian(1.0, 1.0);
  EXPECT_THROW(Medium(ball, c, Dispersion::quadratic(), Model::wave), ConfigError);
  EXPECT_NO_THROW(Medium(ball, c, Dispersion::linear(), Model::wave));
  EXPECT_NO_THROW(Medium(ball, c, Dispersion::linear(), Model::schroedinger));
}

TEST(Medium, RateFactor) {
  const Medium wave(ShapeFunction(Ball{}), Covariance::gaussian(1.0, 1.0), Dispersion::linear(),
                    Model::wave);
  EXPECT_EQ(wave.rate_factor(2.0), 4.0);
  EXPECT_EQ(wave.with_model(Model::schroedinger).rate_factor(2.0), 1.0);
}

}  // namespace
}  // namespace kinscat
