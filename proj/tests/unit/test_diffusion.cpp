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
#include <numbers>
#include <random>

#include "kinscat/diffusion.hpp"
#include "kinscat/errors.hpp"
#include "kinscat/kernel.hpp"

namespace kinscat {
namespace {

constexpr double kPi = std::numbers::pi;

DiffusionParams params_for(double lstar) {
  // Unit speed, isotropic closure: nu = nu_tr = 1 / l*.
  return DiffusionParams::from_rates(1.0, 1.0 / lstar, 1.0 / lstar);
}

TEST(DiffusionParams, Examples) {
  const DiffusionParams p = DiffusionParams::from_rates(1.0, 0.5, 0.5);
  EXPECT_DOUBLE_EQ(p.mean_free_path, 2.0);
  const DiffusionParams iso = DiffusionParams::from_rates(1.0, 1.0, 1.0);
  EXPECT_DOUBLE_EQ(iso.diffusion, 1.0 / 3.0);
  EXPECT_DOUBLE_EQ(iso.mean_free_path, 1.0);
  EXPECT_THROW(DiffusionParams::from_rates(1.0, 0.0, 1.0), InvalidInput);
  EXPECT_THROW(DiffusionParams::from_rates(1.0, 1.0, INFINITY), InvalidInput);
}

TEST(DiffusionParams, FromMedium) {
  const double theta0 = 0.5 / (8.0 * kPi * kPi * std::pow(2.0 * kPi, -1.5));
  const Medium m(ShapeFunction(Slab{1.0, 1.0}), Covariance::gaussian(theta0, INFINITY),
                 Dispersion::quadratic());
  const DiffusionParams p = diffusion_params(m, {0, 0, 1});
  EXPECT_NEAR(p.total_rate, 0.5, 1e-12);
  EXPECT_NEAR(p.mean_free_path, 2.0, 1e-11);
  EXPECT_NEAR(p.diffusion, 1.0 / 1.5, 1e-11);

  const Medium wave(ShapeFunction(Slab{1.0, 1.0}), Covariance::gaussian(theta0, 1.0),
                    Dispersion::linear(), Model::wave);
  for (double k : {0.5, 2.0}) {
    const DiffusionParams w = diffusion_params(wave, {0, 0, k});
    EXPECT_NEAR(w.mean_free_path, 1.0 / w.total_rate, 1e-15);
  }
  EXPECT_THROW(diffusion_params(m.with_covariance(Covariance::gaussian(0.0, 1.0)), {0, 0, 1}),
               InvalidInput);
}

TEST(DirichletGreen, Example) {
  EXPECT_NEAR(dirichlet_green({0, 0, 1}, {1, 0, 1}), (1.0 - 1.0 / std::sqrt(5.0)) / (4.0 * kPi),
              1e-16);
}

TEST(DirichletGreen, VanishesAtTheBoundary) {
  double previous = INFINITY;
  for (double h : {1e-1, 1e-3, 1e-6, 1e-9}) {
    const double g = dirichlet_green({0.3, 0.1, 1.0}, {0, 0, h});
    EXPECT_LT(g, previous);
    previous = g;
  }
  EXPECT_LT(previous, 1e-9);
}

TEST(DirichletGreen, NonnegativeAndSymmetric) {
  std::mt19937_64 gen(31);
  std::uniform_real_distribution<double> xy(-5.0, 5.0), z(1e-3, 5.0);
  for (int i = 0; i < 10000; ++i) {
    const Vec3 a{xy(gen), xy(gen), z(gen)}, b{xy(gen), xy(gen), z(gen)};
    const double g = dirichlet_green(a, b);
    ASSERT_GE(g, 0.0);
    ASSERT_NEAR(g, dirichlet_green(b, a), 1e-14 * g);
  }
}

TEST(DirichletGreen, Errors) {
  EXPECT_THROW(dirichlet_green({0, 0, 1}, {0, 0, 1}), InvalidInput);
  EXPECT_THROW(dirichlet_green({0, 0, 0}, {0, 0, 1}), InvalidInput);
  EXPECT_THROW(dirichlet_green({0, 0, 1}, {0, 0, -1}), InvalidInput);
}

TEST(ConeBracket, Examples) {
  EXPECT_NEAR(cone_bracket(1.0), 1.0 + 0.5 * (1.0 - std::exp(-2.0)), 1e-15);
  EXPECT_NEAR(cone_bracket(1.0), 1.43233, 5e-6);
  EXPECT_EQ(cone_bracket(0.0), 2.0);
  EXPECT_NEAR(cone_bracket(1e6), 1.0, 1e-6);
}

TEST(ConeBracket, SeriesBranchIsContinuous) {
  for (double lk : {1e-12, 1e-8, 1e-6, 4.9e-5, 5.1e-5}) {
    EXPECT_NEAR(cone_bracket(lk), 2.0 - lk + 2.0 * lk * lk / 3.0, 1e-13) << lk;
    EXPECT_NEAR(cone_bracket(lk), 2.0, 1e-9 + lk) << lk;
  }
  // Either side of the switch at 2 l* |kappa| = 1e-4.
  const double below = cone_shape(0.5e-4 * (1 - 1e-9));
  const double above = cone_shape(0.5e-4 * (1 + 1e-9));
  EXPECT_NEAR(below, above, 1e-12);
}

TEST(ConeBracket, StrictlyDecreasingAndBounded) {
  double previous = cone_bracket(0.0);
  EXPECT_EQ(previous, 2.0);
  for (int i = 1; i <= 2000; ++i) {
    const double lk = 1e-6 * std::pow(1.02, i);
    const double b = cone_bracket(lk);
    ASSERT_LT(b, previous) << lk;
    ASSERT_GT(b, 1.0);
    previous = b;
  }
}

TEST(ConeHalfWidth, ScalesInverselyWithMeanFreePath) {
  const double one = cone_half_width(1.0);
  EXPECT_NEAR(cone_shape(one), 0.5, 1e-12);
  EXPECT_NEAR(one / cone_half_width(2.0), 2.0, 1e-6);
  EXPECT_NEAR(cone_half_width(0.25) / one, 4.0, 1e-6);
  EXPECT_THROW(cone_half_width(0.0), InvalidInput);
}

TEST(ConeClosedForm, Normalisation) {
  const DiffusionParams p = DiffusionParams::from_rates(1.0, 2.0, 1.5);
  const double a = p.total_rate * p.total_rate / p.diffusion * p.mean_free_path;
  EXPECT_DOUBLE_EQ(cone_closed_form(p, 0.0), 2.0 * a);
  EXPECT_NEAR(cone_closed_form(p, 1.0 / p.mean_free_path), a * cone_bracket(1.0), 1e-15 * a);
  EXPECT_EQ(cone_closed_form(p, Vec3{0.3, 0.4, 0}), cone_closed_form(p, 0.5));
  EXPECT_THROW(cone_closed_form(p, Vec3{0, 0, 1}), InvalidInput);
}

TEST(ConeQuadrature, MatchesClosedFormOnGrid) {
  for (double lstar : {0.5, 1.0, 2.0}) {
    const DiffusionParams p = params_for(lstar);
    for (double lk : {0.0, 1e-3, 0.1, 0.5, 1.0, 2.0, 10.0}) {
      const ConeIntegral q = cone_quadrature(p, lk / lstar);
      const double exact = cone_closed_form(p, lk / lstar);
      EXPECT_NEAR(q.value, exact, 1e-6 * exact) << "l* = " << lstar << ", l*kappa = " << lk;
      EXPECT_LE(q.error, 1e-8 * std::abs(q.value));
    }
  }
}

TEST(ConeQuadrature, Limits) {
  const DiffusionParams p = params_for(1.5);
  const double a = p.total_rate * p.total_rate / p.diffusion * p.mean_free_path;
  EXPECT_NEAR(cone_quadrature(p, 0.0).value, 2.0 * a, 1e-8 * a);
  EXPECT_NEAR(cone_quadrature(p, 1e4).value, a, 1e-3 * a);
  EXPECT_EQ(cone_quadrature(p, Vec3{0.6, 0.8, 0}).value, cone_quadrature(p, 1.0).value);
  EXPECT_THROW(cone_quadrature(p, Vec3{0, 0.1, 0.1}), InvalidInput);
  EXPECT_THROW(cone_quadrature(p, INFINITY), InvalidInput);
}

}  // namespace
}  // namespace kinscat
