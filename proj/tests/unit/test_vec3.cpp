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

#include "kinscat/errors.hpp"
#include "kinscat/vec3.hpp"

namespace kinscat {
namespace {

void expect_orthonormal(const Frame &f) {
  EXPECT_NEAR(dot(f.u, f.u), 1.0, 1e-15);
  EXPECT_NEAR(dot(f.v, f.v), 1.0, 1e-15);
  EXPECT_NEAR(dot(f.w, f.w), 1.0, 1e-15);
  EXPECT_NEAR(dot(f.u, f.v), 0.0, 1e-15);
  EXPECT_NEAR(dot(f.u, f.w), 0.0, 1e-15);
  EXPECT_NEAR(dot(f.v, f.w), 0.0, 1e-15);
  const Vec3 c = cross(f.u, f.v);
  EXPECT_NEAR(norm(c - f.w), 0.0, 1e-15);
}

TEST(Vec3, Arithmetic) {
  const Vec3 a{1, 2, 3}, b{-1, 0.5, 2};
  EXPECT_EQ(a + b, (Vec3{0, 2.5, 5}));
  EXPECT_EQ(a - b, (Vec3{2, 1.5, 1}));
  EXPECT_EQ(2.0 * a, (Vec3{2, 4, 6}));
  EXPECT_EQ(-a, (Vec3{-1, -2, -3}));
  EXPECT_DOUBLE_EQ(dot(a, b), 6.0);
  EXPECT_EQ(cross(Vec3{1, 0, 0}, Vec3{0, 1, 0}), (Vec3{0, 0, 1}));
  EXPECT_DOUBLE_EQ(norm(Vec3{3, 4, 12}), 13.0);
}

TEST(Vec3, NormalizedRejectsZeroAndNonFinite) {
  EXPECT_THROW(normalized(Vec3{}), InvalidInput);
  EXPECT_THROW(normalized(Vec3{NAN, 0, 0}), InvalidInput);
  EXPECT_THROW(normalized(Vec3{INFINITY, 0, 0}), InvalidInput);
  EXPECT_NEAR(norm(normalized(Vec3{1e-200, 1e-200, 0})), 1.0, 1e-15);
}

TEST(Frame, ZAxisGivesCartesianBasis) {
  const Frame f = make_frame({0, 0, 1});
  EXPECT_EQ(f.u, (Vec3{1, 0, 0}));
  EXPECT_EQ(f.v, (Vec3{0, 1, 0}));
  EXPECT_EQ(f.w, (Vec3{0, 0, 1}));
}

TEST(Frame, OrthonormalForAssortedAxes) {
  for (const Vec3 &w : {Vec3{1, 0, 0}, Vec3{0, -1, 0}, Vec3{0, 0, -1}, Vec3{1, 1, 1},
                        Vec3{0.3, -0.2, 0.9}, Vec3{-1e-9, 1, 1e-9}}) {
    const Frame f = make_frame(normalized(w));
    expect_orthonormal(f);
    EXPECT_NEAR(norm(f.w - normalized(w)), 0.0, 1e-15);
  }
}

TEST(Frame, ToWorldUsesBasis) {
  const Frame f = make_frame(normalized(Vec3{1, 2, 2}));
  const Vec3 x = f.to_world(0.5, -1.5, 2.0);
  EXPECT_NEAR(dot(x, f.u), 0.5, 1e-14);
  EXPECT_NEAR(dot(x, f.v), -1.5, 1e-14);
  EXPECT_NEAR(dot(x, f.w), 2.0, 1e-14);
}

}  // namespace
}  // namespace kinscat
