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

#include "kinscat/vec3.hpp"

#include <algorithm>
#include <cmath>

#include "kinscat/errors.hpp"

namespace kinscat {

ConfigError::ConfigError(std::vector<std::string> problems)
    : std::runtime_error([&] {
        std::string msg;
        for (const auto &p : problems) {
          if (!msg.empty()) msg += "\n";
          msg += p;
        }
        return msg.empty() ? std::string("invalid configuration") : msg;
      }()),
      problems_(std::move(problems)) {}

Vec3 normalized(const Vec3 &a) {
  // Rescale first so tiny or huge components do not under- or overflow.
  const double m = std::max({std::abs(a.x), std::abs(a.y), std::abs(a.z)});
  if (!(m > 0.0) || !std::isfinite(m)) {
    throw InvalidInput("cannot normalise a zero or non-finite vector");
  }
  const Vec3 s = a * (1.0 / m);
  return s * (1.0 / norm(s));
}

Frame make_frame(const Vec3 &w) {
  const double ax = std::abs(w.x);
  const double ay = std::abs(w.y);
  const double az = std::abs(w.z);
  Vec3 axis{1.0, 0.0, 0.0};
  if (ay < ax && ay <= az) {
    axis = {0.0, 1.0, 0.0};
  } else if (az < ax && az < ay) {
    axis = {0.0, 0.0, 1.0};
  }
  const Vec3 u = normalized(axis - dot(axis, w) * w);
  return {u, cross(w, u), w};
}

}  // namespace kinscat
