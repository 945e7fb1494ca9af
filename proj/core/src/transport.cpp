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

#include "kinscat/transport.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "kinscat/errors.hpp"

namespace kinscat {

double SourceSpec::weight() const {
  return std::numbers::pi * window_radius * window_radius * flux;
}

SourceSpec SourceSpec::create(const Medium &medium, const Vec3 &k, const Vec3 &plane_point,
                              double window_radius) {
  if (!is_finite(k) || !(norm2(k) > 0.0)) throw ConfigError("source momentum must be finite and nonzero");
  if (!is_finite(plane_point)) throw ConfigError("source plane point must be finite");
  if (!(window_radius > 0.0) || !std::isfinite(window_radius)) {
    throw ConfigError("source window radius must be positive and finite");
  }
  const ShapeFunction &shape = medium.shape();
  const double bound = shape.bounding_radius();
  if (!std::isfinite(bound)) throw ConfigError("source needs a shape with bounded support");

  SourceSpec s;
  s.k = k;
  s.direction = normalized(k);
  s.plane_point = plane_point;
  s.frame = make_frame(s.direction);
  s.window_radius = window_radius;
  s.flux = std::abs(dot(s.direction, medium.dispersion().group_velocity(k)));

  const Vec3 offset = shape.bounding_center() - plane_point;
  const double ahead = dot(offset, s.direction);
  if (!(ahead > bound)) {
    throw ConfigError("source plane intersects the bounding region of the shape");
  }
  const double lateral = norm(offset - ahead * s.direction);
  if (window_radius < lateral + bound) {
    throw ConfigError("source window does not cover the shadow of the shape");
  }
  return s;
}

SourceSpec SourceSpec::around(const Medium &medium, const Vec3 &k, double margin,
                              double plane_gap) {
  if (!(margin >= 0.0) || !std::isfinite(margin)) throw ConfigError("window margin must be finite and nonnegative");
  if (!(plane_gap > 0.0) || !std::isfinite(plane_gap)) throw ConfigError("plane gap must be positive and finite");
  if (!is_finite(k) || !(norm2(k) > 0.0)) throw ConfigError("source momentum must be finite and nonzero");
  const ShapeFunction &shape = medium.shape();
  const double bound = shape.bounding_radius();
  if (!std::isfinite(bound)) throw ConfigError("source needs a shape with bounded support");
  const Vec3 dir = normalized(k);
  const Vec3 w = shape.bounding_center() - (bound + plane_gap) * dir;
  return create(medium, k, w, bound + margin);
}

PhaseSpaceState sample_source(const SourceSpec &source, Philox4x32 &rng) {
  const double r = source.window_radius * std::sqrt(rng.uniform());
  const double phi = 2.0 * std::numbers::pi * rng.uniform();
  const Vec3 q = source.plane_point + source.frame.to_world(r * std::cos(phi), r * std::sin(phi), 0.0);
  return {q, source.k, 0.0};
}

FlightResult free_flight(const PhaseSpaceState &state, const ShellKernel &kernel,
                         const ShapeFunction &shape, Philox4x32 &rng) {
  const double nu = kernel.total_rate();
  const double density = shape.density();
  if (nu == 0.0 || density == 0.0) return {true, 0.0, 0.0};
  const Vec3 v = kernel.medium().dispersion().group_velocity(state.p);
  const auto c = shape.chord(state.q, v);
  if (!c || c->hi <= 0.0) return {true, 0.0, 0.0};
  const double lo = std::max(0.0, c->lo);
  // Same arithmetic as ShapeFunction::ray_integral over [0, inf).
  const double ahead = c->hi > lo ? density * (c->hi - lo) : 0.0;
  const double depth = nu * ahead;
  const double xi = rng.exponential();
  if (xi >= depth) return {true, 0.0, depth};
  const double tau = std::min(c->hi, lo + xi / (nu * density));
  return {false, tau, 0.0};
}

void simulate_path(const SourceSpec &source, const ShellKernel &kernel,
                   const ShapeFunction &shape, Philox4x32 &rng,
                   std::span<PathObserver *const> observers, Path &path,
                   std::uint32_t cap) {
  path.clear();
  PhaseSpaceState state = sample_source(source, rng);
  path.source_point = state.q;
  path.initial_momentum = state.p;
  const Dispersion &disp = kernel.medium().dispersion();

  while (true) {
    const FlightResult flight = free_flight(state, kernel, shape, rng);
    if (flight.escaped) {
      path.escaped = true;
      path.escape_optical_depth = flight.optical_depth;
      break;
    }
    state.q += disp.group_velocity(state.p) * flight.time;
    state.t += flight.time;
    const Vec3 p_out = sample_outgoing(kernel, state.p, rng);
    path.collisions.push_back({static_cast<std::uint32_t>(path.collisions.size() + 1),
                               state.q, state.p, p_out, state.t});
    state.p = p_out;
    for (PathObserver *o : observers) o->on_collision(path, path.collisions.back());
    if (path.collisions.size() >= cap) {
      path.truncated = true;
      break;
    }
  }
  path.final_position = state.q;
  path.final_momentum = state.p;
  path.final_time = state.t;
  for (PathObserver *o : observers) o->on_finish(path);
}

Path simulate_path(const SourceSpec &source, const ShellKernel &kernel,
                   const ShapeFunction &shape, Philox4x32 &rng,
                   std::span<PathObserver *const> observers, std::uint32_t cap) {
  Path path;
  simulate_path(source, kernel, shape, rng, observers, path, cap);
  return path;
}

void RunStats::record(const Path &path) {
  ++paths;
  if (path.escaped) ++escaped;
  if (path.truncated) ++truncated;
  collisions += path.collisions.size();
  max_collisions = std::max<std::uint64_t>(max_collisions, path.collisions.size());
}

void RunStats::merge(const RunStats &o) {
  paths += o.paths;
  escaped += o.escaped;
  truncated += o.truncated;
  collisions += o.collisions;
  max_collisions = std::max(max_collisions, o.max_collisions);
}

void check_run_options(const RunOptions &options) {
  if (options.paths < 1) throw InvalidInput("path count must be at least 1");
  if (options.batch_size < 1) throw InvalidInput("batch size must be at least 1");
  if (options.collision_cap < 1) throw InvalidInput("collision cap must be at least 1");
}

}  // namespace kinscat
