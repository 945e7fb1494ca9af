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

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <mutex>
#include <span>
#include <thread>
#include <vector>

#include "kinscat/kernel.hpp"
#include "kinscat/medium.hpp"
#include "kinscat/random.hpp"

namespace kinscat {

/// Uniform plane flux at momentum k through a disk on a plane orthogonal to k.
struct SourceSpec {
  Vec3 k;
  Vec3 direction;     ///< k / |k|
  Vec3 plane_point;   ///< disk center, outside the shape's bounding sphere
  Frame frame;        ///< frame.w = direction
  double window_radius{0.0};
  double flux{0.0};   ///< |k_hat . grad omega(k)|

  /// Estimator weight carried by every sampled path: pi R^2 |k_hat . grad omega|.
  double weight() const;

  /// Validating constructor. Throws ConfigError when the plane cuts the shape's
  /// bounding sphere or the disk does not cover its shadow.
  static SourceSpec create(const Medium &medium, const Vec3 &k, const Vec3 &plane_point,
                           double window_radius);

  /// Disk centred on the shadow of the shape: plane `plane_gap` beyond the
  /// bounding sphere, radius = bounding radius + `margin`.
  static SourceSpec around(const Medium &medium, const Vec3 &k, double margin,
                           double plane_gap = 1.0);
};

struct PhaseSpaceState {
  Vec3 q;
  Vec3 p;
  double t{0.0};
};

struct CollisionEvent {
  std::uint32_t index{0};  ///< 1-based
  Vec3 position;
  Vec3 p_in;
  Vec3 p_out;
  double time{0.0};
};

struct Path {
  Vec3 source_point;
  Vec3 initial_momentum;
  std::vector<CollisionEvent> collisions;
  Vec3 final_position;  ///< last collision point, or the source point
  Vec3 final_momentum;
  double final_time{0.0};
  /// nu times the rho-integral ahead of final_position at escape.
  double escape_optical_depth{0.0};
  bool escaped{false};
  bool truncated{false};

  void clear() {
    collisions.clear();
    escaped = truncated = false;
    escape_optical_depth = final_time = 0.0;
  }
};

struct FlightResult {
  bool escaped{false};
  double time{0.0};           ///< flight time to the collision (collided only)
  double optical_depth{0.0};  ///< nu * rho-integral ahead of the start (escaped only)
};

PhaseSpaceState sample_source(const SourceSpec &source, Philox4x32 &rng);

/// Time to the next collision under the rate nu * rho(q + grad omega(p) t),
/// by exact inversion of the chord integral.
FlightResult free_flight(const PhaseSpaceState &state, const ShellKernel &kernel,
                         const ShapeFunction &shape, Philox4x32 &rng);

/// Same law sampled by thinning against nu * rho_max, for shape functions that
/// are not piecewise constant. `rho` is evaluated at positions; `support` is the
/// parameter interval outside which rho vanishes. optical_depth is not reported.
template <class Rho>
FlightResult thinning_flight(const Vec3 &q, const Vec3 &velocity, double nu,
                             double rho_max, Rho &&rho, Interval support,
                             Philox4x32 &rng) {
  const double majorant = nu * rho_max;
  double t = std::max(0.0, support.lo);
  if (!(majorant > 0.0)) return {true, 0.0, 0.0};
  while (true) {
    t += rng.exponential() / majorant;
    if (t > support.hi) return {true, 0.0, 0.0};
    if (rng.uniform() * rho_max < rho(q + velocity * t)) return {false, t, 0.0};
  }
}

/// Receives every collision of a path and the finished path.
class PathObserver {
 public:
  virtual ~PathObserver() = default;
  virtual void on_collision(const Path &path, const CollisionEvent &event) = 0;
  virtual void on_finish(const Path &) {}
};

constexpr std::uint32_t kDefaultCollisionCap = 10000;

/// Runs one trajectory from the source plane to escape (or to `cap` collisions,
/// which flags it truncated). `path` is overwritten.
void simulate_path(const SourceSpec &source, const ShellKernel &kernel,
                   const ShapeFunction &shape, Philox4x32 &rng,
                   std::span<PathObserver *const> observers, Path &path,
                   std::uint32_t cap = kDefaultCollisionCap);

Path simulate_path(const SourceSpec &source, const ShellKernel &kernel,
                   const ShapeFunction &shape, Philox4x32 &rng,
                   std::span<PathObserver *const> observers = {},
                   std::uint32_t cap = kDefaultCollisionCap);

struct RunOptions {
  std::uint64_t paths{1};
  std::uint64_t seed{1};
  unsigned workers{1};
  std::uint64_t batch_size{10000};
  std::uint32_t collision_cap{kDefaultCollisionCap};

  std::uint64_t batch_count() const {
    return batch_size == 0 ? 0 : (paths + batch_size - 1) / batch_size;
  }
};

struct RunStats {
  std::uint64_t paths{0};
  std::uint64_t escaped{0};
  std::uint64_t truncated{0};
  std::uint64_t collisions{0};
  std::uint64_t max_collisions{0};

  void record(const Path &path);
  void merge(const RunStats &o);
  double truncated_fraction() const {
    return paths == 0 ? 0.0 : static_cast<double>(truncated) / static_cast<double>(paths);
  }
};

/// Validates options; throws InvalidInput.
void check_run_options(const RunOptions &options);

/// Batched, deterministic Monte Carlo driver.
///
/// Batch b covers paths [b * batch_size, min(paths, (b + 1) * batch_size)) and
/// draws from make_stream(seed, b). Each batch scores into a fresh copy of
/// `prototype`; results are merged left to right in batch order. The output
/// therefore depends on (seed, batch_size, paths) and never on `workers`.
///
/// Scorer must be a copyable PathObserver with `void merge(const Scorer &)`.
template <class Scorer>
Scorer run_batches(const SourceSpec &source, const ShellKernel &kernel,
                   const ShapeFunction &shape, const RunOptions &options,
                   const Scorer &prototype, RunStats *stats = nullptr) {
  check_run_options(options);
  const std::uint64_t batches = options.batch_count();
  std::vector<Scorer> results(batches, prototype);
  std::vector<RunStats> batch_stats(batches);
  std::atomic<std::uint64_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;

  auto work = [&] {
    Path path;
    while (true) {
      const std::uint64_t b = next.fetch_add(1);
      if (b >= batches) return;
      try {
        Philox4x32 rng = make_stream(options.seed, b);
        Scorer &scorer = results[b];
        PathObserver *const observers[] = {&scorer};
        const std::uint64_t first = b * options.batch_size;
        const std::uint64_t last = std::min(options.paths, first + options.batch_size);
        for (std::uint64_t i = first; i < last; ++i) {
          simulate_path(source, kernel, shape, rng, observers, path, options.collision_cap);
          batch_stats[b].record(path);
        }
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next.store(batches);
        return;
      }
    }
  };

  const unsigned threads =
      static_cast<unsigned>(std::min<std::uint64_t>(std::max(1u, options.workers), batches));
  if (threads <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (unsigned i = 0; i < threads; ++i) pool.emplace_back(work);
  }
  if (failure) std::rethrow_exception(failure);

  Scorer merged = prototype;
  RunStats total;
  for (std::uint64_t b = 0; b < batches; ++b) {
    merged.merge(results[b]);
    total.merge(batch_stats[b]);
  }
  if (stats) *stats = total;
  return merged;
}

}  // namespace kinscat
