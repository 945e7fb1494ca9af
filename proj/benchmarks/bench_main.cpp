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

#include <benchmark/benchmark.h>

#include <cmath>
#include <numbers>

#include "kinscat/diffusion.hpp"
#include "kinscat/estimators.hpp"

namespace {

using namespace kinscat;

Medium ball(double rate) {
  const Medium unit(ShapeFunction(Ball{{0, 0, 0}, 1.0}), Covariance::gaussian(1.0, 1.0),
                    Dispersion::quadratic());
  return unit.with_covariance(Covariance::gaussian(rate / total_rate(unit, {0, 0, 1}), 1.0));
}

void BM_FreeFlight(benchmark::State &state) {
  const Medium m = ball(1.0);
  const ShellKernel kernel(m, 0.5);
  Philox4x32 rng = make_stream(1, 0);
  const PhaseSpaceState start{{0.1, 0.2, -2}, {0, 0, 1}, 0.0};
  for (auto _ : state) benchmark::DoNotOptimize(free_flight(start, kernel, m.shape(), rng));
}
BENCHMARK(BM_FreeFlight);

void BM_SampleOutgoing(benchmark::State &state) {
  const ShellKernel kernel(ball(1.0), 0.5);
  Philox4x32 rng = make_stream(2, 0);
  Vec3 p{0, 0, 1};
  for (auto _ : state) {
    p = sample_outgoing(kernel, p, rng);
    benchmark::DoNotOptimize(p);
  }
}
BENCHMARK(BM_SampleOutgoing);

// Argument: nu times the ball diameter.
void BM_SimulatePath(benchmark::State &state) {
  const Medium m = ball(0.5 * static_cast<double>(state.range(0)));
  const Experiment e = Experiment::create(m, {0, 0, 1});
  Philox4x32 rng = make_stream(3, 0);
  Path path;
  std::uint64_t collisions = 0;
  for (auto _ : state) {
    simulate_path(e.source, e.kernel, m.shape(), rng, {}, path);
    collisions += path.collisions.size();
  }
  state.counters["collisions/path"] =
      benchmark::Counter(static_cast<double>(collisions), benchmark::Counter::kAvgIterations);
}
BENCHMARK(BM_SimulatePath)->Arg(2)->Arg(10)->Arg(40);

void BM_PeakScoring(benchmark::State &state) {
  const Experiment e = Experiment::create(ball(5.0), {0, 0, 1});
  std::vector<Vec3> kappas;
  for (int i = 0; i < state.range(0); ++i) kappas.push_back({0.1 * i, 0, 0});
  PeakScorer scorer(e, kappas);
  PathObserver *const observers[] = {&scorer};
  Philox4x32 rng = make_stream(4, 0);
  Path path;
  for (auto _ : state) simulate_path(e.source, e.kernel, e.medium.shape(), rng, observers, path);
}
BENCHMARK(BM_PeakScoring)->Arg(1)->Arg(16);

void BM_ConeQuadrature(benchmark::State &state) {
  const DiffusionParams p = DiffusionParams::from_rates(1.0, 1.0, 1.0);
  const double kappa = 0.1 * static_cast<double>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(cone_quadrature(p, kappa));
}
BENCHMARK(BM_ConeQuadrature)->Arg(0)->Arg(5)->Arg(100);

void BM_TotalRate(benchmark::State &state) {
  const Medium m = ball(1.0);
  for (auto _ : state) benchmark::DoNotOptimize(total_rate(m, {0.3, 0.4, 0.5}));
}
BENCHMARK(BM_TotalRate);

void BM_SingleScatteringQuadrature(benchmark::State &state) {
  const Medium m = ball(1.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(single_scattering_quadrature(m, {0, 0, 1}, {1, 0, 0}));
  }
}
BENCHMARK(BM_SingleScatteringQuadrature)->Unit(benchmark::kMillisecond);

}  // namespace

// The packaged benchmark_main archive carries LTO bytecode from another
// compiler build, so the entry point is defined here.
BENCHMARK_MAIN();
