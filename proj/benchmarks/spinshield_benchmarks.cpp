// Copyright 2026 The spinshield Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include <benchmark/benchmark.h>

#include "spinshield/dynamics.hpp"
#include "spinshield/metrics.hpp"
#include "spinshield/topology.hpp"

namespace {

using namespace spinshield;

ClusterSpec maximal_cluster(int n_buffer) {
  ClusterSpec spec;
  spec.n_buffer = n_buffer;
  spec.graph = extreme_geometry(n_buffer, Extreme::maximal);
  spec.initial_buffer = InitialBuffer::max_coherent;
  return spec;
}

void BM_GeneratorApply(benchmark::State& state) {
  const ClusterSpec spec = maximal_cluster(static_cast<int>(state.range(0)));
  const LindbladGenerator gen(spec, Frame::rotating);
  const ComplexMatrix rho = initial_state(spec).matrix();
  ComplexMatrix out;
  for (auto _ : state) {
    gen.apply(rho, out);
    benchmark::DoNotOptimize(out.data());
  }
}
BENCHMARK(BM_GeneratorApply)->DenseRange(2, 6);

void BM_Rk4Step(benchmark::State& state) {
  const ClusterSpec spec = maximal_cluster(static_cast<int>(state.range(0)));
  const LindbladGenerator gen(spec, Frame::rotating);
  ComplexMatrix rho = initial_state(spec).matrix();
  Rk4Stepper stepper(spec.dimension());
  for (auto _ : state) {
    stepper.step(gen, rho, 1.0);
    benchmark::DoNotOptimize(rho.data());
  }
}
BENCHMARK(BM_Rk4Step)->DenseRange(2, 6);

void BM_TableMetrics(benchmark::State& state) {
  const ClusterSpec spec = maximal_cluster(6);
  const ComplexMatrix rho = initial_state(spec).matrix();
  for (auto _ : state) {
    for (const auto& m : table_metrics()) benchmark::DoNotOptimize(evaluate_state_metric(m, rho, 7, spec));
  }
}
BENCHMARK(BM_TableMetrics);

void BM_EnumeratePlanar(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(enumerate_buffer_graphs(n, true, false).size());
}
BENCHMARK(BM_EnumeratePlanar)->DenseRange(4, 6)->Unit(benchmark::kMillisecond);

void BM_CanonicalCode(benchmark::State& state) {
  const BufferGraph g(6, {{2, 3}, {3, 4}, {4, 5}, {5, 6}, {6, 7}, {2, 7}, {2, 5}});
  for (auto _ : state) benchmark::DoNotOptimize(canonical_code(g));
}
BENCHMARK(BM_CanonicalCode);

}  // namespace

BENCHMARK_MAIN();
