// Copyright 2026 The qmeas Authors
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

#include "qmeas/analysis.hpp"
#include "qmeas/measurement.hpp"

using namespace qmeas;

static void BM_GaussianModelBuild(benchmark::State &state) {
    const double k_rms = static_cast<double>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(gaussian_model(0.05, k_rms));
    }
}
BENCHMARK(BM_GaussianModelBuild)->RangeMultiplier(10)->Range(100, 10000);

static void BM_PovmElement(benchmark::State &state) {
    WeakModel model = gaussian_model(0.05, 200.0);
    int k = 150;
    for (auto _ : state) {
        benchmark::DoNotOptimize(povm_element(model, k, 2));
    }
}
BENCHMARK(BM_PovmElement);

static void BM_CompletenessDefect(benchmark::State &state) {
    WeakModel model = gaussian_model(0.05, static_cast<double>(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(completeness_defect(model));
    }
}
BENCHMARK(BM_CompletenessDefect)->Unit(benchmark::kMicrosecond)->Arg(200)->Arg(1000);

static void BM_ExactJointTable(benchmark::State &state) {
    WeakModel model = gaussian_model(0.05, static_cast<double>(state.range(0)));
    PureState initial = make_tilted_state(0.1);
    for (auto _ : state) {
        benchmark::DoNotOptimize(exact_joint_distribution(initial, model));
    }
}
BENCHMARK(BM_ExactJointTable)->Unit(benchmark::kMicrosecond)->Arg(200)->Arg(1000);

static void BM_TomographyExact(benchmark::State &state) {
    WeakModel model = gaussian_model(0.05, 200.0);
    JointTable table = exact_joint_distribution(make_tilted_state(0.3), model);
    for (auto _ : state) {
        benchmark::DoNotOptimize(tomography(table, model));
    }
}
BENCHMARK(BM_TomographyExact)->Unit(benchmark::kMicrosecond);

BENCHMARK_MAIN();
