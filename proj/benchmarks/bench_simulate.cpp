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

#include "qmeas/rng.hpp"
#include "qmeas/simulate.hpp"

using namespace qmeas;

static void BM_WeakSamplerDraw(benchmark::State &state) {
    WeakModel model = gaussian_model(0.05, static_cast<double>(state.range(0)));
    WeakSampler sampler(model, make_tilted_state(0.1));
    Xoshiro256ss rng(1);
    for (auto _ : state) {
        benchmark::DoNotOptimize(sampler.sample_pair(rng));
    }
    state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_WeakSamplerDraw)->Arg(100)->Arg(1000);

static void BM_SamplerBuild(benchmark::State &state) {
    WeakModel model = gaussian_model(0.05, static_cast<double>(state.range(0)));
    PureState initial = make_tilted_state(0.1);
    for (auto _ : state) {
        WeakSampler sampler(model, initial);
        benchmark::DoNotOptimize(sampler);
    }
}
BENCHMARK(BM_SamplerBuild)->Arg(100)->Arg(1000);

static void BM_RunExperiment(benchmark::State &state) {
    SimConfig config{0.05, 200.0, 0.1,
                     static_cast<std::uint64_t>(state.range(0)), 42};
    for (auto _ : state) {
        std::uint64_t count = 0;
        run_experiment(config, [&](std::span<const RunRecord> chunk) {
            count += chunk.size();
        });
        benchmark::DoNotOptimize(count);
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_RunExperiment)->Unit(benchmark::kMillisecond)->Arg(100000)->Arg(1000000);

static void BM_CalibrateDetector(benchmark::State &state) {
    RotatedDetector detector(1.5657959584879328);
    Xoshiro256ss rng(7);
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            calibrate_detector(detector, PureState::spin_up(),
                               static_cast<std::uint64_t>(state.range(0)), rng));
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_CalibrateDetector)->Unit(benchmark::kMicrosecond)->Arg(100000);

BENCHMARK_MAIN();
