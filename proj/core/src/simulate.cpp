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

#include "qmeas/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <future>
#include <stdexcept>
#include <thread>

#include "qmeas/kahan.hpp"

namespace qmeas {

void SimConfig::validate() const {
    if (runs < 1) {
        throw std::domain_error("SimConfig: runs must be >= 1");
    }
    if (!std::isfinite(alpha)) {
        throw std::domain_error("SimConfig: alpha not finite");
    }
    // Delegates the f_avg / k_rms range checks.
    (void)gaussian_model(f_avg, k_rms);
}

WeakSampler::WeakSampler(const WeakModel &model, const PureState &initial) {
    const double x = bloch_vector(initial).x;
    const std::size_t n = model.size();
    cumulative_.resize(n);
    ks_.resize(n);
    prob_l1_.reserve(n);
    posts_.reserve(n);

    KahanSum cum;
    for (std::size_t i = 0; i < n; ++i) {
        const WeakOutcome &o = model[i];
        ks_[i] = o.k;
        // Born weight ||U psi||^2 = P (1 + F x); strictly positive because
        // |F| < 1 in any valid model. The table must stay sorted for the
        // binary search, which compensated summation alone does not
        // guarantee at the ulp level.
        cum.add(o.P * (1.0 + o.F * x));
        cumulative_[i] = (i == 0) ? cum.value()
                                  : std::max(cum.value(), cumulative_[i - 1]);

        Complex2x2 u = weak_operator(o.P, o.F).matrix;
        complexd post_up = u(0, 0) * initial.up() + u(0, 1) * initial.down();
        complexd post_dn = u(1, 0) * initial.up() + u(1, 1) * initial.down();
        double norm2 = std::norm(post_up) + std::norm(post_dn);
        prob_l1_.push_back(std::norm(post_up) / norm2);
        posts_.emplace_back(post_up, post_dn);
    }
    const double total = cumulative_.back();
    for (double &c : cumulative_) c = std::min(c / total, 1.0);
    cumulative_.back() = 1.0;  // a draw in [0,1) can never fall past the end
}

std::size_t WeakSampler::sample_index(Xoshiro256ss &rng) const {
    double u = rng.next_unit();
    auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
    return static_cast<std::size_t>(it - cumulative_.begin());
}

std::pair<int, int> WeakSampler::sample_pair(Xoshiro256ss &rng) const {
    std::size_t i = sample_index(rng);
    int l = rng.next_unit() < prob_l1_[i] ? 1 : 2;
    return {ks_[i], l};
}

std::pair<int, PureState> sample_weak_outcome(const PureState &state,
                                              const WeakModel &model,
                                              Xoshiro256ss &rng) {
    WeakSampler sampler(model, state);
    std::size_t i = sampler.sample_index(rng);
    return {sampler.k_at(i), sampler.post_state(i)};
}

namespace {

unsigned resolve_threads() {
    if (const char *env = std::getenv("QMEAS_THREADS")) {
        long v = std::strtol(env, nullptr, 10);
        if (v >= 1 && v <= 1024) return static_cast<unsigned>(v);
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? hw : 1;
}

std::vector<RunRecord> simulate_chunk(const WeakSampler &sampler,
                                      std::uint64_t seed,
                                      std::uint64_t chunk_index,
                                      std::uint64_t count) {
    Xoshiro256ss rng = Xoshiro256ss::for_chunk(seed, chunk_index);
    std::vector<RunRecord> out;
    out.reserve(count);
    const std::uint64_t first_run = chunk_index * kChunkRuns;
    for (std::uint64_t i = 0; i < count; ++i) {
        auto [k, l] = sampler.sample_pair(rng);
        out.push_back({first_run + i, k, l});
    }
    return out;
}

}  // namespace

void run_experiment_with(const WeakModel &model, const PureState &initial,
                         std::uint64_t runs, std::uint64_t seed,
                         const RecordSink &sink) {
    if (runs < 1) {
        throw std::domain_error("run_experiment: runs must be >= 1");
    }
    const WeakSampler sampler(model, initial);
    const std::uint64_t n_chunks = (runs + kChunkRuns - 1) / kChunkRuns;
    const unsigned threads = resolve_threads();

    // Batches of `threads` chunks run concurrently; delivery stays in chunk
    // order and memory stays bounded by threads * kChunkRuns records.
    for (std::uint64_t batch = 0; batch < n_chunks; batch += threads) {
        const std::uint64_t end = std::min<std::uint64_t>(batch + threads, n_chunks);
        std::vector<std::future<std::vector<RunRecord>>> futures;
        futures.reserve(end - batch);
        for (std::uint64_t c = batch; c < end; ++c) {
            const std::uint64_t count = std::min(kChunkRuns, runs - c * kChunkRuns);
            if (end - batch == 1) {
                std::promise<std::vector<RunRecord>> p;
                p.set_value(simulate_chunk(sampler, seed, c, count));
                futures.push_back(p.get_future());
            } else {
                futures.push_back(std::async(std::launch::async, simulate_chunk,
                                             std::cref(sampler), seed, c, count));
            }
        }
        for (auto &f : futures) {
            std::vector<RunRecord> chunk = f.get();
            sink(std::span<const RunRecord>(chunk));
        }
    }
}

void run_experiment(const SimConfig &config, const RecordSink &sink) {
    config.validate();
    const WeakModel model = gaussian_model(config.f_avg, config.k_rms);
    const PureState initial = make_tilted_state(config.alpha);
    run_experiment_with(model, initial, config.runs, config.seed, sink);
}

std::vector<RunRecord> run_experiment_collect(const SimConfig &config) {
    std::vector<RunRecord> all;
    all.reserve(config.runs);
    run_experiment(config, [&](std::span<const RunRecord> chunk) {
        all.insert(all.end(), chunk.begin(), chunk.end());
    });
    return all;
}

std::vector<RunRecord> run_experiment_collect(const WeakModel &model,
                                              const PureState &initial,
                                              std::uint64_t runs,
                                              std::uint64_t seed) {
    std::vector<RunRecord> all;
    all.reserve(runs);
    run_experiment_with(model, initial, runs, seed,
                        [&](std::span<const RunRecord> chunk) {
                            all.insert(all.end(), chunk.begin(), chunk.end());
                        });
    return all;
}

CalibrationReport calibrate_detector(const RotatedDetector &detector,
                                     const PureState &state, std::uint64_t n,
                                     Xoshiro256ss &rng) {
    if (n < 1) {
        throw std::domain_error("calibrate_detector: n must be >= 1");
    }
    const double p = detector.prob_one(state);
    std::uint64_t ones = 0;
    for (std::uint64_t i = 0; i < n; ++i) {
        if (rng.next_unit() < p) ++ones;
    }
    CalibrationReport report;
    report.n_runs = n;
    report.count_one = ones;
    report.prob_one = static_cast<double>(ones) / static_cast<double>(n);
    report.stderr_est =
        std::sqrt(report.prob_one * (1.0 - report.prob_one) / static_cast<double>(n));
    return report;
}

}  // namespace qmeas
