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

#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "qmeas/measurement.hpp"
#include "qmeas/qubit.hpp"
#include "qmeas/rng.hpp"

namespace qmeas {

/// One experimental run: weak outcome k followed by strong outcome l.
struct RunRecord {
    std::uint64_t run = 0;
    int k = 0;
    int l = 1;

    friend bool operator==(const RunRecord &, const RunRecord &) = default;
};

struct SimConfig {
    double f_avg = 0.0;
    double k_rms = 0.0;
    double alpha = 0.0;  // radians, tilt of the initial state from |up>
    std::uint64_t runs = 0;
    std::uint64_t seed = 0;

    /// Throws std::domain_error on any violated precondition.
    void validate() const;
};

/// Inverse-CDF sampler for the weak stage, specialized to one initial state.
///
/// Building the cumulative table costs O(K); each draw is one uniform plus a
/// binary search. The post-measurement state and the conditional strong-stage
/// probability are cached per outcome, so a full (k, l) draw needs exactly
/// two uniforms.
class WeakSampler {
  public:
    WeakSampler(const WeakModel &model, const PureState &initial);

    /// Draws the weak outcome index (position in the model's outcome list).
    std::size_t sample_index(Xoshiro256ss &rng) const;

    /// Draws a full (k, l) pair.
    std::pair<int, int> sample_pair(Xoshiro256ss &rng) const;

    int k_at(std::size_t index) const { return ks_[index]; }
    const PureState &post_state(std::size_t index) const { return posts_[index]; }

  private:
    std::vector<double> cumulative_;
    std::vector<int> ks_;
    std::vector<double> prob_l1_;  // P(l=1 | k), from the post-state
    std::vector<PureState> posts_;
};

/// Samples one weak outcome with Born weights ||U_{x,k} |psi>||^2 =
/// P_k (1 + F_k x) and returns the renormalized post-measurement state.
/// Convenience wrapper that builds a fresh table; use WeakSampler directly
/// in loops.
std::pair<int, PureState> sample_weak_outcome(const PureState &state,
                                              const WeakModel &model,
                                              Xoshiro256ss &rng);

/// Receives records in run order, one chunk at a time.
using RecordSink = std::function<void(std::span<const RunRecord>)>;

/// Number of runs per RNG chunk. Fixed so that the record stream is a pure
/// function of (seed, runs) regardless of thread count.
inline constexpr std::uint64_t kChunkRuns = 1u << 16;

/// Generates config.runs records of the two-stage experiment and feeds them
/// to the sink in run order. Chunks are simulated in parallel (worker count:
/// QMEAS_THREADS if set, else hardware concurrency) but always delivered in
/// chunk order; identical configs produce identical streams for any thread
/// count.
void run_experiment(const SimConfig &config, const RecordSink &sink);

/// Same engine with an explicit outcome family and initial state, for
/// non-Gaussian fixtures.
void run_experiment_with(const WeakModel &model, const PureState &initial,
                         std::uint64_t runs, std::uint64_t seed,
                         const RecordSink &sink);

/// Collects the whole stream; for tests and small runs.
std::vector<RunRecord> run_experiment_collect(const SimConfig &config);
std::vector<RunRecord> run_experiment_collect(const WeakModel &model,
                                              const PureState &initial,
                                              std::uint64_t runs, std::uint64_t seed);

struct CalibrationReport {
    std::uint64_t n_runs = 0;
    std::uint64_t count_one = 0;
    double prob_one = 0.0;
    double stderr_est = 0.0;  // sqrt(p (1-p) / n)
};

/// Simulates n independent strong measurements of `state` with the rotated
/// detector and tallies the "1" readings.
CalibrationReport calibrate_detector(const RotatedDetector &detector,
                                     const PureState &state, std::uint64_t n,
                                     Xoshiro256ss &rng);

}  // namespace qmeas
