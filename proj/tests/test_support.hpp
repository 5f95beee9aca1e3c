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

#include <cmath>
#include <vector>

#include "qmeas/measurement.hpp"
#include "qmeas/qubit.hpp"
#include "qmeas/rng.hpp"

namespace qmeas::testing {

inline bool close(double a, double b, double tol) { return std::abs(a - b) <= tol; }

inline bool close(complexd a, complexd b, double tol) {
    return std::abs(a - b) <= tol;
}

inline bool states_close(const PureState &a, const PureState &b, double tol) {
    // Both are in canonical phase, so entrywise comparison is meaningful.
    return close(a.up(), b.up(), tol) && close(a.down(), b.down(), tol);
}

inline double uniform_in(Xoshiro256ss &rng, double lo, double hi) {
    return lo + (hi - lo) * rng.next_unit();
}

inline PureState random_state(Xoshiro256ss &rng) {
    return PureState(complexd(uniform_in(rng, -1, 1), uniform_in(rng, -1, 1)),
                     complexd(uniform_in(rng, -1, 1), uniform_in(rng, -1, 1)));
}

inline Complex2x2 random_hermitian(Xoshiro256ss &rng, double scale = 2.0) {
    double a = uniform_in(rng, -scale, scale);
    double d = uniform_in(rng, -scale, scale);
    complexd b(uniform_in(rng, -scale, scale), uniform_in(rng, -scale, scale));
    return {a, b, std::conj(b), d};
}

/// Random symmetric outcome family (P even, F odd, sum P = 1): the class of
/// models the POVM invariants are supposed to hold for.
inline WeakModel random_symmetric_model(Xoshiro256ss &rng, int half_width) {
    std::vector<WeakOutcome> outcomes;
    std::vector<double> weights;
    double total = 0.0;
    for (int k = 1; k <= half_width; ++k) {
        double w = uniform_in(rng, 0.01, 1.0);
        weights.push_back(w);
        total += 2.0 * w;
    }
    double w0 = uniform_in(rng, 0.01, 1.0);
    total += w0;
    outcomes.push_back({0, w0 / total, 0.0});
    for (int k = 1; k <= half_width; ++k) {
        double p = weights[static_cast<std::size_t>(k - 1)] / total;
        double f = uniform_in(rng, 0.0, 0.999);
        outcomes.push_back({k, p, f});
        outcomes.push_back({-k, p, -f});
    }
    return WeakModel::from_outcomes(std::move(outcomes), 0.0, 0.0);
}

}  // namespace qmeas::testing
