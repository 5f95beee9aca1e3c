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

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "qmeas/measurement.hpp"
#include "qmeas/qubit.hpp"
#include "qmeas/simulate.hpp"

namespace qmeas {

/// Exact joint distribution p(k, l) over the model's truncated support.
/// This table, not the output of any Monte-Carlo run, is the ground truth
/// every stochastic result is judged against.
class JointTable {
  public:
    JointTable(std::vector<int> ks, std::vector<double> p_l1,
               std::vector<double> p_l2);

    std::size_t size() const { return ks_.size(); }
    int k_at(std::size_t i) const { return ks_[i]; }
    double p(std::size_t i, int l) const { return l == 1 ? p1_[i] : p2_[i]; }

    const std::vector<int> &ks() const { return ks_; }
    const std::vector<double> &p_l1() const { return p1_; }
    const std::vector<double> &p_l2() const { return p2_; }

    /// Total probability mass (1 within 1e-12 for a valid model/state).
    double total() const;
    /// Probability of the strong outcome l.
    double mass(int l) const;
    /// Marginal of k, the l outcome discarded.
    std::vector<double> marginal_k() const;

  private:
    std::vector<int> ks_;
    std::vector<double> p1_;
    std::vector<double> p2_;
};

/// p(k, l) = <psi| M_{k,l} |psi> for every outcome pair.
JointTable exact_joint_distribution(const PureState &initial, const WeakModel &model);
/// p(k, l) = tr(M_{k,l} rho); needed for mixed-state tomography fixtures.
JointTable exact_joint_distribution(const DensityMatrix &initial, const WeakModel &model);

struct PostSelectionStats {
    int l_selected = 1;
    std::uint64_t n_selected = 0;  // record count (Monte-Carlo mode only)
    double selected_mass = 0.0;    // probability (exact) or fraction (MC)
    double mean_k = 0.0;
    double stderr_k = 0.0;  // 0 in exact mode and for n_selected < 2
};

/// Mean of k conditioned on the strong outcome l, from the exact table.
/// Throws std::runtime_error when the selected mass is below 1e-300.
PostSelectionStats post_selected_mean(const JointTable &table, int l);

/// Same, from a record stream; stderr is the conditional sample standard
/// deviation over sqrt(n). Throws std::runtime_error when no record has the
/// requested l ("no post-selected events").
PostSelectionStats post_selected_mean(std::span<const RunRecord> records, int l);

/// sum_k k ||U_{x,k}|psi>||^2 = x * sum_k k P_k F_k.
double mean_k_for_state(const PureState &state, const WeakModel &model);

struct TradeoffReport {
    double fx = 0.0;      // sum P |F|
    double fz = 0.0;      // sum P sqrt(1 - F^2)
    double sum_sq = 0.0;  // fx^2 + fz^2, <= 1, = 1 iff |F| constant
};

TradeoffReport fidelity_tradeoff(const WeakModel &model);

inline constexpr const char *kYUnidentifiable = "unidentifiable";

/// Least-squares estimate of the initial state's Bloch (x, z) from outcome
/// frequencies. The model p(k,l; x,z) = P/2 (1 + F x +- sqrt(1-F^2) z) is
/// affine in (x, z), so the fit is a closed-form 2x2 normal-equation solve,
/// followed by projection onto the unit disk. The y component is structurally
/// invisible to this measurement and always reported unidentifiable.
struct TomographyResult {
    double x_hat = 0.0;
    double z_hat = 0.0;
    double stderr_x = 0.0;  // multinomial sandwich estimate; 0 in exact mode
    double stderr_z = 0.0;
    double cov_xz = 0.0;
    bool x_identifiable = true;  // false e.g. when every F_k = 0
    bool z_identifiable = true;
    std::string y_status = kYUnidentifiable;
    std::uint64_t n_records = 0;  // 0 in exact mode
};

TomographyResult tomography(const JointTable &table, const WeakModel &model);
/// Records with k outside the model support throw std::runtime_error (the
/// flags almost certainly do not match the generating run).
TomographyResult tomography(std::span<const RunRecord> records, const WeakModel &model);

/// The naive calibration map (Prob_1 - 0.5) * 200. Deliberately unclamped:
/// producing "spin = 100" from a perfectly reasonable run is the whole
/// point of the miscalibrated-detector story.
double naive_spin_inference(double prob_one);

struct ChiSquareResult {
    double statistic = 0.0;
    std::size_t dof = 0;
    double p_value = 1.0;
};

/// Pearson goodness-of-fit of observed counts against expected probabilities.
/// Adjacent cells are merged until each expected count reaches min_expected
/// (tails pool into the edge bins), the standard validity fix for sparse
/// tails. Requires at least two merged bins.
ChiSquareResult chi_square_gof(std::span<const std::uint64_t> observed,
                               std::span<const double> expected_probs,
                               double min_expected = 5.0);

}  // namespace qmeas
