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
#include <optional>
#include <utility>
#include <vector>

#include "qmeas/complex2x2.hpp"
#include "qmeas/qubit.hpp"

namespace qmeas {

/// One outcome of the weak x-basis measurement: index k, probability weight
/// P for the maximally mixed state, and fidelity F in favor of |+> (negative
/// F favors |->).
struct WeakOutcome {
    int k = 0;
    double P = 0.0;
    double F = 0.0;
};

/// The full discrete outcome family of the weak x-basis measurement.
///
/// Outcomes are stored sorted by k. The factories (gaussian_model,
/// uniform_model) produce normalized symmetric families: sum P = 1,
/// P(-k) = P(k), F(-k) = -F(k). from_outcomes() only enforces per-outcome
/// validity so that deliberately broken families (e.g. denormalized P) can
/// be built and fed to completeness_defect().
class WeakModel {
  public:
    static WeakModel from_outcomes(std::vector<WeakOutcome> outcomes,
                                   double f_avg_nominal, double k_rms_nominal);

    const std::vector<WeakOutcome> &outcomes() const { return outcomes_; }
    std::size_t size() const { return outcomes_.size(); }
    const WeakOutcome &operator[](std::size_t i) const { return outcomes_[i]; }

    /// Index of outcome k; nullopt when k is outside the truncated support.
    std::optional<std::size_t> find(int k) const;

    double f_avg() const { return f_avg_; }
    double k_rms() const { return k_rms_; }
    int min_k() const { return outcomes_.front().k; }
    int max_k() const { return outcomes_.back().k; }

  private:
    WeakModel() = default;
    std::vector<WeakOutcome> outcomes_;
    double f_avg_ = 0.0;
    double k_rms_ = 0.0;
};

/// Discrete Gaussian outcome family: P_k proportional to exp(-k^2/(2 k_rms^2)),
/// F_k = sqrt(pi/2) * (f_avg / k_rms) * k, truncated to |k| <= K with
/// K = min(ceil(8 k_rms), largest k with |F_k| <= 0.999999) and P renormalized.
///
/// Requires 0 < f_avg < 0.5 and k_rms >= 10 (the linear F law is only a weak
/// measurement in that regime); throws std::domain_error otherwise.
WeakModel gaussian_model(double f_avg, double k_rms);

/// Two-outcome family {(k=-1, P=1/2, F=-f), (k=+1, P=1/2, F=+f)}: the
/// constant-|F| case where fx^2 + fz^2 = 1 holds exactly. Requires 0 < f < 1.
WeakModel uniform_model(double f);

/// Where an operator matrix came from; keeps run bookkeeping and error
/// messages readable.
struct OutcomeLabel {
    enum class Kind { weak_x, strong_z, combined };
    Kind kind = Kind::weak_x;
    int k = 0;  // valid for weak_x and combined
    int l = 0;  // valid for strong_z and combined
};

/// A Kraus operator for one outcome. In this setup every matrix is real.
struct MeasurementOperator {
    Complex2x2 matrix;
    OutcomeLabel label;
};

/// Kraus operator of one weak x-basis outcome:
///   sqrt(P) { sqrt(1+F)|+><+| + sqrt(1-F)|-><-| }.
/// Requires 0 < P <= 1 and -1 <= F <= 1; throws std::domain_error otherwise.
MeasurementOperator weak_operator(double P, double F);

/// Strong z-basis projectors (|up><up|, |down><down|), labeled l = 1, 2.
std::pair<MeasurementOperator, MeasurementOperator> strong_z_operators();

/// sum_k P_k |F_k|: the overall fidelity of the weak stage.
double average_fidelity(const WeakModel &model);

/// Combined operator for the outcome pair (k, l): strong after weak,
/// U_z,l * U_x,k. Throws std::domain_error for k outside the support or
/// l not in {1, 2}.
MeasurementOperator total_operator(const WeakModel &model, int k, int l);

/// POVM element M = U_total^dagger U_total for the outcome pair (k, l),
/// eigendecomposed, with the measurement-basis angle theta = arcsin(F_k).
/// A strong second stage makes every element rank 1: m2 = 0, and
/// M = P_k |psi><psi| with psi tilted by theta from the z-axis.
struct PovmElement {
    Complex2x2 M;
    double m1 = 0.0;
    double m2 = 0.0;
    PureState psi = PureState::spin_up();      // eigenvector of m1
    PureState psi_bar = PureState::spin_down();  // eigenvector of m2
    double theta = 0.0;  // radians, in (-pi/2, pi/2)
};

PovmElement povm_element(const WeakModel &model, int k, int l);

/// Closed-form route to the same POVM element, built from the basis angle
/// instead of the matrix product: M = P * |psi_{k,l}><psi_{k,l}| with
/// psi_{k,1} = (cos(theta/2), sin(theta/2)), psi_{k,2} = (sin(theta/2),
/// cos(theta/2)), theta = arcsin(F). Kept independent of povm_element so the
/// two routes can be checked against each other.
Complex2x2 povm_closed_form(double P, double F, int l);

/// Max-entry deviation of sum_{k,l} M_{k,l} from the identity; ~1e-16 for a
/// valid model, and exactly the normalization deficit for a broken one.
double completeness_defect(const WeakModel &model);

/// Strong detector whose sensing axis is tilted by eta (radians) from the
/// z-axis in the x-z plane. Reading "1" projects onto the axis state
/// cos(eta/2)|up> + sin(eta/2)|down>.
class RotatedDetector {
  public:
    explicit RotatedDetector(double eta);

    double eta() const { return eta_; }
    PureState axis_state() const { return axis_; }
    Complex2x2 projector_one() const { return axis_.projector(); }
    Complex2x2 projector_zero() const { return perp_.projector(); }

    /// Probability of reading "1", computed as 1 - |<axis_perp|psi>|^2 so
    /// that a state equal to the axis state gives exactly 1.0.
    double prob_one(const PureState &psi) const;

  private:
    double eta_;
    PureState axis_;
    PureState perp_;
};

RotatedDetector rotated_detector(double eta);

}  // namespace qmeas
