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

#include "qmeas/measurement.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "qmeas/kahan.hpp"

namespace qmeas {

namespace {

// Cap on |F| inside generated models: keeps sqrt(1 - F^2) well-conditioned
// for every stored outcome.
constexpr double kFidelityCap = 0.999999;

void check_outcome(const WeakOutcome &o) {
    if (!(o.P > 0.0) || !std::isfinite(o.P)) {
        throw std::domain_error("WeakOutcome: P must be positive and finite");
    }
    if (!(std::abs(o.F) < 1.0)) {
        throw std::domain_error("WeakOutcome: |F| must be < 1");
    }
}

}  // namespace

WeakModel WeakModel::from_outcomes(std::vector<WeakOutcome> outcomes,
                                   double f_avg_nominal, double k_rms_nominal) {
    if (outcomes.empty()) {
        throw std::domain_error("WeakModel: empty outcome family");
    }
    std::sort(outcomes.begin(), outcomes.end(),
              [](const WeakOutcome &a, const WeakOutcome &b) { return a.k < b.k; });
    for (std::size_t i = 0; i < outcomes.size(); ++i) {
        check_outcome(outcomes[i]);
        if (i > 0 && outcomes[i].k == outcomes[i - 1].k) {
            throw std::domain_error("WeakModel: duplicate outcome index");
        }
    }
    WeakModel m;
    m.outcomes_ = std::move(outcomes);
    m.f_avg_ = f_avg_nominal;
    m.k_rms_ = k_rms_nominal;
    return m;
}

std::optional<std::size_t> WeakModel::find(int k) const {
    auto it = std::lower_bound(
        outcomes_.begin(), outcomes_.end(), k,
        [](const WeakOutcome &o, int key) { return o.k < key; });
    if (it == outcomes_.end() || it->k != k) return std::nullopt;
    return static_cast<std::size_t>(it - outcomes_.begin());
}

WeakModel gaussian_model(double f_avg, double k_rms) {
    if (!(f_avg > 0.0) || !(f_avg < 0.5)) {
        throw std::domain_error("gaussian_model: f_avg must be in (0, 0.5)");
    }
    if (!(k_rms >= 10.0) || !std::isfinite(k_rms)) {
        throw std::domain_error("gaussian_model: k_rms must be >= 10");
    }

    const double slope = std::sqrt(M_PI / 2.0) * f_avg / k_rms;  // F_k = slope * k
    const long k_width = static_cast<long>(std::ceil(8.0 * k_rms));
    const long k_cap = static_cast<long>(std::floor(kFidelityCap / slope));
    const long K = std::min(k_width, k_cap);

    std::vector<WeakOutcome> outcomes;
    outcomes.reserve(static_cast<std::size_t>(2 * K + 1));

    // Weights and fidelities are built once per |k| and mirrored, so the
    // P(-k) = P(k), F(-k) = -F(k) symmetry holds bit-exactly.
    KahanSum total;
    std::vector<double> weight(static_cast<std::size_t>(K) + 1);
    for (long k = 0; k <= K; ++k) {
        double w = std::exp(-static_cast<double>(k) * static_cast<double>(k) /
                            (2.0 * k_rms * k_rms));
        weight[static_cast<std::size_t>(k)] = w;
        total.add(k == 0 ? w : 2.0 * w);
    }
    const double norm = total.value();

    for (long k = -K; k <= K; ++k) {
        double w = weight[static_cast<std::size_t>(std::labs(k))] / norm;
        double f = slope * static_cast<double>(std::labs(k));
        outcomes.push_back({static_cast<int>(k), w, k < 0 ? -f : f});
    }
    return WeakModel::from_outcomes(std::move(outcomes), f_avg, k_rms);
}

WeakModel uniform_model(double f) {
    if (!(f > 0.0) || !(f < 1.0)) {
        throw std::domain_error("uniform_model: f must be in (0, 1)");
    }
    return WeakModel::from_outcomes({{-1, 0.5, -f}, {1, 0.5, f}}, f, 1.0);
}

MeasurementOperator weak_operator(double P, double F) {
    if (!(P > 0.0) || !(P <= 1.0)) {
        throw std::domain_error("weak_operator: P must be in (0, 1]");
    }
    if (!(F >= -1.0) || !(F <= 1.0)) {
        throw std::domain_error("weak_operator: F must be in [-1, 1]");
    }
    double a = std::sqrt(1.0 + F);
    double b = std::sqrt(1.0 - F);
    double s = std::sqrt(P) / 2.0;
    Complex2x2 m(s * (a + b), s * (a - b), s * (a - b), s * (a + b));
    return {m, {OutcomeLabel::Kind::weak_x, 0, 0}};
}

std::pair<MeasurementOperator, MeasurementOperator> strong_z_operators() {
    MeasurementOperator up{{1.0, 0.0, 0.0, 0.0}, {OutcomeLabel::Kind::strong_z, 0, 1}};
    MeasurementOperator down{{0.0, 0.0, 0.0, 1.0}, {OutcomeLabel::Kind::strong_z, 0, 2}};
    return {up, down};
}

double average_fidelity(const WeakModel &model) {
    KahanSum s;
    for (const auto &o : model.outcomes()) s.add(o.P * std::abs(o.F));
    return s.value();
}

namespace {

const WeakOutcome &outcome_at(const WeakModel &model, int k) {
    auto idx = model.find(k);
    if (!idx) {
        throw std::domain_error("outcome index k outside the model support");
    }
    return model[*idx];
}

void check_l(int l) {
    if (l != 1 && l != 2) {
        throw std::domain_error("strong outcome l must be 1 or 2");
    }
}

// U_total for an already-located outcome.
Complex2x2 total_matrix(const WeakOutcome &o, int l) {
    Complex2x2 weak = weak_operator(o.P, o.F).matrix;
    // Projecting with |up><up| (l=1) keeps row 0; |down><down| keeps row 1.
    if (l == 1) {
        return {weak(0, 0), weak(0, 1), 0.0, 0.0};
    }
    return {0.0, 0.0, weak(1, 0), weak(1, 1)};
}

}  // namespace

MeasurementOperator total_operator(const WeakModel &model, int k, int l) {
    check_l(l);
    const WeakOutcome &o = outcome_at(model, k);
    return {total_matrix(o, l), {OutcomeLabel::Kind::combined, k, l}};
}

PovmElement povm_element(const WeakModel &model, int k, int l) {
    check_l(l);
    const WeakOutcome &o = outcome_at(model, k);
    Complex2x2 total = total_matrix(o, l);
    Complex2x2 M = adjoint(total) * total;
    EigResult eig = eig_hermitian2(M);
    return {M, eig.m1, eig.m2, eig.v1, eig.v2, std::asin(o.F)};
}

Complex2x2 povm_closed_form(double P, double F, int l) {
    check_l(l);
    double theta = std::asin(F);
    double c = std::cos(theta / 2.0);
    double s = std::sin(theta / 2.0);
    PureState psi = (l == 1) ? PureState(c, s) : PureState(s, c);
    return P * psi.projector();
}

double completeness_defect(const WeakModel &model) {
    std::array<KahanSum, 4> sum;
    for (const auto &o : model.outcomes()) {
        for (int l = 1; l <= 2; ++l) {
            Complex2x2 total = total_matrix(o, l);
            Complex2x2 M = adjoint(total) * total;
            for (std::size_t i = 0; i < 4; ++i) {
                sum[i].add(M.e[i].real());  // every entry is real here
            }
        }
    }
    Complex2x2 s(sum[0].value(), sum[1].value(), sum[2].value(), sum[3].value());
    return max_abs_diff(s, Complex2x2::identity());
}

RotatedDetector::RotatedDetector(double eta)
    : eta_(eta),
      axis_(std::cos(eta / 2.0), std::sin(eta / 2.0)),
      perp_(-std::sin(eta / 2.0), std::cos(eta / 2.0)) {
    if (!std::isfinite(eta)) {
        throw std::domain_error("RotatedDetector: eta not finite");
    }
}

double RotatedDetector::prob_one(const PureState &psi) const {
    // Complement of the orthogonal projection. When psi carries the same
    // amplitudes as the axis state the cross terms cancel exactly and the
    // result is exactly 1.0.
    double miss = std::norm(inner(perp_, psi));
    return 1.0 - std::min(miss, 1.0);
}

RotatedDetector rotated_detector(double eta) { return RotatedDetector(eta); }

}  // namespace qmeas
