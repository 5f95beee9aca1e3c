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

#include "qmeas/analysis.hpp"

#include <boost/math/distributions/chi_squared.hpp>
#include <cmath>
#include <stdexcept>

#include "qmeas/kahan.hpp"

namespace qmeas {

namespace {

constexpr double kEmptyMassTol = 1e-300;

// Quadratic form <psi| M |psi> for Hermitian M.
double born_probability(const Complex2x2 &M, const PureState &psi) {
    complexd m_psi_up = M(0, 0) * psi.up() + M(0, 1) * psi.down();
    complexd m_psi_dn = M(1, 0) * psi.up() + M(1, 1) * psi.down();
    return (std::conj(psi.up()) * m_psi_up + std::conj(psi.down()) * m_psi_dn).real();
}

double trace_product(const Complex2x2 &M, const Complex2x2 &rho) {
    return (M(0, 0) * rho(0, 0) + M(0, 1) * rho(1, 0) + M(1, 0) * rho(0, 1) +
            M(1, 1) * rho(1, 1))
        .real();
}

Complex2x2 povm_matrix(const WeakOutcome &o, int l) {
    Complex2x2 u = weak_operator(o.P, o.F).matrix;
    // (U_z,l U_x,k)^dagger (U_z,l U_x,k) built from the surviving row of U.
    complexd r0 = (l == 1) ? u(0, 0) : u(1, 0);
    complexd r1 = (l == 1) ? u(0, 1) : u(1, 1);
    return {std::conj(r0) * r0, std::conj(r0) * r1, std::conj(r1) * r0,
            std::conj(r1) * r1};
}

// Quadratic forms of rank-1 PSD matrices can round a hair below zero for
// (near-)orthogonal states; those are true zeros.
double clamp_rounding(double p) { return (p < 0.0 && p > -1e-12) ? 0.0 : p; }

template <typename ProbFn>
JointTable build_table(const WeakModel &model, ProbFn &&prob) {
    std::vector<int> ks;
    std::vector<double> p1, p2;
    ks.reserve(model.size());
    p1.reserve(model.size());
    p2.reserve(model.size());
    for (const auto &o : model.outcomes()) {
        ks.push_back(o.k);
        p1.push_back(clamp_rounding(prob(povm_matrix(o, 1))));
        p2.push_back(clamp_rounding(prob(povm_matrix(o, 2))));
    }
    return JointTable(std::move(ks), std::move(p1), std::move(p2));
}

}  // namespace

JointTable::JointTable(std::vector<int> ks, std::vector<double> p_l1,
                       std::vector<double> p_l2)
    : ks_(std::move(ks)), p1_(std::move(p_l1)), p2_(std::move(p_l2)) {
    if (ks_.empty() || ks_.size() != p1_.size() || ks_.size() != p2_.size()) {
        throw std::invalid_argument("JointTable: mismatched columns");
    }
    for (std::size_t i = 0; i < ks_.size(); ++i) {
        if (p1_[i] < 0.0 || p2_[i] < 0.0) {
            throw std::invalid_argument("JointTable: negative probability");
        }
    }
}

double JointTable::total() const {
    KahanSum s;
    for (std::size_t i = 0; i < ks_.size(); ++i) {
        s.add(p1_[i]);
        s.add(p2_[i]);
    }
    return s.value();
}

double JointTable::mass(int l) const {
    const auto &p = (l == 1) ? p1_ : p2_;
    KahanSum s;
    for (double v : p) s.add(v);
    return s.value();
}

std::vector<double> JointTable::marginal_k() const {
    std::vector<double> m(ks_.size());
    for (std::size_t i = 0; i < ks_.size(); ++i) m[i] = p1_[i] + p2_[i];
    return m;
}

JointTable exact_joint_distribution(const PureState &initial, const WeakModel &model) {
    return build_table(model,
                       [&](const Complex2x2 &M) { return born_probability(M, initial); });
}

JointTable exact_joint_distribution(const DensityMatrix &initial,
                                    const WeakModel &model) {
    return build_table(model, [&](const Complex2x2 &M) {
        return trace_product(M, initial.matrix());
    });
}

PostSelectionStats post_selected_mean(const JointTable &table, int l) {
    if (l != 1 && l != 2) {
        throw std::domain_error("post_selected_mean: l must be 1 or 2");
    }
    KahanSum mass, first;
    for (std::size_t i = 0; i < table.size(); ++i) {
        double p = table.p(i, l);
        mass.add(p);
        first.add(p * table.k_at(i));
    }
    if (mass.value() <= kEmptyMassTol) {
        throw std::runtime_error("no post-selected events: selected mass is zero");
    }
    PostSelectionStats stats;
    stats.l_selected = l;
    stats.selected_mass = mass.value();
    stats.mean_k = first.value() / mass.value();
    return stats;
}

PostSelectionStats post_selected_mean(std::span<const RunRecord> records, int l) {
    if (l != 1 && l != 2) {
        throw std::domain_error("post_selected_mean: l must be 1 or 2");
    }
    std::uint64_t n = 0;
    KahanSum sum;
    for (const auto &r : records) {
        if (r.l == l) {
            ++n;
            sum.add(r.k);
        }
    }
    if (n == 0) {
        throw std::runtime_error("no post-selected events");
    }
    double mean = sum.value() / static_cast<double>(n);
    KahanSum sq;
    for (const auto &r : records) {
        if (r.l == l) {
            double d = r.k - mean;
            sq.add(d * d);
        }
    }
    PostSelectionStats stats;
    stats.l_selected = l;
    stats.n_selected = n;
    stats.selected_mass =
        records.empty() ? 0.0 : static_cast<double>(n) / static_cast<double>(records.size());
    stats.mean_k = mean;
    if (n >= 2) {
        double var = sq.value() / static_cast<double>(n - 1);
        stats.stderr_k = std::sqrt(var / static_cast<double>(n));
    }
    return stats;
}

double mean_k_for_state(const PureState &state, const WeakModel &model) {
    // sum_k k ||U_{x,k}|psi>||^2 = sum_k k P_k (1 + F_k x); the first term
    // vanishes identically for the symmetric families this library builds,
    // so the factored form below is exact (and exactly antisymmetric in x).
    const double x = bloch_vector(state).x;
    KahanSum slope;
    for (const auto &o : model.outcomes()) {
        slope.add(o.k * o.P * o.F);
    }
    return x * slope.value();
}

TradeoffReport fidelity_tradeoff(const WeakModel &model) {
    KahanSum fz;
    for (const auto &o : model.outcomes()) {
        fz.add(o.P * std::sqrt((1.0 - o.F) * (1.0 + o.F)));
    }
    TradeoffReport r;
    r.fx = average_fidelity(model);
    r.fz = fz.value();
    r.sum_sq = r.fx * r.fx + r.fz * r.fz;
    return r;
}

namespace {

// Shared fit core. Frequencies arrive as a JointTable (exact probabilities
// or empirical counts / n); n_records > 0 engages the multinomial
// covariance estimate.
TomographyResult fit_bloch_xz(const JointTable &freq, const WeakModel &model,
                              std::uint64_t n_records) {
    if (freq.size() != model.size()) {
        throw std::invalid_argument("tomography: table does not match model support");
    }
    // Design: p(k,l) = P/2 + (P F / 2) x +- (P g / 2) z with g = sqrt(1-F^2).
    // The x coefficient is the same for both l branches while the z
    // coefficient flips sign, so the normal matrix is diagonal by
    // construction and the solve decouples.
    KahanSum sxx, szz, bx, bz;
    for (std::size_t i = 0; i < model.size(); ++i) {
        const WeakOutcome &o = model[i];
        const double g = std::sqrt((1.0 - o.F) * (1.0 + o.F));
        const double cx = 0.5 * o.P * o.F;
        const double cz = 0.5 * o.P * g;
        const double r1 = freq.p(i, 1) - 0.5 * o.P;
        const double r2 = freq.p(i, 2) - 0.5 * o.P;
        sxx.add(2.0 * cx * cx);
        szz.add(2.0 * cz * cz);
        bx.add(cx * (r1 + r2));
        bz.add(cz * (r1 - r2));
    }

    TomographyResult result;
    result.n_records = n_records;
    const double nxx = sxx.value();
    const double nzz = szz.value();
    constexpr double kSingularTol = 1e-30;
    result.x_identifiable = nxx > kSingularTol;
    result.z_identifiable = nzz > kSingularTol;
    if (!result.x_identifiable && !result.z_identifiable) {
        return result;
    }

    double x = result.x_identifiable ? bx.value() / nxx : 0.0;
    double z = result.z_identifiable ? bz.value() / nzz : 0.0;

    // Multinomial sandwich covariance of the unconstrained estimator:
    // Cov(beta) = N^{-1} B^T Sigma B N^{-1} with Sigma = (diag(p) - p p^T)/n.
    if (n_records > 0) {
        KahanSum vxx, vzz, vxz, mx, mz;
        for (std::size_t i = 0; i < model.size(); ++i) {
            const WeakOutcome &o = model[i];
            const double g = std::sqrt((1.0 - o.F) * (1.0 + o.F));
            const double cx = 0.5 * o.P * o.F;
            const double cz = 0.5 * o.P * g;
            for (int l = 1; l <= 2; ++l) {
                const double wx = result.x_identifiable ? cx / nxx : 0.0;
                const double wz =
                    result.z_identifiable ? (l == 1 ? cz : -cz) / nzz : 0.0;
                const double p = freq.p(i, l);
                vxx.add(wx * wx * p);
                vzz.add(wz * wz * p);
                vxz.add(wx * wz * p);
                mx.add(wx * p);
                mz.add(wz * p);
            }
        }
        const double n = static_cast<double>(n_records);
        const double cov_xx = (vxx.value() - mx.value() * mx.value()) / n;
        const double cov_zz = (vzz.value() - mz.value() * mz.value()) / n;
        result.stderr_x = cov_xx > 0.0 ? std::sqrt(cov_xx) : 0.0;
        result.stderr_z = cov_zz > 0.0 ? std::sqrt(cov_zz) : 0.0;
        result.cov_xz = (vxz.value() - mx.value() * mz.value()) / n;
    }

    // Physicality: project onto the unit disk in the information metric,
    // min wx (x - x_hat)^2 + wz (z - z_hat)^2 on the disk. The x direction
    // carries far less information than z whenever the weak fidelities are
    // small, and a Euclidean projection would leak the large x noise into
    // the tightly-determined z estimate. Reduces to radial scaling when the
    // weights are equal. The reported stderr always describes the
    // unconstrained estimator.
    if (x * x + z * z > 1.0) {
        const double wx = result.x_identifiable ? nxx : 0.0;
        const double wz = result.z_identifiable ? nzz : 0.0;
        auto constrained = [&](double lambda) {
            double cx = (wx > 0.0) ? wx * x / (wx + lambda) : 0.0;
            double cz = (wz > 0.0) ? wz * z / (wz + lambda) : 0.0;
            return std::pair{cx, cz};
        };
        double lo = 0.0, hi = std::max(wx, wz);
        auto norm2 = [&](double lambda) {
            auto [cx, cz] = constrained(lambda);
            return cx * cx + cz * cz;
        };
        while (norm2(hi) > 1.0) hi *= 2.0;
        for (int iter = 0; iter < 200; ++iter) {
            double mid = 0.5 * (lo + hi);
            (norm2(mid) > 1.0 ? lo : hi) = mid;
        }
        auto [cx, cz] = constrained(hi);
        x = cx;
        z = cz;
    }
    result.x_hat = x;
    result.z_hat = z;
    return result;
}

}  // namespace

TomographyResult tomography(const JointTable &table, const WeakModel &model) {
    return fit_bloch_xz(table, model, 0);
}

TomographyResult tomography(std::span<const RunRecord> records,
                            const WeakModel &model) {
    if (records.empty()) {
        throw std::runtime_error("tomography: no records");
    }
    std::vector<double> c1(model.size(), 0.0), c2(model.size(), 0.0);
    for (const auto &r : records) {
        auto idx = model.find(r.k);
        if (!idx) {
            throw std::runtime_error(
                "tomography: record outcome k outside the model support "
                "(model parameters do not match the generating run?)");
        }
        ((r.l == 1) ? c1 : c2)[*idx] += 1.0;
    }
    const double n = static_cast<double>(records.size());
    for (double &v : c1) v /= n;
    for (double &v : c2) v /= n;
    std::vector<int> ks;
    ks.reserve(model.size());
    for (const auto &o : model.outcomes()) ks.push_back(o.k);
    JointTable table(std::move(ks), std::move(c1), std::move(c2));
    return fit_bloch_xz(table, model, records.size());
}

double naive_spin_inference(double prob_one) {
    if (!(prob_one >= 0.0) || !(prob_one <= 1.0)) {
        throw std::domain_error("naive_spin_inference: probability outside [0, 1]");
    }
    return (prob_one - 0.5) * 200.0;
}

ChiSquareResult chi_square_gof(std::span<const std::uint64_t> observed,
                               std::span<const double> expected_probs,
                               double min_expected) {
    if (observed.size() != expected_probs.size() || observed.empty()) {
        throw std::invalid_argument("chi_square_gof: size mismatch");
    }
    std::uint64_t n = 0;
    for (auto c : observed) n += c;
    if (n == 0) {
        throw std::invalid_argument("chi_square_gof: no observations");
    }

    // Merge adjacent cells until each bin's expected count reaches
    // min_expected; any leftover tail joins the last bin.
    std::vector<double> obs_bins, exp_bins;
    double o_acc = 0.0, e_acc = 0.0;
    for (std::size_t i = 0; i < observed.size(); ++i) {
        o_acc += static_cast<double>(observed[i]);
        e_acc += expected_probs[i] * static_cast<double>(n);
        if (e_acc >= min_expected) {
            obs_bins.push_back(o_acc);
            exp_bins.push_back(e_acc);
            o_acc = e_acc = 0.0;
        }
    }
    if (e_acc > 0.0 || o_acc > 0.0) {
        if (exp_bins.empty()) {
            obs_bins.push_back(o_acc);
            exp_bins.push_back(e_acc);
        } else {
            obs_bins.back() += o_acc;
            exp_bins.back() += e_acc;
        }
    }
    if (obs_bins.size() < 2) {
        throw std::invalid_argument("chi_square_gof: fewer than two usable bins");
    }

    KahanSum stat;
    for (std::size_t i = 0; i < obs_bins.size(); ++i) {
        double d = obs_bins[i] - exp_bins[i];
        stat.add(d * d / exp_bins[i]);
    }
    ChiSquareResult r;
    r.statistic = stat.value();
    r.dof = obs_bins.size() - 1;
    boost::math::chi_squared dist(static_cast<double>(r.dof));
    r.p_value = boost::math::cdf(boost::math::complement(dist, r.statistic));
    return r;
}

}  // namespace qmeas
