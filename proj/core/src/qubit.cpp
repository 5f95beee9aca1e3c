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

#include "qmeas/qubit.hpp"

#include <cmath>
#include <stdexcept>

namespace qmeas {

namespace {

constexpr double kDegenerateTol = 1e-12;
constexpr double kHermitianTol = 1e-10;
constexpr double kZeroProbTol = 1e-15;

bool finite(complexd z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

}  // namespace

PureState::PureState(complexd amplitude_up, complexd amplitude_down)
    : up_(amplitude_up), down_(amplitude_down) {
    if (!finite(up_) || !finite(down_)) {
        throw std::invalid_argument("PureState: non-finite amplitude");
    }
    double n2 = std::norm(up_) + std::norm(down_);
    if (n2 <= 0.0) {
        throw std::invalid_argument("PureState: zero state vector");
    }
    double n = std::sqrt(n2);
    up_ /= n;
    down_ /= n;
    // Canonical global phase: first nonzero amplitude real and >= 0.
    if (up_ != complexd(0.0)) {
        double mag = std::abs(up_);
        complexd rot = std::conj(up_) / mag;
        up_ = complexd(mag, 0.0);
        down_ *= rot;
    } else {
        down_ = complexd(std::abs(down_), 0.0);
    }
}

Complex2x2 PureState::projector() const {
    return {up_ * std::conj(up_), up_ * std::conj(down_),
            down_ * std::conj(up_), down_ * std::conj(down_)};
}

DensityMatrix::DensityMatrix(const Complex2x2 &m) : m_(m) {
    if (!is_finite(m_)) {
        throw std::invalid_argument("DensityMatrix: non-finite entry");
    }
    if (!is_hermitian(m_, 1e-12)) {
        throw std::invalid_argument("DensityMatrix: not Hermitian");
    }
    if (std::abs(m_.trace() - complexd(1.0)) > 1e-12) {
        throw std::invalid_argument("DensityMatrix: trace != 1");
    }
    // Eigenvalues of a Hermitian trace-1 matrix: 1/2 +- r.
    double a = m_(0, 0).real();
    double d = m_(1, 1).real();
    double r = std::sqrt(0.25 * (a - d) * (a - d) + std::norm(m_(0, 1)));
    if (0.5 - r < -1e-12) {
        throw std::invalid_argument("DensityMatrix: negative eigenvalue");
    }
}

DensityMatrix DensityMatrix::maximally_mixed() {
    return DensityMatrix(0.5 * Complex2x2::identity());
}

DensityMatrix DensityMatrix::from_pure(const PureState &psi) {
    return DensityMatrix(psi.projector());
}

DensityMatrix DensityMatrix::from_bloch(const BlochVector &r) {
    if (r.x * r.x + r.y * r.y + r.z * r.z > 1.0 + 1e-12) {
        throw std::invalid_argument("DensityMatrix: Bloch vector outside unit ball");
    }
    Complex2x2 m(0.5 * (1.0 + r.z), 0.5 * complexd(r.x, -r.y),
                 0.5 * complexd(r.x, r.y), 0.5 * (1.0 - r.z));
    return DensityMatrix(m);
}

PureState make_tilted_state(double alpha) {
    if (!std::isfinite(alpha)) {
        throw std::invalid_argument("make_tilted_state: alpha not finite");
    }
    return PureState(std::cos(alpha / 2.0), std::sin(alpha / 2.0));
}

BlochVector bloch_vector(const PureState &psi) {
    complexd cross = std::conj(psi.up()) * psi.down();
    return {2.0 * cross.real(), 2.0 * cross.imag(),
            std::norm(psi.up()) - std::norm(psi.down())};
}

BlochVector bloch_vector(const DensityMatrix &rho) {
    const Complex2x2 &m = rho.matrix();
    return {2.0 * m(1, 0).real(), 2.0 * m(1, 0).imag(),
            m(0, 0).real() - m(1, 1).real()};
}

EigResult eig_hermitian2(const Complex2x2 &m) {
    if (!is_finite(m)) {
        throw std::invalid_argument("eig_hermitian2: non-finite entry");
    }
    if (!is_hermitian(m, kHermitianTol)) {
        throw std::invalid_argument("eig_hermitian2: matrix not Hermitian");
    }
    // Work with the exactly-Hermitian part.
    double a = m(0, 0).real();
    double d = m(1, 1).real();
    complexd b = 0.5 * (m(0, 1) + std::conj(m(1, 0)));

    double mid = 0.5 * (a + d);
    double r = std::hypot(0.5 * (a - d), std::abs(b));
    double m1 = mid + r;
    double m2 = mid - r;

    if (m1 - m2 <= kDegenerateTol) {
        return {m1, m2, PureState::spin_up(), PureState::spin_down()};
    }

    // Columns of (M - m2 I) span the m1 eigenspace (Cayley-Hamilton); pick
    // the better-conditioned one.
    complexd col0_up = complexd(a - m2, 0.0);
    complexd col0_dn = std::conj(b);
    complexd col1_up = b;
    complexd col1_dn = complexd(d - m2, 0.0);
    double n0 = std::norm(col0_up) + std::norm(col0_dn);
    double n1 = std::norm(col1_up) + std::norm(col1_dn);

    PureState v1 = (n0 >= n1) ? PureState(col0_up, col0_dn) : PureState(col1_up, col1_dn);
    PureState v2(-std::conj(v1.down()), std::conj(v1.up()));
    return {m1, m2, v1, v2};
}

KrausResult apply_kraus(const PureState &psi, const Complex2x2 &kraus_matrix) {
    complexd out_up = kraus_matrix(0, 0) * psi.up() + kraus_matrix(0, 1) * psi.down();
    complexd out_dn = kraus_matrix(1, 0) * psi.up() + kraus_matrix(1, 1) * psi.down();
    double prob = std::norm(out_up) + std::norm(out_dn);
    if (prob <= kZeroProbTol) {
        return {prob, std::nullopt};
    }
    return {prob, PureState(out_up, out_dn)};
}

}  // namespace qmeas
