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

#include <optional>

#include "qmeas/complex2x2.hpp"

namespace qmeas {

/// Normalized single-qubit pure state in canonical phase: the first nonzero
/// amplitude is real and >= 0, so two states representing the same ray
/// compare equal entrywise (within tolerance).
class PureState {
  public:
    /// Normalizes and canonicalizes. Throws std::invalid_argument if both
    /// amplitudes are zero or any component is non-finite.
    PureState(complexd amplitude_up, complexd amplitude_down);

    complexd up() const { return up_; }
    complexd down() const { return down_; }

    static PureState spin_up() { return PureState(1.0, 0.0); }
    static PureState spin_down() { return PureState(0.0, 1.0); }
    static PureState plus() { return PureState(1.0, 1.0); }
    static PureState minus() { return PureState(1.0, -1.0); }

    /// <a|b>
    friend complexd inner(const PureState &a, const PureState &b) {
        return std::conj(a.up_) * b.up_ + std::conj(a.down_) * b.down_;
    }

    /// |psi><psi|
    Complex2x2 projector() const;

  private:
    complexd up_;
    complexd down_;
};

struct BlochVector {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    double norm() const { return std::sqrt(x * x + y * y + z * z); }
};

/// 2x2 density matrix. Construction checks Hermiticity (1e-12), unit trace
/// (1e-12) and eigenvalues >= -1e-12; violations throw std::invalid_argument.
class DensityMatrix {
  public:
    explicit DensityMatrix(const Complex2x2 &m);

    static DensityMatrix maximally_mixed();
    static DensityMatrix from_pure(const PureState &psi);
    /// rho = (I + x sigma_x + y sigma_y + z sigma_z) / 2; requires
    /// x^2 + y^2 + z^2 <= 1 + 1e-12.
    static DensityMatrix from_bloch(const BlochVector &r);

    const Complex2x2 &matrix() const { return m_; }

  private:
    Complex2x2 m_;
};

/// cos(alpha/2)|up> + sin(alpha/2)|down>, in canonical form.
PureState make_tilted_state(double alpha);

/// Pauli expectation values (eigenvalues +-1), so pure states have norm 1.
BlochVector bloch_vector(const PureState &psi);
BlochVector bloch_vector(const DensityMatrix &rho);

struct EigResult {
    double m1 = 0.0;  // m1 >= m2
    double m2 = 0.0;
    PureState v1;  // eigenvector of m1, canonical phase
    PureState v2;  // eigenvector of m2, orthogonal to v1
};

/// Closed-form eigendecomposition of a Hermitian 2x2 matrix.
///
/// The input must be Hermitian within 1e-10 (throws std::invalid_argument
/// otherwise; a non-Hermitian matrix here means a POVM element was built
/// incorrectly upstream). Degenerate spectra (|m1 - m2| <= 1e-12) return the
/// computational basis as the deterministic tie-break.
EigResult eig_hermitian2(const Complex2x2 &m);

struct KrausResult {
    double prob = 0.0;
    /// Renormalized post-measurement state; absent when prob <= 1e-15.
    std::optional<PureState> post;
};

/// prob = ||U psi||^2, post = U psi renormalized.
KrausResult apply_kraus(const PureState &psi, const Complex2x2 &kraus_matrix);

}  // namespace qmeas
