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

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>

namespace qmeas {

using complexd = std::complex<double>;

/// Dense 2x2 complex matrix, row-major. Small enough that everything is by
/// value; all operations are allocation-free.
struct Complex2x2 {
    std::array<complexd, 4> e{};  // e[2*row + col]

    constexpr Complex2x2() = default;
    constexpr Complex2x2(complexd m00, complexd m01, complexd m10, complexd m11)
        : e{m00, m01, m10, m11} {}

    constexpr complexd &operator()(std::size_t row, std::size_t col) {
        return e[2 * row + col];
    }
    constexpr const complexd &operator()(std::size_t row, std::size_t col) const {
        return e[2 * row + col];
    }

    static constexpr Complex2x2 zero() { return {}; }
    static constexpr Complex2x2 identity() { return {1.0, 0.0, 0.0, 1.0}; }

    // Pauli operators with eigenvalues +-1.
    static Complex2x2 pauli_x() { return {0.0, 1.0, 1.0, 0.0}; }
    static Complex2x2 pauli_y() {
        return {0.0, complexd(0.0, -1.0), complexd(0.0, 1.0), 0.0};
    }
    static Complex2x2 pauli_z() { return {1.0, 0.0, 0.0, -1.0}; }

    friend constexpr Complex2x2 operator+(const Complex2x2 &a, const Complex2x2 &b) {
        return {a.e[0] + b.e[0], a.e[1] + b.e[1], a.e[2] + b.e[2], a.e[3] + b.e[3]};
    }
    friend constexpr Complex2x2 operator-(const Complex2x2 &a, const Complex2x2 &b) {
        return {a.e[0] - b.e[0], a.e[1] - b.e[1], a.e[2] - b.e[2], a.e[3] - b.e[3]};
    }
    friend constexpr Complex2x2 operator*(complexd s, const Complex2x2 &a) {
        return {s * a.e[0], s * a.e[1], s * a.e[2], s * a.e[3]};
    }
    friend constexpr Complex2x2 operator*(const Complex2x2 &a, complexd s) {
        return s * a;
    }
    friend constexpr Complex2x2 operator*(const Complex2x2 &a, const Complex2x2 &b) {
        return {a.e[0] * b.e[0] + a.e[1] * b.e[2], a.e[0] * b.e[1] + a.e[1] * b.e[3],
                a.e[2] * b.e[0] + a.e[3] * b.e[2], a.e[2] * b.e[1] + a.e[3] * b.e[3]};
    }

    constexpr complexd trace() const { return e[0] + e[3]; }
    constexpr complexd det() const { return e[0] * e[3] - e[1] * e[2]; }
};

inline Complex2x2 adjoint(const Complex2x2 &a) {
    return {std::conj(a.e[0]), std::conj(a.e[2]), std::conj(a.e[1]), std::conj(a.e[3])};
}

inline double max_abs(const Complex2x2 &a) {
    double m = 0.0;
    for (const auto &x : a.e) m = std::max(m, std::abs(x));
    return m;
}

/// Largest entrywise |a - b|.
inline double max_abs_diff(const Complex2x2 &a, const Complex2x2 &b) {
    return max_abs(a - b);
}

inline bool is_finite(const Complex2x2 &a) {
    for (const auto &x : a.e) {
        if (!std::isfinite(x.real()) || !std::isfinite(x.imag())) return false;
    }
    return true;
}

inline bool is_hermitian(const Complex2x2 &a, double tol) {
    return max_abs_diff(a, adjoint(a)) <= tol;
}

}  // namespace qmeas
