// Copyright 2026 The wmtrade Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

/**
 * @file    qubit.hpp
 * @brief   Single-qubit polarization states, 2x2 operators, density matrices
 *          and Stokes vectors.
 *
 * Basis ordering is {|H>, |V>} throughout. Pure states are stored modulo a
 * global phase as a weight on |H> plus the relative phase of the |V>
 * amplitude.
 */
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>

namespace wmtrade {

using complex_t = std::complex<double>;
using Amplitudes = std::array<complex_t, 2>;

namespace tol {
// Construction-time invariants.
inline constexpr double construction = 1e-12;
// Checks on values produced by accumulated arithmetic.
inline constexpr double accumulated = 1e-10;
// Below this branch probability an image is treated as annihilated.
inline constexpr double annihilation = 1e-15;
}  // namespace tol

inline constexpr double two_pi = 2.0 * std::numbers::pi;

inline double reduce_phase(double phase) {
    if (!std::isfinite(phase)) {
        throw std::domain_error("phase must be finite");
    }
    double r = std::fmod(phase, two_pi);
    if (r < 0.0) {
        r += two_pi;
    }
    if (r >= two_pi) {
        r = 0.0;
    }
    return r;
}

class PureState {
  public:
    /// |H>.
    PureState() = default;

    static PureState make(double alpha_weight, double phase) {
        if (!(alpha_weight >= 0.0 && alpha_weight <= 1.0)) {
            throw std::domain_error("alpha_weight must be in [0, 1], got " + std::to_string(alpha_weight));
        }
        return PureState(alpha_weight, reduce_phase(phase));
    }

    static PureState horizontal() { return PureState(1.0, 0.0); }
    static PureState vertical() { return PureState(0.0, 0.0); }

    /// Normalizes an arbitrary amplitude vector and strips the global phase.
    /// Returns nullopt when the vector has squared norm below the annihilation
    /// threshold.
    static std::optional<PureState> from_amplitudes(const Amplitudes &amps) {
        const double n0 = std::norm(amps[0]);
        const double n1 = std::norm(amps[1]);
        const double total = n0 + n1;
        if (!(total >= tol::annihilation)) {
            return std::nullopt;
        }
        const double alpha = std::clamp(n0 / total, 0.0, 1.0);
        double phase = 0.0;
        if (n0 > 0.0 && n1 > 0.0) {
            phase = std::arg(amps[1]) - std::arg(amps[0]);
        }
        return PureState(alpha, reduce_phase(phase));
    }

    double alpha_weight() const { return alpha_; }
    double beta_weight() const { return 1.0 - alpha_; }
    double phase() const { return phase_; }

    /// (sqrt(alpha), e^{i phase} sqrt(1 - alpha)).
    Amplitudes amplitudes() const {
        return {complex_t(std::sqrt(alpha_), 0.0), std::polar(std::sqrt(1.0 - alpha_), phase_)};
    }

    bool is_basis_state() const { return alpha_ == 0.0 || alpha_ == 1.0; }

    /// Equal weight and equal relative phase; the phase is ignored for |H> and |V>.
    friend bool operator==(const PureState &x, const PureState &y) {
        if (x.alpha_ != y.alpha_) {
            return false;
        }
        return x.is_basis_state() || x.phase_ == y.phase_;
    }

  private:
    PureState(double alpha, double phase) : alpha_(alpha), phase_(phase) {}

    double alpha_ = 1.0;
    double phase_ = 0.0;
};

inline PureState make_state(double alpha_weight, double phase) { return PureState::make(alpha_weight, phase); }

inline complex_t inner_product(const Amplitudes &bra, const Amplitudes &ket) {
    return std::conj(bra[0]) * ket[0] + std::conj(bra[1]) * ket[1];
}

/// |<x|y>|^2.
inline double overlap(const PureState &x, const PureState &y) {
    return std::norm(inner_product(x.amplitudes(), y.amplitudes()));
}

/// 2x2 complex matrix over {|H>, |V>}, row-major.
class Operator2 {
  public:
    Operator2() = default;

    Operator2(complex_t m00, complex_t m01, complex_t m10, complex_t m11) : m_{m00, m01, m10, m11} {
        for (const auto &z : m_) {
            if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
                throw std::domain_error("Operator2 entries must be finite");
            }
        }
    }

    static Operator2 diag(complex_t d0, complex_t d1) { return {d0, 0.0, 0.0, d1}; }
    static Operator2 identity() { return diag(1.0, 1.0); }
    static Operator2 zero() { return diag(0.0, 0.0); }

    complex_t operator()(int row, int col) const { return m_[static_cast<size_t>(2 * row + col)]; }
    const std::array<complex_t, 4> &entries() const { return m_; }

    Operator2 adjoint() const {
        return {std::conj(m_[0]), std::conj(m_[2]), std::conj(m_[1]), std::conj(m_[3])};
    }

    complex_t trace() const { return m_[0] + m_[3]; }
    complex_t determinant() const { return m_[0] * m_[3] - m_[1] * m_[2]; }

    Amplitudes apply(const Amplitudes &v) const {
        return {m_[0] * v[0] + m_[1] * v[1], m_[2] * v[0] + m_[3] * v[1]};
    }

    friend Operator2 operator*(const Operator2 &x, const Operator2 &y) {
        return {x.m_[0] * y.m_[0] + x.m_[1] * y.m_[2], x.m_[0] * y.m_[1] + x.m_[1] * y.m_[3],
                x.m_[2] * y.m_[0] + x.m_[3] * y.m_[2], x.m_[2] * y.m_[1] + x.m_[3] * y.m_[3]};
    }
    friend Operator2 operator+(const Operator2 &x, const Operator2 &y) {
        return {x.m_[0] + y.m_[0], x.m_[1] + y.m_[1], x.m_[2] + y.m_[2], x.m_[3] + y.m_[3]};
    }
    friend Operator2 operator-(const Operator2 &x, const Operator2 &y) {
        return {x.m_[0] - y.m_[0], x.m_[1] - y.m_[1], x.m_[2] - y.m_[2], x.m_[3] - y.m_[3]};
    }
    friend Operator2 operator*(complex_t s, const Operator2 &x) {
        return {s * x.m_[0], s * x.m_[1], s * x.m_[2], s * x.m_[3]};
    }

    /// Largest entrywise modulus; used as a matrix distance.
    double max_abs() const {
        double r = 0.0;
        for (const auto &z : m_) {
            r = std::max(r, std::abs(z));
        }
        return r;
    }

    /// Largest singular value, from the eigenvalues of M^dagger M.
    double max_singular_value() const {
        const Operator2 g = adjoint() * (*this);
        const double t = g.trace().real();
        const double d = std::max(0.0, g.determinant().real());
        const double disc = std::sqrt(std::max(0.0, t * t - 4.0 * d));
        return std::sqrt(std::max(0.0, 0.5 * (t + disc)));
    }

    bool is_physical_kraus() const { return max_singular_value() <= 1.0 + tol::construction; }

  private:
    std::array<complex_t, 4> m_{};
};

inline double max_abs_difference(const Operator2 &x, const Operator2 &y) { return (x - y).max_abs(); }

/// True when m = c * I for some complex c, entrywise to `tolerance`.
inline bool is_proportional_to_identity(const Operator2 &m, double tolerance) {
    return std::abs(m(0, 1)) <= tolerance && std::abs(m(1, 0)) <= tolerance &&
           std::abs(m(0, 0) - m(1, 1)) <= tolerance;
}

struct ApplyResult {
    double probability = 0.0;
    /// Empty when the image was annihilated; callers must not use it then.
    std::optional<PureState> post;

    bool annihilated() const { return !post.has_value(); }
};

/// Applies a Kraus operator to a pure state: probability is the squared
/// norm of the image, post-state the renormalized image.
inline ApplyResult apply_operator(const Operator2 &op, const PureState &state) {
    if (!op.is_physical_kraus()) {
        throw std::domain_error("apply_operator: operator is not a physical Kraus operator");
    }
    const Amplitudes image = op.apply(state.amplitudes());
    const double prob = std::norm(image[0]) + std::norm(image[1]);
    if (prob < tol::annihilation) {
        return {prob, std::nullopt};
    }
    return {prob, PureState::from_amplitudes(image)};
}

class DensityMatrix {
  public:
    /// Validates Hermiticity, unit trace and eigenvalue range.
    explicit DensityMatrix(const Operator2 &m) : m_(m) {
        if (std::abs(m(0, 1) - std::conj(m(1, 0))) > tol::construction ||
            std::abs(m(0, 0).imag()) > tol::construction || std::abs(m(1, 1).imag()) > tol::construction) {
            throw std::domain_error("DensityMatrix: matrix is not Hermitian");
        }
        if (std::abs(m.trace().real() - 1.0) > tol::accumulated) {
            throw std::domain_error("DensityMatrix: trace is not 1");
        }
        const auto [lo, hi] = eigenvalues();
        if (lo < -tol::accumulated || hi > 1.0 + tol::accumulated) {
            throw std::domain_error("DensityMatrix: eigenvalues outside [0, 1]");
        }
    }

    static DensityMatrix pure(const PureState &s) {
        const Amplitudes a = s.amplitudes();
        return DensityMatrix(Operator2(std::norm(a[0]), a[0] * std::conj(a[1]), a[1] * std::conj(a[0]),
                                       std::norm(a[1])));
    }

    static DensityMatrix maximally_mixed() { return DensityMatrix(Operator2::diag(0.5, 0.5)); }

    const Operator2 &matrix() const { return m_; }
    complex_t operator()(int row, int col) const { return m_(row, col); }

    /// Ascending eigenvalues.
    std::array<double, 2> eigenvalues() const { return hermitian_eigenvalues(m_); }

    static std::array<double, 2> hermitian_eigenvalues(const Operator2 &m) {
        const double a = m(0, 0).real();
        const double d = m(1, 1).real();
        const double half_gap = 0.5 * (a - d);
        const double radius = std::sqrt(half_gap * half_gap + std::norm(m(0, 1)));
        const double mean = 0.5 * (a + d);
        return {mean - radius, mean + radius};
    }

  private:
    Operator2 m_;
};

/// <phi|rho|phi>, clamped to [0, 1].
inline double state_fidelity(const PureState &pure, const DensityMatrix &rho) {
    const Amplitudes v = pure.amplitudes();
    const Amplitudes rv = rho.matrix().apply(v);
    return std::clamp(inner_product(v, rv).real(), 0.0, 1.0);
}

class StokesVector {
  public:
    StokesVector() = default;

    StokesVector(double s1, double s2, double s3) : s_{s1, s2, s3} {
        for (double s : s_) {
            if (!(s >= -1.0 - tol::construction && s <= 1.0 + tol::construction)) {
                throw std::domain_error("StokesVector: component outside [-1, 1]");
            }
        }
        if (norm_squared() > 1.0 + tol::accumulated) {
            throw std::domain_error("StokesVector: length exceeds 1");
        }
    }

    double s1() const { return s_[0]; }
    double s2() const { return s_[1]; }
    double s3() const { return s_[2]; }
    double operator[](size_t k) const { return s_[k]; }
    double norm_squared() const { return s_[0] * s_[0] + s_[1] * s_[1] + s_[2] * s_[2]; }

  private:
    std::array<double, 3> s_{0.0, 0.0, 0.0};
};

/// s1 = p(H) - p(V), s2 = p(D) - p(A), s3 = p(R) - p(L).
inline StokesVector stokes_of_state(const PureState &state) {
    const double a = state.alpha_weight();
    const double coherence = 2.0 * std::sqrt(a * (1.0 - a));
    return {2.0 * a - 1.0, coherence * std::cos(state.phase()), coherence * std::sin(state.phase())};
}

/// rho = (I + s1 Z + s2 X + s3 Y) / 2.
inline DensityMatrix density_from_stokes(const StokesVector &s) {
    return DensityMatrix(Operator2(0.5 * (1.0 + s.s1()), complex_t(0.5 * s.s2(), -0.5 * s.s3()),
                                   complex_t(0.5 * s.s2(), 0.5 * s.s3()), 0.5 * (1.0 - s.s1())));
}

}  // namespace wmtrade
