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

// Polarization-analyzer tomography in the H/V, D/A and R/L bases with linear
// inversion. The analyzer PBS misroutes each photon with probability
// `pbs_leakage`.
#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>

#include "wmtrade/bench.hpp"
#include "wmtrade/qubit.hpp"
#include "wmtrade/random.hpp"

namespace wmtrade {

enum class TomographyBasis : int { hv = 0, da = 1, rl = 2 };

inline constexpr std::int64_t kMinCountsPerBasis = 100;

template <class Count>
struct BasicTomographyCounts {
    std::array<Count, 3> plus{};   ///< H, D, R ports
    std::array<Count, 3> minus{};  ///< V, A, L ports

    BasicTomographyCounts &operator+=(const BasicTomographyCounts &o) {
        for (int k = 0; k < 3; ++k) {
            plus[k] += o.plus[k];
            minus[k] += o.minus[k];
        }
        return *this;
    }

    Count total(int basis) const { return plus[basis] + minus[basis]; }
};

using TomographyCounts = BasicTomographyCounts<std::int64_t>;
using ExpectedTomographyCounts = BasicTomographyCounts<double>;

/// Probability of the "plus" port in each basis, after analyzer leakage.
inline std::array<double, 3> analyzer_plus_probabilities(const DensityMatrix &rho, const NoiseModel &noise) {
    const Operator2 &m = rho.matrix();
    const std::array<double, 3> s{(m(0, 0) - m(1, 1)).real(), 2.0 * m(1, 0).real(), 2.0 * m(1, 0).imag()};
    std::array<double, 3> p{};
    for (int k = 0; k < 3; ++k) {
        const double ideal = std::clamp(0.5 * (1.0 + s[k]), 0.0, 1.0);
        p[k] = (1.0 - noise.pbs_leakage) * ideal + noise.pbs_leakage * (1.0 - ideal);
    }
    return p;
}

inline void check_counts_per_basis(std::int64_t counts_per_basis) {
    if (counts_per_basis < kMinCountsPerBasis) {
        throw std::domain_error("counts_per_basis must be >= 100");
    }
}

inline TomographyCounts sample_tomography_counts(const DensityMatrix &rho, std::int64_t counts_per_basis,
                                                 const NoiseModel &noise, Rng &rng) {
    check_counts_per_basis(counts_per_basis);
    noise.validate();
    const auto p = analyzer_plus_probabilities(rho, noise);
    TomographyCounts c;
    for (int k = 0; k < 3; ++k) {
        std::binomial_distribution<std::int64_t> dist(counts_per_basis, p[k]);
        c.plus[k] = dist(rng);
        c.minus[k] = counts_per_basis - c.plus[k];
    }
    return c;
}

inline ExpectedTomographyCounts expected_tomography_counts(const DensityMatrix &rho, std::int64_t counts_per_basis,
                                                           const NoiseModel &noise) {
    check_counts_per_basis(counts_per_basis);
    noise.validate();
    const auto p = analyzer_plus_probabilities(rho, noise);
    const double n = static_cast<double>(counts_per_basis);
    ExpectedTomographyCounts c;
    for (int k = 0; k < 3; ++k) {
        c.plus[k] = n * p[k];
        c.minus[k] = n * (1.0 - p[k]);
    }
    return c;
}

/// Linear inversion rho = (I + sum_k s_k sigma_k) / 2 from empirical Stokes
/// components, then projection onto the physical set: eigenvalues clipped to
/// [0, 1] and the trace renormalized.
template <class Count>
DensityMatrix reconstruct_density(const BasicTomographyCounts<Count> &counts) {
    std::array<double, 3> s{};
    for (int k = 0; k < 3; ++k) {
        const double total = static_cast<double>(counts.total(k));
        s[k] = total > 0.0 ? (static_cast<double>(counts.plus[k]) - static_cast<double>(counts.minus[k])) / total
                           : 0.0;
    }
    // The linear estimate is Hermitian by construction, with eigenvalues
    // (1 +/- |s|) / 2 on the projectors (I +/- s_hat . sigma) / 2.
    const double length = std::sqrt(s[0] * s[0] + s[1] * s[1] + s[2] * s[2]);
    double upper = std::clamp(0.5 * (1.0 + length), 0.0, 1.0);
    double lower = std::clamp(0.5 * (1.0 - length), 0.0, 1.0);
    const double trace = upper + lower;
    upper /= trace;
    lower /= trace;
    const double polarization = length > 0.0 ? (upper - lower) / length : 0.0;
    const double x = polarization * s[1];
    const double y = polarization * s[2];
    const double z = polarization * s[0];
    return DensityMatrix(Operator2(0.5 * (1.0 + z), complex_t(0.5 * x, -0.5 * y), complex_t(0.5 * x, 0.5 * y),
                                   0.5 * (1.0 - z)));
}

struct TomographyResult {
    DensityMatrix reconstructed = DensityMatrix::maximally_mixed();
    double fidelity_vs_input = 0.0;
    std::int64_t counts_per_basis = 0;
};

inline TomographyResult simulate_tomography(const PureState &reversed_state, std::int64_t counts_per_basis,
                                            const NoiseModel &noise, Rng &rng) {
    const auto counts = sample_tomography_counts(DensityMatrix::pure(reversed_state), counts_per_basis, noise, rng);
    const DensityMatrix rho = reconstruct_density(counts);
    return {rho, state_fidelity(reversed_state, rho), counts_per_basis};
}

/// Infinite-statistics variant: counts replaced by their expectations.
inline TomographyResult exact_tomography(const PureState &reversed_state, std::int64_t counts_per_basis,
                                         const NoiseModel &noise) {
    const auto counts = expected_tomography_counts(DensityMatrix::pure(reversed_state), counts_per_basis, noise);
    const DensityMatrix rho = reconstruct_density(counts);
    return {rho, state_fidelity(reversed_state, rho), counts_per_basis};
}

}  // namespace wmtrade
