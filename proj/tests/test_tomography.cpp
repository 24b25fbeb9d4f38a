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

#include <cmath>
#include <cstdint>
#include <random>

#include "gtest/gtest.h"
#include "oracles.hpp"

#include "wmtrade/bench.hpp"
#include "wmtrade/tomography.hpp"

using namespace wmtrade;

namespace {

// Stokes components of a pure state from raw amplitudes.
std::array<double, 3> oracle_stokes(double alpha, double phase) {
    const oracle::Amp a = oracle::state(alpha, phase);
    const oracle::cplx hv = std::conj(a.h) * a.v;
    return {std::norm(a.h) - std::norm(a.v), 2.0 * hv.real(), 2.0 * hv.imag()};
}

}  // namespace

TEST(Tomography, rejects_too_few_counts) {
    Rng rng(1);
    const auto rho = DensityMatrix::pure(PureState::horizontal());
    EXPECT_THROW(sample_tomography_counts(rho, 99, {}, rng), std::domain_error);
    EXPECT_THROW(expected_tomography_counts(rho, 0, {}), std::domain_error);
    EXPECT_NO_THROW(sample_tomography_counts(rho, 100, {}, rng));
}

TEST(Tomography, plus_probabilities_match_amplitudes) {
    std::mt19937_64 gen(3);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int k = 0; k < 100; ++k) {
        const double alpha = u(gen);
        const double phase = 6.283185307179586 * u(gen);
        const auto p = analyzer_plus_probabilities(DensityMatrix::pure(make_state(alpha, phase)), {});
        const auto s = oracle_stokes(alpha, phase);
        for (int b = 0; b < 3; ++b) {
            EXPECT_NEAR(p[b], 0.5 * (1.0 + s[b]), 1e-12);
        }
    }
}

TEST(Tomography, exact_mode_recovers_random_states) {
    std::mt19937_64 gen(11);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int k = 0; k < 100; ++k) {
        const PureState s = make_state(u(gen), 6.283185307179586 * u(gen));
        const TomographyResult r = exact_tomography(s, 10000, {});
        EXPECT_NEAR(r.fidelity_vs_input, 1.0, 1e-12);
    }
}

// Analyzer leakage L shrinks the Bloch vector by 1 - 2L, so a pure input is
// recovered with fidelity (1 + (1 - 2L)) / 2 = 1 - L.
TEST(Tomography, exact_mode_leakage_fidelity) {
    for (double leak : {0.0, 1e-3, 5e-3, 1e-2}) {
        const TomographyResult r = exact_tomography(make_state(0.3, 1.1), 10000, {leak, 1.0});
        EXPECT_NEAR(r.fidelity_vs_input, 1.0 - leak, 1e-12) << leak;
    }
}

TEST(Tomography, horizontal_sampled) {
    int above = 0;
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        Rng rng = make_stream(seed, StreamKind::tomography, {0});
        above += simulate_tomography(PureState::horizontal(), 10000, {}, rng).fidelity_vs_input >= 0.999;
    }
    EXPECT_GE(above, 198);
}

TEST(Tomography, grid_states_with_leakage) {
    for (int i = 0; i < kStateCount; ++i) {
        Rng rng = make_stream(17, StreamKind::tomography, {static_cast<std::uint64_t>(i)});
        const TomographyResult r = simulate_tomography(make_state(grid_alpha(i), 0.0), 10000, {1e-3, 1.0}, rng);
        EXPECT_GE(r.fidelity_vs_input, 0.99) << i;
    }
}

TEST(Tomography, reconstruction_is_physical) {
    std::mt19937_64 gen(23);
    std::uniform_int_distribution<std::int64_t> c(0, 1000);
    for (int k = 0; k < 500; ++k) {
        TomographyCounts counts;
        for (int b = 0; b < 3; ++b) {
            counts.plus[b] = c(gen);
            counts.minus[b] = k % 7 == 0 ? 0 : c(gen);
        }
        const DensityMatrix rho = reconstruct_density(counts);
        const auto ev = rho.eigenvalues();
        EXPECT_GE(ev[0], -1e-12);
        EXPECT_LE(ev[1], 1.0 + 1e-12);
        EXPECT_NEAR(rho.matrix().trace().real(), 1.0, 1e-12);
    }
}

TEST(Tomography, pure_extreme_counts_reconstruct_basis_states) {
    TomographyCounts counts;
    counts.plus = {1000, 500, 500};
    counts.minus = {0, 500, 500};
    EXPECT_NEAR(state_fidelity(PureState::horizontal(), reconstruct_density(counts)), 1.0, 1e-12);
    counts.plus = {0, 500, 500};
    counts.minus = {1000, 500, 500};
    EXPECT_NEAR(state_fidelity(PureState::vertical(), reconstruct_density(counts)), 1.0, 1e-12);
}
