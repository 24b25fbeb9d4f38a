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
#include <numbers>
#include <random>

#include "gtest/gtest.h"

#include "wmtrade/qubit.hpp"

using namespace wmtrade;

TEST(PureState, make_state_endpoints) {
    const PureState h = make_state(1.0, 0.0);
    const Amplitudes a = h.amplitudes();
    EXPECT_EQ(a[0], complex_t(1.0, 0.0));
    EXPECT_EQ(std::abs(a[1]), 0.0);

    const PureState v = make_state(0.0, 1.3);
    EXPECT_DOUBLE_EQ(std::norm(v.amplitudes()[1]), 1.0);
    EXPECT_EQ(v, PureState::vertical());

    const PureState d = make_state(0.5, 0.0);
    EXPECT_NEAR(overlap(d, PureState::horizontal()), 0.5, 1e-15);
}

TEST(PureState, rejects_out_of_range_weight) {
    EXPECT_THROW(make_state(-0.01, 0.0), std::domain_error);
    EXPECT_THROW(make_state(1.0000001, 0.0), std::domain_error);
    EXPECT_THROW(make_state(std::nan(""), 0.0), std::domain_error);
    EXPECT_THROW(make_state(0.5, INFINITY), std::domain_error);
}

TEST(PureState, phase_is_reduced_mod_two_pi) {
    const PureState s = make_state(0.3, 2.0 * two_pi + 0.25);
    EXPECT_NEAR(s.phase(), 0.25, 1e-12);
    const PureState t = make_state(0.3, -0.25);
    EXPECT_NEAR(t.phase(), two_pi - 0.25, 1e-12);
    EXPECT_GE(t.phase(), 0.0);
    EXPECT_LT(t.phase(), two_pi);
}

TEST(PureState, unit_norm_and_global_phase_stripping) {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int k = 0; k < 200; ++k) {
        const PureState s = make_state(u(rng), two_pi * u(rng));
        const Amplitudes a = s.amplitudes();
        EXPECT_NEAR(std::norm(a[0]) + std::norm(a[1]), 1.0, 1e-12);

        const complex_t global = std::polar(2.7, two_pi * u(rng));
        const auto back = PureState::from_amplitudes({global * a[0], global * a[1]});
        ASSERT_TRUE(back.has_value());
        EXPECT_NEAR(back->alpha_weight(), s.alpha_weight(), 1e-12);
        EXPECT_NEAR(overlap(*back, s), 1.0, 1e-12);
    }
    EXPECT_FALSE(PureState::from_amplitudes({0.0, 0.0}).has_value());
}

TEST(Operator2, rejects_non_finite_entries) {
    EXPECT_THROW(Operator2(NAN, 0.0, 0.0, 1.0), std::domain_error);
    EXPECT_THROW(Operator2::diag(1.0, INFINITY), std::domain_error);
}

TEST(Operator2, physical_kraus_predicate) {
    EXPECT_TRUE(Operator2::identity().is_physical_kraus());
    EXPECT_TRUE(Operator2::diag(std::sqrt(0.75), -std::sqrt(0.25)).is_physical_kraus());
    EXPECT_FALSE(Operator2::diag(1.0 + 1e-9, 0.0).is_physical_kraus());
    // Hadamard-like unitary has singular values 1.
    const double r = 1.0 / std::sqrt(2.0);
    EXPECT_TRUE(Operator2(r, r, r, -r).is_physical_kraus());
    EXPECT_NEAR(Operator2(1.0, 1.0, 0.0, 0.0).max_singular_value(), std::sqrt(2.0), 1e-15);
}

TEST(ApplyOperator, identity_is_identity) {
    const PureState s = make_state(0.37, 1.1);
    const ApplyResult r = apply_operator(Operator2::identity(), s);
    EXPECT_NEAR(r.probability, 1.0, 1e-15);
    ASSERT_FALSE(r.annihilated());
    EXPECT_NEAR(r.post->alpha_weight(), 0.37, 1e-15);
    EXPECT_NEAR(r.post->phase(), 1.1, 1e-15);
}

TEST(ApplyOperator, eigenstate_of_diagonal_operator) {
    const ApplyResult r = apply_operator(Operator2::diag(std::sqrt(0.75), std::sqrt(0.25)), PureState::horizontal());
    EXPECT_NEAR(r.probability, 0.75, 1e-15);
    ASSERT_TRUE(r.post.has_value());
    EXPECT_EQ(*r.post, PureState::horizontal());
}

TEST(ApplyOperator, orthogonal_projection_annihilates) {
    const ApplyResult r = apply_operator(Operator2::diag(1.0, 0.0), make_state(0.0, 0.0));
    EXPECT_EQ(r.probability, 0.0);
    EXPECT_TRUE(r.annihilated());
}

TEST(ApplyOperator, rejects_unphysical_operator) {
    EXPECT_THROW(apply_operator(Operator2::diag(2.0, 0.0), PureState::horizontal()), std::domain_error);
}

TEST(DensityMatrix, validates_invariants) {
    EXPECT_THROW(DensityMatrix(Operator2::diag(0.6, 0.6)), std::domain_error);   // trace
    EXPECT_THROW(DensityMatrix(Operator2(0.5, 0.3, 0.1, 0.5)), std::domain_error); // not Hermitian
    EXPECT_THROW(DensityMatrix(Operator2::diag(1.5, -0.5)), std::domain_error);   // eigenvalues
    EXPECT_NO_THROW(DensityMatrix(Operator2(0.5, 0.5, 0.5, 0.5)));
}

TEST(StateFidelity, examples) {
    const PureState s = make_state(0.3, 0.4);
    EXPECT_NEAR(state_fidelity(s, DensityMatrix::pure(s)), 1.0, 1e-15);
    EXPECT_NEAR(state_fidelity(PureState::horizontal(), DensityMatrix::pure(PureState::vertical())), 0.0, 1e-15);
    EXPECT_NEAR(state_fidelity(PureState::horizontal(), DensityMatrix::maximally_mixed()), 0.5, 1e-15);
}

TEST(Stokes, basis_diagonal_and_circular_states) {
    const StokesVector h = stokes_of_state(PureState::horizontal());
    EXPECT_NEAR(h.s1(), 1.0, 1e-15);
    EXPECT_NEAR(h.s2(), 0.0, 1e-15);
    EXPECT_NEAR(h.s3(), 0.0, 1e-15);

    const StokesVector d = stokes_of_state(make_state(0.5, 0.0));
    EXPECT_NEAR(d.s1(), 0.0, 1e-15);
    EXPECT_NEAR(d.s2(), 1.0, 1e-15);
    EXPECT_NEAR(d.s3(), 0.0, 1e-15);

    const StokesVector r = stokes_of_state(make_state(0.5, std::numbers::pi / 2.0));
    EXPECT_NEAR(r.s1(), 0.0, 1e-15);
    EXPECT_NEAR(r.s2(), 0.0, 1e-15);
    EXPECT_NEAR(r.s3(), 1.0, 1e-15);
}

TEST(Stokes, rejects_overlong_vectors) {
    EXPECT_THROW(StokesVector(1.0, 0.5, 0.0), std::domain_error);
    EXPECT_THROW(StokesVector(1.2, 0.0, 0.0), std::domain_error);
}

// Property: pure states sit on the Bloch sphere, and the Stokes round trip
// rebuilds |phi><phi| entrywise.
TEST(Stokes, round_trip_property) {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int k = 0; k < 500; ++k) {
        const PureState s = make_state(u(rng), two_pi * u(rng));
        const StokesVector v = stokes_of_state(s);
        EXPECT_NEAR(v.norm_squared(), 1.0, 1e-10);
        const DensityMatrix rho = density_from_stokes(v);
        const DensityMatrix pure = DensityMatrix::pure(s);
        EXPECT_LE(max_abs_difference(rho.matrix(), pure.matrix()), 1e-12);
    }
}
