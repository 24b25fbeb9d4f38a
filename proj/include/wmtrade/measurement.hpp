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
 * @file    measurement.hpp
 * @brief   Two-outcome diagonal weak measurements on a polarization qubit.
 *
 * A WeakMeasurement (epsilon, eta) has the Kraus pair
 *
 *   A1 = diag(sqrt(1 - epsilon), sqrt(1 - eta))
 *   A2 = diag(sqrt(epsilon),     sqrt(eta))
 *
 * Outcome r is answered with a basis-state guess, and undone probabilistically
 * by the reversal operator obtained by exchanging the two diagonal entries of
 * A_r. The closed forms
 *
 *   G_max = (3 + |eta - epsilon|) / 6,   P_rev = 1 - epsilon - eta + 2 epsilon eta
 *
 * satisfy 6 G_max + P_rev = 4 on the boundary of the (epsilon, eta) square.
 */
#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>

#include "wmtrade/qubit.hpp"

namespace wmtrade {

enum class Outcome : int { first = 1, second = 2 };

inline constexpr std::array<Outcome, 2> kOutcomes{Outcome::first, Outcome::second};

inline int index_of(Outcome r) { return static_cast<int>(r) - 1; }

class WeakMeasurement {
  public:
    WeakMeasurement(double epsilon, double eta) : epsilon_(epsilon), eta_(eta) {
        if (!(epsilon >= 0.0 && epsilon <= 1.0)) {
            throw std::domain_error("epsilon must be in [0, 1], got " + std::to_string(epsilon));
        }
        if (!(eta >= 0.0 && eta <= 1.0)) {
            throw std::domain_error("eta must be in [0, 1], got " + std::to_string(eta));
        }
    }

    double epsilon() const { return epsilon_; }
    double eta() const { return eta_; }

    /// epsilon == eta away from the corners: both Kraus operators are scalar
    /// and the apparatus acts as a plain beam splitter.
    bool is_diagonal_degenerate() const {
        return std::abs(epsilon_ - eta_) < tol::construction && epsilon_ != 0.0 && epsilon_ != 1.0;
    }

    /// |epsilon - eta| below the tie tolerance.
    bool is_tie() const { return std::abs(epsilon_ - eta_) < tol::construction; }

    friend bool operator==(const WeakMeasurement &, const WeakMeasurement &) = default;

  private:
    double epsilon_;
    double eta_;
};

struct KrausPair {
    Operator2 first;
    Operator2 second;

    const Operator2 &operator[](Outcome r) const { return r == Outcome::first ? first : second; }
};

inline KrausPair kraus_pair(const WeakMeasurement &wm) {
    return {Operator2::diag(std::sqrt(1.0 - wm.epsilon()), std::sqrt(1.0 - wm.eta())),
            Operator2::diag(std::sqrt(wm.epsilon()), std::sqrt(wm.eta()))};
}

inline Operator2 kraus_operator(const WeakMeasurement &wm, Outcome r) { return kraus_pair(wm)[r]; }

/// Max entrywise deviation of A1^dagger A1 + A2^dagger A2 from the identity.
inline double completeness_defect(const KrausPair &k) {
    const Operator2 sum = k.first.adjoint() * k.first + k.second.adjoint() * k.second;
    return max_abs_difference(sum, Operator2::identity());
}

struct OutcomeRecord {
    Outcome outcome = Outcome::first;
    double probability = 0.0;
    std::optional<PureState> post_state;
    PureState guess;
    double guess_fidelity = 0.0;
};

/// Basis-state guess for outcome r: outcome 1 guesses |H> when epsilon < eta
/// (A1 favours H) and |V> otherwise; outcome 2 guesses the other basis state.
/// Ties resolve to |H> for outcome 1.
inline PureState optimal_guess(const WeakMeasurement &wm, Outcome r) {
    const bool first_favours_h = wm.is_tie() || wm.epsilon() < wm.eta();
    const bool guess_h = (r == Outcome::first) == first_favours_h;
    return guess_h ? PureState::horizontal() : PureState::vertical();
}

inline std::pair<OutcomeRecord, OutcomeRecord> outcome_distribution(const WeakMeasurement &wm,
                                                                    const PureState &state) {
    const KrausPair k = kraus_pair(wm);
    auto record = [&](Outcome r) {
        const ApplyResult applied = apply_operator(k[r], state);
        OutcomeRecord rec;
        rec.outcome = r;
        rec.probability = std::clamp(applied.probability, 0.0, 1.0);
        rec.post_state = applied.post;
        rec.guess = optimal_guess(wm, r);
        rec.guess_fidelity = overlap(rec.guess, state);
        return rec;
    };
    return {record(Outcome::first), record(Outcome::second)};
}

/// Sum over outcomes of p(r) |<guess_r|phi>|^2.
inline double per_state_gain(const WeakMeasurement &wm, const PureState &state) {
    const auto [o1, o2] = outcome_distribution(wm, state);
    return o1.probability * o1.guess_fidelity + o2.probability * o2.guess_fidelity;
}

inline double analytic_gmax(const WeakMeasurement &wm) {
    return (3.0 + std::abs(wm.eta() - wm.epsilon())) / 6.0;
}

/// A_r with its diagonal entries exchanged; not rescaled.
inline Operator2 reversal_operator(const WeakMeasurement &wm, Outcome r) {
    const Operator2 a = kraus_operator(wm, r);
    return Operator2::diag(a(1, 1), a(0, 0));
}

struct ReversalPair {
    Operator2 first;
    Operator2 second;

    const Operator2 &operator[](Outcome r) const { return r == Outcome::first ? first : second; }
};

inline ReversalPair reversal_pair(const WeakMeasurement &wm) {
    return {reversal_operator(wm, Outcome::first), reversal_operator(wm, Outcome::second)};
}

/// Pluggable reversal construction, so verification can run against a
/// deliberately broken rule.
using ReversalRule = std::function<ReversalPair(const WeakMeasurement &)>;

inline ReversalRule standard_reversal_rule() { return [](const WeakMeasurement &wm) { return reversal_pair(wm); }; }

/// Sum over outcomes of p(r) |<phi| R_r |phi_r>|^2 with |phi_r> the
/// normalized post-measurement state. Annihilated branches contribute 0.
inline double per_state_reversal_prob(const WeakMeasurement &wm, const PureState &state,
                                      const ReversalPair &reversal) {
    const KrausPair k = kraus_pair(wm);
    const Amplitudes phi = state.amplitudes();
    double total = 0.0;
    for (Outcome r : kOutcomes) {
        const ApplyResult applied = apply_operator(k[r], state);
        if (applied.annihilated()) {
            continue;
        }
        const Amplitudes reversed = reversal[r].apply(applied.post->amplitudes());
        total += applied.probability * std::norm(inner_product(phi, reversed));
    }
    return total;
}

inline double per_state_reversal_prob(const WeakMeasurement &wm, const PureState &state) {
    return per_state_reversal_prob(wm, state, reversal_pair(wm));
}

inline double analytic_prev(const WeakMeasurement &wm) {
    const double e = wm.epsilon();
    const double n = wm.eta();
    return 1.0 - e - n + 2.0 * e * n;
}

/// 6 G_max + P_rev.
inline double tradeoff_sum(const WeakMeasurement &wm) { return 6.0 * analytic_gmax(wm) + analytic_prev(wm); }

}  // namespace wmtrade
