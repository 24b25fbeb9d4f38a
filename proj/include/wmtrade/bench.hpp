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
 * @file    bench.hpp
 * @brief   Photon-count simulation of the measure-then-reverse bench and the
 *          count-ratio estimators of G_max and P_rev.
 *
 * For the i-th prepared state (alpha = i / 50) and each outcome r the bench
 * records
 *
 *   C^M_i(r)  photons leaving the measurement loop set for A_r
 *   C^R_i(r)  photons that also leave the reversal loop set for R_r
 *
 * and the estimators are
 *
 *   G = mean_i [zeta_i C^M_i(1) + (1 - zeta_i) C^M_i(2)] / [C^M_i(1) + C^M_i(2)]
 *   P = mean_i [C^R_i(1) + C^R_i(2)] / [C^M_i(1) + C^M_i(2)]
 *
 * with zeta_i = alpha_i when A1 favours |H> and 1 - alpha_i otherwise.
 */
#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "wmtrade/measurement.hpp"
#include "wmtrade/optics.hpp"
#include "wmtrade/qubit.hpp"
#include "wmtrade/random.hpp"

namespace wmtrade {

inline constexpr int kStateCount = 51;
inline constexpr int kMaxStateIndex = kStateCount - 1;

inline double grid_alpha(int state_index) {
    if (state_index < 0 || state_index > kMaxStateIndex) {
        throw std::domain_error("state index must be in [0, 50], got " + std::to_string(state_index));
    }
    return static_cast<double>(state_index) / 50.0;
}

struct NoiseModel {
    /// Probability that a photon takes the wrong arm of a Sagnac loop, per loop.
    double pbs_leakage = 0.0;
    double detector_efficiency = 1.0;

    void validate() const {
        if (!(pbs_leakage >= 0.0 && pbs_leakage <= 0.01)) {
            throw std::domain_error("pbs_leakage must be in [0, 0.01], got " + std::to_string(pbs_leakage));
        }
        if (!(detector_efficiency > 0.0 && detector_efficiency <= 1.0)) {
            throw std::domain_error("detector_efficiency must be in (0, 1], got " +
                                    std::to_string(detector_efficiency));
        }
    }

    bool is_noiseless() const { return pbs_leakage == 0.0 && detector_efficiency == 1.0; }

    friend bool operator==(const NoiseModel &, const NoiseModel &) = default;
};

/// Extinction ratio R:1 expressed as a per-pass leakage 1 / (R + 1).
inline double leakage_from_extinction_ratio(double ratio) { return 1.0 / (ratio + 1.0); }

/// What one measure-then-reverse chain does to one input state.
///
/// Leakage is an incoherent mixture: each loop applies its nominal operator
/// with probability 1 - L and the arm-exchanged operator with probability L.
struct ChainOutput {
    double measured_probability = 0.0;
    double reversed_probability = 0.0;
    /// Normalized output of the reversal loop; empty when nothing survives.
    std::optional<DensityMatrix> reversed_state;
};

inline ChainOutput bench_chain(const PureState &state, const WeakMeasurement &wm, Outcome r,
                               const NoiseModel &noise = {}) {
    noise.validate();
    const HwpSettings settings = angles_from_wm(wm);
    const double leak = noise.pbs_leakage;
    const std::array<double, 2> weights{1.0 - leak, leak};
    const std::array<ArmAngles, 2> measure{measurement_settings(settings, r),
                                           measurement_settings(settings, r).exchanged()};
    const std::array<ArmAngles, 2> reverse{reversal_settings(settings, r), reversal_settings(settings, r).exchanged()};

    const Amplitudes phi = state.amplitudes();
    ChainOutput out;
    std::array<complex_t, 4> rho{};
    for (int m = 0; m < 2; ++m) {
        if (weights[m] == 0.0) {
            continue;
        }
        const Amplitudes measured = sagnac_operator(measure[m]).apply(phi);
        out.measured_probability += weights[m] * (std::norm(measured[0]) + std::norm(measured[1]));
        for (int v = 0; v < 2; ++v) {
            if (weights[v] == 0.0) {
                continue;
            }
            const Amplitudes psi = sagnac_operator(reverse[v]).apply(measured);
            const double w = weights[m] * weights[v];
            out.reversed_probability += w * (std::norm(psi[0]) + std::norm(psi[1]));
            rho[0] += w * psi[0] * std::conj(psi[0]);
            rho[1] += w * psi[0] * std::conj(psi[1]);
            rho[2] += w * psi[1] * std::conj(psi[0]);
            rho[3] += w * psi[1] * std::conj(psi[1]);
        }
    }
    if (out.reversed_probability >= tol::annihilation) {
        const double inv = 1.0 / out.reversed_probability;
        out.reversed_state =
            DensityMatrix(Operator2(inv * rho[0], inv * rho[1], inv * rho[2], inv * rho[3]));
    }
    out.measured_probability = std::clamp(out.measured_probability, 0.0, 1.0);
    out.reversed_probability = std::clamp(out.reversed_probability, 0.0, out.measured_probability);
    return out;
}

/// Counts for one prepared state. `Count` is std::int64_t for sampled runs
/// and double for expected-value (exact mode) runs.
template <class Count>
struct BasicCountRecord {
    int state_index = 0;
    Count m_primary{};      ///< C^M_i(a, b)
    Count m_complement{};   ///< C^M_i(pi/4 - a, 3pi/4 - b)
    Count r_primary{};      ///< C^R_i(b, a)
    Count r_complement{};   ///< C^R_i(3pi/4 - b, pi/4 - a)
    std::int64_t photons_per_setting = 0;

    Count measured_total() const { return m_primary + m_complement; }
    Count reversed_total() const { return r_primary + r_complement; }
};

using CountRecord = BasicCountRecord<std::int64_t>;
using ExpectedCountRecord = BasicCountRecord<double>;

/// Channel index within a state's sub-stream key.
enum class CountChannel : std::uint64_t { m_primary = 0, m_complement = 1, r_primary = 2, r_complement = 3 };

/// Samples the four channels of one prepared state. Each measurement channel
/// is an independent run of `photons` photons; the reversal channel for
/// outcome r thins the photons that survived measurement r, so its marginal
/// is Binomial(photons, P_R(r) * efficiency) and C^R never exceeds C^M.
///
/// `cell` separates sub-streams of different operator settings under the
/// same master seed.
inline CountRecord simulate_counts(int state_index, const PureState &state, const WeakMeasurement &wm,
                                   std::int64_t photons, const NoiseModel &noise, std::uint64_t seed,
                                   std::uint64_t cell = 0) {
    if (photons < 1) {
        throw std::domain_error("photons_per_setting must be >= 1");
    }
    noise.validate();
    CountRecord rec;
    rec.state_index = state_index;
    rec.photons_per_setting = photons;

    auto draw = [&](CountChannel channel, std::int64_t trials, double p) -> std::int64_t {
        Rng rng = make_stream(seed, StreamKind::counts,
                              {cell, static_cast<std::uint64_t>(state_index), static_cast<std::uint64_t>(channel)});
        std::binomial_distribution<std::int64_t> dist(trials, std::clamp(p, 0.0, 1.0));
        return dist(rng);
    };

    for (Outcome r : kOutcomes) {
        const ChainOutput chain = bench_chain(state, wm, r, noise);
        const bool first = r == Outcome::first;
        const std::int64_t measured =
            draw(first ? CountChannel::m_primary : CountChannel::m_complement, photons,
                 chain.measured_probability * noise.detector_efficiency);
        const double survival =
            chain.measured_probability > 0.0 ? chain.reversed_probability / chain.measured_probability : 0.0;
        const std::int64_t reversed =
            draw(first ? CountChannel::r_primary : CountChannel::r_complement, measured, survival);
        (first ? rec.m_primary : rec.m_complement) = measured;
        (first ? rec.r_primary : rec.r_complement) = reversed;
    }
    return rec;
}

/// Expected value of every channel of simulate_counts.
inline ExpectedCountRecord expected_counts(int state_index, const PureState &state, const WeakMeasurement &wm,
                                           std::int64_t photons, const NoiseModel &noise) {
    if (photons < 1) {
        throw std::domain_error("photons_per_setting must be >= 1");
    }
    ExpectedCountRecord rec;
    rec.state_index = state_index;
    rec.photons_per_setting = photons;
    const double n = static_cast<double>(photons) * noise.detector_efficiency;
    const ChainOutput c1 = bench_chain(state, wm, Outcome::first, noise);
    const ChainOutput c2 = bench_chain(state, wm, Outcome::second, noise);
    rec.m_primary = n * c1.measured_probability;
    rec.m_complement = n * c2.measured_probability;
    rec.r_primary = n * c1.reversed_probability;
    rec.r_complement = n * c2.reversed_probability;
    return rec;
}

/// zeta_i: alpha_i when A1 favours |H> (epsilon < eta, i.e. sin 2a < sin 2b,
/// or a tie), 1 - alpha_i otherwise.
inline double zeta(int state_index, const WeakMeasurement &wm) {
    const double alpha = grid_alpha(state_index);
    return (wm.is_tie() || wm.epsilon() < wm.eta()) ? alpha : 1.0 - alpha;
}

class EstimationError : public std::runtime_error {
  public:
    explicit EstimationError(int state_index)
        : std::runtime_error("no measured photons for state index " + std::to_string(state_index)),
          state_index_(state_index) {}

    int state_index() const { return state_index_; }

  private:
    int state_index_;
};

template <class Count>
double measured_denominator(const BasicCountRecord<Count> &rec) {
    const double d = static_cast<double>(rec.measured_total());
    if (!(d > 0.0)) {
        throw EstimationError(rec.state_index);
    }
    return d;
}

/// Count-weighted guess fidelity of one prepared state.
template <class Count>
double gain_term(const BasicCountRecord<Count> &rec, const WeakMeasurement &wm) {
    const double z = zeta(rec.state_index, wm);
    const double num = z * static_cast<double>(rec.m_primary) + (1.0 - z) * static_cast<double>(rec.m_complement);
    return num / measured_denominator(rec);
}

template <class Count>
double reversal_term(const BasicCountRecord<Count> &rec) {
    return static_cast<double>(rec.reversed_total()) / measured_denominator(rec);
}

template <class Count>
double estimate_gmax_from_counts(std::span<const BasicCountRecord<Count>> records, const WeakMeasurement &wm) {
    if (records.empty()) {
        throw std::domain_error("estimate_gmax_from_counts: no records");
    }
    double sum = 0.0;
    for (const auto &rec : records) {
        sum += gain_term(rec, wm);
    }
    return sum / static_cast<double>(records.size());
}

template <class Count>
double estimate_prev_from_counts(std::span<const BasicCountRecord<Count>> records) {
    if (records.empty()) {
        throw std::domain_error("estimate_prev_from_counts: no records");
    }
    double sum = 0.0;
    for (const auto &rec : records) {
        sum += reversal_term(rec);
    }
    return sum / static_cast<double>(records.size());
}

template <class Count>
double estimate_gmax_from_counts(const std::vector<BasicCountRecord<Count>> &records, const WeakMeasurement &wm) {
    return estimate_gmax_from_counts(std::span<const BasicCountRecord<Count>>(records), wm);
}

template <class Count>
double estimate_prev_from_counts(const std::vector<BasicCountRecord<Count>> &records) {
    return estimate_prev_from_counts(std::span<const BasicCountRecord<Count>>(records));
}

}  // namespace wmtrade
