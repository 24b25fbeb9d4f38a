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
 * @file    sweep.hpp
 * @brief   Measurement campaigns: the 51-state traversal, the operator grid,
 *          the epsilon = 0 cross-section, the reversal-fidelity sweep and a
 *          Haar-sampling oracle for the state averages.
 *
 * Monte Carlo cells draw from sub-streams keyed by (seed, cell, state,
 * channel) and results are assembled in cell order, so serial and parallel
 * runs produce identical rows.
 */
#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "wmtrade/bench.hpp"
#include "wmtrade/measurement.hpp"
#include "wmtrade/parallel.hpp"
#include "wmtrade/qubit.hpp"
#include "wmtrade/random.hpp"
#include "wmtrade/tomography.hpp"

namespace wmtrade {

/// The 51 prepared states alpha = i / 50, i = 0..50, phase 0.
class StateGrid {
  public:
    static const StateGrid &standard() {
        static const StateGrid grid;
        return grid;
    }

    std::span<const PureState> states() const { return states_; }
    const PureState &operator[](int i) const { return states_.at(static_cast<size_t>(i)); }
    int size() const { return static_cast<int>(states_.size()); }

  private:
    StateGrid() {
        states_.reserve(kStateCount);
        for (int i = 0; i < kStateCount; ++i) {
            states_.push_back(make_state(grid_alpha(i), 0.0));
        }
    }

    std::vector<PureState> states_;
};

/// k / (count - 1) for k = 0..count-1.
inline std::vector<double> uniform_values(int count) {
    if (count < 2) {
        throw std::domain_error("grid size must be >= 2");
    }
    std::vector<double> v(static_cast<size_t>(count));
    for (int k = 0; k < count; ++k) {
        v[static_cast<size_t>(k)] = static_cast<double>(k) / static_cast<double>(count - 1);
    }
    return v;
}

/// size x size lattice of (epsilon, eta), row-major by epsilon then eta.
class OperatorGrid {
  public:
    explicit OperatorGrid(int size = 16) : size_(size) {
        const auto values = uniform_values(size);
        cells_.reserve(static_cast<size_t>(size * size));
        for (double e : values) {
            for (double n : values) {
                cells_.emplace_back(e, n);
            }
        }
    }

    int size() const { return size_; }
    std::span<const WeakMeasurement> cells() const { return cells_; }
    const WeakMeasurement &at(int epsilon_index, int eta_index) const {
        return cells_.at(static_cast<size_t>(epsilon_index * size_ + eta_index));
    }
    bool on_boundary(int epsilon_index, int eta_index) const {
        return epsilon_index == 0 || eta_index == 0 || epsilon_index == size_ - 1 || eta_index == size_ - 1;
    }

  private:
    int size_;
    std::vector<WeakMeasurement> cells_;
};

struct SimulationConfig {
    std::int64_t photons_per_setting = 100000;
    NoiseModel noise;
    std::uint64_t seed = 42;
    /// Replace every binomial draw by its expectation.
    bool exact_mode = false;
    unsigned threads = 0;
};

/// Count records for all 51 states of one operator setting.
inline std::vector<CountRecord> simulate_state_grid(const WeakMeasurement &wm, const SimulationConfig &cfg,
                                                    std::uint64_t cell) {
    std::vector<CountRecord> out;
    out.reserve(kStateCount);
    const auto &grid = StateGrid::standard();
    for (int i = 0; i < kStateCount; ++i) {
        out.push_back(simulate_counts(i, grid[i], wm, cfg.photons_per_setting, cfg.noise, cfg.seed, cell));
    }
    return out;
}

inline std::vector<ExpectedCountRecord> expected_state_grid(const WeakMeasurement &wm, const SimulationConfig &cfg) {
    std::vector<ExpectedCountRecord> out;
    out.reserve(kStateCount);
    const auto &grid = StateGrid::standard();
    for (int i = 0; i < kStateCount; ++i) {
        out.push_back(expected_counts(i, grid[i], wm, cfg.photons_per_setting, cfg.noise));
    }
    return out;
}

struct EstimatePair {
    double gmax = 0.0;
    double prev = 0.0;
};

/// Count-ratio estimates for one operator setting under cfg.
inline EstimatePair estimate_cell(const WeakMeasurement &wm, const SimulationConfig &cfg, std::uint64_t cell) {
    if (cfg.exact_mode) {
        const auto records = expected_state_grid(wm, cfg);
        return {estimate_gmax_from_counts(records, wm), estimate_prev_from_counts(records)};
    }
    const auto records = simulate_state_grid(wm, cfg, cell);
    return {estimate_gmax_from_counts(records, wm), estimate_prev_from_counts(records)};
}

/// Mean over the 51-state grid of the noiseless per-state gain, i.e. the
/// value the count estimator converges to. Differs from analytic_gmax by
/// |eta - epsilon| / 150.
inline double discrete_grid_gmax(const WeakMeasurement &wm) {
    double sum = 0.0;
    for (const auto &s : StateGrid::standard().states()) {
        sum += per_state_gain(wm, s);
    }
    return sum / kStateCount;
}

inline double discrete_grid_prev(const WeakMeasurement &wm) {
    double sum = 0.0;
    for (const auto &s : StateGrid::standard().states()) {
        sum += per_state_reversal_prob(wm, s);
    }
    return sum / kStateCount;
}

/// Delta-method standard errors of the two count estimators for one run.
inline EstimatePair estimator_standard_errors(const WeakMeasurement &wm, std::int64_t photons,
                                              const NoiseModel &noise = {}) {
    const double n = static_cast<double>(photons);
    const auto &grid = StateGrid::standard();
    double var_g = 0.0;
    double var_p = 0.0;
    for (int i = 0; i < kStateCount; ++i) {
        std::array<double, 2> q{};
        std::array<double, 2> s{};
        for (Outcome r : kOutcomes) {
            const ChainOutput c = bench_chain(grid[i], wm, r, noise);
            q[index_of(r)] = c.measured_probability * noise.detector_efficiency;
            s[index_of(r)] = c.measured_probability > 0.0 ? c.reversed_probability / c.measured_probability : 0.0;
        }
        const double x = n * q[0];
        const double y = n * q[1];
        const double d = x + y;
        if (!(d > 0.0)) {
            continue;
        }
        const double vx = n * q[0] * (1.0 - q[0]);
        const double vy = n * q[1] * (1.0 - q[1]);
        const double z = zeta(i, wm);
        const double dgx = (2.0 * z - 1.0) * y / (d * d);
        const double dgy = (1.0 - 2.0 * z) * x / (d * d);
        var_g += dgx * dgx * vx + dgy * dgy * vy;

        const double rev = x * s[0] + y * s[1];
        double term = 0.0;
        for (int r = 0; r < 2; ++r) {
            const double vm = r == 0 ? vx : vy;
            const double qs = q[r] * s[r];
            const double vr = n * qs * (1.0 - qs);
            const double cov = s[r] * vm;
            term += vr / (d * d) + rev * rev * vm / (d * d * d * d) - 2.0 * rev * cov / (d * d * d);
        }
        var_p += std::max(0.0, term);
    }
    const double m = static_cast<double>(kStateCount);
    return {std::sqrt(var_g) / m, std::sqrt(var_p) / m};
}

struct StateRow {
    int state_index = 0;
    double alpha = 0.0;
    double gain_analytic = 0.0;
    double rev_analytic = 0.0;
    double gain_mc = 0.0;
    double rev_mc = 0.0;
};

/// Per-state gain and reversal probability over the 51-state traversal,
/// closed-form next to the count-ratio terms of each state.
inline std::vector<StateRow> state_sweep(const WeakMeasurement &wm, const SimulationConfig &cfg) {
    const auto &grid = StateGrid::standard();
    std::vector<StateRow> rows(kStateCount);
    parallel_for(kStateCount, cfg.threads, [&](size_t idx) {
        const int i = static_cast<int>(idx);
        StateRow row;
        row.state_index = i;
        row.alpha = grid[i].alpha_weight();
        row.gain_analytic = per_state_gain(wm, grid[i]);
        row.rev_analytic = per_state_reversal_prob(wm, grid[i]);
        if (cfg.exact_mode) {
            const auto rec = expected_counts(i, grid[i], wm, cfg.photons_per_setting, cfg.noise);
            row.gain_mc = gain_term(rec, wm);
            row.rev_mc = reversal_term(rec);
        } else {
            const auto rec = simulate_counts(i, grid[i], wm, cfg.photons_per_setting, cfg.noise, cfg.seed, 0);
            row.gain_mc = gain_term(rec, wm);
            row.rev_mc = reversal_term(rec);
        }
        rows[idx] = row;
    });
    return rows;
}

struct TradeoffPoint {
    double epsilon = 0.0;
    double eta = 0.0;
    double gmax_analytic = 0.0;
    double prev_analytic = 0.0;
    double sum_analytic = 0.0;
    std::optional<double> gmax_estimated;
    std::optional<double> prev_estimated;
    std::optional<double> sum_estimated;
    bool diagonal_flag = false;
};

inline TradeoffPoint analytic_point(const WeakMeasurement &wm) {
    TradeoffPoint p;
    p.epsilon = wm.epsilon();
    p.eta = wm.eta();
    p.gmax_analytic = analytic_gmax(wm);
    p.prev_analytic = analytic_prev(wm);
    p.sum_analytic = 6.0 * p.gmax_analytic + p.prev_analytic;
    p.diagonal_flag = wm.is_diagonal_degenerate();
    return p;
}

struct GridConfig {
    int grid_size = 16;
    bool monte_carlo = true;
    SimulationConfig sim;
};

/// All grid cells, diagonal ones flagged rather than dropped.
inline std::vector<TradeoffPoint> grid_sweep(const GridConfig &cfg) {
    const OperatorGrid grid(cfg.grid_size);
    const auto cells = grid.cells();
    std::vector<TradeoffPoint> points(cells.size());
    parallel_for(cells.size(), cfg.sim.threads, [&](size_t i) {
        TradeoffPoint p = analytic_point(cells[i]);
        if (cfg.monte_carlo) {
            const EstimatePair est = estimate_cell(cells[i], cfg.sim, i);
            p.gmax_estimated = est.gmax;
            p.prev_estimated = est.prev;
            p.sum_estimated = 6.0 * est.gmax + est.prev;
        }
        points[i] = p;
    });
    return points;
}

struct CrossSectionRow {
    double eta = 0.0;
    double six_gmax = 0.0;
    double prev = 0.0;
    double sum = 0.0;
    double six_gmax_mc = 0.0;
    double prev_mc = 0.0;
    double sum_mc = 0.0;
};

/// epsilon = 0 section over the given eta values.
inline std::vector<CrossSectionRow> cross_section(std::span<const double> eta_values, const SimulationConfig &cfg) {
    std::vector<CrossSectionRow> rows(eta_values.size());
    parallel_for(eta_values.size(), cfg.threads, [&](size_t i) {
        const WeakMeasurement wm(0.0, eta_values[i]);
        CrossSectionRow row;
        row.eta = eta_values[i];
        row.six_gmax = 6.0 * analytic_gmax(wm);
        row.prev = analytic_prev(wm);
        row.sum = row.six_gmax + row.prev;
        const EstimatePair est = estimate_cell(wm, cfg, i);
        row.six_gmax_mc = 6.0 * est.gmax;
        row.prev_mc = est.prev;
        row.sum_mc = row.six_gmax_mc + row.prev_mc;
        rows[i] = row;
    });
    return rows;
}

struct FidelityConfig {
    std::int64_t counts_per_basis = 10000;
    NoiseModel noise;
    std::uint64_t seed = 42;
    bool exact_mode = false;
    std::int64_t low_stats_floor = 100;
    unsigned threads = 0;
};

struct FidelityRow {
    int state_index = 0;
    double alpha = 0.0;
    /// Empty when the row is flagged low_stats.
    std::optional<double> fidelity;
    bool low_stats = false;
    /// Reversed photons per analyzer basis pooled over both chains.
    std::int64_t pooled_counts_per_basis = 0;
};

/// Tomography of the reversed output for every grid state. Each reversal
/// chain that passes any light contributes `counts_per_basis` detections per
/// analyzer basis; the fidelity is taken on the reconstruction from the
/// pooled counts of both chains.
inline std::vector<FidelityRow> reversal_fidelity_sweep(const WeakMeasurement &wm, const FidelityConfig &cfg) {
    check_counts_per_basis(cfg.counts_per_basis);
    cfg.noise.validate();
    const auto &grid = StateGrid::standard();
    std::vector<FidelityRow> rows(kStateCount);
    parallel_for(kStateCount, cfg.threads, [&](size_t idx) {
        const int i = static_cast<int>(idx);
        FidelityRow row;
        row.state_index = i;
        row.alpha = grid[i].alpha_weight();
        ExpectedTomographyCounts expected;
        TomographyCounts sampled;
        std::int64_t pooled = 0;
        for (Outcome r : kOutcomes) {
            const ChainOutput chain = bench_chain(grid[i], wm, r, cfg.noise);
            if (!chain.reversed_state) {
                continue;
            }
            pooled += cfg.counts_per_basis;
            if (cfg.exact_mode) {
                expected += expected_tomography_counts(*chain.reversed_state, cfg.counts_per_basis, cfg.noise);
            } else {
                Rng rng = make_stream(cfg.seed, StreamKind::tomography,
                                      {static_cast<std::uint64_t>(i), static_cast<std::uint64_t>(index_of(r))});
                sampled += sample_tomography_counts(*chain.reversed_state, cfg.counts_per_basis, cfg.noise, rng);
            }
        }
        row.pooled_counts_per_basis = pooled;
        if (pooled < cfg.low_stats_floor) {
            row.low_stats = true;
        } else {
            const DensityMatrix rho = cfg.exact_mode ? reconstruct_density(expected) : reconstruct_density(sampled);
            row.fidelity = state_fidelity(grid[i], rho);
        }
        rows[idx] = row;
    });
    return rows;
}

struct OracleEstimate {
    double gmax = 0.0;
    double gmax_standard_error = 0.0;
    double prev = 0.0;
    double prev_standard_error = 0.0;
    double prev_sample_variance = 0.0;
    std::int64_t samples = 0;
};

namespace detail {

/// Running mean and sum of squared deviations; merged pairwise so that the
/// result does not depend on batch scheduling.
struct Moments {
    double count = 0.0;
    double mean = 0.0;
    double m2 = 0.0;

    void add(double x) {
        count += 1.0;
        const double delta = x - mean;
        mean += delta / count;
        m2 += delta * (x - mean);
    }

    void merge(const Moments &o) {
        if (o.count == 0.0) {
            return;
        }
        const double total = count + o.count;
        const double delta = o.mean - mean;
        mean += delta * o.count / total;
        m2 += o.m2 + delta * delta * count * o.count / total;
        count = total;
    }

    double variance() const { return count > 1.0 ? m2 / (count - 1.0) : 0.0; }
    double standard_error() const { return count > 0.0 ? std::sqrt(variance() / count) : 0.0; }
};

}  // namespace detail

/// Haar-random pure state: cos(theta) uniform on [-1, 1], phase uniform.
inline PureState sample_haar_state(Rng &rng) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const double cos_theta = 2.0 * unit(rng) - 1.0;
    const double phase = two_pi * unit(rng);
    return make_state(std::clamp(0.5 * (1.0 + cos_theta), 0.0, 1.0), phase);
}

inline constexpr std::int64_t kMinOracleSamples = 10000;

/// Averages per_state_gain and per_state_reversal_prob over Haar-random
/// states, independently of the closed forms.
inline OracleEstimate haar_average_oracle(const WeakMeasurement &wm, std::int64_t n_samples, std::uint64_t seed,
                                          unsigned threads = 0, const ReversalPair *reversal = nullptr) {
    if (n_samples < kMinOracleSamples) {
        throw std::domain_error("haar_average_oracle needs at least 10^4 samples");
    }
    const ReversalPair rev = reversal ? *reversal : reversal_pair(wm);
    constexpr std::int64_t batch = 1 << 14;
    const auto batches = static_cast<size_t>((n_samples + batch - 1) / batch);
    std::vector<detail::Moments> gain(batches);
    std::vector<detail::Moments> prev(batches);
    parallel_for(batches, threads, [&](size_t b) {
        Rng rng = make_stream(seed, StreamKind::haar, {static_cast<std::uint64_t>(b)});
        const std::int64_t begin = static_cast<std::int64_t>(b) * batch;
        const std::int64_t end = std::min(n_samples, begin + batch);
        for (std::int64_t k = begin; k < end; ++k) {
            const PureState s = sample_haar_state(rng);
            gain[b].add(per_state_gain(wm, s));
            prev[b].add(per_state_reversal_prob(wm, s, rev));
        }
    });
    detail::Moments g;
    detail::Moments p;
    for (size_t b = 0; b < batches; ++b) {
        g.merge(gain[b]);
        p.merge(prev[b]);
    }
    return {g.mean, g.standard_error(), p.mean, p.standard_error(), p.variance(), n_samples};
}

}  // namespace wmtrade
