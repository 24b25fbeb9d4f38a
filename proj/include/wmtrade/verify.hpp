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
 * @file    verify.hpp
 * @brief   Invariant battery over the measurement engine, the bench model and
 *          the sweeps. Every check reports PASS/FAIL with its worst
 *          deviation and the tolerance it was held to.
 */
#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "wmtrade/bench.hpp"
#include "wmtrade/io.hpp"
#include "wmtrade/measurement.hpp"
#include "wmtrade/optics.hpp"
#include "wmtrade/random.hpp"
#include "wmtrade/sweep.hpp"

namespace wmtrade {

struct CheckResult {
    std::string name;
    bool passed = false;
    double deviation = 0.0;
    double tolerance = 0.0;
};

struct RunMetadata {
    std::uint64_t seed = 0;
    std::int64_t photons_per_setting = 0;
    NoiseModel noise;
    int grid_size = 0;
    /// Not serialized; output stays byte-identical across runs.
    std::chrono::system_clock::time_point started;
    std::chrono::system_clock::time_point finished;
};

struct SweepReport {
    RunMetadata metadata;
    std::vector<TradeoffPoint> rows;
    std::vector<CheckResult> checks;

    bool passed() const {
        return std::all_of(checks.begin(), checks.end(), [](const CheckResult &c) { return c.passed; });
    }

    std::vector<std::string> failing_checks() const {
        std::vector<std::string> out;
        for (const auto &c : checks) {
            if (!c.passed) {
                out.push_back(c.name);
            }
        }
        return out;
    }
};

struct VerifyConfig {
    SimulationConfig sim;
    int grid_size = 16;
    std::int64_t oracle_samples = 200000;
    /// Statistical tolerances are k standard errors.
    double k_sigma = 3.0;
    int estimator_seeds = 5;
    /// Negative control: replace the reversal construction with the
    /// unflipped Kraus operators.
    bool mutate_reversal = false;
};

/// R_r = A_r, i.e. the eigenvalue flip is skipped.
inline ReversalRule mutated_reversal_rule() {
    return [](const WeakMeasurement &wm) {
        const KrausPair k = kraus_pair(wm);
        return ReversalPair{k.first, k.second};
    };
}

namespace detail {

inline CheckResult make_check(std::string name, double deviation, double tolerance) {
    const bool ok = std::isfinite(deviation) && deviation <= tolerance;
    return {std::move(name), ok, deviation, tolerance};
}

inline std::vector<WeakMeasurement> step_grid(double step) {
    const int n = static_cast<int>(std::lround(1.0 / step));
    std::vector<WeakMeasurement> out;
    for (int i = 0; i <= n; ++i) {
        for (int j = 0; j <= n; ++j) {
            out.emplace_back(static_cast<double>(i) / n, static_cast<double>(j) / n);
        }
    }
    return out;
}

/// Cells the oracle is run on; the first is the showcase setting.
inline std::vector<WeakMeasurement> oracle_cells() {
    return {{0.25, 0.75}, {0.0, 1.0}, {0.0, 0.0}, {0.3, 0.3}, {0.1, 0.9},
            {0.6, 0.2},   {0.45, 0.55}, {1.0, 0.4}, {0.8, 0.05}, {0.15, 0.35}};
}

}  // namespace detail

inline CheckResult check_kraus_completeness() {
    double worst = 0.0;
    for (const auto &wm : detail::step_grid(0.05)) {
        worst = std::max(worst, completeness_defect(kraus_pair(wm)));
    }
    return detail::make_check("kraus_completeness", worst, tol::construction);
}

inline CheckResult check_boundary_law(int grid_size) {
    const OperatorGrid grid(grid_size);
    double worst = 0.0;
    for (int i = 0; i < grid_size; ++i) {
        for (int j = 0; j < grid_size; ++j) {
            if (grid.on_boundary(i, j)) {
                worst = std::max(worst, std::abs(tradeoff_sum(grid.at(i, j)) - 4.0));
            }
        }
    }
    return detail::make_check("boundary_law", worst, tol::construction);
}

inline CheckResult check_center_minimum(int grid_size) {
    double worst = std::abs(tradeoff_sum({0.5, 0.5}) - 3.5);
    for (const auto &wm : OperatorGrid(grid_size).cells()) {
        worst = std::max(worst, 3.5 - tradeoff_sum(wm));
    }
    return detail::make_check("center_minimum", worst, tol::construction);
}

inline CheckResult check_pvnm_corners() {
    double worst = 0.0;
    for (const WeakMeasurement wm : {WeakMeasurement(0.0, 1.0), WeakMeasurement(1.0, 0.0)}) {
        worst = std::max(worst, std::abs(analytic_gmax(wm) - 2.0 / 3.0));
        worst = std::max(worst, std::abs(analytic_prev(wm)));
    }
    return detail::make_check("pvnm_corners", worst, tol::construction);
}

inline CheckResult check_range_bounds() {
    double worst = 0.0;
    for (const auto &wm : detail::step_grid(0.01)) {
        const double g = analytic_gmax(wm);
        const double p = analytic_prev(wm);
        worst = std::max({worst, 0.5 - g, g - 2.0 / 3.0, -p, p - 1.0});
    }
    return detail::make_check("range_bounds", worst, tol::construction);
}

inline CheckResult check_parameter_symmetry() {
    double worst = 0.0;
    for (const auto &wm : detail::step_grid(0.05)) {
        const WeakMeasurement swapped(wm.eta(), wm.epsilon());
        const WeakMeasurement mirrored(1.0 - wm.epsilon(), 1.0 - wm.eta());
        for (const auto &other : {swapped, mirrored}) {
            worst = std::max(worst, std::abs(analytic_gmax(wm) - analytic_gmax(other)));
            worst = std::max(worst, std::abs(analytic_prev(wm) - analytic_prev(other)));
        }
    }
    return detail::make_check("parameter_symmetry", worst, 1e-15);
}

inline CheckResult check_phase_invariance(const ReversalRule &rule) {
    const std::array<double, 5> phases{0.0, std::numbers::pi / 3.0, std::numbers::pi / 2.0, std::numbers::pi, 1.7};
    double worst = 0.0;
    for (const auto &wm : detail::step_grid(0.1)) {
        const ReversalPair rev = rule(wm);
        for (int i = 0; i <= 10; ++i) {
            const double alpha = i / 10.0;
            const PureState base = make_state(alpha, 0.0);
            const double g0 = per_state_gain(wm, base);
            const double p0 = per_state_reversal_prob(wm, base, rev);
            for (double ph : phases) {
                const PureState s = make_state(alpha, ph);
                worst = std::max(worst, std::abs(per_state_gain(wm, s) - g0));
                worst = std::max(worst, std::abs(per_state_reversal_prob(wm, s, rev) - p0));
            }
        }
    }
    return detail::make_check("phase_invariance", worst, tol::construction);
}

/// For random (state, wm, r): R_r A_r must be a multiple of the identity,
/// and when non-zero the reversed state must equal the input.
inline CheckResult check_reversal_exactness(const ReversalRule &rule, std::uint64_t seed) {
    Rng rng = make_stream(seed, StreamKind::property_samples, {1});
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    double worst = 0.0;
    for (int t = 0; t < 100; ++t) {
        const WeakMeasurement wm(unit(rng), unit(rng));
        const PureState s = make_state(unit(rng), two_pi * unit(rng));
        const Outcome r = (t % 2 == 0) ? Outcome::first : Outcome::second;
        const Operator2 a = kraus_operator(wm, r);
        const Operator2 rev = rule(wm)[r];
        const Operator2 product = rev * a;
        const double off = std::max({std::abs(product(0, 1)), std::abs(product(1, 0)),
                                     std::abs(product(0, 0) - product(1, 1))});
        worst = std::max(worst, off);
        if (product.max_abs() < 1e-12) {
            continue;
        }
        const ApplyResult measured = apply_operator(a, s);
        if (measured.annihilated()) {
            continue;
        }
        const Amplitudes image = rev.apply(measured.post->amplitudes());
        const auto reversed = PureState::from_amplitudes(image);
        if (!reversed) {
            worst = std::max(worst, 1.0);
            continue;
        }
        worst = std::max(worst, 1.0 - overlap(*reversed, s));
    }
    return detail::make_check("reversal_exactness", worst, tol::construction);
}

inline CheckResult check_reversal_state_constancy(const ReversalRule &rule, int grid_size) {
    double worst = 0.0;
    for (const auto &wm : OperatorGrid(grid_size).cells()) {
        const ReversalPair rev = rule(wm);
        const double target = analytic_prev(wm);
        for (const auto &s : StateGrid::standard().states()) {
            worst = std::max(worst, std::abs(per_state_reversal_prob(wm, s, rev) - target));
        }
    }
    return detail::make_check("reversal_state_constancy", worst, tol::construction);
}

inline CheckResult check_angle_round_trip() {
    double worst = 0.0;
    for (const auto &wm : detail::step_grid(0.05)) {
        const WeakMeasurement back = wm_from_angles(angles_from_wm(wm));
        worst = std::max({worst, std::abs(back.epsilon() - wm.epsilon()), std::abs(back.eta() - wm.eta())});
    }
    return detail::make_check("angle_round_trip", worst, tol::construction);
}

/// The signed waveplate operators have the Kraus magnitudes, and each
/// reversal loop composed with its measurement loop is a multiple of I.
inline CheckResult check_bench_operators() {
    double worst = 0.0;
    for (const auto &wm : detail::step_grid(0.05)) {
        const HwpSettings s = angles_from_wm(wm);
        const KrausPair k = kraus_pair(wm);
        for (Outcome r : kOutcomes) {
            const Operator2 m = bench_measurement_operator(s, r);
            for (int d = 0; d < 2; ++d) {
                worst = std::max(worst, std::abs(std::abs(m(d, d)) - k[r](d, d).real()));
            }
            const Operator2 product = bench_reversal_operator(s, r) * m;
            worst = std::max(worst, std::abs(product(0, 0) - product(1, 1)));
        }
    }
    return detail::make_check("bench_operators", worst, tol::construction);
}

/// Mean of per_state_gain over the 51 states sits |eta - epsilon| / 150
/// above the continuous average, never more than 0.0067.
inline CheckResult check_discrete_grid_gap(int grid_size) {
    double pattern = 0.0;
    double largest = 0.0;
    for (const auto &wm : OperatorGrid(grid_size).cells()) {
        const double gap = discrete_grid_gmax(wm) - analytic_gmax(wm);
        largest = std::max(largest, std::abs(gap));
        pattern = std::max(pattern, std::abs(gap - std::abs(wm.eta() - wm.epsilon()) / 150.0));
    }
    const double deviation = largest > 0.0067 ? largest : pattern;
    return detail::make_check("discrete_grid_gap", deviation, tol::construction);
}

inline std::vector<CheckResult> check_cross_section(int grid_size) {
    SimulationConfig cfg;
    cfg.exact_mode = true;
    cfg.threads = 1;
    const auto etas = uniform_values(grid_size);
    const auto rows = cross_section(etas, cfg);
    double linear = 0.0;
    double monotone = 0.0;
    for (size_t i = 0; i < rows.size(); ++i) {
        linear = std::max({linear, std::abs(rows[i].six_gmax - (3.0 + rows[i].eta)),
                           std::abs(rows[i].prev - (1.0 - rows[i].eta)), std::abs(rows[i].sum - 4.0)});
        if (i > 0) {
            if (!(rows[i].six_gmax > rows[i - 1].six_gmax)) {
                monotone = std::max(monotone, rows[i - 1].six_gmax - rows[i].six_gmax + 1.0);
            }
            if (!(rows[i].prev < rows[i - 1].prev)) {
                monotone = std::max(monotone, rows[i].prev - rows[i - 1].prev + 1.0);
            }
        }
    }
    return {detail::make_check("cross_section_linearity", linear, tol::construction),
            detail::make_check("cross_section_monotonicity", monotone, 0.0)};
}

inline std::vector<CheckResult> check_oracle_agreement(const VerifyConfig &cfg, const ReversalRule &rule) {
    double gain_sigmas = 0.0;
    double prev_dev = 0.0;
    double prev_variance = 0.0;
    std::uint64_t cell = 0;
    for (const auto &wm : detail::oracle_cells()) {
        const ReversalPair rev = rule(wm);
        const OracleEstimate est = haar_average_oracle(wm, cfg.oracle_samples, cfg.sim.seed + cell++,
                                                       cfg.sim.threads, &rev);
        const double g_dev = std::abs(est.gmax - analytic_gmax(wm));
        const double g_scale = std::max(est.gmax_standard_error, tol::construction / cfg.k_sigma);
        gain_sigmas = std::max(gain_sigmas, g_dev / g_scale);
        const double p_tol = std::max(cfg.k_sigma * est.prev_standard_error, tol::construction);
        prev_dev = std::max(prev_dev, std::abs(est.prev - analytic_prev(wm)) / p_tol);
        prev_variance = std::max(prev_variance, est.prev_sample_variance);
    }
    return {detail::make_check("oracle_gmax_agreement_sigmas", gain_sigmas, cfg.k_sigma),
            detail::make_check("oracle_prev_agreement", prev_dev, 1.0),
            detail::make_check("oracle_prev_zero_variance", prev_variance, 1e-20)};
}

/// Same configuration, serial vs parallel, rendered to CSV.
inline CheckResult check_rng_determinism(const VerifyConfig &cfg) {
    GridConfig grid;
    grid.grid_size = 4;
    grid.sim = cfg.sim;
    grid.sim.exact_mode = false;
    grid.sim.photons_per_setting = 1000;
    grid.sim.threads = 1;
    const std::string serial = io::grid_csv(grid_sweep(grid));
    const std::string serial_again = io::grid_csv(grid_sweep(grid));
    grid.sim.threads = 4;
    const std::string parallel = io::grid_csv(grid_sweep(grid));
    const bool same = serial == parallel && serial == serial_again;
    return detail::make_check("rng_determinism", same ? 0.0 : 1.0, 0.0);
}

/// Count estimators against their expectation on the 51-state grid.
inline std::vector<CheckResult> check_estimators(const VerifyConfig &cfg) {
    double g_sigmas = 0.0;
    double p_sigmas = 0.0;
    for (const WeakMeasurement wm : {WeakMeasurement(0.25, 0.75), WeakMeasurement(0.75, 0.25)}) {
        SimulationConfig exact = cfg.sim;
        exact.exact_mode = true;
        const EstimatePair target = estimate_cell(wm, exact, 0);
        if (cfg.sim.exact_mode) {
            g_sigmas = std::max(g_sigmas, std::abs(target.gmax - discrete_grid_gmax(wm)) / tol::construction);
            p_sigmas = std::max(p_sigmas, std::abs(target.prev - discrete_grid_prev(wm)) / tol::construction);
            continue;
        }
        const EstimatePair se = estimator_standard_errors(wm, cfg.sim.photons_per_setting, cfg.sim.noise);
        const int seeds = std::max(1, cfg.estimator_seeds);
        double g = 0.0;
        double p = 0.0;
        for (int k = 0; k < seeds; ++k) {
            SimulationConfig run = cfg.sim;
            run.seed = cfg.sim.seed + static_cast<std::uint64_t>(k);
            const EstimatePair est = estimate_cell(wm, run, 0);
            g += est.gmax;
            p += est.prev;
        }
        g /= seeds;
        p /= seeds;
        const double root = std::sqrt(static_cast<double>(seeds));
        g_sigmas = std::max(g_sigmas, std::abs(g - target.gmax) / (se.gmax / root));
        p_sigmas = std::max(p_sigmas, std::abs(p - target.prev) / (se.prev / root));
    }
    const double limit = cfg.sim.exact_mode ? 1.0 : cfg.k_sigma;
    return {detail::make_check("estimator_gmax_consistency", g_sigmas, limit),
            detail::make_check("estimator_prev_consistency", p_sigmas, limit)};
}

inline CheckResult check_exact_reversal_fidelity() {
    FidelityConfig cfg;
    cfg.exact_mode = true;
    cfg.threads = 1;
    double worst = 0.0;
    for (const auto &row : reversal_fidelity_sweep({0.25, 0.75}, cfg)) {
        worst = std::max(worst, row.fidelity ? 1.0 - *row.fidelity : 1.0);
    }
    return detail::make_check("exact_reversal_fidelity", worst, tol::construction);
}

/// Runs the whole battery. The report rows carry the analytic grid.
inline SweepReport verify(const VerifyConfig &cfg) {
    cfg.sim.noise.validate();
    SweepReport report;
    report.metadata.seed = cfg.sim.seed;
    report.metadata.photons_per_setting = cfg.sim.photons_per_setting;
    report.metadata.noise = cfg.sim.noise;
    report.metadata.grid_size = cfg.grid_size;
    report.metadata.started = std::chrono::system_clock::now();

    const ReversalRule rule = cfg.mutate_reversal ? mutated_reversal_rule() : standard_reversal_rule();
    auto &c = report.checks;
    c.push_back(check_kraus_completeness());
    c.push_back(check_boundary_law(cfg.grid_size));
    c.push_back(check_center_minimum(cfg.grid_size));
    c.push_back(check_pvnm_corners());
    c.push_back(check_range_bounds());
    c.push_back(check_parameter_symmetry());
    c.push_back(check_phase_invariance(rule));
    c.push_back(check_reversal_exactness(rule, cfg.sim.seed));
    c.push_back(check_reversal_state_constancy(rule, cfg.grid_size));
    c.push_back(check_angle_round_trip());
    c.push_back(check_bench_operators());
    c.push_back(check_discrete_grid_gap(cfg.grid_size));
    for (auto &r : check_cross_section(cfg.grid_size)) {
        c.push_back(std::move(r));
    }
    for (auto &r : check_oracle_agreement(cfg, rule)) {
        c.push_back(std::move(r));
    }
    c.push_back(check_rng_determinism(cfg));
    for (auto &r : check_estimators(cfg)) {
        c.push_back(std::move(r));
    }
    c.push_back(check_exact_reversal_fidelity());

    GridConfig grid;
    grid.grid_size = cfg.grid_size;
    grid.monte_carlo = false;
    grid.sim = cfg.sim;
    report.rows = grid_sweep(grid);
    report.metadata.finished = std::chrono::system_clock::now();
    return report;
}

}  // namespace wmtrade
