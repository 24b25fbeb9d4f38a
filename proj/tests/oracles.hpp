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

// Test-only reference computations. Nothing here includes the library: every
// quantity is rebuilt from raw complex amplitudes so that it can check the
// library independently.
#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>

namespace oracle {

using cplx = std::complex<double>;

struct Amp {
    cplx h;
    cplx v;
};

inline Amp state(double alpha, double phase) { return {std::sqrt(alpha), std::polar(std::sqrt(1.0 - alpha), phase)}; }

/// Diagonal Kraus entries for outcome r (1 or 2).
inline void kraus_diag(double eps, double eta, int r, double &dh, double &dv) {
    dh = r == 1 ? std::sqrt(1.0 - eps) : std::sqrt(eps);
    dv = r == 1 ? std::sqrt(1.0 - eta) : std::sqrt(eta);
}

inline double outcome_prob(double eps, double eta, double alpha, double phase, int r) {
    double dh, dv;
    kraus_diag(eps, eta, r, dh, dv);
    const Amp s = state(alpha, phase);
    return std::norm(dh * s.h) + std::norm(dv * s.v);
}

/// Sum_r p(r) |<g_r|phi>|^2 for basis guesses; guess_h[r-1] true means |H>.
inline double gain_for_guesses(double eps, double eta, double alpha, double phase, bool guess1_h, bool guess2_h) {
    const Amp s = state(alpha, phase);
    const double fh = std::norm(s.h);
    const double fv = std::norm(s.v);
    return outcome_prob(eps, eta, alpha, phase, 1) * (guess1_h ? fh : fv) +
           outcome_prob(eps, eta, alpha, phase, 2) * (guess2_h ? fh : fv);
}

/// Best of the four basis-guess assignments, averaged over Haar states by
/// plain Monte Carlo. Returns the assignment index (bit0: guess1 is H,
/// bit1: guess2 is H).
inline int best_guess_assignment_by_sampling(double eps, double eta, int samples, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double totals[4] = {0, 0, 0, 0};
    for (int k = 0; k < samples; ++k) {
        const double alpha = 0.5 * (1.0 + (2.0 * u(rng) - 1.0));
        const double phase = 2.0 * M_PI * u(rng);
        for (int a = 0; a < 4; ++a) {
            totals[a] += gain_for_guesses(eps, eta, alpha, phase, (a & 1) != 0, (a & 2) != 0);
        }
    }
    int best = 0;
    for (int a = 1; a < 4; ++a) {
        if (totals[a] > totals[best]) {
            best = a;
        }
    }
    return best;
}

/// Explicit sum_r p(r) |<phi| R_r |phi_r>|^2 with R_r the flipped diagonal.
inline double reversal_prob(double eps, double eta, double alpha, double phase) {
    const Amp s = state(alpha, phase);
    double total = 0.0;
    for (int r = 1; r <= 2; ++r) {
        double dh, dv;
        kraus_diag(eps, eta, r, dh, dv);
        const cplx mh = dh * s.h;
        const cplx mv = dv * s.v;
        const double p = std::norm(mh) + std::norm(mv);
        if (p < 1e-15) {
            continue;
        }
        const double n = std::sqrt(p);
        const cplx rh = dv * mh / n;
        const cplx rv = dh * mv / n;
        total += p * std::norm(std::conj(s.h) * rh + std::conj(s.v) * rv);
    }
    return total;
}

/// Mean over alpha = i/50, i = 0..50 of f(alpha).
template <class F>
double grid_mean(F f) {
    double sum = 0.0;
    for (int i = 0; i <= 50; ++i) {
        sum += f(i / 50.0);
    }
    return sum / 51.0;
}

/// Simpson's rule on [0, 1] with n (even) intervals.
template <class F>
double simpson(F f, int n = 2000) {
    const double h = 1.0 / n;
    double s = f(0.0) + f(1.0);
    for (int k = 1; k < n; ++k) {
        s += (k % 2 ? 4.0 : 2.0) * f(k * h);
    }
    return s * h / 3.0;
}

}  // namespace oracle
