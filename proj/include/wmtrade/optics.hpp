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
 * @file    optics.hpp
 * @brief   Waveplate model of the PBS-based Sagnac interferometers.
 *
 * Inside a Sagnac loop the PBS sends |H> and |V> around different arms, each
 * holding a half-wave plate. A plate at angle theta transmits the amplitude
 * cos(2 theta) back into the crossing port, so a loop with arm angles
 * (h, v) acts as diag(cos 2h, cos 2v). Amplitudes are signed: with
 * b in [pi/4, pi/2] the V arm of the measurement loop carries cos 2b <= 0.
 *
 * Measurement, first outcome:   (a, b)                 -> diag(cos 2a, cos 2b)
 * Measurement, second outcome:  (pi/4 - a, 3pi/4 - b)  -> diag(sin 2a, -sin 2b)
 * Reversal, first outcome:      (b, a)
 * Reversal, second outcome:     (3pi/4 - b, pi/4 - a)
 *
 * The reversal loops exchange the two arm angles, so each reversal times its
 * measurement is a multiple of the identity.
 */
#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "wmtrade/measurement.hpp"
#include "wmtrade/qubit.hpp"

namespace wmtrade {

inline constexpr double quarter_pi = std::numbers::pi / 4.0;
inline constexpr double half_pi = std::numbers::pi / 2.0;

/// Measurement-loop plate angles in radians: a in [0, pi/4], b in [pi/4, pi/2].
class HwpSettings {
  public:
    HwpSettings(double a, double b) : a_(a), b_(b) {
        constexpr double slack = 1e-15;
        if (!(a >= -slack && a <= quarter_pi + slack)) {
            throw std::domain_error("HWP angle a must be in [0, pi/4], got " + std::to_string(a));
        }
        if (!(b >= quarter_pi - slack && b <= half_pi + slack)) {
            throw std::domain_error("HWP angle b must be in [pi/4, pi/2], got " + std::to_string(b));
        }
    }

    double a() const { return a_; }
    double b() const { return b_; }

  private:
    double a_;
    double b_;
};

/// Raw plate angles for the H and V arms of one loop.
struct ArmAngles {
    double h_arm = 0.0;
    double v_arm = 0.0;

    ArmAngles exchanged() const { return {v_arm, h_arm}; }
};

inline double hwp_transmission(double theta) { return std::cos(2.0 * theta); }

inline Operator2 sagnac_operator(const ArmAngles &angles) {
    return Operator2::diag(hwp_transmission(angles.h_arm), hwp_transmission(angles.v_arm));
}

inline WeakMeasurement wm_from_angles(const HwpSettings &s) {
    const double sa = std::sin(2.0 * s.a());
    const double sb = std::sin(2.0 * s.b());
    return {std::clamp(sa * sa, 0.0, 1.0), std::clamp(sb * sb, 0.0, 1.0)};
}

/// Inverts wm_from_angles on the branches a in [0, pi/4], b in [pi/4, pi/2].
inline HwpSettings angles_from_wm(const WeakMeasurement &wm) {
    const double a = 0.5 * std::asin(std::sqrt(wm.epsilon()));
    const double b = 0.5 * (std::numbers::pi - std::asin(std::sqrt(wm.eta())));
    return {a, b};
}

inline ArmAngles complementary_settings(const HwpSettings &s) { return {quarter_pi - s.a(), 3.0 * quarter_pi - s.b()}; }

inline ArmAngles measurement_settings(const HwpSettings &s, Outcome r) {
    return r == Outcome::first ? ArmAngles{s.a(), s.b()} : complementary_settings(s);
}

inline ArmAngles reversal_settings(const HwpSettings &s, Outcome r) {
    return measurement_settings(s, r).exchanged();
}

/// Signed Kraus operator realised by the measurement loop.
inline Operator2 bench_measurement_operator(const HwpSettings &s, Outcome r) {
    return sagnac_operator(measurement_settings(s, r));
}

inline Operator2 bench_reversal_operator(const HwpSettings &s, Outcome r) {
    return sagnac_operator(reversal_settings(s, r));
}

}  // namespace wmtrade
