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

// CSV and JSON renderings of sweep products. Headers are fixed; numbers are
// printed in fixed notation with nine digits after the point and flags as 0/1.
#pragma once

#include <cmath>
#include <cstdio>
#include <optional>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <string_view>

#include "json.hpp"
#include "wmtrade/sweep.hpp"

namespace wmtrade::io {

using json = nlohmann::ordered_json;

inline constexpr std::string_view kGridHeader =
    "epsilon,eta,gmax_analytic,prev_analytic,sum_analytic,gmax_mc,prev_mc,sum_mc,diagonal_flag";
inline constexpr std::string_view kStatesHeader = "alpha,gain_analytic,rev_analytic,gain_mc,rev_mc";
inline constexpr std::string_view kCrossSectionHeader = "eta,six_gmax,prev,sum";
inline constexpr std::string_view kFidelityHeader = "alpha,fidelity,low_stats_flag";

inline std::string format_number(double x) {
    if (std::isnan(x)) {
        return "nan";
    }
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.9f", x);
    std::string s(buf);
    // Values that round to zero print without a sign.
    if (s.front() == '-' && s.find_first_not_of("-0.") == std::string::npos) {
        s.erase(0, 1);
    }
    return s;
}

inline std::string format_number(const std::optional<double> &x) { return x ? format_number(*x) : "nan"; }

inline std::string format_flag(bool b) { return b ? "1" : "0"; }

inline void write_grid_csv(std::ostream &os, std::span<const TradeoffPoint> points) {
    os << kGridHeader << '\n';
    for (const auto &p : points) {
        os << format_number(p.epsilon) << ',' << format_number(p.eta) << ',' << format_number(p.gmax_analytic) << ','
           << format_number(p.prev_analytic) << ',' << format_number(p.sum_analytic) << ','
           << format_number(p.gmax_estimated) << ',' << format_number(p.prev_estimated) << ','
           << format_number(p.sum_estimated) << ',' << format_flag(p.diagonal_flag) << '\n';
    }
}

inline void write_states_csv(std::ostream &os, std::span<const StateRow> rows) {
    os << kStatesHeader << '\n';
    for (const auto &r : rows) {
        os << format_number(r.alpha) << ',' << format_number(r.gain_analytic) << ',' << format_number(r.rev_analytic)
           << ',' << format_number(r.gain_mc) << ',' << format_number(r.rev_mc) << '\n';
    }
}

inline void write_cross_section_csv(std::ostream &os, std::span<const CrossSectionRow> rows) {
    os << kCrossSectionHeader << '\n';
    for (const auto &r : rows) {
        os << format_number(r.eta) << ',' << format_number(r.six_gmax) << ',' << format_number(r.prev) << ','
           << format_number(r.sum) << '\n';
    }
}

inline void write_fidelity_csv(std::ostream &os, std::span<const FidelityRow> rows) {
    os << kFidelityHeader << '\n';
    for (const auto &r : rows) {
        os << format_number(r.alpha) << ',' << format_number(r.fidelity) << ',' << format_flag(r.low_stats) << '\n';
    }
}

inline std::string grid_csv(std::span<const TradeoffPoint> points) {
    std::ostringstream os;
    write_grid_csv(os, points);
    return os.str();
}

inline json json_number(const std::optional<double> &x) { return x ? json(*x) : json(nullptr); }

inline json grid_rows_json(std::span<const TradeoffPoint> points) {
    json rows = json::array();
    for (const auto &p : points) {
        rows.push_back({{"epsilon", p.epsilon},
                        {"eta", p.eta},
                        {"gmax_analytic", p.gmax_analytic},
                        {"prev_analytic", p.prev_analytic},
                        {"sum_analytic", p.sum_analytic},
                        {"gmax_mc", json_number(p.gmax_estimated)},
                        {"prev_mc", json_number(p.prev_estimated)},
                        {"sum_mc", json_number(p.sum_estimated)},
                        {"diagonal_flag", p.diagonal_flag ? 1 : 0}});
    }
    return rows;
}

inline json states_rows_json(std::span<const StateRow> rows) {
    json out = json::array();
    for (const auto &r : rows) {
        out.push_back({{"alpha", r.alpha},
                       {"gain_analytic", r.gain_analytic},
                       {"rev_analytic", r.rev_analytic},
                       {"gain_mc", r.gain_mc},
                       {"rev_mc", r.rev_mc}});
    }
    return out;
}

inline json cross_section_rows_json(std::span<const CrossSectionRow> rows) {
    json out = json::array();
    for (const auto &r : rows) {
        out.push_back({{"eta", r.eta}, {"six_gmax", r.six_gmax}, {"prev", r.prev}, {"sum", r.sum}});
    }
    return out;
}

inline json fidelity_rows_json(std::span<const FidelityRow> rows) {
    json out = json::array();
    for (const auto &r : rows) {
        out.push_back({{"alpha", r.alpha}, {"fidelity", json_number(r.fidelity)}, {"low_stats_flag", r.low_stats ? 1 : 0}});
    }
    return out;
}

}  // namespace wmtrade::io
