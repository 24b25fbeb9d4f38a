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
 * @file    cli.hpp
 * @brief   Command-line front end: configuration, subcommand dispatch and
 *          output emission.
 *
 * Exit codes: 0 success, 1 configuration or I/O error, 2 verification
 * failure. Configuration precedence is flags > config file > defaults; the
 * config file holds `key = value` lines with `#` comments, using the same
 * keys as the flags with underscores (`--photons-per-setting` is
 * `photons_per_setting`).
 */
#pragma once

#include <charconv>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "wmtrade/io.hpp"
#include "wmtrade/sweep.hpp"
#include "wmtrade/verify.hpp"

namespace wmtrade::cli {

inline constexpr const char *kVersion = "1.0.0";

enum class ExitCode : int { ok = 0, config_error = 1, verification_failed = 2 };

enum class OutputFormat { csv, json };

class ConfigError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

struct RunConfig {
    double epsilon = 0.25;
    double eta = 0.75;
    std::int64_t photons_per_setting = 100000;
    std::int64_t counts_per_basis = 10000;
    std::uint64_t seed = 42;
    double pbs_leakage = 0.0;
    double detector_efficiency = 1.0;
    int grid_size = 16;
    bool exact_mode = false;
    std::string output_path;
    OutputFormat output_format = OutputFormat::csv;
    bool output_format_explicit = false;
    unsigned threads = 0;
    bool mutate_reversal = false;

    NoiseModel noise() const { return {pbs_leakage, detector_efficiency}; }

    SimulationConfig simulation() const {
        SimulationConfig s;
        s.photons_per_setting = photons_per_setting;
        s.noise = noise();
        s.seed = seed;
        s.exact_mode = exact_mode;
        s.threads = threads;
        return s;
    }
};

/// Every recognised key, in the order they are echoed in JSON metadata.
inline const std::vector<std::string> &config_keys() {
    static const std::vector<std::string> keys{
        "epsilon",   "eta",          "photons_per_setting", "counts_per_basis", "seed",
        "pbs_leakage", "detector_efficiency", "grid_size", "exact_mode",     "output_path",
        "output_format", "threads",   "mutate_reversal"};
    return keys;
}

namespace detail {

inline std::string trim(const std::string &s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) {
        return "";
    }
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

template <class T>
T parse_number(const std::string &key, const std::string &text) {
    T value{};
    const char *first = text.data();
    const char *last = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (text.empty() || ec != std::errc() || ptr != last) {
        throw ConfigError(key + ": malformed value '" + text + "'");
    }
    return value;
}

inline bool parse_bool(const std::string &key, const std::string &text) {
    if (text == "true" || text == "1" || text == "yes" || text == "on") {
        return true;
    }
    if (text == "false" || text == "0" || text == "no" || text == "off") {
        return false;
    }
    throw ConfigError(key + ": malformed boolean '" + text + "' (use true or false)");
}

inline std::string format_real(double x) {
    std::ostringstream os;
    os << x;
    return os.str();
}

}  // namespace detail

inline void apply_key(RunConfig &cfg, const std::string &key, const std::string &raw) {
    const std::string value = detail::trim(raw);
    if (key == "epsilon") {
        cfg.epsilon = detail::parse_number<double>(key, value);
    } else if (key == "eta") {
        cfg.eta = detail::parse_number<double>(key, value);
    } else if (key == "photons_per_setting") {
        cfg.photons_per_setting = detail::parse_number<std::int64_t>(key, value);
    } else if (key == "counts_per_basis") {
        cfg.counts_per_basis = detail::parse_number<std::int64_t>(key, value);
    } else if (key == "seed") {
        cfg.seed = detail::parse_number<std::uint64_t>(key, value);
    } else if (key == "pbs_leakage") {
        cfg.pbs_leakage = detail::parse_number<double>(key, value);
    } else if (key == "detector_efficiency") {
        cfg.detector_efficiency = detail::parse_number<double>(key, value);
    } else if (key == "grid_size") {
        cfg.grid_size = detail::parse_number<int>(key, value);
    } else if (key == "exact_mode") {
        cfg.exact_mode = detail::parse_bool(key, value);
    } else if (key == "output_path") {
        cfg.output_path = value;
    } else if (key == "output_format") {
        if (value == "csv") {
            cfg.output_format = OutputFormat::csv;
        } else if (value == "json") {
            cfg.output_format = OutputFormat::json;
        } else {
            throw ConfigError("output_format: must be csv or json, got '" + value + "'");
        }
        cfg.output_format_explicit = true;
    } else if (key == "threads") {
        cfg.threads = detail::parse_number<unsigned>(key, value);
    } else if (key == "mutate_reversal") {
        cfg.mutate_reversal = detail::parse_bool(key, value);
    } else {
        throw ConfigError("unknown configuration key '" + key + "'");
    }
}

inline void validate(const RunConfig &cfg) {
    auto range = [](const std::string &key, double v, double lo, double hi, const char *interval) {
        if (!(v >= lo && v <= hi)) {
            throw ConfigError(key + ": must be in " + interval + ", got " + detail::format_real(v));
        }
    };
    range("epsilon", cfg.epsilon, 0.0, 1.0, "[0, 1]");
    range("eta", cfg.eta, 0.0, 1.0, "[0, 1]");
    range("pbs_leakage", cfg.pbs_leakage, 0.0, 0.01, "[0, 0.01]");
    if (!(cfg.detector_efficiency > 0.0 && cfg.detector_efficiency <= 1.0)) {
        throw ConfigError("detector_efficiency: must be in (0, 1], got " + detail::format_real(cfg.detector_efficiency));
    }
    if (cfg.photons_per_setting < 1) {
        throw ConfigError("photons_per_setting: must be >= 1, got " + std::to_string(cfg.photons_per_setting));
    }
    if (cfg.counts_per_basis < kMinCountsPerBasis) {
        throw ConfigError("counts_per_basis: must be >= 100, got " + std::to_string(cfg.counts_per_basis));
    }
    if (cfg.grid_size < 2) {
        throw ConfigError("grid_size: must be >= 2, got " + std::to_string(cfg.grid_size));
    }
}

/// Reads `key = value` lines; blank lines and `#` comments are skipped.
inline std::map<std::string, std::string> read_config_file(const std::string &path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot read config file '" + path + "'");
    }
    std::map<std::string, std::string> out;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos) {
            line.erase(hash);
        }
        line = detail::trim(line);
        if (line.empty()) {
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError(path + ":" + std::to_string(lineno) + ": expected 'key = value'");
        }
        out[detail::trim(line.substr(0, eq))] = detail::trim(line.substr(eq + 1));
    }
    return out;
}

inline std::string flag_name(const std::string &key) {
    std::string s = key;
    for (char &c : s) {
        if (c == '_') {
            c = '-';
        }
    }
    return "--" + s;
}

struct Invocation {
    std::string subcommand;
    RunConfig config;
    bool help = false;
    std::string help_text;
};

inline const std::vector<std::string> &subcommands() {
    static const std::vector<std::string> names{"verify", "sweep-states", "sweep-grid", "cross-section",
                                                "reversal-fidelity"};
    return names;
}

/// Parses `args` (without the program name).
inline Invocation parse_invocation(const std::vector<std::string> &args) {
    CLI::App app{"Weak-measurement information/reversibility tradeoff simulator", "wmtrade"};
    app.require_subcommand(1);

    std::map<std::string, std::string> flag_values;
    std::string config_path;
    app.add_option("--config", config_path, "key = value configuration file");
    for (const auto &key : config_keys()) {
        app.add_option(flag_name(key), flag_values[key], key);
    }
    for (const auto &name : subcommands()) {
        app.add_subcommand(name)->fallthrough();
    }

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    Invocation inv;
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp &) {
        inv.help = true;
        inv.help_text = app.help();
        return inv;
    } catch (const CLI::ParseError &e) {
        throw ConfigError(e.what());
    }
    inv.subcommand = app.get_subcommands().front()->get_name();

    if (!config_path.empty()) {
        for (const auto &[key, value] : read_config_file(config_path)) {
            apply_key(inv.config, key, value);
        }
    }
    for (const auto &key : config_keys()) {
        if (app.count(flag_name(key)) > 0) {
            apply_key(inv.config, key, flag_values[key]);
        }
    }
    validate(inv.config);
    return inv;
}

inline io::json metadata_json(const std::string &product, const RunConfig &cfg) {
    io::json config = {{"epsilon", cfg.epsilon},
                       {"eta", cfg.eta},
                       {"photons_per_setting", cfg.photons_per_setting},
                       {"counts_per_basis", cfg.counts_per_basis},
                       {"seed", cfg.seed},
                       {"pbs_leakage", cfg.pbs_leakage},
                       {"detector_efficiency", cfg.detector_efficiency},
                       {"grid_size", cfg.grid_size},
                       {"exact_mode", cfg.exact_mode},
                       {"mutate_reversal", cfg.mutate_reversal}};
    return {{"artifact", "wmtrade"}, {"version", kVersion}, {"product", product}, {"seed", cfg.seed}, {"config", config}};
}

inline std::string render_report(const SweepReport &report, const RunConfig &cfg, bool as_csv) {
    std::ostringstream os;
    if (as_csv) {
        os << "check,verdict,deviation,tolerance\n";
        for (const auto &c : report.checks) {
            os << c.name << ',' << (c.passed ? "PASS" : "FAIL") << ',' << io::format_number(c.deviation) << ','
               << io::format_number(c.tolerance) << '\n';
        }
        return os.str();
    }
    io::json checks = io::json::array();
    for (const auto &c : report.checks) {
        checks.push_back(
            {{"name", c.name}, {"verdict", c.passed ? "PASS" : "FAIL"}, {"deviation", c.deviation}, {"tolerance", c.tolerance}});
    }
    io::json doc = {{"metadata", metadata_json("verify", cfg)},
                    {"verdict", report.passed() ? "PASS" : "FAIL"},
                    {"checks", checks}};
    return doc.dump(2) + "\n";
}

struct Product {
    std::string text;
    ExitCode code = ExitCode::ok;
    std::vector<std::string> failures;
};

inline Product run_subcommand(const std::string &sub, const RunConfig &cfg) {
    const bool as_json = cfg.output_format == OutputFormat::json;
    std::ostringstream os;
    auto emit_json = [&](const std::string &product, io::json rows) {
        io::json doc = {{"metadata", metadata_json(product, cfg)}, {"rows", std::move(rows)}};
        os << doc.dump(2) << '\n';
    };

    if (sub == "verify") {
        VerifyConfig vc;
        vc.sim = cfg.simulation();
        vc.grid_size = cfg.grid_size;
        vc.mutate_reversal = cfg.mutate_reversal;
        const SweepReport report = verify(vc);
        const bool as_csv = cfg.output_format_explicit && cfg.output_format == OutputFormat::csv;
        Product p{render_report(report, cfg, as_csv), report.passed() ? ExitCode::ok : ExitCode::verification_failed,
                  report.failing_checks()};
        return p;
    }
    if (sub == "sweep-states") {
        const auto rows = state_sweep({cfg.epsilon, cfg.eta}, cfg.simulation());
        as_json ? emit_json("states", io::states_rows_json(rows)) : io::write_states_csv(os, rows);
    } else if (sub == "sweep-grid") {
        GridConfig gc;
        gc.grid_size = cfg.grid_size;
        gc.sim = cfg.simulation();
        const auto rows = grid_sweep(gc);
        as_json ? emit_json("grid", io::grid_rows_json(rows)) : io::write_grid_csv(os, rows);
    } else if (sub == "cross-section") {
        const auto etas = uniform_values(cfg.grid_size);
        const auto rows = cross_section(etas, cfg.simulation());
        as_json ? emit_json("cross-section", io::cross_section_rows_json(rows)) : io::write_cross_section_csv(os, rows);
    } else if (sub == "reversal-fidelity") {
        FidelityConfig fc;
        fc.counts_per_basis = cfg.counts_per_basis;
        fc.noise = cfg.noise();
        fc.seed = cfg.seed;
        fc.exact_mode = cfg.exact_mode;
        fc.threads = cfg.threads;
        const auto rows = reversal_fidelity_sweep({cfg.epsilon, cfg.eta}, fc);
        as_json ? emit_json("fidelities", io::fidelity_rows_json(rows)) : io::write_fidelity_csv(os, rows);
    } else {
        throw ConfigError("unknown subcommand '" + sub + "'");
    }
    return {os.str(), ExitCode::ok, {}};
}

/// Full process behaviour minus the actual exit: returns the exit code.
inline int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
    Invocation inv;
    try {
        inv = parse_invocation(args);
    } catch (const ConfigError &e) {
        err << "wmtrade: " << e.what() << '\n';
        return static_cast<int>(ExitCode::config_error);
    }
    if (inv.help) {
        out << inv.help_text;
        return static_cast<int>(ExitCode::ok);
    }

    Product product;
    try {
        product = run_subcommand(inv.subcommand, inv.config);
    } catch (const ConfigError &e) {
        err << "wmtrade: " << e.what() << '\n';
        return static_cast<int>(ExitCode::config_error);
    } catch (const std::domain_error &e) {
        err << "wmtrade: " << e.what() << '\n';
        return static_cast<int>(ExitCode::config_error);
    }

    if (inv.config.output_path.empty()) {
        out << product.text;
    } else {
        std::ofstream file(inv.config.output_path, std::ios::binary | std::ios::trunc);
        if (!file || !(file << product.text) || !file.flush()) {
            err << "wmtrade: cannot write output_path '" << inv.config.output_path << "'\n";
            return static_cast<int>(ExitCode::config_error);
        }
    }
    if (product.code == ExitCode::verification_failed) {
        err << "wmtrade: verification FAILED:";
        for (const auto &name : product.failures) {
            err << ' ' << name;
        }
        err << '\n';
    }
    return static_cast<int>(product.code);
}

}  // namespace wmtrade::cli
