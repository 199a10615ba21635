// SPDX-License-Identifier: Apache-2.0
//
// noncobf: robust non-coherent downlink beamforming for massive MIMO
// Copyright (C) 2026 The noncobf authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------
//
// Config parsing and report serialization. CSV tables print floating point
// with 9 significant digits and code zero power as -inf; JSON reports carry
// the echoed config, the seed, and an FNV-1a hash of the canonical config
// text so outputs are attributable to their inputs.

#ifndef NONCOBF_REPORT_IO_HPP
#define NONCOBF_REPORT_IO_HPP

#include "noncobf/eval_harness.hpp"
#include "noncobf/scenario.hpp"
#include "noncobf/su_beamformers.hpp"
#include "noncobf/types.hpp"

#include "json.hpp"

#include <cstdio>
#include <fstream>
#include <string>

namespace noncobf {

using json = nlohmann::json;

// --------------------------------------------------------------- formatting

inline std::string format_double(double x) {
    if (std::isinf(x))
        return x > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.9g", x);
    return buf;
}

// nlohmann::json serializes non-finite numbers as null; that is the JSON
// coding for -inf (zero power).
inline json json_number(double x) {
    if (std::isinf(x) || std::isnan(x))
        return nullptr;
    return x;
}

// ------------------------------------------------------------ config <-> JSON

inline std::string to_string(propagation_mode m) {
    return m == propagation_mode::nlos_like ? "nlos" : "los";
}

inline std::string to_string(phase_knowledge k) {
    switch (k) {
    case phase_knowledge::iid_uniform: return "iid_uniform";
    case phase_knowledge::wrapped_gaussian: return "wrapped_gaussian";
    case phase_knowledge::known: return "known";
    }
    return "iid_uniform";
}

inline propagation_mode propagation_mode_from_string(const std::string &s) {
    if (s == "nlos")
        return propagation_mode::nlos_like;
    if (s == "los")
        return propagation_mode::los_like;
    throw std::invalid_argument("unknown propagation mode '" + s + "' (expected nlos|los)");
}

inline phase_knowledge phase_knowledge_from_string(const std::string &s) {
    if (s == "iid_uniform")
        return phase_knowledge::iid_uniform;
    if (s == "wrapped_gaussian")
        return phase_knowledge::wrapped_gaussian;
    if (s == "known")
        return phase_knowledge::known;
    throw std::invalid_argument("unknown phase model '" + s +
                                "' (expected iid_uniform|wrapped_gaussian|known)");
}

inline design_criterion design_from_string(const std::string &s) {
    if (s == "coherent")
        return design_criterion::coherent;
    if (s == "uniform")
        return design_criterion::uniform;
    if (s == "stationary")
        return design_criterion::stationary;
    if (s == "worstcase")
        return design_criterion::worst_case;
    if (s == "zf-stationary")
        return design_criterion::zf_stationary;
    if (s == "zf-worstcase")
        return design_criterion::zf_worst_case;
    if (s == "rzf")
        return design_criterion::rzf_stationary;
    throw std::invalid_argument("unknown design '" + s +
                                "' (expected coherent|uniform|stationary|worstcase|zf-stationary|"
                                "zf-worstcase|rzf)");
}

inline json config_to_json(const scenario_config &c) {
    const json paths = c.paths_per_user_max != 0
                           ? json{c.paths_per_user, c.paths_per_user_max}
                           : json(c.paths_per_user);
    return json{{"seed", c.seed},
                {"num_users", c.num_users},
                {"paths_per_user", paths},
                {"cell_radius_m", c.cell_radius_m},
                {"array",
                 {{"n_horizontal", c.array.n_horizontal},
                  {"n_vertical", c.array.n_vertical},
                  {"spacing_wavelengths", c.array.spacing_wavelengths}}},
                {"carrier_frequency_hz", c.carrier_frequency_hz},
                {"bandwidth_hz", c.bandwidth_hz},
                {"num_subcarriers", c.num_subcarriers},
                {"mode", to_string(c.mode)},
                {"rician_factor_db", c.rician_factor_db},
                {"snr_db", c.snr_db},
                {"phase_model", to_string(c.phase_kind)},
                {"phase_spread_rad", c.phase_spread_rad},
                {"num_locations", c.num_locations},
                {"recompute_per_frequency", c.recompute_per_frequency}};
}

inline scenario_config config_from_json(const json &j) {
    scenario_config c;
    static const std::vector<std::string> known_keys = {
        "seed", "num_users", "paths_per_user", "cell_radius_m", "array",
        "carrier_frequency_hz", "bandwidth_hz", "num_subcarriers", "mode", "rician_factor_db",
        "snr_db", "phase_model", "phase_spread_rad", "num_locations", "recompute_per_frequency"};
    if (!j.is_object())
        throw std::invalid_argument("config: top-level JSON value must be an object");
    for (const auto &item : j.items()) {
        if (std::find(known_keys.begin(), known_keys.end(), item.key()) == known_keys.end())
            throw std::invalid_argument("config: unknown key '" + item.key() + "'");
    }
    try {
        if (j.contains("seed"))
            c.seed = j.at("seed").get<std::uint64_t>();
        if (j.contains("num_users"))
            c.num_users = j.at("num_users").get<std::size_t>();
        if (j.contains("paths_per_user")) {
            const auto &p = j.at("paths_per_user");
            if (p.is_array()) { // [min, max] draws a per-user path count
                if (p.size() != 2)
                    throw std::invalid_argument(
                        "config: paths_per_user range must be [min, max]");
                c.paths_per_user = p.at(0).get<std::size_t>();
                c.paths_per_user_max = p.at(1).get<std::size_t>();
            } else {
                c.paths_per_user = p.get<std::size_t>();
                c.paths_per_user_max = 0;
            }
        }
        if (j.contains("cell_radius_m"))
            c.cell_radius_m = j.at("cell_radius_m").get<double>();
        if (j.contains("array")) {
            const auto &a = j.at("array");
            if (a.contains("n_horizontal"))
                c.array.n_horizontal = a.at("n_horizontal").get<std::size_t>();
            if (a.contains("n_vertical"))
                c.array.n_vertical = a.at("n_vertical").get<std::size_t>();
            if (a.contains("spacing_wavelengths"))
                c.array.spacing_wavelengths = a.at("spacing_wavelengths").get<double>();
        }
        if (j.contains("carrier_frequency_hz"))
            c.carrier_frequency_hz = j.at("carrier_frequency_hz").get<double>();
        if (j.contains("bandwidth_hz"))
            c.bandwidth_hz = j.at("bandwidth_hz").get<double>();
        if (j.contains("num_subcarriers"))
            c.num_subcarriers = j.at("num_subcarriers").get<std::size_t>();
        if (j.contains("mode"))
            c.mode = propagation_mode_from_string(j.at("mode").get<std::string>());
        if (j.contains("rician_factor_db"))
            c.rician_factor_db = j.at("rician_factor_db").get<double>();
        if (j.contains("snr_db")) {
            if (j.at("snr_db").is_array())
                c.snr_db = j.at("snr_db").get<std::vector<double>>();
            else
                c.snr_db = {j.at("snr_db").get<double>()};
        }
        if (j.contains("phase_model"))
            c.phase_kind = phase_knowledge_from_string(j.at("phase_model").get<std::string>());
        if (j.contains("phase_spread_rad"))
            c.phase_spread_rad = j.at("phase_spread_rad").get<double>();
        if (j.contains("num_locations"))
            c.num_locations = j.at("num_locations").get<std::size_t>();
        if (j.contains("recompute_per_frequency"))
            c.recompute_per_frequency = j.at("recompute_per_frequency").get<bool>();
    } catch (const json::exception &e) {
        throw std::invalid_argument(std::string("config: ") + e.what());
    }
    c.validate();
    return c;
}

inline std::string config_hash(const scenario_config &c) {
    const std::string text = config_to_json(c).dump();
    std::uint64_t h = 0xcbf29ce484222325ULL; // FNV-1a
    for (unsigned char ch : text) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    char buf[20];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

// ----------------------------------------------------------------- tables

inline std::string cdf_table_csv(const std::vector<cdf_table_row> &rows) {
    std::string out = "design,user,metric,value_db,cdf_prob\n";
    for (const auto &r : rows) {
        out += design_name(r.design);
        out += ',';
        out += std::to_string(r.user);
        out += ',';
        out += r.metric;
        out += ',';
        out += format_double(r.value_db);
        out += ',';
        out += format_double(r.probability);
        out += '\n';
    }
    return out;
}

inline std::string sweep_table_csv(const std::vector<sweep_row> &rows) {
    std::string out = "design,frequency_hz,gain_db\n";
    for (const auto &r : rows) {
        out += design_name(r.design);
        out += ',';
        out += format_double(r.frequency_hz);
        out += ',';
        out += format_double(to_db(r.gain));
        out += '\n';
    }
    return out;
}

inline json beamformer_to_json(const beamformer &bf) {
    json weights = json::array();
    for (Eigen::Index i = 0; i < bf.g.size(); ++i)
        weights.push_back({json_number(bf.g(i).real()), json_number(bf.g(i).imag())});
    return json{{"design", design_name(bf.criterion)},
                {"objective_value", json_number(bf.objective_value)},
                {"iterations", bf.diagnostics.iterations},
                {"converged", bf.diagnostics.converged},
                {"zero_worst_case", bf.diagnostics.zero_worst_case},
                {"weights", std::move(weights)}};
}

inline json report_header(const scenario_config &config) {
    return json{{"seed", config.seed},
                {"config_hash", config_hash(config)},
                {"config", config_to_json(config)}};
}

inline void write_text_file(const std::string &path, const std::string &content) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("cannot open output file: " + path);
    out << content;
    if (!out)
        throw std::runtime_error("failed writing output file: " + path);
}

} // namespace noncobf

#endif // NONCOBF_REPORT_IO_HPP
