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
// Command-line front end: parse a scenario config, run the design and
// evaluation pipelines, write JSON/CSV reports.
//
//   noncobf design-su  --out DIR [--config FILE] [--seed N] [--set k=v]...
//   noncobf design-mu  --out DIR ...
//   noncobf sweep      --out DIR [--freq-points N] ...
//   noncobf cdf-study  --out DIR [--draws N] ...
//
// Exit codes: 0 success, 1 config or runtime error, 2 zero-forcing
// infeasible (error JSON names the blocked user).

#include "noncobf/eval_harness.hpp"
#include "noncobf/report_io.hpp"

#include "CLI11.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace {

using namespace noncobf;

struct cli_options {
    std::string config_path;
    std::string out_dir = ".";
    std::vector<std::string> overrides;
    std::string designs_csv;
    std::uint64_t seed = 0;
    bool seed_given = false;
    std::size_t draws = 100;
    std::size_t freq_points = 0; // 0: use config num_subcarriers
};

json load_config_json(const cli_options &opts) {
    json j = json::object();
    if (!opts.config_path.empty()) {
        std::ifstream in(opts.config_path);
        if (!in)
            throw std::invalid_argument("config file not found: " + opts.config_path);
        try {
            in >> j;
        } catch (const json::exception &e) {
            throw std::invalid_argument("config file is not valid JSON: " + std::string(e.what()));
        }
    }
    for (const std::string &kv : opts.overrides) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos || eq == 0)
            throw std::invalid_argument("--set expects key=value, got '" + kv + "'");
        const std::string key = kv.substr(0, eq);
        const std::string raw = kv.substr(eq + 1);
        json value;
        try {
            value = json::parse(raw);
        } catch (const json::exception &) {
            value = raw; // bare strings like nlos
        }
        json *node = &j;
        std::istringstream path(key);
        std::string part;
        std::vector<std::string> parts;
        while (std::getline(path, part, '.'))
            parts.push_back(part);
        try {
            for (std::size_t i = 0; i + 1 < parts.size(); ++i)
                node = &((*node)[parts[i]]);
            (*node)[parts.back()] = value;
        } catch (const json::exception &) {
            throw std::invalid_argument("--set path '" + key + "' does not address an object");
        }
    }
    return j;
}

scenario_config make_config(const cli_options &opts) {
    scenario_config config = config_from_json(load_config_json(opts));
    if (opts.seed_given)
        config.seed = opts.seed;
    if (opts.freq_points > 0)
        config.num_subcarriers = opts.freq_points;
    return config;
}

std::vector<design_criterion> parse_designs(const std::string &csv, const char *fallback) {
    const std::string list = csv.empty() ? fallback : csv;
    std::vector<design_criterion> out;
    std::istringstream ss(list);
    std::string token;
    while (std::getline(ss, token, ','))
        if (!token.empty())
            out.push_back(design_from_string(token));
    if (out.empty())
        throw std::invalid_argument("--designs produced an empty design list");
    return out;
}

void write_outputs(const std::string &out_dir, const std::string &name,
                   const std::string &content) {
    std::filesystem::create_directories(out_dir);
    write_text_file((std::filesystem::path(out_dir) / name).string(), content);
}

json su_design_summary(const synthetic_scenario &scen, std::size_t user, design_criterion kind,
                       std::size_t draws) {
    const double fc = scen.config.carrier_frequency_hz;
    const beamformer bf = design_for_user(kind, scen, user, fc);
    const signature_set a = scen.signatures_for(user, fc);
    const phase_model model = scen.model_for(user, fc);
    const std::size_t eval_draws = supports_sampling(model) ? draws : 0;
    const su_evaluation ev =
        evaluate_su(bf, a, model, eval_draws, derive_seed(scen.config.seed, user));
    json out = beamformer_to_json(bf);
    out["stationary_gain_db"] = json_number(to_db(ev.stationary_gain));
    out["worst_case_gain_db"] = json_number(to_db(ev.worst_case_gain));
    if (!ev.samples.empty()) {
        double mean = 0.0;
        for (double s : ev.samples)
            mean += s;
        mean /= static_cast<double>(ev.samples.size());
        out["sample_mean_gain_db"] = json_number(to_db(mean));
        out["num_draws"] = ev.samples.size();
    }
    return out;
}

int run_design_su(const cli_options &opts) {
    const scenario_config config = make_config(opts);
    const auto designs = parse_designs(opts.designs_csv, "coherent,uniform,stationary,worstcase");
    const synthetic_scenario scen = generate_scenario(config);

    json users = json::array();
    for (std::size_t k = 0; k < config.num_users; ++k) {
        json entries = json::array();
        for (design_criterion d : designs)
            entries.push_back(su_design_summary(scen, k, d, opts.draws));
        users.push_back(json{{"user", k}, {"designs", std::move(entries)}});
    }
    json report = report_header(config);
    report["command"] = "design-su";
    report["users"] = std::move(users);
    write_outputs(opts.out_dir, "beamformers_su.json", report.dump(2) + "\n");
    return 0;
}

int run_design_mu(const cli_options &opts) {
    const scenario_config config = make_config(opts);
    const auto designs = parse_designs(opts.designs_csv, "zf-stationary,zf-worstcase,rzf");
    const synthetic_scenario scen = generate_scenario(config);
    const multiuser_scenario mu = scen.at_frequency(config.carrier_frequency_hz);

    json design_reports = json::array();
    for (design_criterion d : designs) {
        std::vector<beamformer> bfs;
        bfs.reserve(config.num_users);
        for (std::size_t k = 0; k < config.num_users; ++k)
            bfs.push_back(design_for_user(d, scen, k, config.carrier_frequency_hz));
        bool can_sample = true;
        for (const auto &u : mu.users)
            can_sample = can_sample && supports_sampling(u.phases);
        const auto evals =
            evaluate_mu(mu, bfs, can_sample ? opts.draws : 0, derive_seed(config.seed, 0xe7a1));
        json users = json::array();
        for (std::size_t k = 0; k < config.num_users; ++k) {
            json entry = beamformer_to_json(bfs[k]);
            entry["user"] = k;
            entry["stationary_sinr_db"] = json_number(to_db(evals[k].stationary_sinr));
            if (!evals[k].sinr_samples.empty()) {
                double mean = 0.0;
                for (double s : evals[k].sinr_samples)
                    mean += s;
                mean /= static_cast<double>(evals[k].sinr_samples.size());
                entry["sample_mean_sinr_db"] = json_number(to_db(mean));
                entry["num_draws"] = evals[k].sinr_samples.size();
            }
            users.push_back(std::move(entry));
        }
        design_reports.push_back(json{{"design", design_name(d)}, {"users", std::move(users)}});
    }

    json report = report_header(config);
    report["command"] = "design-mu";
    report["feasible"] = true;
    report["designs"] = std::move(design_reports);
    write_outputs(opts.out_dir, "beamformers_mu.json", report.dump(2) + "\n");
    return 0;
}

int run_sweep(const cli_options &opts) {
    const scenario_config config = make_config(opts);
    const auto designs = parse_designs(opts.designs_csv, "coherent,uniform,stationary,worstcase");
    const std::size_t n_points = std::max<std::size_t>(config.num_subcarriers, 2);
    const auto rows = frequency_sweep(config, designs, n_points, 0);

    json table = json::array();
    for (const auto &r : rows)
        table.push_back(json{{"design", design_name(r.design)},
                             {"frequency_hz", r.frequency_hz},
                             {"gain_db", json_number(to_db(r.gain))}});
    json report = report_header(config);
    report["command"] = "sweep";
    report["user"] = 0;
    report["num_frequency_points"] = n_points;
    report["table"] = std::move(table);

    write_outputs(opts.out_dir, "sweep.csv", sweep_table_csv(rows));
    write_outputs(opts.out_dir, "report.json", report.dump(2) + "\n");
    return 0;
}

int run_cdf_study(const cli_options &opts) {
    const scenario_config config = make_config(opts);
    const bool single_user = config.num_users == 1;
    const auto designs = parse_designs(opts.designs_csv,
                                       single_user ? "coherent,uniform,stationary,worstcase"
                                                   : "zf-stationary,zf-worstcase,rzf");
    const auto rows = single_user ? su_cdf_study(config, designs)
                                  : mu_cdf_study(config, designs, std::max<std::size_t>(opts.draws, 1));

    json report = report_header(config);
    report["command"] = "cdf-study";
    report["num_locations"] = config.num_locations;
    report["num_draws"] = single_user ? 0 : std::max<std::size_t>(opts.draws, 1);
    json table = json::array();
    for (const auto &r : rows)
        table.push_back(json{{"design", design_name(r.design)},
                             {"user", r.user},
                             {"metric", r.metric},
                             {"value_db", json_number(r.value_db)},
                             {"cdf_prob", r.probability}});
    report["table"] = std::move(table);

    write_outputs(opts.out_dir, "cdf.csv", cdf_table_csv(rows));
    write_outputs(opts.out_dir, "report.json", report.dump(2) + "\n");
    return 0;
}

void print_error_json(const std::string &code, const std::string &message, int user_index = -1) {
    json err{{"error", {{"code", code}, {"message", message}}}};
    if (user_index >= 0)
        err["error"]["user_index"] = user_index;
    std::cout << err.dump() << std::endl;
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"noncobf: non-coherent downlink beamformer design and evaluation"};
    app.require_subcommand(1);

    cli_options opts;
    const auto add_common = [&](CLI::App *cmd) {
        cmd->add_option("--config", opts.config_path, "scenario config JSON file");
        cmd->add_option("--out", opts.out_dir, "output directory");
        cmd->add_option("--seed", opts.seed, "override the config seed")
            ->each([&](const std::string &) { opts.seed_given = true; });
        cmd->add_option("--set", opts.overrides,
                        "override a config key, e.g. --set array.n_horizontal=8");
        cmd->add_option("--designs", opts.designs_csv,
                        "comma list of coherent,uniform,stationary,worstcase,zf-stationary,"
                        "zf-worstcase,rzf");
        cmd->add_option("--draws", opts.draws, "Monte-Carlo phase draws");
        cmd->add_option("--freq-points", opts.freq_points, "frequency points across the band");
    };

    CLI::App *design_su = app.add_subcommand("design-su", "single-user designs per user");
    CLI::App *design_mu = app.add_subcommand("design-mu", "multi-user designs and feasibility");
    CLI::App *sweep = app.add_subcommand("sweep", "gain across the band for user 0");
    CLI::App *cdf = app.add_subcommand("cdf-study", "gain/SINR CDFs over random user drops");
    for (CLI::App *cmd : {design_su, design_mu, sweep, cdf})
        add_common(cmd);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        if (e.get_exit_code() == 0)
            return app.exit(e); // --help
        print_error_json("cli_error", e.what());
        return 1;
    }

    try {
        if (design_su->parsed())
            return run_design_su(opts);
        if (design_mu->parsed())
            return run_design_mu(opts);
        if (sweep->parsed())
            return run_sweep(opts);
        return run_cdf_study(opts);
    } catch (const noncobf::zf_infeasible_error &e) {
        print_error_json("zf_infeasible", e.what(), static_cast<int>(e.user_index()));
        return 2;
    } catch (const std::invalid_argument &e) {
        print_error_json("config_error", e.what());
        return 1;
    } catch (const std::exception &e) {
        print_error_json("runtime_error", e.what());
        return 1;
    }
}
