// SPDX-License-Identifier: Apache-2.0
//
// nfvel: near-field velocity bounds for modular linear arrays
// Copyright (C) 2026 nfvel contributors
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

#include "nfvel/commands.hpp"
#include "nfvel/config.hpp"
#include "nfvel/errors.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

int main(int argc, char **argv)
{
    CLI::App app{"nfvel: near-field velocity bounds for modular linear arrays"};
    app.require_subcommand(1);

    std::string config_path, out_path;
    std::optional<std::uint64_t> seed;
    int threads = 1;
    bool exact_only = false, closed_only = false;
    std::vector<std::string> overrides;

    auto add_common = [&](CLI::App *sub) {
        sub->add_option("--config", config_path, "INI config file")->check(CLI::ExistingFile);
        sub->add_option("--out", out_path, "CSV output path (stdout when omitted)");
        sub->add_option("--seed", seed, "base Monte Carlo seed, overrides mse.seed");
        sub->add_option("--threads", threads, "worker threads")->check(CLI::PositiveNumber);
        auto *eo = sub->add_flag("--exact-only", exact_only, "skip closed-form columns");
        auto *co = sub->add_flag("--closed-only", closed_only, "skip exact-FIM columns");
        eo->excludes(co);
        sub->add_option("--set", overrides, "override a config value, section.key=value (repeatable)");
    };
    for (const char *name : {"crb", "gain", "mse", "design"})
        add_common(app.add_subcommand(name));
    app.get_subcommand("crb")->description("exact and closed-form CRBs over a range grid");
    app.get_subcommand("gain")->description("worst-case array gain over a velocity-mismatch grid");
    app.get_subcommand("mse")->description("Monte Carlo MLE mean-squared error against the CRBs");
    app.get_subcommand("design")->description("antenna-saving spacing design against a reference ULA");

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError &e)
    {
        const int code = app.exit(e);
        return code == 0 ? 0 : nfvel::exit_config_error;
    }

    const std::string command = app.get_subcommands().front()->get_name();

    nfvel::ExperimentConfig cfg;
    try
    {
        if (!config_path.empty())
            cfg = nfvel::load_config(config_path);
        for (const auto &o : overrides)
            nfvel::apply_override(cfg, o);
        if (seed)
            cfg.mse_seed = *seed;
    }
    catch (const nfvel::ConfigError &e)
    {
        std::cerr << "config error: " << e.what() << '\n';
        return nfvel::exit_config_error;
    }

    nfvel::RunOptions opts;
    opts.threads = threads;
    opts.bounds = exact_only ? nfvel::BoundSelection::exact_only
                             : closed_only ? nfvel::BoundSelection::closed_only : nfvel::BoundSelection::both;
    opts.log = &std::cerr;

    // Buffer so a failed run leaves no partial file behind
    std::ostringstream csv;
    const int code = nfvel::run_command(command, cfg, opts, csv, out_path.empty() ? std::cerr : std::cout, std::cerr);
    if (code != nfvel::exit_ok)
        return code;

    if (out_path.empty())
    {
        std::cout << csv.str();
        return code;
    }
    std::ofstream file(out_path, std::ios::binary);
    if (!file || !(file << csv.str()) || !file.flush())
    {
        std::cerr << "error: cannot write '" << out_path << "'\n";
        return nfvel::exit_config_error;
    }
    return code;
}
