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

#pragma once

#include "nfvel/config.hpp"

#include <iosfwd>
#include <string>

namespace nfvel
{
    inline constexpr int exit_ok = 0;
    inline constexpr int exit_config_error = 2;
    inline constexpr int exit_infeasible = 3;

    enum class BoundSelection
    {
        both,
        exact_only, // closed-form columns left empty
        closed_only // exact-FIM columns left empty
    };

    struct RunOptions
    {
        int threads = 1;
        BoundSelection bounds = BoundSelection::both;
        std::ostream *log = nullptr; // progress and diagnostics, nothing when null
    };

    // Each command writes one CSV document to `out` and returns the number of data rows.
    // Errors propagate as exceptions; run_command maps them to exit codes.
    std::size_t cmd_crb(const ExperimentConfig &cfg, const RunOptions &opts, std::ostream &out);
    std::size_t cmd_gain(const ExperimentConfig &cfg, const RunOptions &opts, std::ostream &out);
    std::size_t cmd_mse(const ExperimentConfig &cfg, const RunOptions &opts, std::ostream &out);
    // also prints a fixed-width table to `table`
    std::size_t cmd_design(const ExperimentConfig &cfg, const RunOptions &opts, std::ostream &out, std::ostream &table);

    /// Dispatches by name ("crb", "gain", "mse", "design"). Returns 0, 2 on config errors,
    /// 3 when the query is infeasible or singular and no rows could be written.
    int run_command(const std::string &name, const ExperimentConfig &cfg, const RunOptions &opts, std::ostream &out,
                    std::ostream &table, std::ostream &err);
}
