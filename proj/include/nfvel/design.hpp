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

#include <variant>

namespace nfvel
{
    /// Reference ULA of M0 elements versus K modules of M_bar elements (K M_bar <= M0, K >= 2).
    struct DesignQuery
    {
        int reference_count;  // M0
        int num_modules;      // K
        int per_module_count; // M_bar

        double antenna_fraction() const { return double(num_modules) * per_module_count / reference_count; } // h
        void validate() const;
    };

    /// Extra inter-module spacing, as a fraction of the reference ULA aperture, that makes the modular
    /// array's closed-form transverse CRB equal the ULA's. Throws InfeasibleDesignError.
    double eta_exact(const DesignQuery &query);

    // Large-M0 form, depends only on h = K M_bar / M0 and K
    double eta_simplified(double antenna_fraction, int num_modules);

    // L = 1 + eta (M0 - 1)
    double spacing_from_eta(double eta, int reference_count);

    enum class SpacingRounding
    {
        ceil,     // smallest integer >= L
        ceil_odd  // smallest odd integer >= L
    };

    struct FixedModuleSize
    {
        int per_module_count;
    };

    struct AntennaFraction
    {
        double fraction; // M_bar = round(h M0 / K)
    };

    // Fewest antennas whose required eta stays within the budget
    struct MinAntennas
    {
        double eta_budget = 0.25;
    };

    using DesignTarget = std::variant<FixedModuleSize, AntennaFraction, MinAntennas>;

    struct DesignResult
    {
        int reference_count;
        int num_modules;
        int per_module_count;
        double eta;
        double spacing_exact; // real-valued L from eta
        int spacing;          // rounded L
        double saving_fraction;  // 1 - K M_bar / M0
        double transverse_ratio; // CRB_vt(modular, rounded L) / CRB_vt(ULA)
        double radial_penalty_db; // 10 log10 CRB_vr(modular) / CRB_vr(ULA)
    };

    // Closed-form CRB ratios between a modular design (real spacing allowed) and its reference ULA.
    // delta_over_r = 0 evaluates the radial penalty in the far limit.
    double transverse_crb_ratio(int reference_count, int num_modules, int per_module_count, double spacing);
    double radial_penalty_db(int reference_count, int num_modules, int per_module_count, double spacing,
                             double delta_over_r = 0.0);

    int round_spacing(double spacing_exact, SpacingRounding rounding);

    DesignResult match_design(int reference_count, int num_modules, const DesignTarget &target,
                              SpacingRounding rounding = SpacingRounding::ceil_odd, double delta_over_r = 0.0);
}
