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

#include "nfvel/design.hpp"
#include "nfvel/simulate.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace nfvel
{
    // M x K x L triple; label used as the CSV array column
    struct ArraySpec
    {
        int num_per_module;
        int num_modules;
        int module_spacing;

        std::string label() const;
    };

    enum class RangeSpacing
    {
        log,
        linear
    };

    enum class MseSweep
    {
        power,
        distance
    };

    /// Fully resolved experiment settings. Quantities are kept in the units users write them in
    /// (dBm, dB, degrees); the to_* accessors convert to the linear library types.
    struct ExperimentConfig
    {
        // [geometry]
        ArraySpec geometry{120, 2, 61};
        std::optional<double> element_spacing; // m, half wavelength when unset

        // [waveform]
        double carrier_frequency = 28e9;
        double symbol_duration = 1e-5;
        int num_symbols = 200;

        // [link]
        double transmit_power_dbm = -10.0;
        double antenna_gain_db = 0.0;
        double rcs_db = -23.0;
        double noise_density_dbm_hz = -174.0;
        double bandwidth = 100e3;
        bool unit_pathloss = false;

        // [target]
        std::optional<double> range; // m, Fresnel distance of [geometry] when unset
        double angle_deg = 90.0;
        double radial_velocity = 10.0;
        double transverse_velocity = 8.0;

        // [crb]
        std::vector<ArraySpec> crb_arrays; // [geometry] when empty
        std::optional<double> crb_r_min;   // d_F of [geometry]
        std::optional<double> crb_r_max;   // 10 d_F
        int crb_r_points = 20;
        RangeSpacing crb_r_spacing = RangeSpacing::log;

        // [gain]
        double gain_dvr_min = -20.0, gain_dvr_max = 20.0;
        int gain_dvr_points = 41;
        double gain_dvt_min = -40.0, gain_dvt_max = 40.0;
        int gain_dvt_points = 41;
        double gain_floor_db = -20.0; // summary discrepancy only counts exact gains above this

        // [mse]
        std::vector<ArraySpec> mse_arrays; // [geometry] when empty
        MseSweep mse_sweep = MseSweep::power;
        std::vector<double> mse_powers_dbm{-20.0, -10.0, 0.0};
        std::vector<double> mse_ranges; // distance sweep points, m
        int mse_trials = 200;
        std::uint64_t mse_seed = 1;
        double mse_init_vr = 11.0;
        double mse_init_vt = 7.0;
        double mse_grid_half_width = 5.0;
        double mse_grid_step = 0.25;
        double mse_tol_v = 1e-7;
        int mse_max_iterations = 1000;
        SymbolKind mse_symbols = SymbolKind::constant;
        bool mse_noise = true;

        // [design]
        int design_reference_count = 240;
        int design_num_modules = 2;
        std::optional<int> design_per_module_count;
        std::optional<double> design_fraction;
        double design_eta_budget = 0.25;
        SpacingRounding design_rounding = SpacingRounding::ceil_odd;

        Cpi to_cpi() const;
        Budget to_budget() const;
        Geometry to_geometry(const ArraySpec &spec) const;
        Geometry to_geometry() const { return to_geometry(geometry); }
        Target to_target() const; // range resolved
        double angle_rad() const;

        // section.key = value lines in a fixed order, defaults merged
        std::vector<std::pair<std::string, std::string>> resolved() const;
    };

    /// Parses an INI file with [geometry] [waveform] [link] [target] [crb] [gain] [mse] [design] sections.
    /// Unknown sections or keys and malformed values throw ConfigError naming the key (and line for syntax errors).
    ExperimentConfig load_config(const std::string &path);
    ExperimentConfig parse_config(std::istream &in, const std::string &source = "<config>");

    // Applies a single "section.key=value" override
    void apply_override(ExperimentConfig &cfg, const std::string &assignment);
    void set_value(ExperimentConfig &cfg, const std::string &dotted_key, const std::string &value);

    void validate(const ExperimentConfig &cfg);
}
