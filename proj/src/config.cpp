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

#include "nfvel/config.hpp"

#include "nfvel/errors.hpp"
#include "nfvel/geometry.hpp"
#include "nfvel/units.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>

namespace nfvel
{
    std::string ArraySpec::label() const
    {
        return std::to_string(num_per_module) + "x" + std::to_string(num_modules) + "x" + std::to_string(module_spacing);
    }

    namespace
    {
        std::string trim(const std::string &s)
        {
            const auto b = s.find_first_not_of(" \t\r\n");
            if (b == std::string::npos)
                return {};
            const auto e = s.find_last_not_of(" \t\r\n");
            return s.substr(b, e - b + 1);
        }

        std::string lower(std::string s)
        {
            std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return char(std::tolower(c)); });
            return s;
        }

        std::string fmt(double v)
        {
            char buf[64];
            std::snprintf(buf, sizeof buf, "%.12g", v);
            return buf;
        }

        double to_double(const std::string &key, const std::string &v)
        {
            try
            {
                std::size_t pos = 0;
                const double out = std::stod(v, &pos);
                if (trim(v.substr(pos)).empty())
                    return out;
            }
            catch (const std::exception &)
            {
            }
            throw ConfigError("key '" + key + "': expected a number, got '" + v + "'");
        }

        long long to_integer(const std::string &key, const std::string &v)
        {
            try
            {
                std::size_t pos = 0;
                const long long out = std::stoll(v, &pos);
                if (trim(v.substr(pos)).empty())
                    return out;
            }
            catch (const std::exception &)
            {
            }
            throw ConfigError("key '" + key + "': expected an integer, got '" + v + "'");
        }

        int to_int(const std::string &key, const std::string &v) { return static_cast<int>(to_integer(key, v)); }

        bool to_bool(const std::string &key, const std::string &v)
        {
            const std::string s = lower(trim(v));
            if (s == "true" || s == "1" || s == "yes" || s == "on")
                return true;
            if (s == "false" || s == "0" || s == "no" || s == "off")
                return false;
            throw ConfigError("key '" + key + "': expected true/false, got '" + v + "'");
        }

        std::vector<std::string> split_list(const std::string &v)
        {
            std::vector<std::string> out;
            std::stringstream ss(v);
            std::string item;
            while (std::getline(ss, item, ','))
                if (!trim(item).empty())
                    out.push_back(trim(item));
            return out;
        }

        std::vector<double> to_doubles(const std::string &key, const std::string &v)
        {
            std::vector<double> out;
            for (const auto &item : split_list(v))
                out.push_back(to_double(key, item));
            return out;
        }

        ArraySpec to_array(const std::string &key, const std::string &v)
        {
            int M = 0, K = 0, L = 0;
            char x1 = 0, x2 = 0;
            std::istringstream in(v);
            if (!(in >> M >> x1 >> K >> x2 >> L) || x1 != 'x' || x2 != 'x' || !trim(std::string(std::istreambuf_iterator<char>(in), {})).empty())
                throw ConfigError("key '" + key + "': expected MxKxL, got '" + v + "'");
            return {M, K, L};
        }

        std::vector<ArraySpec> to_arrays(const std::string &key, const std::string &v)
        {
            std::vector<ArraySpec> out;
            for (const auto &item : split_list(v))
                out.push_back(to_array(key, item));
            return out;
        }

        template <typename T, typename F>
        std::string join(const std::vector<T> &xs, F f)
        {
            std::string out;
            for (std::size_t i = 0; i < xs.size(); ++i)
                out += (i ? "," : "") + f(xs[i]);
            return out;
        }

        std::string opt(const std::optional<double> &v) { return v ? fmt(*v) : "auto"; }
        std::string boolean(bool b) { return b ? "true" : "false"; }

        struct Key
        {
            const char *name;
            std::function<void(ExperimentConfig &, const std::string &key, const std::string &value)> set;
            std::function<std::string(const ExperimentConfig &)> get;
        };

#define NFVEL_DOUBLE(name, field)                                                                   \
    Key{name, [](ExperimentConfig &c, const std::string &k, const std::string &v) { c.field = to_double(k, v); }, \
        [](const ExperimentConfig &c) { return fmt(c.field); }}
#define NFVEL_INT(name, field)                                                                      \
    Key{name, [](ExperimentConfig &c, const std::string &k, const std::string &v) { c.field = to_int(k, v); }, \
        [](const ExperimentConfig &c) { return std::to_string(c.field); }}
#define NFVEL_BOOL(name, field)                                                                     \
    Key{name, [](ExperimentConfig &c, const std::string &k, const std::string &v) { c.field = to_bool(k, v); }, \
        [](const ExperimentConfig &c) { return boolean(c.field); }}
#define NFVEL_OPT_DOUBLE(name, field)                                                               \
    Key{name, [](ExperimentConfig &c, const std::string &k, const std::string &v) {                \
            if (lower(trim(v)) == "auto") c.field.reset(); else c.field = to_double(k, v); },         \
        [](const ExperimentConfig &c) { return opt(c.field); }}

        const std::vector<Key> &registry()
        {
            static const std::vector<Key> keys = {
                Key{"geometry.M", [](ExperimentConfig &c, const std::string &k, const std::string &v) { c.geometry.num_per_module = to_int(k, v); },
                    [](const ExperimentConfig &c) { return std::to_string(c.geometry.num_per_module); }},
                Key{"geometry.K", [](ExperimentConfig &c, const std::string &k, const std::string &v) { c.geometry.num_modules = to_int(k, v); },
                    [](const ExperimentConfig &c) { return std::to_string(c.geometry.num_modules); }},
                Key{"geometry.L", [](ExperimentConfig &c, const std::string &k, const std::string &v) { c.geometry.module_spacing = to_int(k, v); },
                    [](const ExperimentConfig &c) { return std::to_string(c.geometry.module_spacing); }},
                NFVEL_OPT_DOUBLE("geometry.element_spacing_m", element_spacing),

                NFVEL_DOUBLE("waveform.carrier_frequency_hz", carrier_frequency),
                NFVEL_DOUBLE("waveform.symbol_duration_s", symbol_duration),
                NFVEL_INT("waveform.num_symbols", num_symbols),

                NFVEL_DOUBLE("link.transmit_power_dbm", transmit_power_dbm),
                NFVEL_DOUBLE("link.antenna_gain_db", antenna_gain_db),
                NFVEL_DOUBLE("link.rcs_db", rcs_db),
                NFVEL_DOUBLE("link.noise_density_dbm_hz", noise_density_dbm_hz),
                NFVEL_DOUBLE("link.bandwidth_hz", bandwidth),
                NFVEL_BOOL("link.unit_pathloss", unit_pathloss),

                NFVEL_OPT_DOUBLE("target.range_m", range),
                NFVEL_DOUBLE("target.angle_deg", angle_deg),
                NFVEL_DOUBLE("target.radial_velocity", radial_velocity),
                NFVEL_DOUBLE("target.transverse_velocity", transverse_velocity),

                Key{"crb.arrays", [](ExperimentConfig &c, const std::string &k, const std::string &v) { c.crb_arrays = to_arrays(k, v); },
                    [](const ExperimentConfig &c) { return c.crb_arrays.empty() ? std::string("geometry") : join(c.crb_arrays, [](const ArraySpec &a) { return a.label(); }); }},
                NFVEL_OPT_DOUBLE("crb.r_min_m", crb_r_min),
                NFVEL_OPT_DOUBLE("crb.r_max_m", crb_r_max),
                NFVEL_INT("crb.r_points", crb_r_points),
                Key{"crb.r_spacing",
                    [](ExperimentConfig &c, const std::string &k, const std::string &v) {
                        const auto s = lower(trim(v));
                        if (s == "log") c.crb_r_spacing = RangeSpacing::log;
                        else if (s == "linear") c.crb_r_spacing = RangeSpacing::linear;
                        else throw ConfigError("key '" + k + "': expected log or linear, got '" + v + "'");
                    },
                    [](const ExperimentConfig &c) { return std::string(c.crb_r_spacing == RangeSpacing::log ? "log" : "linear"); }},

                NFVEL_DOUBLE("gain.dvr_min", gain_dvr_min),
                NFVEL_DOUBLE("gain.dvr_max", gain_dvr_max),
                NFVEL_INT("gain.dvr_points", gain_dvr_points),
                NFVEL_DOUBLE("gain.dvt_min", gain_dvt_min),
                NFVEL_DOUBLE("gain.dvt_max", gain_dvt_max),
                NFVEL_INT("gain.dvt_points", gain_dvt_points),
                NFVEL_DOUBLE("gain.floor_db", gain_floor_db),

                Key{"mse.arrays", [](ExperimentConfig &c, const std::string &k, const std::string &v) { c.mse_arrays = to_arrays(k, v); },
                    [](const ExperimentConfig &c) { return c.mse_arrays.empty() ? std::string("geometry") : join(c.mse_arrays, [](const ArraySpec &a) { return a.label(); }); }},
                Key{"mse.sweep",
                    [](ExperimentConfig &c, const std::string &k, const std::string &v) {
                        const auto s = lower(trim(v));
                        if (s == "power") c.mse_sweep = MseSweep::power;
                        else if (s == "distance") c.mse_sweep = MseSweep::distance;
                        else throw ConfigError("key '" + k + "': expected power or distance, got '" + v + "'");
                    },
                    [](const ExperimentConfig &c) { return std::string(c.mse_sweep == MseSweep::power ? "power" : "distance"); }},
                Key{"mse.powers_dbm", [](ExperimentConfig &c, const std::string &k, const std::string &v) { c.mse_powers_dbm = to_doubles(k, v); },
                    [](const ExperimentConfig &c) { return join(c.mse_powers_dbm, fmt); }},
                Key{"mse.ranges_m", [](ExperimentConfig &c, const std::string &k, const std::string &v) { c.mse_ranges = to_doubles(k, v); },
                    [](const ExperimentConfig &c) { return join(c.mse_ranges, fmt); }},
                NFVEL_INT("mse.trials", mse_trials),
                Key{"mse.seed", [](ExperimentConfig &c, const std::string &k, const std::string &v) { c.mse_seed = static_cast<std::uint64_t>(to_integer(k, v)); },
                    [](const ExperimentConfig &c) { return std::to_string(c.mse_seed); }},
                NFVEL_DOUBLE("mse.init_vr", mse_init_vr),
                NFVEL_DOUBLE("mse.init_vt", mse_init_vt),
                NFVEL_DOUBLE("mse.grid_half_width", mse_grid_half_width),
                NFVEL_DOUBLE("mse.grid_step", mse_grid_step),
                NFVEL_DOUBLE("mse.tol_v", mse_tol_v),
                NFVEL_INT("mse.max_iterations", mse_max_iterations),
                Key{"mse.symbols",
                    [](ExperimentConfig &c, const std::string &k, const std::string &v) {
                        const auto s = lower(trim(v));
                        if (s == "constant") c.mse_symbols = SymbolKind::constant;
                        else if (s == "qpsk") c.mse_symbols = SymbolKind::qpsk;
                        else throw ConfigError("key '" + k + "': expected constant or qpsk, got '" + v + "'");
                    },
                    [](const ExperimentConfig &c) { return std::string(c.mse_symbols == SymbolKind::constant ? "constant" : "qpsk"); }},
                NFVEL_BOOL("mse.noise", mse_noise),

                NFVEL_INT("design.M0", design_reference_count),
                NFVEL_INT("design.K", design_num_modules),
                Key{"design.M_bar",
                    [](ExperimentConfig &c, const std::string &k, const std::string &v) {
                        if (lower(trim(v)) == "auto") c.design_per_module_count.reset(); else c.design_per_module_count = to_int(k, v); },
                    [](const ExperimentConfig &c) { return c.design_per_module_count ? std::to_string(*c.design_per_module_count) : std::string("auto"); }},
                NFVEL_OPT_DOUBLE("design.h", design_fraction),
                NFVEL_DOUBLE("design.eta_budget", design_eta_budget),
                Key{"design.rounding",
                    [](ExperimentConfig &c, const std::string &k, const std::string &v) {
                        const auto s = lower(trim(v));
                        if (s == "ceil") c.design_rounding = SpacingRounding::ceil;
                        else if (s == "ceil_odd") c.design_rounding = SpacingRounding::ceil_odd;
                        else throw ConfigError("key '" + k + "': expected ceil or ceil_odd, got '" + v + "'");
                    },
                    [](const ExperimentConfig &c) { return std::string(c.design_rounding == SpacingRounding::ceil ? "ceil" : "ceil_odd"); }},
            };
            return keys;
        }

#undef NFVEL_DOUBLE
#undef NFVEL_INT
#undef NFVEL_BOOL
#undef NFVEL_OPT_DOUBLE
    }

    void set_value(ExperimentConfig &cfg, const std::string &dotted_key, const std::string &value)
    {
        for (const auto &key : registry())
            if (dotted_key == key.name)
            {
                key.set(cfg, dotted_key, trim(value));
                return;
            }
        throw ConfigError("unknown config key '" + dotted_key + "'");
    }

    void apply_override(ExperimentConfig &cfg, const std::string &assignment)
    {
        const auto eq = assignment.find('=');
        if (eq == std::string::npos)
            throw ConfigError("override '" + assignment + "' is not of the form section.key=value");
        set_value(cfg, trim(assignment.substr(0, eq)), assignment.substr(eq + 1));
    }

    ExperimentConfig parse_config(std::istream &in, const std::string &source)
    {
        namespace pt = boost::property_tree;
        pt::ptree tree;
        try
        {
            pt::read_ini(in, tree);
        }
        catch (const pt::ini_parser_error &e)
        {
            throw ConfigError(source + ":" + std::to_string(e.line()) + ": " + e.message());
        }

        ExperimentConfig cfg;
        for (const auto &[section, body] : tree)
        {
            if (body.empty())
                throw ConfigError(source + ": key '" + section + "' must appear inside a [section]");
            for (const auto &[key, value] : body)
            {
                try
                {
                    set_value(cfg, section + "." + key, value.data());
                }
                catch (const ConfigError &e)
                {
                    throw ConfigError(source + ": " + e.what());
                }
            }
        }
        return cfg;
    }

    ExperimentConfig load_config(const std::string &path)
    {
        std::ifstream in(path);
        if (!in)
            throw ConfigError("cannot open config file '" + path + "'");
        return parse_config(in, path);
    }

    Cpi ExperimentConfig::to_cpi() const
    {
        Cpi cpi{carrier_frequency, symbol_duration, num_symbols};
        cpi.validate();
        return cpi;
    }

    Budget ExperimentConfig::to_budget() const
    {
        Budget b;
        b.transmit_power = dbm_to_watts(transmit_power_dbm);
        b.tx_gain = db_to_linear(antenna_gain_db);
        b.rx_gain = b.tx_gain;
        b.rcs = db_to_linear(rcs_db);
        b.noise_density = dbm_to_watts(noise_density_dbm_hz);
        b.bandwidth = bandwidth;
        b.unit_pathloss = unit_pathloss;
        b.validate();
        return b;
    }

    Geometry ExperimentConfig::to_geometry(const ArraySpec &spec) const
    {
        const double lambda = to_cpi().wavelength();
        return Geometry(spec.num_per_module, spec.num_modules, spec.module_spacing, element_spacing.value_or(lambda / 2.0), lambda);
    }

    double ExperimentConfig::angle_rad() const { return degrees_to_radians(angle_deg); }

    Target ExperimentConfig::to_target() const
    {
        return {range.value_or(fresnel_distance(to_geometry())), angle_rad(), radial_velocity, transverse_velocity};
    }

    std::vector<std::pair<std::string, std::string>> ExperimentConfig::resolved() const
    {
        std::vector<std::pair<std::string, std::string>> out;
        for (const auto &key : registry())
            out.emplace_back(key.name, key.get(*this));
        return out;
    }

    void validate(const ExperimentConfig &cfg)
    {
        auto check_array = [](const ArraySpec &a, const std::string &where) {
            if (a.num_per_module < 1 || a.num_modules < 1 || a.module_spacing < 1)
                throw ConfigError(where + ": M, K and L must be >= 1 (got " + a.label() + ")");
        };
        check_array(cfg.geometry, "geometry");
        for (const auto &a : cfg.crb_arrays)
            check_array(a, "crb.arrays");
        for (const auto &a : cfg.mse_arrays)
            check_array(a, "mse.arrays");
        if (cfg.element_spacing && !(*cfg.element_spacing > 0))
            throw ConfigError("geometry.element_spacing_m must be > 0");
        if (!(cfg.carrier_frequency > 0) || !(cfg.symbol_duration > 0) || cfg.num_symbols < 1)
            throw ConfigError("waveform: carrier frequency, symbol duration and num_symbols must be positive");
        if (!(cfg.bandwidth > 0))
            throw ConfigError("link.bandwidth_hz must be > 0");
        if (cfg.range && !(*cfg.range > 0))
            throw ConfigError("target.range_m must be > 0");
        if (!(cfg.angle_deg >= 0 && cfg.angle_deg <= 180))
            throw ConfigError("target.angle_deg must lie in [0, 180]");
        if (cfg.crb_r_points < 1)
            throw ConfigError("crb.r_points must be >= 1");
        if ((cfg.crb_r_min && !(*cfg.crb_r_min > 0)) || (cfg.crb_r_max && !(*cfg.crb_r_max > 0)))
            throw ConfigError("crb.r_min_m / crb.r_max_m must be > 0");
        if (cfg.gain_dvr_points < 1 || cfg.gain_dvt_points < 1)
            throw ConfigError("gain grid needs at least one point per axis");
        if (cfg.mse_trials < 1)
            throw ConfigError("mse.trials must be >= 1");
        if (!(cfg.mse_grid_step > 0) || !(cfg.mse_tol_v > 0) || !(cfg.mse_grid_half_width > 0))
            throw ConfigError("mse.grid_step, mse.grid_half_width and mse.tol_v must be > 0");
        for (double r : cfg.mse_ranges)
            if (!(r > 0))
                throw ConfigError("mse.ranges_m entries must be > 0");
        if (cfg.mse_sweep == MseSweep::distance && cfg.mse_ranges.empty())
            throw ConfigError("mse.sweep = distance needs mse.ranges_m");
        if (cfg.mse_sweep == MseSweep::power && cfg.mse_powers_dbm.empty())
            throw ConfigError("mse.sweep = power needs mse.powers_dbm");
    }
}
