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

#include "nfvel/csv.hpp"
#include "nfvel/design.hpp"
#include "nfvel/errors.hpp"
#include "nfvel/fisher.hpp"
#include "nfvel/gain.hpp"
#include "nfvel/link.hpp"
#include "nfvel/units.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <ostream>
#include <thread>

namespace nfvel
{
    namespace
    {
        using Cell = CsvCell;
        const Cell empty{};

        Cell integer(long long v) { return Cell{static_cast<std::int64_t>(v)}; }

        void log_line(const RunOptions &opts, const std::string &text)
        {
            if (opts.log)
                *opts.log << text << std::endl;
        }

        bool want_exact(const RunOptions &o) { return o.bounds != BoundSelection::closed_only; }
        bool want_closed(const RunOptions &o) { return o.bounds != BoundSelection::exact_only; }

        std::string bounds_name(BoundSelection b)
        {
            switch (b)
            {
            case BoundSelection::exact_only:
                return "exact_only";
            case BoundSelection::closed_only:
                return "closed_only";
            default:
                return "both";
            }
        }

        void write_preamble(CsvWriter &csv, const std::string &command, const ExperimentConfig &cfg, const RunOptions &opts)
        {
            csv.comment("nfvel " + command);
            for (const auto &[key, value] : cfg.resolved())
                csv.meta(key, value);
            csv.meta("bounds", bounds_name(opts.bounds));
        }

        template <typename F>
        void parallel_for(std::size_t count, int threads, F &&body)
        {
            const std::size_t workers = std::clamp<std::size_t>(threads < 1 ? 1 : std::size_t(threads), 1, std::max<std::size_t>(count, 1));
            if (workers == 1)
            {
                for (std::size_t i = 0; i < count; ++i)
                    body(i);
                return;
            }
            std::vector<std::exception_ptr> errors(workers);
            {
                std::vector<std::jthread> pool;
                for (std::size_t w = 0; w < workers; ++w)
                    pool.emplace_back([&, w] {
                        try
                        {
                            for (std::size_t i = w; i < count; i += workers)
                                body(i);
                        }
                        catch (...)
                        {
                            errors[w] = std::current_exception();
                        }
                    });
            }
            for (auto &e : errors)
                if (e)
                    std::rethrow_exception(e);
        }

        std::vector<double> range_grid(double lo, double hi, int points, RangeSpacing spacing)
        {
            if (!(lo > 0) || !(hi >= lo))
                throw ConfigError("crb range grid needs 0 < r_min <= r_max");
            std::vector<double> out(points);
            for (int i = 0; i < points; ++i)
            {
                const double t = points == 1 ? 0.0 : double(i) / (points - 1);
                out[i] = spacing == RangeSpacing::log ? lo * std::pow(hi / lo, t) : lo + (hi - lo) * t;
            }
            return out;
        }

        std::vector<double> linspace(double lo, double hi, int points)
        {
            std::vector<double> out(points);
            for (int i = 0; i < points; ++i)
                out[i] = points == 1 ? lo : lo + (hi - lo) * double(i) / (points - 1);
            return out;
        }

        bool unobservable_angle(double angle) { return std::abs(std::sin(angle)) < 1e-12 || !(angle > 0 && angle < std::numbers::pi); }

        // Bound cells: value, or a marker when the bound does not exist
        struct BoundCells
        {
            Cell radial = empty;
            Cell transverse = empty;
        };

        BoundCells exact_cells(const Geometry &geom, const Target &target, double gamma)
        {
            const auto fim = fim_exact(geom, target, gamma);
            if (is_singular(fim))
            {
                if (unobservable_angle(target.angle))
                    return {Cell{std::string("singular")}, Cell{std::string("unobservable")}};
                return {Cell{std::string("singular")}, Cell{std::string("singular")}};
            }
            const auto crb = crb_from_fim(fim);
            return {Cell{crb.radial}, Cell{crb.transverse}};
        }

        BoundCells closed_cells(double M, double K, double U, double delta, const Target &target, double gamma)
        {
            BoundCells out;
            try
            {
                out.radial = crb_closed_radial(M, K, U, delta, target.range, gamma);
            }
            catch (const SingularFimError &)
            {
                out.radial = std::string("singular");
            }
            if (unobservable_angle(target.angle))
                out.transverse = std::string("unobservable");
            else if (std::holds_alternative<std::string>(out.radial))
                out.transverse = std::string("singular");
            else
                out.transverse = crb_closed_transverse(M, K, U, delta, target.range, target.angle, gamma);
            return out;
        }

        std::vector<ArraySpec> arrays_or_default(const std::vector<ArraySpec> &arrays, const ExperimentConfig &cfg)
        {
            return arrays.empty() ? std::vector<ArraySpec>{cfg.geometry} : arrays;
        }

        std::string fixed(double v, int decimals)
        {
            char buf[64];
            std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
            return buf;
        }
    }

    std::size_t cmd_crb(const ExperimentConfig &cfg, const RunOptions &opts, std::ostream &out)
    {
        validate(cfg);
        const auto cpi = cfg.to_cpi();
        const auto budget = cfg.to_budget();
        const auto arrays = arrays_or_default(cfg.crb_arrays, cfg);
        std::vector<Geometry> geoms;
        for (const auto &a : arrays)
            geoms.push_back(cfg.to_geometry(a));

        const double d_ref = fresnel_distance(cfg.to_geometry());
        const double r_min = cfg.crb_r_min.value_or(d_ref);
        const double r_max = cfg.crb_r_max.value_or(10.0 * r_min);
        const auto ranges = range_grid(r_min, r_max, cfg.crb_r_points, cfg.crb_r_spacing);

        CsvWriter csv(out);
        write_preamble(csv, "crb", cfg, opts);
        for (std::size_t i = 0; i < arrays.size(); ++i)
            csv.meta("fresnel_m[" + arrays[i].label() + "]", fresnel_distance(geoms[i]));
        csv.header({"array", "M", "K", "L", "elements", "range_m", "fresnel_m", "below_fresnel", "gamma", "crb_vr_exact",
                    "crb_vt_exact", "crb_vr_closed", "crb_vt_closed", "crb_vr_ula", "crb_vt_ula"});

        for (std::size_t i = 0; i < arrays.size(); ++i)
        {
            const Geometry &g = geoms[i];
            const double d_F = fresnel_distance(g);
            for (double r : ranges)
            {
                const Target target{r, cfg.angle_rad(), cfg.radial_velocity, cfg.transverse_velocity};
                const double gamma = snr_gamma(budget, cpi, r);
                BoundCells exact, closed, ula;
                if (want_exact(opts))
                    exact = exact_cells(g, target, gamma);
                if (want_closed(opts))
                {
                    closed = closed_cells(g.num_per_module(), g.num_modules(), g.period(), g.element_spacing(), target, gamma);
                    const double M0 = g.num_elements();
                    ula = closed_cells(M0, 1.0, M0, g.element_spacing(), target, gamma);
                }
                csv.row({arrays[i].label(), integer(g.num_per_module()), integer(g.num_modules()), integer(g.module_spacing()),
                         integer(g.num_elements()), r, d_F, integer(r < d_F ? 1 : 0), gamma, exact.radial, exact.transverse,
                         closed.radial, closed.transverse, ula.radial, ula.transverse});
            }
        }
        return csv.rows_written();
    }

    std::size_t cmd_gain(const ExperimentConfig &cfg, const RunOptions &opts, std::ostream &out)
    {
        validate(cfg);
        const auto cpi = cfg.to_cpi();
        const auto geom = cfg.to_geometry();
        const auto target = cfg.to_target();
        const auto dvr = linspace(cfg.gain_dvr_min, cfg.gain_dvr_max, cfg.gain_dvr_points);
        const auto dvt = linspace(cfg.gain_dvt_min, cfg.gain_dvt_max, cfg.gain_dvt_points);

        const std::size_t cells = dvr.size() * dvt.size();
        std::vector<double> exact_db(cells, 0.0), dirichlet_db(cells, 0.0);
        parallel_for(dvr.size(), opts.threads, [&](std::size_t i) {
            for (std::size_t j = 0; j < dvt.size(); ++j)
            {
                const MismatchSpec<double> mm{dvr[i], dvt[j]};
                const std::size_t c = i * dvt.size() + j;
                if (want_exact(opts))
                    exact_db[c] = linear_to_db(worst_gain_over_cpi(geom, target, cpi, mm, GainModel::exact));
                if (want_closed(opts))
                    dirichlet_db[c] = linear_to_db(worst_gain_over_cpi(geom, target, cpi, mm, GainModel::dirichlet));
            }
        });

        CsvWriter csv(out);
        write_preamble(csv, "gain", cfg, opts);
        csv.meta("fresnel_m", fresnel_distance(geom));
        csv.meta("range_m", target.range);
        if (want_exact(opts) && want_closed(opts))
        {
            double worst = 0.0;
            std::size_t counted = 0;
            for (std::size_t c = 0; c < cells; ++c)
                if (exact_db[c] > cfg.gain_floor_db)
                {
                    worst = std::max(worst, std::abs(exact_db[c] - dirichlet_db[c]));
                    ++counted;
                }
            csv.meta("max_abs_discrepancy_db", worst);
            csv.meta("points_above_floor", std::to_string(counted));
        }
        csv.header({"dvr", "dvt", "exact_db", "dirichlet_db"});
        for (std::size_t i = 0; i < dvr.size(); ++i)
            for (std::size_t j = 0; j < dvt.size(); ++j)
            {
                const std::size_t c = i * dvt.size() + j;
                csv.row({dvr[i], dvt[j], want_exact(opts) ? Cell{exact_db[c]} : empty,
                         want_closed(opts) ? Cell{dirichlet_db[c]} : empty});
            }
        return csv.rows_written();
    }

    std::size_t cmd_mse(const ExperimentConfig &cfg, const RunOptions &opts, std::ostream &out)
    {
        validate(cfg);
        const auto cpi = cfg.to_cpi();
        const auto arrays = arrays_or_default(cfg.mse_arrays, cfg);
        const double default_range = cfg.range.value_or(fresnel_distance(cfg.to_geometry()));

        struct Point
        {
            double range;
            double power_dbm;
        };
        std::vector<Point> points;
        if (cfg.mse_sweep == MseSweep::power)
            for (double p : cfg.mse_powers_dbm)
                points.push_back({default_range, p});
        else
            for (double r : cfg.mse_ranges)
                points.push_back({r, cfg.transmit_power_dbm});

        SearchConfig search;
        search.half_width = cfg.mse_grid_half_width;
        search.grid_step = cfg.mse_grid_step;
        search.tol_v = cfg.mse_tol_v;
        search.max_iterations = cfg.mse_max_iterations;

        CsvWriter csv(out);
        write_preamble(csv, "mse", cfg, opts);
        csv.header({"array", "range_m", "power_dBm", "trials", "mse_vr", "mse_vt", "crb_vr_closed", "crb_vt_closed", "crb_vr_exact",
                    "crb_vt_exact", "nonconverged"});

        for (const auto &spec : arrays)
        {
            const Geometry geom = cfg.to_geometry(spec);
            for (const auto &pt : points)
            {
                ExperimentConfig point_cfg = cfg;
                point_cfg.transmit_power_dbm = pt.power_dbm;
                const Budget budget = point_cfg.to_budget();
                const Target truth{pt.range, cfg.angle_rad(), cfg.radial_velocity, cfg.transverse_velocity};
                const Target predicted{pt.range, cfg.angle_rad(), cfg.mse_init_vr, cfg.mse_init_vt};
                const McScenario scenario{geom, truth, predicted, cpi, budget, cfg.mse_init_vr, cfg.mse_init_vt, search,
                                          cfg.mse_symbols, cfg.mse_noise};

                const auto t0 = std::chrono::steady_clock::now();
                const McStats stats = run_monte_carlo(scenario, cfg.mse_trials, cfg.mse_seed, opts.threads);
                const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

                const double gamma = snr_gamma(budget, cpi, pt.range);
                BoundCells closed, exact;
                if (want_closed(opts))
                    closed = closed_cells(geom.num_per_module(), geom.num_modules(), geom.period(), geom.element_spacing(),
                                          truth, gamma);
                if (want_exact(opts))
                    exact = exact_cells(geom, truth, gamma);
                csv.row({spec.label(), pt.range, pt.power_dbm, integer(stats.num_trials), stats.mse_vr, stats.mse_vt,
                         closed.radial, closed.transverse, exact.radial, exact.transverse, integer(stats.nonconverged)});
                log_line(opts, "mse " + spec.label() + " r=" + format_real(pt.range) + " P=" + format_real(pt.power_dbm) +
                                   " dBm: " + std::to_string(stats.num_trials) + " trials in " + fixed(secs, 1) + " s");
            }
        }
        return csv.rows_written();
    }

    std::size_t cmd_design(const ExperimentConfig &cfg, const RunOptions &opts, std::ostream &out, std::ostream &table)
    {
        validate(cfg);
        if (cfg.design_per_module_count && cfg.design_fraction)
            throw ConfigError("design: set either design.M_bar or design.h, not both");
        DesignTarget target = MinAntennas{cfg.design_eta_budget};
        if (cfg.design_per_module_count)
            target = FixedModuleSize{*cfg.design_per_module_count};
        else if (cfg.design_fraction)
            target = AntennaFraction{*cfg.design_fraction};

        const DesignResult res = match_design(cfg.design_reference_count, cfg.design_num_modules, target, cfg.design_rounding);
        const double h = 1.0 - res.saving_fraction;
        Cell simplified = empty;
        if (h > 0.0 && h < 1.0)
            simplified = eta_simplified(h, res.num_modules);

        CsvWriter csv(out);
        write_preamble(csv, "design", cfg, opts);
        csv.meta("radial_penalty_reference", "far field (delta/r -> 0)");
        csv.header({"M0", "K", "M_bar", "h", "eta", "eta_simplified", "L_exact", "L", "saving_pct", "transverse_ratio",
                    "radial_penalty_db"});
        csv.row({integer(res.reference_count), integer(res.num_modules), integer(res.per_module_count), h, res.eta, simplified,
                 res.spacing_exact, integer(res.spacing), 100.0 * res.saving_fraction, res.transverse_ratio,
                 res.radial_penalty_db});

        char line[256];
        std::snprintf(line, sizeof line, "%6s %3s %6s %8s %8s %4s %9s %11s %12s\n", "M0", "K", "M_bar", "eta", "L_exact", "L",
                      "saving_%", "vt_ratio", "vr_pen_dB");
        table << line;
        std::snprintf(line, sizeof line, "%6d %3d %6d %8.4f %8.3f %4d %9.2f %11.4f %12.3f\n", res.reference_count,
                      res.num_modules, res.per_module_count, res.eta, res.spacing_exact, res.spacing,
                      100.0 * res.saving_fraction, res.transverse_ratio, res.radial_penalty_db);
        table << line;
        return csv.rows_written();
    }

    int run_command(const std::string &name, const ExperimentConfig &cfg, const RunOptions &opts, std::ostream &out,
                    std::ostream &table, std::ostream &err)
    {
        try
        {
            std::size_t rows = 0;
            if (name == "crb")
                rows = cmd_crb(cfg, opts, out);
            else if (name == "gain")
                rows = cmd_gain(cfg, opts, out);
            else if (name == "mse")
                rows = cmd_mse(cfg, opts, out);
            else if (name == "design")
                rows = cmd_design(cfg, opts, out, table);
            else
            {
                err << "error: unknown command '" << name << "'\n";
                return exit_config_error;
            }
            if (rows == 0)
            {
                err << "error: no rows could be computed\n";
                return exit_infeasible;
            }
            return exit_ok;
        }
        catch (const ConfigError &e)
        {
            err << "config error: " << e.what() << '\n';
            return exit_config_error;
        }
        catch (const DomainError &e)
        {
            err << "invalid parameter: " << e.what() << '\n';
            return exit_config_error;
        }
        catch (const InfeasibleDesignError &e)
        {
            err << "infeasible: " << e.what() << '\n';
            return exit_infeasible;
        }
        catch (const SingularFimError &e)
        {
            err << "singular: " << e.what() << '\n';
            return exit_infeasible;
        }
    }
}
