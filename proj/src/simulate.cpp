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

#include "nfvel/simulate.hpp"

#include "nfvel/errors.hpp"
#include "nfvel/gain.hpp"
#include "nfvel/nelder_mead.hpp"
#include "nfvel/units.hpp"

#include <cmath>
#include <exception>
#include <random>
#include <thread>

namespace nfvel
{
    namespace
    {
        constexpr double unit_modulus_tolerance = 1e-12;

        std::vector<Complex> draw_symbols(SymbolKind kind, int N, std::mt19937_64 &rng)
        {
            std::vector<Complex> s(static_cast<std::size_t>(N), Complex(1.0, 0.0));
            if (kind == SymbolKind::qpsk)
            {
                std::uniform_int_distribution<int> pick(0, 3);
                const double r = std::sqrt(0.5);
                for (auto &symbol : s)
                {
                    const int q = pick(rng);
                    symbol = Complex((q & 1) ? -r : r, (q & 2) ? -r : r);
                }
            }
            return s;
        }
    }

    Eigen::VectorXcd precode(const Geometry &geom, const Target &predicted, const Cpi &cpi, int n, Complex symbol)
    {
        if (std::abs(std::abs(symbol) - 1.0) > unit_modulus_tolerance)
            throw DomainError("precode: symbol must have unit modulus");
        const double scale = 1.0 / std::sqrt(double(geom.num_elements()));
        return array_response(geom, predicted, cpi, n).conjugate() * (symbol * scale);
    }

    EchoRecord synthesize_echo(const Geometry &geom, const Target &true_target, const Target &predicted, const Cpi &cpi,
                               const Budget &budget, std::uint64_t seed, const EchoOptions &options)
    {
        cpi.validate();
        check_range(true_target);
        check_range(predicted);

        std::mt19937_64 rng(seed);
        std::uniform_real_distribution<double> phase(0.0, two_pi<double>);

        EchoRecord rec;
        rec.true_target = true_target;
        rec.predicted = predicted;
        rec.rng_seed = seed;
        const double beta_phase = phase(rng);
        rec.beta = options.beta ? *options.beta : std::polar(std::sqrt(reflection_power(budget, cpi, true_target.range)), beta_phase);
        rec.symbols = draw_symbols(options.symbols, cpi.num_symbols, rng);
        rec.noise_variance = options.add_noise ? noise_variance(budget) : 0.0;

        const Eigen::Index MK = geom.num_elements();
        const int N = cpi.num_symbols;
        rec.samples.resize(MK, N);

        if (options.path == SynthesisPath::full_channel)
        {
            for (int n = 1; n <= N; ++n)
            {
                const Eigen::VectorXcd a = array_response(geom, true_target, cpi, n);
                const Eigen::VectorXcd x = precode(geom, predicted, cpi, n, rec.symbols[n - 1]);
                rec.samples.col(n - 1) = rec.beta * a * a.transpose() * x;
            }
        }
        else
        {
            if (predicted.range != true_target.range || predicted.angle != true_target.angle)
                throw DomainError("beamformed synthesis needs the predicted position to equal the true position");
            const MismatchSpec<double> mm{true_target.radial_velocity - predicted.radial_velocity,
                                          true_target.transverse_velocity - predicted.transverse_velocity};
            const ComplexVector<double> psi = psi_series(geom, true_target, cpi, mm, GainModel::exact);
            for (int n = 1; n <= N; ++n)
                rec.samples.col(n - 1) = (rec.beta * psi(n - 1) * rec.symbols[n - 1]) * array_response(geom, true_target, cpi, n);
        }

        if (options.add_noise)
        {
            std::normal_distribution<double> normal(0.0, 1.0);
            const double sd = std::sqrt(rec.noise_variance / 2.0);
            for (int n = 0; n < N; ++n)
                for (Eigen::Index e = 0; e < MK; ++e)
                {
                    const double re = normal(rng);
                    const double im = normal(rng);
                    rec.samples(e, n) += Complex(sd * re, sd * im);
                }
        }
        return rec;
    }

    ConcentratedLikelihood::ConcentratedLikelihood(const EchoRecord &echo, const Geometry &geom, KnownPosition known,
                                                   const Cpi &cpi)
        : wavenumber_(two_pi<double> / geom.wavelength()), symbol_duration_(cpi.symbol_duration)
    {
        const Eigen::Index MK = geom.num_elements();
        const int N = cpi.num_symbols;
        if (echo.samples.rows() != MK || echo.samples.cols() != N)
            throw DomainError("echo record does not match the array geometry / CPI");

        const Target hyp{known.range, known.angle, 0.0, 0.0};
        const auto proj = element_projections(geom, hyp);
        radial_ = proj.radial;
        transverse_ = proj.transverse;

        const auto pre = element_projections(geom, echo.predicted);
        const Eigen::ArrayXd pre_velocity = element_velocities(pre, echo.predicted);
        const Eigen::ArrayXd range_offset = pre.range - proj.range;
        const double scale = 1.0 / std::sqrt(double(MK));

        data_.resize(MK, N);
        precoder_.resize(MK, N);
        for (int n = 1; n <= N; ++n)
        {
            const double t = n * symbol_duration_;
            const Complex s = echo.symbols[n - 1] * scale;
            for (Eigen::Index e = 0; e < MK; ++e)
            {
                data_(e, n - 1) = std::polar(1.0, wavenumber_ * proj.range(e)) * echo.samples(e, n - 1);
                precoder_(e, n - 1) = std::polar(1.0, wavenumber_ * (range_offset(e) + pre_velocity(e) * t)) * s;
            }
        }
    }

    ConcentratedLikelihood::Projection ConcentratedLikelihood::project(double vr, double vt) const
    {
        const Eigen::ArrayXd v = radial_ * vr + transverse_ * vt;
        Eigen::ArrayXcd step(v.size());
        for (Eigen::Index e = 0; e < v.size(); ++e)
            step(e) = std::polar(1.0, -wavenumber_ * v(e) * symbol_duration_);

        // Doppler phasor exp(-j k v_e n Ts) advanced by recurrence
        Eigen::ArrayXcd doppler = step;
        Complex correlation(0.0);
        double gain_energy = 0.0;
        for (Eigen::Index n = 0; n < data_.cols(); ++n)
        {
            if (n > 0)
                doppler *= step;
            const Complex psi = (doppler * precoder_.col(n).array()).sum();           // a_n^T x(n)
            const Complex steer = (doppler.conjugate() * data_.col(n).array()).sum(); // a_n^H y(n)
            correlation += std::conj(psi) * steer;
            gain_energy += std::norm(psi);
        }
        return {correlation, gain_energy * double(data_.rows())};
    }

    double ConcentratedLikelihood::operator()(double vr, double vt) const
    {
        const Projection p = project(vr, vt);
        return p.energy > 0.0 ? std::norm(p.correlation) / p.energy : 0.0;
    }

    Complex ConcentratedLikelihood::beta_hat(double vr, double vt) const
    {
        const Projection p = project(vr, vt);
        return p.energy > 0.0 ? p.correlation / p.energy : Complex(0.0);
    }

    double concentrated_loglik(const EchoRecord &echo, const Geometry &geom, KnownPosition known, const Cpi &cpi,
                               double vr, double vt)
    {
        return ConcentratedLikelihood(echo, geom, known, cpi)(vr, vt);
    }

    SearchBox SearchConfig::resolve_box(double init_vr, double init_vt) const
    {
        if (box)
            return *box;
        return {init_vr - half_width, init_vr + half_width, init_vt - half_width, init_vt + half_width};
    }

    MleResult mle_estimate(const EchoRecord &echo, const Geometry &geom, KnownPosition known, const Cpi &cpi,
                           double init_vr, double init_vt, const SearchConfig &search)
    {
        if (!(search.grid_step > 0.0) || !(search.tol_v > 0.0))
            throw DomainError("mle_estimate: grid step and tolerance must be > 0");
        const SearchBox box = search.resolve_box(init_vr, init_vt);
        if (!box.contains(init_vr, init_vt))
            throw DomainError("mle_estimate: initial point outside the search box");

        const ConcentratedLikelihood objective(echo, geom, known, cpi);

        double best_vr = init_vr, best_vt = init_vt;
        double best = objective(init_vr, init_vt);
        const int nr = static_cast<int>(std::floor((box.vr_max - box.vr_min) / search.grid_step + 1e-9)) + 1;
        const int nt = static_cast<int>(std::floor((box.vt_max - box.vt_min) / search.grid_step + 1e-9)) + 1;
        for (int i = 0; i < nr; ++i)
            for (int j = 0; j < nt; ++j)
            {
                const double vr = box.vr_min + i * search.grid_step;
                const double vt = box.vt_min + j * search.grid_step;
                const double value = objective(vr, vt);
                if (value > best)
                    best = value, best_vr = vr, best_vt = vt;
            }

        const Eigen::Vector2d lower(box.vr_min, box.vt_min), upper(box.vr_max, box.vt_max);
        const Eigen::Vector2d step = Eigen::Vector2d::Constant(search.grid_step);
        auto cost = [&](const Eigen::Vector2d &x) { return -objective(x(0), x(1)); };

        MleResult out;
        const NelderMeadResult from_grid =
            nelder_mead_2d(cost, Eigen::Vector2d(best_vr, best_vt), step, lower, upper, search.tol_v, search.max_iterations);
        NelderMeadResult chosen = from_grid;
        out.iterations = from_grid.iterations;
        if (best_vr != init_vr || best_vt != init_vt)
        {
            const NelderMeadResult from_init =
                nelder_mead_2d(cost, Eigen::Vector2d(init_vr, init_vt), step, lower, upper, search.tol_v, search.max_iterations);
            out.iterations += from_init.iterations;
            if (from_init.value < chosen.value)
                chosen = from_init;
        }
        out.v_r_hat = chosen.point(0);
        out.v_t_hat = chosen.point(1);
        out.log_likelihood_peak = -chosen.value;
        out.converged = chosen.converged;
        return out;
    }

    Target kinematic_predict(const Target &state, const Cpi &cpi)
    {
        check_range(state);
        const double T = cpi.duration();
        Target next = state;
        next.range = state.range + state.radial_velocity * T;
        next.angle = state.angle + state.transverse_velocity * T / state.range;
        if (!(next.range > 0.0))
            throw DomainError("kinematic_predict: predicted range <= 0, target crossed the array");
        return next;
    }

    McStats run_monte_carlo(const McScenario &scenario, int num_trials, std::uint64_t base_seed, int threads)
    {
        if (num_trials < 1)
            throw DomainError("run_monte_carlo: num_trials must be >= 1");
        threads = std::max(1, std::min(threads, num_trials));

        McStats stats;
        stats.num_trials = num_trials;
        stats.trials.resize(static_cast<std::size_t>(num_trials));

        EchoOptions opts;
        opts.symbols = scenario.symbols;
        opts.add_noise = scenario.add_noise;
        const KnownPosition known{scenario.truth.range, scenario.truth.angle};

        auto run_trial = [&](int t) {
            const std::uint64_t seed = base_seed + static_cast<std::uint64_t>(t);
            const EchoRecord echo =
                synthesize_echo(scenario.geom, scenario.truth, scenario.predicted, scenario.cpi, scenario.budget, seed, opts);
            const MleResult est =
                mle_estimate(echo, scenario.geom, known, scenario.cpi, scenario.init_vr, scenario.init_vt, scenario.search);
            stats.trials[static_cast<std::size_t>(t)] = {seed, est.v_r_hat, est.v_t_hat, est.converged};
        };

        std::vector<std::exception_ptr> errors(static_cast<std::size_t>(threads));
        auto worker = [&](int w) {
            try
            {
                for (int t = w; t < num_trials; t += threads)
                    run_trial(t);
            }
            catch (...)
            {
                errors[static_cast<std::size_t>(w)] = std::current_exception();
            }
        };
        if (threads == 1)
            worker(0);
        else
        {
            std::vector<std::jthread> pool;
            pool.reserve(static_cast<std::size_t>(threads));
            for (int w = 0; w < threads; ++w)
                pool.emplace_back(worker, w);
        }
        for (const auto &err : errors)
            if (err)
                std::rethrow_exception(err);

        // fixed trial order
        double se_r = 0, se_t = 0, e_r = 0, e_t = 0;
        for (const auto &tr : stats.trials)
        {
            const double dr = tr.v_r_hat - scenario.truth.radial_velocity;
            const double dt = tr.v_t_hat - scenario.truth.transverse_velocity;
            se_r += dr * dr;
            se_t += dt * dt;
            e_r += dr;
            e_t += dt;
            stats.seeds.push_back(tr.seed);
            if (!tr.converged)
                ++stats.nonconverged;
        }
        stats.mse_vr = se_r / num_trials;
        stats.mse_vt = se_t / num_trials;
        stats.mean_error_vr = e_r / num_trials;
        stats.mean_error_vt = e_t / num_trials;
        return stats;
    }
}
