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

#include "nfvel/cpi.hpp"
#include "nfvel/geometry.hpp"
#include "nfvel/link.hpp"
#include "nfvel/nearfield.hpp"

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <optional>
#include <vector>

namespace nfvel
{
    using Geometry = ArrayGeometry<double>;
    using Target = TargetState<double>;
    using Cpi = CpiConfig<double>;
    using Budget = LinkBudget<double>;
    using Complex = std::complex<double>;

    enum class SymbolKind
    {
        constant, // s(n) = 1
        qpsk      // unit-modulus QPSK drawn from the trial RNG
    };

    enum class SynthesisPath
    {
        full_channel, // y = beta a a^T x + z, x from the precoder
        beamformed    // y = beta psi(n) a s(n) + z, psi from the gain module (requires exact position prediction)
    };

    // y(n) in column n-1 of an MK x N matrix
    struct EchoRecord
    {
        Eigen::MatrixXcd samples;
        Target true_target;
        Target predicted; // state the precoder was built from
        std::vector<Complex> symbols;
        Complex beta;
        double noise_variance = 0; // per element, W
        std::uint64_t rng_seed = 0;
    };

    struct EchoOptions
    {
        SynthesisPath path = SynthesisPath::full_channel;
        SymbolKind symbols = SymbolKind::constant;
        bool add_noise = true;
        std::optional<Complex> beta; // overrides |beta| from the link budget with a uniformly random phase
    };

    /// x(n) = conj(a_n(predicted)) s(n) / sqrt(MK). Throws DomainError unless |s| = 1.
    Eigen::VectorXcd precode(const Geometry &geom, const Target &predicted, const Cpi &cpi, int n, Complex symbol);

    EchoRecord synthesize_echo(const Geometry &geom, const Target &true_target, const Target &predicted, const Cpi &cpi,
                               const Budget &budget, std::uint64_t seed, const EchoOptions &options = {});

    // Range and angle assumed known from the prior CPI
    struct KnownPosition
    {
        double range;
        double angle;
    };

    /// Likelihood of the echo concentrated over the unknown complex beta.
    ///
    /// The noise-free model at hypothesis (v_r, v_t) is u_n = a_n a_n^T x(n), with a_n evaluated at the known
    /// position and hypothesised velocities and x(n) the recorded precoder. With the least-squares
    /// beta_hat = sum u^H y / sum |u|^2 the objective is |sum_n u_n^H y(n)|^2 / sum_n |u_n|^2.
    /// Hypothesis-independent phase terms are folded into the data once at construction.
    class ConcentratedLikelihood
    {
    public:
        ConcentratedLikelihood(const EchoRecord &echo, const Geometry &geom, KnownPosition known, const Cpi &cpi);

        double operator()(double radial_velocity, double transverse_velocity) const;
        Complex beta_hat(double radial_velocity, double transverse_velocity) const;

    private:
        struct Projection
        {
            Complex correlation; // sum_n u_n^H y(n)
            double energy;       // sum_n |u_n|^2
        };
        Projection project(double radial_velocity, double transverse_velocity) const;

        Eigen::ArrayXd radial_;
        Eigen::ArrayXd transverse_;
        Eigen::MatrixXcd data_;    // exp(+j k r_e) y_e(n)
        Eigen::MatrixXcd precoder_; // exp(-j k r_e) x_e(n)
        double wavenumber_;
        double symbol_duration_;
    };

    double concentrated_loglik(const EchoRecord &echo, const Geometry &geom, KnownPosition known, const Cpi &cpi,
                               double radial_velocity, double transverse_velocity);

    struct SearchBox
    {
        double vr_min, vr_max, vt_min, vt_max;

        bool contains(double vr, double vt) const { return vr >= vr_min && vr <= vr_max && vt >= vt_min && vt <= vt_max; }
    };

    struct SearchConfig
    {
        double half_width = 5.0; // m/s, box = init +/- half_width when no explicit box is given
        double grid_step = 0.25; // m/s
        double tol_v = 1e-4;     // m/s, simplex extent at convergence
        int max_iterations = 1000;
        std::optional<SearchBox> box;

        SearchBox resolve_box(double init_vr, double init_vt) const;
    };

    struct MleResult
    {
        double v_r_hat = 0;
        double v_t_hat = 0;
        double log_likelihood_peak = 0;
        int iterations = 0;
        bool converged = false;
    };

    /// Coarse grid over the search box, then Nelder-Mead refinement from the best grid point and from init.
    MleResult mle_estimate(const EchoRecord &echo, const Geometry &geom, KnownPosition known, const Cpi &cpi,
                           double init_vr, double init_vt, const SearchConfig &search = {});

    /// One-CPI constant-velocity prediction: r' = r + v_r N Ts, theta' = theta + v_t N Ts / r.
    Target kinematic_predict(const Target &state, const Cpi &cpi);

    struct McScenario
    {
        Geometry geom;
        Target truth;
        Target predicted; // precoder state
        Cpi cpi;
        Budget budget;
        double init_vr = 11.0;
        double init_vt = 7.0;
        SearchConfig search;
        SymbolKind symbols = SymbolKind::constant;
        bool add_noise = true;
    };

    struct TrialResult
    {
        std::uint64_t seed;
        double v_r_hat;
        double v_t_hat;
        bool converged;
    };

    struct McStats
    {
        int num_trials = 0;
        double mse_vr = 0;
        double mse_vt = 0;
        double mean_error_vr = 0;
        double mean_error_vt = 0;
        int nonconverged = 0;
        std::vector<std::uint64_t> seeds;
        std::vector<TrialResult> trials;
    };

    /// Trial t uses seed base_seed + t. Results are independent of the thread count.
    McStats run_monte_carlo(const McScenario &scenario, int num_trials, std::uint64_t base_seed, int threads = 1);
}
