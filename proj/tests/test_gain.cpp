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

#include "nfvel/gain.hpp"
#include "oracle.hpp"

#include <gtest/gtest.h>

#include <numbers>
#include <random>

using namespace nfvel;

namespace
{
    const double lambda = oracle::wavelength();
    const double half_pi = std::numbers::pi / 2;
    const auto paper = ArrayGeometry<double>::half_wavelength(120, 2, 61, lambda);
    const double d_F = 9.785757850801751;
    const CpiConfig<double> cpi;
}

TEST(Gain, ZeroMismatchIsExactlyOne)
{
    for (double theta : {0.7, half_pi})
    {
        const TargetState<double> t{d_F, theta, 10, 8};
        EXPECT_EQ(worst_gain_over_cpi(paper, t, cpi, {}, GainModel::exact), 1.0);
        EXPECT_EQ(worst_gain_over_cpi(paper, t, cpi, {}, GainModel::dirichlet), 1.0);
    }
}

TEST(Gain, DirichletRatio)
{
    EXPECT_NEAR(dirichlet_ratio(5, 0.0), 5.0, 1e-15);
    EXPECT_NEAR(dirichlet_ratio(4, 2 * std::numbers::pi), -4.0, 1e-12); // even count flips sign at 2 pi
    EXPECT_NEAR(dirichlet_ratio(5, 2 * std::numbers::pi), 5.0, 1e-12);
    // continuity across the switch to the limit form
    EXPECT_NEAR(dirichlet_ratio(7, 3e-9), dirichlet_ratio(7, 1e-9), 1e-12);
    for (double x : {0.1, 0.9, 2.0})
    {
        std::complex<double> s = 0;
        for (int j = 0; j < 6; ++j)
            s += std::exp(std::complex<double>(0, -x * (j - 2.5)));
        EXPECT_NEAR(dirichlet_ratio(6, x), s.real(), 1e-12);
        EXPECT_NEAR(s.imag(), 0.0, 1e-12);
    }
}

TEST(Gain, DirichletEqualsApproximatedPhaseSum)
{
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> dv(-40, 40);
    std::uniform_int_distribution<int> ns(1, 200);
    for (auto [M, K, L] : {std::tuple{120, 2, 61}, {99, 2, 61}, {33, 3, 12}})
    {
        const auto g = ArrayGeometry<double>::half_wavelength(M, K, L, lambda);
        const auto x = oracle::positions(M, K, L, lambda / 2);
        for (int i = 0; i < 40; ++i)
        {
            const MismatchSpec<double> mm{dv(rng) / 2, dv(rng)};
            const double theta = 0.3 + 2.5 * (i / 40.0);
            const int n = ns(rng);
            const TargetState<double> t{d_F, theta, 0, 0};
            const auto closed = psi_dirichlet(g, t, cpi, mm, n) * std::sqrt(double(M * K));
            const auto ref = oracle::gain_approx_sum(x, lambda, d_F, theta, mm.delta_vr, mm.delta_vt, n * 1e-5);
            EXPECT_LE(std::abs(closed - ref), 1e-12 * std::max(std::abs(ref), 1.0));
        }
    }
}

TEST(Gain, ExactMatchesOracleSum)
{
    const auto x = oracle::positions(120, 2, 61, lambda / 2);
    const TargetState<double> t{d_F, 1.3, 0, 0};
    const MismatchSpec<double> mm{3.0, -12.0};
    const auto series = psi_series(paper, t, cpi, mm, GainModel::exact);
    for (int n : {1, 50, 200})
    {
        const auto ref = oracle::gain_exact_sum(x, lambda, d_F, 1.3, 3.0, -12.0, n * 1e-5) / std::sqrt(240.0);
        EXPECT_LT(std::abs(series(n - 1) - ref), 1e-11);
        EXPECT_LT(std::abs(psi_exact(paper, t, cpi, mm, n) - ref), 1e-11);
    }
}

TEST(Gain, BoundedByCoherentGain)
{
    const TargetState<double> t{d_F, half_pi, 0, 0};
    for (double dvt : {-30.0, -5.0, 0.5, 17.0})
    {
        const auto s = psi_series(paper, t, cpi, {2.0, dvt}, GainModel::exact);
        EXPECT_LE(s.cwiseAbs().maxCoeff(), std::sqrt(240.0) + 1e-12);
        const double w = worst_gain_over_cpi(paper, t, cpi, {2.0, dvt}, GainModel::exact);
        EXPECT_GE(w, 0.0);
        EXPECT_LE(w, 1.0);
    }
}

TEST(Gain, RadialMismatchOnlyChangesPhaseInDirichletForm)
{
    const TargetState<double> t{d_F, half_pi, 0, 0};
    EXPECT_NEAR(worst_gain_over_cpi(paper, t, cpi, {15.0, 0.0}, GainModel::dirichlet), 1.0, 1e-12);
    // the exact form loses a little through q < 1 off the centre
    const double exact = worst_gain_over_cpi(paper, t, cpi, {15.0, 0.0}, GainModel::exact);
    EXPECT_LT(exact, 1.0);
    EXPECT_GT(exact, 0.9);
}

TEST(Gain, MonotoneAlongTransverseAxisInFirstLobe)
{
    const TargetState<double> t{d_F, half_pi, 0, 0};
    double previous = 1.0;
    for (double dvt = 1.0; dvt <= 20.0; dvt += 1.0)
    {
        const double w = worst_gain_over_cpi(paper, t, cpi, {0.0, dvt}, GainModel::exact);
        EXPECT_LE(w, previous);
        previous = w;
    }
    EXPECT_LT(previous, 0.5);
}

TEST(Gain, SymbolIndexChecked)
{
    const TargetState<double> t{d_F, half_pi, 0, 0};
    EXPECT_THROW(psi_exact(paper, t, cpi, {}, 0), DomainError);
    EXPECT_THROW(psi_dirichlet(paper, t, cpi, {}, 201), DomainError);
}
