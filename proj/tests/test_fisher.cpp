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

#include "nfvel/fisher.hpp"
#include "nfvel/link.hpp"
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

    std::vector<double> log_grid(double lo, double hi, int n)
    {
        std::vector<double> r;
        for (int i = 0; i < n; ++i)
            r.push_back(lo * std::pow(hi / lo, double(i) / (n - 1)));
        return r;
    }

    // Fisher information of mu_n = beta sqrt(MK) a_n(v) by central differences of the mean
    Eigen::Matrix2d numeric_fim(const ArrayGeometry<double> &g, TargetState<double> t, double beta2, double sigma2,
                                const CpiConfig<double> &cpi)
    {
        const double h = 1e-4;
        const double amp = std::sqrt(beta2 * g.num_elements());
        std::vector<Eigen::MatrixXcd> d(2);
        for (int i = 0; i < 2; ++i)
        {
            auto plus = t, minus = t;
            (i == 0 ? plus.radial_velocity : plus.transverse_velocity) += h;
            (i == 0 ? minus.radial_velocity : minus.transverse_velocity) -= h;
            d[i].resize(g.num_elements(), cpi.num_symbols);
            for (int n = 1; n <= cpi.num_symbols; ++n)
                d[i].col(n - 1) = amp * (array_response(g, plus, cpi, n) - array_response(g, minus, cpi, n)) / (2 * h);
        }
        Eigen::Matrix2d J;
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j)
                J(i, j) = 2.0 / sigma2 * (d[i].conjugate().cwiseProduct(d[j])).sum().real();
        return J;
    }
}

TEST(Fisher, ExactFimMatchesOracle)
{
    const auto x = oracle::positions(120, 2, 61, lambda / 2);
    for (double theta : {0.5, half_pi, 2.2})
        for (double r : {d_F, 30.0})
        {
            const auto J = fim_exact(paper, TargetState<double>{r, theta, 0, 0}, 2.5);
            const auto o = oracle::fim(x, r, theta, 2.5);
            EXPECT_NEAR(J.rr / o.rr, 1.0, 1e-12);
            EXPECT_NEAR(J.tt / o.tt, 1.0, 1e-12);
            EXPECT_NEAR(J.rt, o.rt, 1e-12 * o.rr);
        }
}

TEST(Fisher, ExactFimMatchesNumericalDerivative)
{
    const auto g = ArrayGeometry<double>::half_wavelength(16, 2, 9, lambda);
    const CpiConfig<double> cpi{28e9, 1e-5, 40};
    const TargetState<double> t{0.5, 1.1, 10, 8};
    const double beta2 = 1e-3, sigma2 = 1e-2;
    const Eigen::Matrix2d Jn = numeric_fim(g, t, beta2, sigma2, cpi);

    const double kw = cpi.wavenumber();
    const double gamma = kw * kw * beta2 * symbol_index_factor<double>(cpi.num_symbols) * cpi.symbol_duration *
                         cpi.symbol_duration / sigma2;
    const Eigen::Matrix2d J = fim_exact(g, t, gamma).matrix();
    EXPECT_LT((J - Jn).norm() / J.norm(), 1e-6);
}

TEST(Fisher, CrbIsInverseDiagonal)
{
    const auto J = fim_exact(paper, TargetState<double>{d_F, 1.0, 0, 0}, 1.4676);
    const auto crb = crb_from_fim(J);
    const Eigen::Matrix2d inv = J.matrix().inverse();
    EXPECT_NEAR(crb.radial / inv(0, 0), 1.0, 1e-9);
    EXPECT_NEAR(crb.transverse / inv(1, 1), 1.0, 1e-9);
}

TEST(Fisher, SingularAtEndfire)
{
    const auto J = fim_exact(paper, TargetState<double>{d_F, 0.0, 0, 0}, 1.0);
    EXPECT_TRUE(is_singular(J));
    EXPECT_THROW(crb_from_fim(J), SingularFimError);
    EXPECT_THROW(crb_closed_mla(paper, TargetState<double>{d_F, 0.0, 0, 0}, 1.0), DomainError);
    EXPECT_THROW(crb_closed_mla(paper, TargetState<double>{d_F, std::numbers::pi, 0, 0}, 1.0), DomainError);
}

TEST(Fisher, ApproxSumsTrackExactOnLogGrid)
{
    const auto x = oracle::positions(120, 2, 61, lambda / 2);
    double previous = 1.0;
    for (double r : log_grid(d_F, 10 * d_F, 20))
    {
        const TargetState<double> t{r, half_pi, 0, 0};
        const auto approx = sum_p2_approx(paper, t);
        const double exact = oracle::sum_p2(x, r, half_pi);
        const double err = std::abs(approx.value - exact) / exact;
        EXPECT_LE(err, 0.02);
        EXPECT_LE(err, previous);
        EXPECT_TRUE(approx.tight());
        previous = err;
    }
}

TEST(Fisher, ApproxSumFrozenValues)
{
    const TargetState<double> t{d_F, half_pi, 0, 0};
    const auto proj = element_projections(paper, t);
    EXPECT_NEAR(proj.transverse.square().sum(), 0.66528, 5e-5);
    EXPECT_NEAR(sum_p2_approx(paper, t).value, 0.66799, 5e-5);
    EXPECT_NEAR(std::abs(sum_p2_approx(paper, t).value / proj.transverse.square().sum() - 1), 0.00407, 1e-5);
    EXPECT_NEAR((proj.radial * proj.transverse).sum(), 0.0, 1e-12);
    EXPECT_NEAR(sum_qp_approx(paper, t).value, 0.0, 1e-15);
}

TEST(Fisher, CrossSumOffBroadside)
{
    const auto x = oracle::positions(120, 2, 61, lambda / 2);
    for (double r : {d_F, 3 * d_F, 10 * d_F})
    {
        const TargetState<double> t{r, 1.0, 0, 0};
        const auto proj = element_projections(paper, t);
        const double exact = (proj.radial * proj.transverse).sum();
        EXPECT_LE(std::abs(sum_qp_approx(paper, t).value / exact - 1.0), 0.02);
        EXPECT_LE(std::abs(sum_p2_approx(paper, t).value / oracle::sum_p2(x, r, 1.0) - 1.0), 0.02);
    }
}

TEST(Fisher, ApproxFlags)
{
    EXPECT_TRUE(sum_p2_approx(paper, TargetState<double>{5.0, half_pi, 0, 0}).below_fresnel);
    const auto small = ArrayGeometry<double>::half_wavelength(4, 1, 1, lambda);
    EXPECT_TRUE(sum_p2_approx(small, TargetState<double>{1.0, half_pi, 0, 0}).narrow_aperture);
}

TEST(Fisher, EdgeRatioAtFresnel)
{
    EXPECT_NEAR(max_edge_offset_ratio(paper), 0.08178608201095307, 1e-12);
    EXPECT_NEAR(edge_offset_ratio(paper, fresnel_distance(paper)), max_edge_offset_ratio(paper), 1e-12);
}

TEST(Fisher, ClosedFormMatchesExactOnLogGrid)
{
    const LinkBudget<double> b;
    const CpiConfig<double> cpi;
    for (double r : log_grid(d_F, 10 * d_F, 20))
    {
        const TargetState<double> t{r, half_pi, 10, 8};
        const double gamma = snr_gamma(b, cpi, r);
        const auto exact = crb_from_fim(fim_exact(paper, t, gamma));
        const auto closed = crb_closed_mla(paper, t, gamma);
        EXPECT_LE(std::abs(closed.radial / exact.radial - 1), 0.02);
        EXPECT_LE(std::abs(closed.transverse / exact.transverse - 1), 0.02);
    }
}

TEST(Fisher, UlaReduction)
{
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0, 1);
    for (int i = 0; i < 50; ++i)
    {
        const int M0 = 2 + int(u(rng) * 400);
        const double r = 1 + 99 * u(rng), theta = 0.05 + 3.0 * u(rng), gamma = std::pow(10.0, 6 * u(rng) - 3);
        const auto ula = ArrayGeometry<double>::half_wavelength(M0, 1, 1, lambda);
        const TargetState<double> t{r, theta, 0, 0};
        if (!(existence_margin(ula, r) > 0))
            continue;
        const auto a = crb_closed_mla(ula, t, gamma);
        const auto b = crb_closed_ula(M0, lambda / 2, r, theta, gamma);
        EXPECT_LE(std::abs(a.radial / b.radial - 1), 1e-12);
        EXPECT_LE(std::abs(a.transverse / b.transverse - 1), 1e-12);
    }
}

TEST(Fisher, ClosedFormScaleLaws)
{
    const TargetState<double> t{20.0, 1.0, 0, 0};
    const auto a = crb_closed_mla(paper, t, 1.0);
    const auto b = crb_closed_mla(paper, t, 4.0);
    EXPECT_NEAR(a.radial / b.radial, 4.0, 1e-12);
    EXPECT_NEAR(a.transverse / b.transverse, 4.0, 1e-12);
    // transverse bound grows as 1 / sin^2(theta)
    const auto c = crb_closed_mla(paper, TargetState<double>{20.0, half_pi, 0, 0}, 1.0);
    EXPECT_NEAR(a.transverse / c.transverse, 1.0 / std::pow(std::sin(1.0), 2), 1e-12);
}

TEST(Fisher, ExistenceCondition)
{
    const double S = aperture_factor(paper);
    EXPECT_DOUBLE_EQ(S, 180.0 * 180.0 * 3 + 120.0 * 120.0 - 1);
    const double r_crit = paper.element_spacing() * std::sqrt(S / 12.0);
    EXPECT_GT(existence_margin(paper, 1.01 * r_crit), 0);
    EXPECT_LT(existence_margin(paper, 0.99 * r_crit), 0);
    EXPECT_THROW(crb_closed_mla(paper, TargetState<double>{0.99 * r_crit, half_pi, 0, 0}, 1.0), SingularFimError);
}

TEST(Fisher, ModularGainInTransverse)
{
    // at equal element count, spreading the modules lowers the transverse bound by the aperture factor ratio
    const auto mla = crb_closed_mla(paper, TargetState<double>{d_F, half_pi, 0, 0}, 1.0);
    const auto ula = crb_closed_ula(240, lambda / 2, d_F, half_pi, 1.0);
    EXPECT_NEAR(ula.transverse / mla.transverse, aperture_factor(paper) / (240.0 * 240.0 - 1), 1e-12);
}
