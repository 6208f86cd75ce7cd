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

// Brute-force reference computations used by the tests. Written directly from the model
// (positions, element ranges, phase sums) without calling into the library's math.

#include <cmath>
#include <complex>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

namespace oracle
{
    constexpr double c0 = 299792458.0;

    inline double wavelength(double fc = 28e9) { return c0 / fc; }

    // x_{m,k} = ((M + L - 1) k + m) delta over the symmetric index set, modules outermost
    inline std::vector<double> positions(int M, int K, int L, double delta)
    {
        std::vector<double> x;
        for (int ik = 0; ik < K; ++ik)
            for (int im = 0; im < M; ++im)
            {
                const double k = ik - 0.5 * (K - 1);
                const double m = im - 0.5 * (M - 1);
                x.push_back(((M + L - 1) * k + m) * delta);
            }
        return x;
    }

    struct QP
    {
        double q, p;
    };

    inline QP coeffs(double x, double r, double theta)
    {
        const double rmk = std::sqrt(r * r - 2.0 * r * x * std::cos(theta) + x * x);
        return {(r - x * std::cos(theta)) / rmk, x * std::sin(theta) / rmk};
    }

    inline double sum_p2(const std::vector<double> &x, double r, double theta)
    {
        double s = 0;
        for (double xi : x)
        {
            const double p = coeffs(xi, r, theta).p;
            s += p * p;
        }
        return s;
    }

    struct Fim
    {
        double rr, tt, rt;
    };

    inline Fim fim(const std::vector<double> &x, double r, double theta, double gamma)
    {
        Fim J{0, 0, 0};
        for (double xi : x)
        {
            const QP c = coeffs(xi, r, theta);
            J.rr += c.q * c.q;
            J.tt += c.p * c.p;
            J.rt += c.q * c.p;
        }
        const double s = gamma * double(x.size());
        return {s * J.rr, s * J.tt, s * J.rt};
    }

    // {CRB_vr, CRB_vt} by explicit 2x2 inversion
    inline std::pair<double, double> crb(const Fim &J)
    {
        const double det = J.rr * J.tt - J.rt * J.rt;
        return {J.tt / det, J.rr / det};
    }

    inline double link_beta2(double pt_w, double lambda, double rcs, double r)
    {
        const double fp = 4.0 * std::numbers::pi;
        return pt_w * lambda * lambda * rcs / (fp * fp * fp * std::pow(r, 4));
    }

    // Array gain sum with the first-order phase q ~ 1, p ~ x sin(theta) / r
    inline std::complex<double> gain_approx_sum(const std::vector<double> &x, double lambda, double r, double theta,
                                                double dvr, double dvt, double t)
    {
        const double kw = 2.0 * std::numbers::pi / lambda;
        std::complex<double> acc = 0;
        for (double xi : x)
            acc += std::exp(std::complex<double>(0, -kw * (dvr + xi * std::sin(theta) / r * dvt) * t));
        return acc;
    }

    inline std::complex<double> gain_exact_sum(const std::vector<double> &x, double lambda, double r, double theta,
                                               double dvr, double dvt, double t)
    {
        const double kw = 2.0 * std::numbers::pi / lambda;
        std::complex<double> acc = 0;
        for (double xi : x)
        {
            const QP c = coeffs(xi, r, theta);
            acc += std::exp(std::complex<double>(0, -kw * (c.q * dvr + c.p * dvt) * t));
        }
        return acc;
    }

    inline double eta_exact(double M0, double K, double Mb)
    {
        const double a = M0 * M0 * (M0 * M0 - 1) - (Mb * Mb - 1) * (Mb * K) * (Mb * K);
        return (std::sqrt(a / ((K * K - 1) * (Mb * K) * (Mb * K))) - Mb) / (M0 - 1);
    }

    // Data rows of a CSV document: '#' lines skipped, first remaining line is the header
    struct Table
    {
        std::vector<std::string> header;
        std::vector<std::vector<std::string>> rows;

        int column(const std::string &name) const
        {
            for (std::size_t i = 0; i < header.size(); ++i)
                if (header[i] == name)
                    return int(i);
            return -1;
        }
        double num(std::size_t row, const std::string &name) const { return std::stod(rows.at(row).at(column(name))); }
        const std::string &str(std::size_t row, const std::string &name) const { return rows.at(row).at(column(name)); }
    };

    inline std::vector<std::string> split(const std::string &line)
    {
        std::vector<std::string> out;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ','))
            out.push_back(cell);
        if (!line.empty() && line.back() == ',')
            out.emplace_back();
        return out;
    }

    inline Table parse_csv(const std::string &text)
    {
        Table t;
        std::stringstream ss(text);
        std::string line;
        bool have_header = false;
        while (std::getline(ss, line))
        {
            if (line.empty() || line[0] == '#')
                continue;
            if (!have_header)
                t.header = split(line), have_header = true;
            else
                t.rows.push_back(split(line));
        }
        return t;
    }
}
