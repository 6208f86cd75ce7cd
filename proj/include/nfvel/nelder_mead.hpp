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

#include <Eigen/Dense>

#include <algorithm>
#include <array>

namespace nfvel
{
    struct NelderMeadResult
    {
        Eigen::Vector2d point;
        double value;
        int iterations;
        bool converged;
    };

    /// Box-constrained 2-D Nelder-Mead minimiser. Trial points are projected onto [lower, upper].
    /// Converges when every vertex lies within tol of the best vertex in each coordinate.
    template <typename Objective>
    NelderMeadResult nelder_mead_2d(Objective &&f, const Eigen::Vector2d &start, const Eigen::Vector2d &step,
                                    const Eigen::Vector2d &lower, const Eigen::Vector2d &upper, double tol, int max_iterations)
    {
        auto project = [&](Eigen::Vector2d x) { return x.cwiseMax(lower).cwiseMin(upper); };

        std::array<Eigen::Vector2d, 3> v;
        std::array<double, 3> fv;
        v[0] = project(start);
        for (int d = 0; d < 2; ++d)
        {
            Eigen::Vector2d x = v[0];
            x(d) += step(d);
            if (x(d) > upper(d))
                x(d) = v[0](d) - step(d);
            v[d + 1] = project(x);
        }
        for (int i = 0; i < 3; ++i)
            fv[i] = f(v[i]);

        auto order = [&]() {
            std::array<int, 3> idx{0, 1, 2};
            std::sort(idx.begin(), idx.end(), [&](int a, int b) { return fv[a] < fv[b]; });
            const auto vv = v;
            const auto ff = fv;
            for (int i = 0; i < 3; ++i)
            {
                v[i] = vv[idx[i]];
                fv[i] = ff[idx[i]];
            }
        };

        int it = 0;
        bool converged = false;
        for (; it < max_iterations; ++it)
        {
            order();
            const double extent = std::max((v[1] - v[0]).cwiseAbs().maxCoeff(), (v[2] - v[0]).cwiseAbs().maxCoeff());
            if (extent < tol)
            {
                converged = true;
                break;
            }

            const Eigen::Vector2d centroid = 0.5 * (v[0] + v[1]);
            const Eigen::Vector2d xr = project(centroid + (centroid - v[2]));
            const double fr = f(xr);
            if (fr < fv[0])
            {
                const Eigen::Vector2d xe = project(centroid + 2.0 * (centroid - v[2]));
                const double fe = f(xe);
                if (fe < fr)
                    v[2] = xe, fv[2] = fe;
                else
                    v[2] = xr, fv[2] = fr;
                continue;
            }
            if (fr < fv[1])
            {
                v[2] = xr, fv[2] = fr;
                continue;
            }
            // contraction, outside if the reflection improved on the worst vertex
            const bool outside = fr < fv[2];
            const Eigen::Vector2d xc = outside ? project(centroid + 0.5 * (xr - centroid)) : project(centroid + 0.5 * (v[2] - centroid));
            const double fc = f(xc);
            if (fc < (outside ? fr : fv[2]))
            {
                v[2] = xc, fv[2] = fc;
                continue;
            }
            for (int i = 1; i < 3; ++i)
            {
                v[i] = v[0] + 0.5 * (v[i] - v[0]);
                fv[i] = f(v[i]);
            }
        }
        order();
        return {v[0], fv[0], it, converged};
    }
}
