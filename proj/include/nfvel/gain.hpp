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
#include "nfvel/nearfield.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>

namespace nfvel
{
    // True minus estimated velocity
    template <typename Scalar>
    struct MismatchSpec
    {
        Scalar delta_vr = 0; // m/s
        Scalar delta_vt = 0; // m/s
    };

    enum class GainModel
    {
        exact,    // double sum with exact projection coefficients
        dirichlet // product of Dirichlet kernels (q ~ 1, p ~ g delta sin(theta) / r)
    };

    // Below this |sin(x/2)| the Dirichlet ratio is replaced by its analytic limit
    template <typename Scalar>
    inline constexpr Scalar dirichlet_singular_tolerance = Scalar(1e-9);

    /// sin(count x / 2) / sin(x / 2), equal to sum_j exp(-j x j) over the symmetric index set of size count.
    /// At zeros of the denominator the L'Hopital limit count cos(count x / 2) / cos(x / 2) is returned.
    template <typename Scalar>
    Scalar dirichlet_ratio(int count, Scalar x)
    {
        const Scalar half = x / Scalar(2);
        const Scalar den = std::sin(half);
        const Scalar c = Scalar(count);
        if (std::abs(den) < dirichlet_singular_tolerance<Scalar>)
            return c * std::cos(c * half) / std::cos(half);
        return std::sin(c * half) / den;
    }

    namespace detail
    {
        // The *_at helpers return sqrt(MK) psi, i.e. the raw sum
        template <typename Scalar>
        std::complex<Scalar> psi_exact_at(const ElementProjections<Scalar> &proj, Scalar kw, const MismatchSpec<Scalar> &mm,
                                          Scalar t)
        {
            std::complex<Scalar> acc(0);
            for (Eigen::Index i = 0; i < proj.radial.size(); ++i)
                acc += std::polar(Scalar(1), -kw * (proj.radial(i) * mm.delta_vr + proj.transverse(i) * mm.delta_vt) * t);
            return acc;
        }

        template <typename Scalar>
        std::complex<Scalar> psi_dirichlet_at(const ArrayGeometry<Scalar> &geom, const TargetState<Scalar> &target,
                                              Scalar kw, const MismatchSpec<Scalar> &mm, Scalar t)
        {
            const Scalar reduced = kw * (geom.element_spacing() * std::sin(target.angle) / target.range) * mm.delta_vt * t;
            const Scalar U = Scalar(geom.period());
            const Scalar kernel = dirichlet_ratio(geom.num_per_module(), reduced) * dirichlet_ratio(geom.num_modules(), U * reduced);
            return std::polar(kernel, -kw * mm.delta_vr * t);
        }
    }

    /// Array gain under velocity mismatch at symbol n, exact double sum.
    template <typename Scalar>
    std::complex<Scalar> psi_exact(const ArrayGeometry<Scalar> &geom, const TargetState<Scalar> &target,
                                   const CpiConfig<Scalar> &cpi, const MismatchSpec<Scalar> &mismatch, int n)
    {
        check_symbol_index(cpi, n);
        const auto proj = element_projections(geom, target);
        return detail::psi_exact_at(proj, two_pi<Scalar> / geom.wavelength(), mismatch, Scalar(n) * cpi.symbol_duration) /
               std::sqrt(Scalar(geom.num_elements()));
    }

    /// Closed-form array gain: common radial phase times two Dirichlet kernels in the reduced transverse mismatch.
    template <typename Scalar>
    std::complex<Scalar> psi_dirichlet(const ArrayGeometry<Scalar> &geom, const TargetState<Scalar> &target,
                                       const CpiConfig<Scalar> &cpi, const MismatchSpec<Scalar> &mismatch, int n)
    {
        check_symbol_index(cpi, n);
        check_range(target);
        return detail::psi_dirichlet_at(geom, target, two_pi<Scalar> / geom.wavelength(), mismatch,
                                        Scalar(n) * cpi.symbol_duration) /
               std::sqrt(Scalar(geom.num_elements()));
    }

    namespace detail
    {
        template <typename Scalar>
        ComplexVector<Scalar> raw_gain_series(const ArrayGeometry<Scalar> &geom, const TargetState<Scalar> &target,
                                              const CpiConfig<Scalar> &cpi, const MismatchSpec<Scalar> &mismatch, GainModel model)
        {
            check_range(target);
            const Scalar kw = two_pi<Scalar> / geom.wavelength();
            ComplexVector<Scalar> out(cpi.num_symbols);
            if (model == GainModel::exact)
            {
                const auto proj = element_projections(geom, target);
                for (int n = 1; n <= cpi.num_symbols; ++n)
                    out(n - 1) = detail::psi_exact_at(proj, kw, mismatch, Scalar(n) * cpi.symbol_duration);
            }
            else
            {
                for (int n = 1; n <= cpi.num_symbols; ++n)
                    out(n - 1) = detail::psi_dirichlet_at(geom, target, kw, mismatch, Scalar(n) * cpi.symbol_duration);
            }
            return out;
        }
    }

    // psi(n) for n = 1..N
    template <typename Scalar>
    ComplexVector<Scalar> psi_series(const ArrayGeometry<Scalar> &geom, const TargetState<Scalar> &target,
                                     const CpiConfig<Scalar> &cpi, const MismatchSpec<Scalar> &mismatch, GainModel model)
    {
        return detail::raw_gain_series(geom, target, cpi, mismatch, model) / std::sqrt(Scalar(geom.num_elements()));
    }

    /// min over the CPI of |psi(n)|^2 / (MK); 1 means perfect coherent combining.
    template <typename Scalar>
    Scalar worst_gain_over_cpi(const ArrayGeometry<Scalar> &geom, const TargetState<Scalar> &target,
                               const CpiConfig<Scalar> &cpi, const MismatchSpec<Scalar> &mismatch, GainModel model)
    {
        const ComplexVector<Scalar> raw = detail::raw_gain_series(geom, target, cpi, mismatch, model);
        const Scalar MK = Scalar(geom.num_elements());
        return raw.cwiseAbs2().minCoeff() / (MK * MK);
    }
}
