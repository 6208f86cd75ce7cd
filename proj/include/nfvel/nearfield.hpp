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
#include "nfvel/errors.hpp"
#include "nfvel/geometry.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <complex>

namespace nfvel
{
    template <typename Scalar>
    using ComplexVector = Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, 1>;

    template <typename Scalar>
    using RealArray = Eigen::Array<Scalar, Eigen::Dynamic, 1>;

    // Target in polar coordinates about the array origin, with radial/transverse velocity components
    template <typename Scalar>
    struct TargetState
    {
        Scalar range;               // m
        Scalar angle;               // rad, measured from the array axis
        Scalar radial_velocity;     // m/s
        Scalar transverse_velocity; // m/s
    };

    template <typename Scalar>
    void check_range(const TargetState<Scalar> &target)
    {
        if (!(target.range > Scalar(0)))
            throw DomainError("target range must be > 0");
    }

    // Exact per-element range and projection coefficients (q: radial, p: transverse), index_set order
    template <typename Scalar>
    struct ElementProjections
    {
        RealArray<Scalar> range;
        RealArray<Scalar> radial;
        RealArray<Scalar> transverse;
    };

    namespace detail
    {
        template <typename Scalar>
        Scalar element_range_at(Scalar r, Scalar cos_theta, Scalar x)
        {
            return std::sqrt(r * r - Scalar(2) * r * x * cos_theta + x * x);
        }
    }

    template <typename Scalar>
    Scalar element_range(const ArrayGeometry<Scalar> &geom, const TargetState<Scalar> &target, Scalar m, Scalar k)
    {
        check_range(target);
        const Scalar x = element_position(geom, m, k);
        return detail::element_range_at(target.range, std::cos(target.angle), x);
    }

    template <typename Scalar>
    struct ProjectionCoeffs
    {
        Scalar radial;     // q
        Scalar transverse; // p
    };

    template <typename Scalar>
    ProjectionCoeffs<Scalar> projection_coeffs(const ArrayGeometry<Scalar> &geom, const TargetState<Scalar> &target,
                                               Scalar m, Scalar k)
    {
        check_range(target);
        const Scalar x = element_position(geom, m, k);
        const Scalar c = std::cos(target.angle), s = std::sin(target.angle);
        const Scalar rmk = detail::element_range_at(target.range, c, x);
        return {(target.range - x * c) / rmk, x * s / rmk};
    }

    template <typename Scalar>
    ElementProjections<Scalar> element_projections(const ArrayGeometry<Scalar> &geom, const TargetState<Scalar> &target)
    {
        check_range(target);
        const RealArray<Scalar> x = element_positions(geom);
        const Scalar r = target.range;
        const Scalar c = std::cos(target.angle), s = std::sin(target.angle);
        ElementProjections<Scalar> out;
        out.range = (r * r - Scalar(2) * r * c * x + x.square()).sqrt();
        out.radial = (r - c * x) / out.range;
        out.transverse = s * x / out.range;
        return out;
    }

    // Per-element Doppler velocity v_{m,k} = q v_r + p v_t
    template <typename Scalar>
    RealArray<Scalar> element_velocities(const ElementProjections<Scalar> &proj, const TargetState<Scalar> &target)
    {
        return proj.radial * target.radial_velocity + proj.transverse * target.transverse_velocity;
    }

    /// Array response at symbol n: [a_n]_{m,k} = exp{-j (2 pi / lambda) (r_{m,k} + v_{m,k} n Ts)}.
    template <typename Scalar>
    ComplexVector<Scalar> array_response(const ArrayGeometry<Scalar> &geom, const TargetState<Scalar> &target,
                                         const CpiConfig<Scalar> &cpi, int n)
    {
        check_symbol_index(cpi, n);
        const auto proj = element_projections(geom, target);
        const Scalar kw = two_pi<Scalar> / geom.wavelength();
        const RealArray<Scalar> phase = kw * (proj.range + element_velocities(proj, target) * (Scalar(n) * cpi.symbol_duration));
        ComplexVector<Scalar> a(phase.size());
        for (Eigen::Index i = 0; i < phase.size(); ++i)
            a(i) = std::polar(Scalar(1), -phase(i));
        return a;
    }
}
