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

#include "nfvel/errors.hpp"
#include "nfvel/geometry.hpp"
#include "nfvel/nearfield.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <numbers>
#include <string>

namespace nfvel
{
    /// Fisher information over zeta = [v_r, v_t], units 1/(m/s)^2.
    template <typename Scalar>
    struct FimMatrix
    {
        Scalar rr = 0; // J_{v_r v_r}
        Scalar tt = 0; // J_{v_t v_t}
        Scalar rt = 0; // J_{v_r v_t} = J_{v_t v_r}

        Scalar determinant() const { return rr * tt - rt * rt; }

        Eigen::Matrix<Scalar, 2, 2> matrix() const
        {
            Eigen::Matrix<Scalar, 2, 2> F;
            F << rr, rt, rt, tt;
            return F;
        }
    };

    // Variance lower bounds in (m/s)^2
    template <typename Scalar>
    struct CrbPair
    {
        Scalar radial;
        Scalar transverse;
    };

    // Relative threshold below which det F is treated as zero
    template <typename Scalar>
    inline constexpr Scalar singular_det_tolerance = Scalar(1e-12);

    // gamma * MK * {sum q^2, sum p^2, sum q p}
    template <typename Scalar>
    FimMatrix<Scalar> fim_from_projections(const RealArray<Scalar> &radial, const RealArray<Scalar> &transverse, Scalar gamma)
    {
        const Scalar scale = gamma * Scalar(radial.size());
        return {scale * radial.square().sum(), scale * transverse.square().sum(), scale * (radial * transverse).sum()};
    }

    /// Exact FIM, summing exact projection coefficients over every element.
    template <typename Scalar>
    FimMatrix<Scalar> fim_exact(const ArrayGeometry<Scalar> &geom, const TargetState<Scalar> &target, Scalar gamma)
    {
        if (!(gamma > Scalar(0)))
            throw DomainError("fim_exact: gamma must be > 0");
        const auto proj = element_projections(geom, target);
        return fim_from_projections(proj.radial, proj.transverse, gamma);
    }

    template <typename Scalar>
    bool is_singular(const FimMatrix<Scalar> &fim)
    {
        const Scalar det = fim.determinant();
        return !(det > singular_det_tolerance<Scalar> * fim.rr * fim.tt);
    }

    /// Diagonal of F^-1: CRB(v_r) = J_tt / det F, CRB(v_t) = J_rr / det F.
    template <typename Scalar>
    CrbPair<Scalar> crb_from_fim(const FimMatrix<Scalar> &fim)
    {
        if (is_singular(fim))
            throw SingularFimError("velocity FIM is singular (det F <= 1e-12 J_rr J_tt): transverse velocity is unobservable "
                                   "or the CRB existence condition is violated");
        const Scalar det = fim.determinant();
        return {fim.tt / det, fim.rr / det};
    }

    // U^2 (K^2 - 1) + M^2 - 1. Real arguments so the design rule can use a non-integer spacing.
    template <typename Scalar>
    Scalar aperture_factor(Scalar num_per_module, Scalar num_modules, Scalar period)
    {
        return period * period * (num_modules * num_modules - Scalar(1)) + (num_per_module * num_per_module - Scalar(1));
    }

    template <typename Scalar>
    Scalar aperture_factor(const ArrayGeometry<Scalar> &geom)
    {
        return aperture_factor(Scalar(geom.num_per_module()), Scalar(geom.num_modules()), Scalar(geom.period()));
    }

    // sum_{m,k} (U k + m)^2 = (MK / 12) (U^2 (K^2 - 1) + M^2 - 1)
    template <typename Scalar>
    Scalar sum_squared_offsets(const ArrayGeometry<Scalar> &geom)
    {
        return Scalar(geom.num_elements()) / Scalar(12) * aperture_factor(geom);
    }

    // Edge-element |g| delta / r. At r = d_F this equals sqrt((lambda/delta) / (U(K-1) + M - 1)).
    template <typename Scalar>
    Scalar edge_offset_ratio(const ArrayGeometry<Scalar> &geom, Scalar range)
    {
        return Scalar(geom.span()) / Scalar(2) * geom.element_spacing() / range;
    }

    template <typename Scalar>
    Scalar max_edge_offset_ratio(const ArrayGeometry<Scalar> &geom)
    {
        return std::sqrt(geom.wavelength() / geom.element_spacing() / Scalar(geom.span()));
    }

    // Closed-form sum approximations are valid for r >= d_F and a wide aperture.
    // Violations are flagged, not fatal.
    template <typename Scalar>
    struct ApproxSum
    {
        Scalar value;
        bool below_fresnel = false;
        bool narrow_aperture = false; // U(K-1) + M - 1 not >> lambda / delta

        bool tight() const { return !below_fresnel && !narrow_aperture; }
    };

    // Factor by which the span must exceed lambda/delta before the aperture counts as wide
    template <typename Scalar>
    inline constexpr Scalar wide_aperture_ratio = Scalar(10);

    namespace detail
    {
        template <typename Scalar>
        ApproxSum<Scalar> flag_approx(const ArrayGeometry<Scalar> &geom, Scalar range, Scalar value)
        {
            ApproxSum<Scalar> out{value};
            out.below_fresnel = range < fresnel_distance(geom);
            out.narrow_aperture = Scalar(geom.span()) < wide_aperture_ratio<Scalar> * geom.wavelength() / geom.element_spacing();
            return out;
        }
    }

    template <typename Scalar>
    ApproxSum<Scalar> sum_p2_approx(const ArrayGeometry<Scalar> &geom, const TargetState<Scalar> &target)
    {
        check_range(target);
        const Scalar eps = geom.element_spacing() / target.range;
        const Scalar s = std::sin(target.angle);
        return detail::flag_approx(geom, target.range, sum_squared_offsets(geom) * eps * eps * s * s);
    }

    template <typename Scalar>
    ApproxSum<Scalar> sum_qp_approx(const ArrayGeometry<Scalar> &geom, const TargetState<Scalar> &target)
    {
        check_range(target);
        const Scalar eps = geom.element_spacing() / target.range;
        return detail::flag_approx(geom, target.range,
                                   sum_squared_offsets(geom) * eps * eps * std::cos(target.angle) * std::sin(target.angle));
    }

    /// 12 / (U^2 (K^2 - 1) + M^2 - 1) - (delta / r)^2. Positive means the closed-form bounds exist.
    template <typename Scalar>
    Scalar existence_margin(const ArrayGeometry<Scalar> &geom, Scalar range)
    {
        const Scalar eps = geom.element_spacing() / range;
        return Scalar(12) / aperture_factor(geom) - eps * eps;
    }

    namespace detail
    {
        template <typename Scalar>
        void check_open_angle(Scalar theta)
        {
            if (!(theta > Scalar(0) && theta < std::numbers::pi_v<Scalar>))
                throw DomainError("transverse CRB undefined: angle must lie in (0, pi), sin(theta) = 0 makes v_t unobservable");
        }
    }

    // Closed-form modular-array bounds in terms of (M, K, U) taken as real numbers.
    // Total element count is M K.
    template <typename Scalar>
    Scalar crb_closed_radial(Scalar num_per_module, Scalar num_modules, Scalar period, Scalar element_spacing,
                             Scalar range, Scalar gamma)
    {
        const Scalar S = aperture_factor(num_per_module, num_modules, period);
        const Scalar eps = element_spacing / range;
        const Scalar MK = num_per_module * num_modules;
        const Scalar denom = Scalar(12) - eps * eps * S;
        if (!(denom > Scalar(0)))
            throw SingularFimError("closed-form CRB does not exist: 12 / (U^2(K^2-1) + M^2 - 1) <= (delta/r)^2");
        return Scalar(12) / (gamma * MK * MK * denom);
    }

    template <typename Scalar>
    Scalar crb_closed_transverse(Scalar num_per_module, Scalar num_modules, Scalar period, Scalar element_spacing,
                                 Scalar range, Scalar angle, Scalar gamma)
    {
        detail::check_open_angle(angle);
        const Scalar S = aperture_factor(num_per_module, num_modules, period);
        const Scalar inv_eps = range / element_spacing;
        const Scalar MK = num_per_module * num_modules;
        const Scalar s = std::sin(angle);
        return Scalar(12) * inv_eps * inv_eps / (gamma * MK * MK * S * s * s);
    }

    template <typename Scalar>
    CrbPair<Scalar> crb_closed_modular(Scalar num_per_module, Scalar num_modules, Scalar period, Scalar element_spacing,
                                       Scalar range, Scalar angle, Scalar gamma)
    {
        return {crb_closed_radial(num_per_module, num_modules, period, element_spacing, range, gamma),
                crb_closed_transverse(num_per_module, num_modules, period, element_spacing, range, angle, gamma)};
    }

    /// Closed-form CRBs for the modular array (exact existence check, then the two bounds).
    template <typename Scalar>
    CrbPair<Scalar> crb_closed_mla(const ArrayGeometry<Scalar> &geom, const TargetState<Scalar> &target, Scalar gamma)
    {
        check_range(target);
        if (!(existence_margin(geom, target.range) > Scalar(0)))
            throw SingularFimError("closed-form CRB does not exist at r = " + std::to_string(target.range) + " m");
        return crb_closed_modular(Scalar(geom.num_per_module()), Scalar(geom.num_modules()), Scalar(geom.period()),
                                  geom.element_spacing(), target.range, target.angle, gamma);
    }

    // Collocated ULA with M0 elements. Shares the modular arithmetic path with K = 1, U = M0.
    template <typename Scalar>
    CrbPair<Scalar> crb_closed_ula(int num_elements, Scalar element_spacing, Scalar range, Scalar angle, Scalar gamma)
    {
        if (num_elements < 1)
            throw DomainError("crb_closed_ula: M0 must be >= 1");
        if (!(range > Scalar(0)))
            throw DomainError("crb_closed_ula: range must be > 0");
        const Scalar M0 = Scalar(num_elements);
        return crb_closed_modular(M0, Scalar(1), M0, element_spacing, range, angle, gamma);
    }
}
