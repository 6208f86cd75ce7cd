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

#include <Eigen/Dense>

#include <cmath>
#include <string>
#include <vector>

namespace nfvel
{
    /// Modular linear array: K collocated ULA modules of M elements each, spaced by L element pitches.
    ///
    /// Element (m, k) sits at x = (U k + m) delta with U = M + L - 1. Indices are symmetric about the
    /// origin: m runs over -(M-1)/2 ... (M-1)/2 in unit steps (half-integers for even M), k likewise.
    /// L = 1 with K = 1 is a plain ULA.
    template <typename Scalar>
    class ArrayGeometry
    {
    public:
        ArrayGeometry(int num_per_module, int num_modules, int module_spacing, Scalar element_spacing, Scalar wavelength)
            : M_(num_per_module), K_(num_modules), L_(module_spacing), delta_(element_spacing), lambda_(wavelength)
        {
            if (M_ < 1 || K_ < 1 || L_ < 1)
                throw DomainError("ArrayGeometry: M, K and L must be >= 1");
            if (!(delta_ > Scalar(0)) || !(lambda_ > Scalar(0)))
                throw DomainError("ArrayGeometry: element spacing and wavelength must be > 0");
        }

        // Half-wavelength element spacing
        static ArrayGeometry half_wavelength(int num_per_module, int num_modules, int module_spacing, Scalar wavelength)
        {
            return ArrayGeometry(num_per_module, num_modules, module_spacing, wavelength / Scalar(2), wavelength);
        }

        static ArrayGeometry ula(int num_elements, Scalar element_spacing, Scalar wavelength)
        {
            return ArrayGeometry(num_elements, 1, 1, element_spacing, wavelength);
        }

        int num_per_module() const { return M_; }
        int num_modules() const { return K_; }
        int module_spacing() const { return L_; }
        Scalar element_spacing() const { return delta_; }
        Scalar wavelength() const { return lambda_; }

        int period() const { return M_ + L_ - 1; } // U
        int num_elements() const { return M_ * K_; }
        bool is_collocated() const { return L_ == 1; }

        // Span of the index lattice in element pitches, U(K-1) + M - 1
        int span() const { return period() * (K_ - 1) + M_ - 1; }

    private:
        int M_;
        int K_;
        int L_;
        Scalar delta_;
        Scalar lambda_;
    };

    template <typename Scalar>
    struct ElementIndex
    {
        Scalar m; // element index inside the module
        Scalar k; // module index
    };

    // k-major, m ascending
    template <typename Scalar>
    std::vector<ElementIndex<Scalar>> index_set(const ArrayGeometry<Scalar> &geom)
    {
        const int M = geom.num_per_module(), K = geom.num_modules();
        std::vector<ElementIndex<Scalar>> out;
        out.reserve(static_cast<std::size_t>(M) * static_cast<std::size_t>(K));
        const Scalar m0 = Scalar(M - 1) / Scalar(2), k0 = Scalar(K - 1) / Scalar(2);
        for (int ik = 0; ik < K; ++ik)
            for (int im = 0; im < M; ++im)
                out.push_back({Scalar(im) - m0, Scalar(ik) - k0});
        return out;
    }

    namespace detail
    {
        // Maps a symmetric index back to its 0-based lattice position, or -1 if not on the lattice.
        template <typename Scalar>
        int lattice_position(Scalar index, int count)
        {
            const Scalar shifted = index + Scalar(count - 1) / Scalar(2);
            const Scalar nearest = std::round(shifted);
            if (std::abs(shifted - nearest) > Scalar(1e-6) || nearest < Scalar(0) || nearest > Scalar(count - 1))
                return -1;
            return static_cast<int>(nearest);
        }
    }

    template <typename Scalar>
    bool contains_index(const ArrayGeometry<Scalar> &geom, Scalar m, Scalar k)
    {
        return detail::lattice_position(m, geom.num_per_module()) >= 0 &&
               detail::lattice_position(k, geom.num_modules()) >= 0;
    }

    // Signed offset g = U k + m in element pitches
    template <typename Scalar>
    Scalar element_offset(const ArrayGeometry<Scalar> &geom, Scalar m, Scalar k)
    {
        if (!contains_index(geom, m, k))
            throw DomainError("element index (" + std::to_string(m) + ", " + std::to_string(k) + ") is not in the array");
        return Scalar(geom.period()) * k + m;
    }

    template <typename Scalar>
    Scalar element_position(const ArrayGeometry<Scalar> &geom, Scalar m, Scalar k)
    {
        return element_offset(geom, m, k) * geom.element_spacing();
    }

    // All offsets g = U k + m in index_set order
    template <typename Scalar>
    Eigen::Array<Scalar, Eigen::Dynamic, 1> element_offsets(const ArrayGeometry<Scalar> &geom)
    {
        const auto idx = index_set(geom);
        Eigen::Array<Scalar, Eigen::Dynamic, 1> g(static_cast<Eigen::Index>(idx.size()));
        const Scalar U = Scalar(geom.period());
        for (std::size_t i = 0; i < idx.size(); ++i)
            g(static_cast<Eigen::Index>(i)) = U * idx[i].k + idx[i].m;
        return g;
    }

    template <typename Scalar>
    Eigen::Array<Scalar, Eigen::Dynamic, 1> element_positions(const ArrayGeometry<Scalar> &geom)
    {
        return element_offsets(geom) * geom.element_spacing();
    }

    template <typename Scalar>
    Scalar aperture(const ArrayGeometry<Scalar> &geom)
    {
        return geom.element_spacing() * Scalar(geom.span());
    }

    template <typename Scalar>
    Scalar fresnel_distance(const ArrayGeometry<Scalar> &geom)
    {
        const Scalar A = aperture(geom);
        return Scalar(0.5) * std::sqrt(A * A * A / geom.wavelength());
    }
}
