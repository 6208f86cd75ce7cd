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
#include "nfvel/units.hpp"

#include <cmath>
#include <numbers>

namespace nfvel
{
    /// Monostatic point-scatterer link budget. All fields are linear units (W, W/Hz, m^2, Hz).
    template <typename Scalar>
    struct LinkBudget
    {
        Scalar transmit_power = dbm_to_watts(Scalar(-10));
        Scalar tx_gain = Scalar(1);
        Scalar rx_gain = Scalar(1);
        Scalar rcs = db_to_linear(Scalar(-23));
        Scalar noise_density = dbm_to_watts(Scalar(-174)); // W/Hz
        Scalar bandwidth = Scalar(100e3);
        bool unit_pathloss = false; // |beta|^2 = 1 regardless of range

        void validate() const
        {
            if (!(transmit_power > 0) || !(tx_gain > 0) || !(rx_gain > 0) || !(rcs > 0) ||
                !(noise_density > 0) || !(bandwidth > 0))
                throw DomainError("LinkBudget: all quantities must be strictly positive");
        }
    };

    template <typename Scalar>
    Scalar reflection_power(const LinkBudget<Scalar> &budget, const CpiConfig<Scalar> &cpi, Scalar range)
    {
        if (!(range > Scalar(0)))
            throw DomainError("reflection_power: range must be > 0");
        if (budget.unit_pathloss)
            return Scalar(1);
        const Scalar lambda = cpi.wavelength();
        const Scalar four_pi = Scalar(4) * std::numbers::pi_v<Scalar>;
        const Scalar r2 = range * range;
        return budget.transmit_power * budget.tx_gain * budget.rx_gain * lambda * lambda * budget.rcs /
               (four_pi * four_pi * four_pi * r2 * r2);
    }

    template <typename Scalar>
    Scalar noise_variance(const LinkBudget<Scalar> &budget)
    {
        return budget.noise_density * budget.bandwidth;
    }

    // N(N+1)(2N+1)/3, i.e. 2 * sum_{n=1..N} n^2
    template <typename Scalar>
    Scalar symbol_index_factor(int num_symbols)
    {
        const Scalar N = Scalar(num_symbols);
        return N * (N + Scalar(1)) * (Scalar(2) * N + Scalar(1)) / Scalar(3);
    }

    /// SNR scale gamma in 1/(m/s)^2: (2 pi / lambda)^2 |beta|^2 N(N+1)(2N+1) Ts^2 / (3 sigma^2).
    template <typename Scalar>
    Scalar snr_gamma(const LinkBudget<Scalar> &budget, const CpiConfig<Scalar> &cpi, Scalar range)
    {
        const Scalar kw = cpi.wavenumber();
        const Scalar Ts = cpi.symbol_duration;
        return kw * kw * reflection_power(budget, cpi, range) * symbol_index_factor<Scalar>(cpi.num_symbols) * Ts * Ts /
               noise_variance(budget);
    }
}
