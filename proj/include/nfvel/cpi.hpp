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
#include "nfvel/units.hpp"

#include <string>

namespace nfvel
{
    // Coherent processing interval: N symbols of duration Ts at carrier f_c. Symbol index n runs 1..N.
    template <typename Scalar>
    struct CpiConfig
    {
        Scalar carrier_frequency = Scalar(28e9); // Hz
        Scalar symbol_duration = Scalar(1e-5);   // s
        int num_symbols = 200;

        Scalar wavelength() const { return speed_of_light<Scalar> / carrier_frequency; }
        Scalar wavenumber() const { return two_pi<Scalar> / wavelength(); }
        Scalar duration() const { return Scalar(num_symbols) * symbol_duration; }

        void validate() const
        {
            if (!(carrier_frequency > Scalar(0)) || !(symbol_duration > Scalar(0)) || num_symbols < 1)
                throw DomainError("CpiConfig: carrier frequency, symbol duration and N must be positive");
        }
    };

    template <typename Scalar>
    void check_symbol_index(const CpiConfig<Scalar> &cpi, int n)
    {
        if (n < 1 || n > cpi.num_symbols)
            throw DomainError("symbol index " + std::to_string(n) + " outside 1..N");
    }
}
