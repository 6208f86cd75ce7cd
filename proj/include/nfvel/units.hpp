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

#include <cmath>
#include <numbers>

namespace nfvel
{
    template <typename Scalar>
    inline constexpr Scalar speed_of_light = Scalar(299792458.0); // m/s

    template <typename Scalar>
    inline constexpr Scalar two_pi = Scalar(2) * std::numbers::pi_v<Scalar>;

    // dB <-> linear conversions. Only config ingest and CSV emission should call these.
    template <typename Scalar>
    Scalar db_to_linear(Scalar db) { return std::pow(Scalar(10), db / Scalar(10)); }

    template <typename Scalar>
    Scalar linear_to_db(Scalar linear) { return Scalar(10) * std::log10(linear); }

    template <typename Scalar>
    Scalar dbm_to_watts(Scalar dbm) { return Scalar(1e-3) * db_to_linear(dbm); }

    template <typename Scalar>
    Scalar watts_to_dbm(Scalar watts) { return linear_to_db(watts / Scalar(1e-3)); }

    template <typename Scalar>
    Scalar degrees_to_radians(Scalar deg) { return deg * std::numbers::pi_v<Scalar> / Scalar(180); }

    template <typename Scalar>
    Scalar radians_to_degrees(Scalar rad) { return rad * Scalar(180) / std::numbers::pi_v<Scalar>; }
}
