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

#include "nfvel/design.hpp"

#include "nfvel/errors.hpp"
#include "nfvel/fisher.hpp"
#include "nfvel/units.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace nfvel
{
    void DesignQuery::validate() const
    {
        if (num_modules < 2)
            throw InfeasibleDesignError("design needs K >= 2 modules");
        if (per_module_count < 1 || reference_count < 2)
            throw InfeasibleDesignError("design needs M_bar >= 1 and M0 >= 2");
        if (num_modules * per_module_count > reference_count)
            throw InfeasibleDesignError("K * M_bar = " + std::to_string(num_modules * per_module_count) +
                                        " exceeds the reference count M0 = " + std::to_string(reference_count));
    }

    double eta_exact(const DesignQuery &query)
    {
        query.validate();
        const double M0 = query.reference_count, K = query.num_modules, Mb = query.per_module_count;
        const double MbK2 = (Mb * K) * (Mb * K);
        const double radicand = (M0 * M0 * (M0 * M0 - 1.0) - (Mb * Mb - 1.0) * MbK2) / ((K * K - 1.0) * MbK2);
        if (!(radicand > 0.0))
            throw InfeasibleDesignError("no spacing matches the reference ULA (negative radicand)");
        return (std::sqrt(radicand) - Mb) / (M0 - 1.0);
    }

    double eta_simplified(double h, int num_modules)
    {
        if (!(h > 0.0 && h < 1.0) || num_modules < 2)
            throw DomainError("eta_simplified needs 0 < h < 1 and K >= 2");
        const double K = num_modules;
        const double h2 = h * h;
        return std::sqrt((K * K - h2 * h2) / (K * K * (K * K - 1.0) * h2)) - h / K;
    }

    double spacing_from_eta(double eta, int reference_count)
    {
        return 1.0 + eta * (reference_count - 1);
    }

    double transverse_crb_ratio(int reference_count, int num_modules, int per_module_count, double spacing)
    {
        const double M0 = reference_count, K = num_modules, Mb = per_module_count;
        const double U = Mb + spacing - 1.0;
        const double modular = crb_closed_transverse(Mb, K, U, 1.0, 1.0, std::numbers::pi / 2.0, 1.0);
        const double ula = crb_closed_transverse(M0, 1.0, M0, 1.0, 1.0, std::numbers::pi / 2.0, 1.0);
        return modular / ula;
    }

    double radial_penalty_db(int reference_count, int num_modules, int per_module_count, double spacing, double delta_over_r)
    {
        const double M0 = reference_count, K = num_modules, Mb = per_module_count;
        const double U = Mb + spacing - 1.0;
        const double modular = crb_closed_radial(Mb, K, U, delta_over_r, 1.0, 1.0);
        const double ula = crb_closed_radial(M0, 1.0, M0, delta_over_r, 1.0, 1.0);
        return linear_to_db(modular / ula);
    }

    int round_spacing(double spacing_exact, SpacingRounding rounding)
    {
        // exact-integer results (e.g. M_bar = M0 / K gives L = 1) must not be bumped by rounding noise
        const double nearest = std::round(spacing_exact);
        const double snapped = std::abs(spacing_exact - nearest) < 1e-9 ? nearest : std::ceil(spacing_exact);
        int L = std::max(1, static_cast<int>(snapped));
        if (rounding == SpacingRounding::ceil_odd && L % 2 == 0)
            ++L;
        return L;
    }

    namespace
    {
        DesignResult evaluate(const DesignQuery &q, SpacingRounding rounding, double delta_over_r)
        {
            DesignResult out{};
            out.reference_count = q.reference_count;
            out.num_modules = q.num_modules;
            out.per_module_count = q.per_module_count;
            out.eta = eta_exact(q);
            out.spacing_exact = spacing_from_eta(out.eta, q.reference_count);
            out.spacing = round_spacing(out.spacing_exact, rounding);
            out.saving_fraction = 1.0 - q.antenna_fraction();
            out.transverse_ratio = transverse_crb_ratio(q.reference_count, q.num_modules, q.per_module_count, out.spacing);
            out.radial_penalty_db = radial_penalty_db(q.reference_count, q.num_modules, q.per_module_count, out.spacing, delta_over_r);
            return out;
        }
    }

    DesignResult match_design(int reference_count, int num_modules, const DesignTarget &target, SpacingRounding rounding,
                              double delta_over_r)
    {
        if (const auto *fixed = std::get_if<FixedModuleSize>(&target))
            return evaluate({reference_count, num_modules, fixed->per_module_count}, rounding, delta_over_r);

        if (const auto *frac = std::get_if<AntennaFraction>(&target))
        {
            if (!(frac->fraction > 0.0 && frac->fraction <= 1.0) || num_modules < 1)
                throw InfeasibleDesignError("antenna fraction h must lie in (0, 1]");
            const int Mb = static_cast<int>(std::lround(frac->fraction * reference_count / num_modules));
            return evaluate({reference_count, num_modules, Mb}, rounding, delta_over_r);
        }

        const auto &budget = std::get<MinAntennas>(target);
        if (num_modules < 2)
            throw InfeasibleDesignError("design needs K >= 2 modules");
        // eta decreases with M_bar, so the first feasible M_bar is the cheapest
        for (int Mb = 1; Mb * num_modules <= reference_count; ++Mb)
        {
            const DesignQuery q{reference_count, num_modules, Mb};
            if (eta_exact(q) <= budget.eta_budget)
                return evaluate(q, rounding, delta_over_r);
        }
        throw InfeasibleDesignError("no module size meets the spacing budget eta <= " + std::to_string(budget.eta_budget));
    }
}
