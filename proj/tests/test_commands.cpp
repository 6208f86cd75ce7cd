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

#include "nfvel/commands.hpp"
#include "oracle.hpp"

#include <gtest/gtest.h>

#include <cstdlib>
#include <sstream>

using namespace nfvel;

namespace
{
    struct Run
    {
        int code;
        std::string csv;
        std::string table;
        std::string err;
    };

    Run run(const std::string &command, const ExperimentConfig &cfg, RunOptions opts = {})
    {
        std::ostringstream out, table, err;
        const int code = run_command(command, cfg, opts, out, table, err);
        return {code, out.str(), table.str(), err.str()};
    }

    ExperimentConfig with(std::initializer_list<const char *> overrides)
    {
        ExperimentConfig cfg;
        for (const char *o : overrides)
            apply_override(cfg, o);
        return cfg;
    }
}

TEST(Commands, CrbSingleRow)
{
    const auto r = run("crb", with({"crb.r_points=1", "crb.r_min_m=20", "crb.r_max_m=20"}));
    ASSERT_EQ(r.code, exit_ok) << r.err;
    const auto t = oracle::parse_csv(r.csv);
    ASSERT_EQ(t.rows.size(), 1u);
    EXPECT_EQ(t.header.front(), "array");
    EXPECT_EQ(t.str(0, "array"), "120x2x61");
    EXPECT_EQ(t.str(0, "below_fresnel"), "0");
    EXPECT_DOUBLE_EQ(t.num(0, "range_m"), 20.0);
    EXPECT_LT(std::abs(t.num(0, "crb_vt_closed") / t.num(0, "crb_vt_exact") - 1), 0.02);
}

TEST(Commands, CrbSelfDescribingPreamble)
{
    const auto r = run("crb", with({"crb.r_points=2"}));
    EXPECT_EQ(r.csv.rfind("# nfvel crb\n", 0), 0u);
    EXPECT_NE(r.csv.find("# geometry.M = 120\n"), std::string::npos);
    EXPECT_NE(r.csv.find("# fresnel_m[120x2x61] = 9.7857578508\n"), std::string::npos);
    // every '#' line precedes the header
    const auto header = r.csv.find("\narray,");
    EXPECT_EQ(r.csv.find("\n#", header + 1), std::string::npos);
}

TEST(Commands, CrbBelowFresnelFlagged)
{
    const auto t = oracle::parse_csv(run("crb", with({"crb.r_points=1", "crb.r_min_m=5", "crb.r_max_m=5"})).csv);
    EXPECT_EQ(t.str(0, "below_fresnel"), "1");
}

TEST(Commands, CrbMarksUnobservableAndSkippedColumns)
{
    auto t = oracle::parse_csv(run("crb", with({"crb.r_points=1", "target.angle_deg=0"})).csv);
    EXPECT_EQ(t.str(0, "crb_vt_exact"), "unobservable");
    EXPECT_EQ(t.str(0, "crb_vt_closed"), "unobservable");
    EXPECT_EQ(t.str(0, "crb_vr_exact"), "singular");
    EXPECT_GT(t.num(0, "crb_vr_closed"), 0.0);

    RunOptions exact_only;
    exact_only.bounds = BoundSelection::exact_only;
    t = oracle::parse_csv(run("crb", with({"crb.r_points=1"}), exact_only).csv);
    EXPECT_EQ(t.str(0, "crb_vr_closed"), "");
    EXPECT_EQ(t.str(0, "crb_vt_ula"), "");
    EXPECT_NE(t.str(0, "crb_vr_exact"), "");

    RunOptions closed_only;
    closed_only.bounds = BoundSelection::closed_only;
    t = oracle::parse_csv(run("crb", with({"crb.r_points=1"}), closed_only).csv);
    EXPECT_EQ(t.str(0, "crb_vr_exact"), "");
    EXPECT_NE(t.str(0, "crb_vr_ula"), "");
}

TEST(Commands, FourArrayOrdering)
{
    const auto t = oracle::parse_csv(
        run("crb", with({"crb.arrays=240x1x1,120x2x61,99x2x61,99x2x103", "link.unit_pathloss=true", "crb.r_points=5"})).csv);
    ASSERT_EQ(t.rows.size(), 20u);
    for (std::size_t i = 0; i < 5; ++i)
    {
        const double ula = t.num(i, "crb_vt_exact"), mla = t.num(5 + i, "crb_vt_exact");
        const double mla198 = t.num(10 + i, "crb_vt_exact"), wide198 = t.num(15 + i, "crb_vt_exact");
        EXPECT_LT(mla, ula);       // spreading the same antennas helps the transverse bound
        EXPECT_LT(wide198, mla198); // so does a wider module spacing
        EXPECT_LT(std::abs(mla198 / ula - 1), 0.03);
        EXPECT_GT(t.num(10 + i, "crb_vr_exact"), t.num(i, "crb_vr_exact")); // fewer antennas, larger radial bound
    }
}

TEST(Commands, GainGrid)
{
    const auto r = run("gain", with({"gain.dvr_points=3", "gain.dvt_points=5"}));
    ASSERT_EQ(r.code, exit_ok);
    const auto t = oracle::parse_csv(r.csv);
    ASSERT_EQ(t.rows.size(), 15u);
    EXPECT_EQ(t.header, (std::vector<std::string>{"dvr", "dvt", "exact_db", "dirichlet_db"}));
    EXPECT_EQ(t.str(7, "dvr"), "0");
    EXPECT_EQ(t.str(7, "dvt"), "0");
    EXPECT_EQ(t.str(7, "exact_db"), "0");
    EXPECT_EQ(t.str(7, "dirichlet_db"), "0");
    EXPECT_NE(r.csv.find("# max_abs_discrepancy_db = "), std::string::npos);
}

TEST(Commands, GainSinglePointAndThreads)
{
    const auto one = run("gain", with({"gain.dvr_points=1", "gain.dvt_points=1", "gain.dvr_min=3", "gain.dvt_min=-7"}));
    EXPECT_EQ(oracle::parse_csv(one.csv).rows.size(), 1u);

    RunOptions three;
    three.threads = 3;
    const auto cfg = with({"gain.dvr_points=4", "gain.dvt_points=4"});
    EXPECT_EQ(run("gain", cfg).csv, run("gain", cfg, three).csv);
}

TEST(Commands, MseNoiseFreeSingleTrial)
{
    const auto r = run("mse", with({"mse.arrays=16x2x9", "target.range_m=1", "mse.trials=1", "mse.noise=false",
                                    "mse.powers_dbm=0"}));
    ASSERT_EQ(r.code, exit_ok) << r.err;
    const auto t = oracle::parse_csv(r.csv);
    ASSERT_EQ(t.rows.size(), 1u);
    EXPECT_LT(t.num(0, "mse_vr"), 1e-10);
    EXPECT_LT(t.num(0, "mse_vt"), 1e-10);
    EXPECT_EQ(t.str(0, "trials"), "1");
    EXPECT_EQ(t.str(0, "nonconverged"), "0");
}

TEST(Commands, MseDistanceSweep)
{
    const auto t = oracle::parse_csv(run("mse", with({"mse.arrays=16x2x9", "mse.sweep=distance", "mse.ranges_m=1,2",
                                                      "mse.trials=1", "mse.noise=false"}))
                                         .csv);
    ASSERT_EQ(t.rows.size(), 2u);
    EXPECT_DOUBLE_EQ(t.num(1, "range_m"), 2.0);
    EXPECT_DOUBLE_EQ(t.num(1, "power_dBm"), -10.0);
    EXPECT_GT(t.num(1, "crb_vt_closed"), t.num(0, "crb_vt_closed"));
}

TEST(Commands, Design)
{
    auto r = run("design", with({"design.M_bar=99"}));
    ASSERT_EQ(r.code, exit_ok);
    auto t = oracle::parse_csv(r.csv);
    EXPECT_EQ(t.str(0, "L"), "61");
    EXPECT_EQ(t.str(0, "saving_pct"), "17.5");
    EXPECT_NEAR(t.num(0, "eta"), 0.2466, 1e-4);
    EXPECT_NE(r.table.find("0.2466"), std::string::npos);

    t = oracle::parse_csv(run("design", with({"design.h=0.825"})).csv);
    EXPECT_EQ(t.str(0, "M_bar"), "99");
}

TEST(Commands, ExitCodes)
{
    auto r = run("design", with({"design.M_bar=130"}));
    EXPECT_EQ(r.code, exit_infeasible);
    EXPECT_NE(r.err.find("exceeds"), std::string::npos);
    EXPECT_TRUE(r.csv.empty());

    EXPECT_EQ(run("design", with({"design.M_bar=99", "design.h=0.8"})).code, exit_config_error);
    EXPECT_EQ(run("crb", with({"geometry.M=0"})).code, exit_config_error);
    EXPECT_EQ(run("plot", ExperimentConfig{}).code, exit_config_error);
}

TEST(Commands, RealsUseTwelveSignificantDigits)
{
    const auto t = oracle::parse_csv(run("crb", with({"crb.r_points=1"})).csv);
    EXPECT_EQ(t.str(0, "range_m"), "9.7857578508");
    EXPECT_EQ(t.str(0, "gamma"), "1.46757888949");
}
