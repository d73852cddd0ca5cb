/*
* Copyright (C) 2026 fertdiff contributors
*
* Licensed under the Apache License, Version 2.0 (the "License");
* you may not use this file except in compliance with the License.
* You may obtain a copy of the License at
*
*     http://www.apache.org/licenses/LICENSE-2.0
*
* Unless required by applicable law or agreed to in writing, software
* distributed under the License is distributed on an "AS IS" BASIS,
* WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
* See the License for the specific language governing permissions and
* limitations under the License.
*/
#include "fertdiff/error.h"
#include "fertdiff/io.h"
#include "fertdiff/pipeline.h"
#include "test_support.h"

#include <algorithm>
#include <filesystem>

namespace fertdiff
{
namespace
{

StudyConfig small_study(std::size_t iterations = 20)
{
    StudyConfig c;
    c.iterations = iterations;
    c.calibration_iterations = 5;
    c.run_sensitivity = false;
    c.scenario.fertilizers.can.embedded_intensity = 1.10;
    c.scenario.fertilizers.pu.embedded_intensity = 0.75;
    c.prices.can = 420.0;
    c.prices.urea = 450.0;
    c.prices.pu = 520.0;
    return c;
}

std::map<std::string, std::string> hashes(const std::vector<ManifestEntry>& entries)
{
    std::map<std::string, std::string> out;
    for (const auto& e : entries) {
        out[e.file] = e.sha256;
    }
    return out;
}

TEST(Pipeline, ZeroPolicyStudyHasNoEffects)
{
    auto cfg = small_study();
    cfg.slot_policies = {PolicyKind::none, PolicyKind::none, PolicyKind::none};
    cfg.run_calibration = false;
    const auto r = run_full_study(cfg);
    ASSERT_EQ(r.scenarios.size(), 3u);
    for (const auto& res : r.scenarios) {
        EXPECT_EQ(res.summary.mean_adoption, r.at(ScenarioRole::baseline).summary.mean_adoption);
        EXPECT_EQ(res.ci_post, r.at(ScenarioRole::baseline).ci_post);
        if (res.role == ScenarioRole::baseline) {
            continue;
        }
        EXPECT_EQ(res.abatement, std::vector<double>(cfg.iterations, 0.0));
        EXPECT_FALSE(res.economics.has_value());
        EXPECT_TRUE(r.skipped.contains("abatement_report." + std::string(to_string(res.role))));
    }
    EXPECT_TRUE(r.skipped.contains("calibration"));
}

TEST(Pipeline, StudyReportIsCompleteAndConsistent)
{
    const auto r = run_full_study(small_study());
    EXPECT_EQ(r.population.size(), 295u);
    EXPECT_NEAR(r.delta, (1.0 - 0.0040 / 0.0149) * 0.25, 1e-15);
    EXPECT_EQ(r.at(ScenarioRole::tax).policy, PolicyKind::carbon_tax);
    EXPECT_EQ(r.at(ScenarioRole::subsidy).ensemble.tag, "subsidy");
    ASSERT_EQ(r.snapshots.size(), 3u);
    EXPECT_EQ(r.snapshots[2].year, 15);
    EXPECT_TRUE(r.calibration.has_value());
    EXPECT_TRUE(r.ablation.has_value());
    const auto& sub = r.at(ScenarioRole::subsidy);
    ASSERT_TRUE(sub.economics.has_value());
    EXPECT_GT(sub.economics->total_abatement_t, 0.0);
    EXPECT_GT(sub.economics->government_expenditure, 0.0);
    EXPECT_EQ(r.at(ScenarioRole::tax).economics->government_expenditure, 0.0);
    for (std::size_t i = 0; i < r.ci_base.size(); ++i) {
        EXPECT_LE(sub.ci_post[i], r.ci_base[i]);
    }
    EXPECT_LT(sub.ci_summary.mean, r.ci_base_summary.mean);
}

TEST(Pipeline, ReportIsIdenticalAcrossWorkerCounts)
{
    auto serial_cfg = small_study();
    serial_cfg.workers = 1;
    auto parallel_cfg = serial_cfg;
    parallel_cfg.workers = 4;
    const auto dir = testing::scratch_dir();
    const auto a = write_study_report(run_full_study(serial_cfg), dir / "serial");
    const auto b = write_study_report(run_full_study(parallel_cfg), dir / "parallel");
    EXPECT_GE(a.size(), 8u);
    EXPECT_EQ(hashes(a), hashes(b));
    for (const auto& e : a) {
        const auto bytes = read_text_file(dir / "serial" / e.file);
        EXPECT_EQ(bytes.size(), e.bytes) << e.file;
        EXPECT_EQ(sha256_hex(bytes), e.sha256) << e.file;
    }
    EXPECT_TRUE(std::filesystem::exists(dir / "serial" / "manifest.json"));
    EXPECT_EQ(read_text_file(dir / "serial" / "manifest.json"), read_text_file(dir / "parallel" / "manifest.json"));
}

TEST(Pipeline, ShortHorizonSkipsLateSnapshots)
{
    auto cfg = small_study(5);
    cfg.scenario.horizon = 4;
    cfg.run_calibration = false;
    const auto r = run_full_study(cfg);
    EXPECT_EQ(r.snapshots.size(), 1u);
    EXPECT_TRUE(r.skipped.contains("snapshot.year5"));
    EXPECT_TRUE(r.skipped.contains("snapshot.year15"));
}

TEST(Pipeline, InvalidStudyConfigNamesField)
{
    auto cfg = small_study();
    cfg.iterations = 0;
    try {
        run_full_study(cfg);
        FAIL();
    }
    catch (const ConfigError& e) {
        EXPECT_NE(std::string(e.what()).find("montecarlo.iterations"), std::string::npos);
    }
    cfg = small_study();
    cfg.scenario.fertilizers.can.embedded_intensity.reset();
    EXPECT_THROW(run_full_study(cfg), ConfigError);
}

TEST(Pipeline, QuartileCurvesAreOrderedBySize)
{
    auto cfg = small_study(40);
    const auto curves = run_quartile_study(cfg);
    ASSERT_EQ(curves.size(), 4u);
    std::vector<std::size_t> sizes;
    for (const auto& c : curves) {
        sizes.push_back(c.size);
        EXPECT_EQ(c.network.size(), c.size);
        EXPECT_TRUE(c.network.is_connected());
    }
    EXPECT_EQ(sizes, (std::vector<std::size_t>{74, 74, 74, 73}));
    for (std::size_t q = 1; q < 4; ++q) {
        EXPECT_GE(curves[q].mean_area_ha, curves[q - 1].mean_area_ha);
    }
    EXPECT_GE(curves[3].summary.mean_adoption[5], curves[0].summary.mean_adoption[5]);
    const auto dir = testing::scratch_dir();
    const auto entries = write_quartile_report(curves, dir);
    EXPECT_EQ(entries.size(), 5u);
    for (int q = 0; q < 4; ++q) {
        EXPECT_TRUE(std::filesystem::exists(dir / ("quartile_" + std::to_string(q) + ".csv")));
    }
}

TEST(Pipeline, IdenticalFarmsGiveMatchingQuartiles)
{
    std::vector<Farm> farms;
    for (int i = 0; i < 296; ++i) {
        farms.push_back(testing::make_farm(i + 1, 40.0));
    }
    const auto dir = testing::scratch_dir();
    auto cfg = small_study(100);
    cfg.population_csv = testing::write_file(dir / "same.csv", population_to_csv(Population(farms)));
    const auto curves = run_quartile_study(cfg);
    ASSERT_EQ(curves.size(), 4u);
    for (const auto& c : curves) {
        EXPECT_EQ(c.size, 74u);
        EXPECT_NEAR(c.summary.mean_adoption[5], curves[0].summary.mean_adoption[5], 0.05);
        EXPECT_NEAR(c.summary.t50.mean, curves[0].summary.t50.mean, 0.5);
    }
}

TEST(Pipeline, TinyQuartilesAreRejected)
{
    auto cfg = small_study(2);
    cfg.n_farms = 16;
    EXPECT_THROW(run_quartile_study(cfg), ConfigError);
}

} // namespace
} // namespace fertdiff
