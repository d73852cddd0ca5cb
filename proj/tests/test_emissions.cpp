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
#include "fertdiff/emissions.h"
#include "fertdiff/error.h"
#include "fertdiff/network.h"
#include "test_support.h"

#include <numeric>

namespace fertdiff
{
namespace
{

std::vector<Farm> uniform_farms(std::size_t n, double n_kg)
{
    std::vector<Farm> farms;
    for (std::size_t i = 0; i < n; ++i) {
        farms.push_back(testing::make_farm(static_cast<std::int64_t>(i), 10.0 + static_cast<double>(i), n_kg));
    }
    return farms;
}

TEST(Emissions, FertilizerQuantity)
{
    const FertilizerTable t;
    EXPECT_NEAR(fertilizer_quantity(270.0, t.can), 1.0, 1e-12);
    EXPECT_NEAR(fertilizer_quantity(460.0, t.pu), 1.0, 1e-12);
    EXPECT_EQ(fertilizer_quantity(0.0, t.urea), 0.0);
    FertilizerSpec bad = t.can;
    bad.n_content = 0.0;
    EXPECT_THROW(fertilizer_quantity(10.0, bad), std::invalid_argument);
    EXPECT_THROW(fertilizer_quantity(-1.0, t.can), std::invalid_argument);
}

TEST(Emissions, DirectN2OAndCo2Equivalent)
{
    const FertilizerTable t;
    const double can = n2o_direct(100.0, t.can);
    EXPECT_NEAR(can, 100.0 * 0.0149 * 44.0 / 28.0, 1e-12);
    EXPECT_NEAR(can, 2.3414, 1e-4);
    EXPECT_NEAR(n2o_direct(100.0, t.pu), 0.6286, 1e-4);
    EXPECT_EQ(n2o_direct(0.0, t.can), 0.0);
    EXPECT_NEAR(co2_equivalent(can), 697.7457, 1e-4);
    EXPECT_NEAR(co2_equivalent(can), 697.75, 0.005);
    EXPECT_EQ(co2_equivalent(0.0), 0.0);
    EXPECT_EQ(co2_equivalent(1.0), 298.0);
}

TEST(Emissions, SectorTotalsAndFullAdoptionRatio)
{
    const FertilizerTable t;
    const Population pop(uniform_farms(295, 100.0));
    const double none = sector_emissions(pop, AdoptionFlags(295, 0), t);
    EXPECT_NEAR(none, 295.0 * 100.0 * 0.0149 * 44.0 / 28.0 * 298.0 / 1e6, 1e-12);
    EXPECT_NEAR(none, 0.2058, 1e-4);
    const double all = sector_emissions(pop, AdoptionFlags(295, 1), t);
    EXPECT_NEAR(all / none, 0.0040 / 0.0149, 1e-12);
    EXPECT_EQ(sector_emissions(Population{}, AdoptionFlags{}, t), 0.0);
    EXPECT_THROW(sector_emissions(pop, AdoptionFlags(3, 0), t), std::invalid_argument);
}

TEST(Emissions, PropertyAdditivityAndRatioOnRandomPopulations)
{
    const FertilizerTable t;
    std::mt19937_64 rng(13);
    for (int trial = 0; trial < 50; ++trial) {
        const auto pop = synthesize_population(10 + rng() % 100, rng());
        AdoptionFlags adopted(pop.size());
        for (auto& a : adopted) {
            a = static_cast<std::uint8_t>(rng() % 2);
        }
        const std::size_t cut = rng() % pop.size();
        std::vector<std::size_t> left(cut), right(pop.size() - cut);
        std::iota(left.begin(), left.end(), 0);
        std::iota(right.begin(), right.end(), cut);
        const AdoptionFlags a_left(adopted.begin(), adopted.begin() + static_cast<std::ptrdiff_t>(cut));
        const AdoptionFlags a_right(adopted.begin() + static_cast<std::ptrdiff_t>(cut), adopted.end());
        const double whole = sector_emissions(pop, adopted, t);
        const double parts = sector_emissions(pop.subset(left), a_left, t) + sector_emissions(pop.subset(right), a_right, t);
        EXPECT_NEAR(whole, parts, 1e-12 * whole);
        EXPECT_GE(whole, 0.0);

        const double none = sector_emissions(pop, AdoptionFlags(pop.size(), 0), t);
        const double all = sector_emissions(pop, AdoptionFlags(pop.size(), 1), t);
        EXPECT_NEAR(all / none, 0.0040 / 0.0149, 1e-12);
    }
}

TEST(Emissions, NitrogenIsTheSameUnderAdoption)
{
    const FertilizerTable t;
    const auto farm = testing::make_farm(1, 40.0, 8000.0);
    const double n_can = fertilizer_quantity(farm.nitrogen_kg, t.can) * t.can.n_content * 1000.0;
    const double n_pu = fertilizer_quantity(farm.nitrogen_kg, t.pu) * t.pu.n_content * 1000.0;
    EXPECT_NEAR(n_can, n_pu, 1e-9);
    EXPECT_LT(farm_fertilizer_co2eq(farm, true, t), farm_fertilizer_co2eq(farm, false, t));
}

TEST(Emissions, CarbonIntensity)
{
    EXPECT_EQ(carbon_intensity(testing::make_farm(1, 10, 100, 1000, 1000)), 1.0);
    EXPECT_DOUBLE_EQ(carbon_intensity(testing::make_farm(1, 10, 100, 720, 1000)), 0.72);
    EXPECT_EQ(carbon_intensity(testing::make_farm(1, 10, 100, 0, 1000)), 0.0);
    auto f = testing::make_farm(1, 10);
    f.fpcm_kg = 0.0;
    EXPECT_THROW(carbon_intensity(f), std::invalid_argument);
}

TEST(Emissions, PostPolicyIntensity)
{
    EXPECT_EQ(post_policy_intensity(1.0, 0.0, 0.7), 1.0);
    EXPECT_NEAR(post_policy_intensity(1.0, 0.2, 0.91), 0.818, 1e-12);
    EXPECT_NEAR(post_policy_intensity(0.72, 0.2, 1.0), 0.576, 1e-12);
    EXPECT_THROW(post_policy_intensity(1.0, 1.5, 1.0), std::invalid_argument);
    EXPECT_THROW(post_policy_intensity(1.0, 0.2, 1.5), std::invalid_argument);
}

TEST(Emissions, IntensityReductionFromShare)
{
    const FertilizerTable t;
    EXPECT_NEAR(intensity_reduction_at_full_adoption(t, 1.0), 1.0 - 0.0040 / 0.0149, 1e-15);
    EXPECT_NEAR(intensity_reduction_at_full_adoption(t, 0.25), 0.25 * (1.0 - 0.0040 / 0.0149), 1e-15);
    EXPECT_THROW(intensity_reduction_at_full_adoption(t, 1.2), ConfigError);
}

TEST(Emissions, TableValidationNamesField)
{
    FertilizerTable t;
    EXPECT_NO_THROW(t.validate());
    t.pu.n_content = 1.5;
    try {
        t.validate();
        FAIL();
    }
    catch (const ConfigError& e) {
        EXPECT_NE(std::string(e.what()).find("fertilizers.pu_n_content"), std::string::npos);
    }
}

} // namespace
} // namespace fertdiff
