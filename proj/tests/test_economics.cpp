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
#include "fertdiff/economics.h"
#include "fertdiff/error.h"
#include "test_support.h"

#include <json.hpp>

namespace fertdiff
{
namespace
{

Farm bare_farm(std::int64_t id, double can_kg, double pu_kg = 0.0)
{
    Farm f = testing::make_farm(id, 10.0);
    f.can_kg = can_kg;
    f.pu_kg = pu_kg;
    f.urea_kg = f.p_kg = f.k_kg = f.lime_t = 0.0;
    return f;
}

PriceTable example_prices()
{
    return {420.0, 450.0, 520.0, 600.0, 480.0, 30.0};
}

TEST(Economics, BaselineCostExamples)
{
    PriceTable prices;
    prices.can = 400.0;
    EXPECT_DOUBLE_EQ(baseline_cost(Population({bare_farm(1, 1000.0)}), prices), 400.0);
    EXPECT_EQ(baseline_cost(Population({bare_farm(1, 0.0)}), prices), 0.0);

    auto f = testing::make_farm(1, 10.0);
    f.urea_kg = 300.0;
    f.pu_kg = 200.0;
    f.p_kg = 150.0;
    f.k_kg = 250.0;
    f.lime_t = 4.0;
    const auto p = example_prices();
    const double one = baseline_cost(Population({f}), p);
    const double expected = 420.0 * f.can_kg / 1000.0 + 450.0 * 0.3 + 520.0 * 0.2 + 600.0 * 0.15 + 480.0 * 0.25 +
                            30.0 * 4.0;
    EXPECT_NEAR(one, expected, 1e-9);
    auto g = f;
    g.id = 2;
    EXPECT_NEAR(baseline_cost(Population({f, g}), p), 2.0 * one, 1e-9);
}

TEST(Economics, SubstitutionModes)
{
    const auto farm = bare_farm(1, 100.0, 20.0);
    const auto same = apply_substitution(farm, 0.0);
    EXPECT_EQ(same.can_kg, 100.0);
    EXPECT_EQ(same.pu_kg, 20.0);
    const auto full = apply_substitution(farm, 1.0);
    EXPECT_EQ(full.can_kg, 0.0);
    EXPECT_EQ(full.pu_kg, 120.0);
    const auto n_eq = apply_substitution(farm, 1.0, SubstitutionMode::n_equivalent);
    EXPECT_NEAR(n_eq.pu_kg, 20.0 + 100.0 * 0.27 / 0.46, 1e-12);
    EXPECT_NEAR(n_eq.pu_kg, 78.7, 0.01);
    EXPECT_NEAR(n_eq.can_kg * 0.27 + n_eq.pu_kg * 0.46, 100.0 * 0.27 + 20.0 * 0.46, 1e-9);
    EXPECT_THROW(apply_substitution(farm, 1.1), std::invalid_argument);
    EXPECT_THROW(apply_substitution(farm, -0.1), std::invalid_argument);
}

TEST(Economics, PolicyCostExamples)
{
    PriceTable prices;
    prices.can = 400.0;
    prices.pu = 500.0;
    const Population single({bare_farm(1, 1000.0)});
    EXPECT_DOUBLE_EQ(policy_cost(single, 1.0, prices), 500.0);
    EXPECT_DOUBLE_EQ(policy_cost(single, 1.0, prices) - baseline_cost(single, prices), 100.0);

    const auto pop = synthesize_population(50, 3);
    const auto p = example_prices();
    EXPECT_DOUBLE_EQ(policy_cost(pop, 0.0, p), baseline_cost(pop, p));
    auto equal = p;
    equal.pu = equal.can;
    for (double alpha : {0.1, 0.5, 1.0}) {
        EXPECT_NEAR(policy_cost(pop, alpha, equal), baseline_cost(pop, equal), 1e-6);
    }
}

TEST(Economics, PropertyDeltaCostLinearAndSigned)
{
    std::mt19937_64 rng(19);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 50; ++trial) {
        const auto pop = synthesize_population(5 + rng() % 40, rng());
        PriceTable p = example_prices();
        p.can = 300.0 + 300.0 * u(rng);
        p.pu = 300.0 + 300.0 * u(rng);
        double can_t = 0.0;
        for (const auto& f : pop.farms()) {
            can_t += f.can_kg / 1000.0;
        }
        const double alpha = u(rng);
        const double dc = policy_cost(pop, alpha, p) - baseline_cost(pop, p);
        EXPECT_NEAR(dc, alpha * can_t * (p.pu - p.can), 1e-7 * (1.0 + std::abs(dc)));
        if (p.pu > p.can && alpha > 0.0) {
            EXPECT_GT(dc, 0.0);
        }
    }
}

TEST(Economics, TotalAbatement)
{
    const std::vector<double> a{2.0, 2.0}, b{1.0, 1.0};
    EXPECT_EQ(total_abatement(a, a), 0.0);
    EXPECT_DOUBLE_EQ(total_abatement(a, b), 2000.0);
    EXPECT_THROW(total_abatement(a, std::vector<double>{1.0}), std::invalid_argument);
}

TEST(Economics, AbatementCosts)
{
    const auto priv = abatement_costs(97354.0, 121351.0, 0.0);
    EXPECT_NEAR(priv.private_cost, 0.80, 0.005);
    EXPECT_EQ(priv.mac, 97354.0 / 121351.0);
    const auto soc = abatement_costs(97354.0, 121351.0, 454077.0);
    EXPECT_NEAR(soc.social_cost, 4.54, 0.005);
    EXPECT_GE(soc.social_cost, soc.private_cost);
    EXPECT_EQ(abatement_costs(0.0, 1000.0, 0.0).private_cost, 0.0);
    EXPECT_THROW(abatement_costs(1.0, 0.0, 0.0), NumericError);
    EXPECT_THROW(abatement_costs(1.0, -5.0, 0.0), NumericError);
}

TEST(Economics, AbatementReportSerializations)
{
    const auto r = abatement_costs(100.0, 50.0, 25.0);
    const auto j = nlohmann::json::parse(r.to_json());
    EXPECT_EQ(j["mac_eur_per_t"].get<double>(), 2.0);
    EXPECT_EQ(j["social_cost_eur_per_t"].get<double>(), 2.5);
    const auto text = r.to_text();
    EXPECT_NE(text.find("private_cost_eur_per_t 2\n"), std::string::npos);
    EXPECT_NE(text.find("government_expenditure_eur 25\n"), std::string::npos);
}

TEST(Economics, MilkRevenue)
{
    auto farm = testing::make_farm(1, 10.0);
    MilkPriceParams zero;
    zero.kg_per_litre = 1.0297;
    farm.protein_pct = 0.0;
    farm.fat_pct = 0.0;
    EXPECT_EQ(milk_revenue(farm, zero, 1000.0), 0.0);

    farm.protein_pct = 3.5;
    farm.fat_pct = 4.2;
    MilkPriceParams p;
    p.protein_price = 8.0;
    p.fat_price = 5.0;
    const double per_litre = milk_price_per_litre(farm, p);
    EXPECT_NEAR(per_litre, (28.0 + 21.0) * 1.0297 * 1.044594, 1e-12);
    EXPECT_NEAR(per_litre, 52.704, 1.5e-3);
    EXPECT_NEAR(milk_revenue(farm, p, 100.0), 100.0 * per_litre, 1e-9);

    p.bonus = 2.0;
    EXPECT_NEAR(milk_price_per_litre(farm, p), per_litre + 2.0, 1e-12);
    p.bonus_enabled = false;
    EXPECT_NEAR(milk_price_per_litre(farm, p), per_litre, 1e-12);
    p.processing_cost = 1.0;
    EXPECT_NEAR(milk_price_per_litre(farm, p), (49.0 * 1.0297 - 1.0) * 1.044594, 1e-12);
}

TEST(Economics, PriceValidationNamesField)
{
    PriceTable p = example_prices();
    p.lime = -1.0;
    try {
        p.validate();
        FAIL();
    }
    catch (const ConfigError& e) {
        EXPECT_NE(std::string(e.what()).find("prices.lime"), std::string::npos);
    }
}

} // namespace
} // namespace fertdiff
