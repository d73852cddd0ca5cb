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
#include "fertdiff/dynamics.h"
#include "fertdiff/error.h"
#include "fertdiff/montecarlo.h"
#include "test_support.h"

#include <algorithm>
#include <cmath>

namespace fertdiff
{
namespace
{

ScenarioConfig default_config(PolicyKind kind = PolicyKind::none)
{
    ScenarioConfig c;
    c.policy.kind = kind;
    c.fertilizers.can.embedded_intensity = 1.10;
    c.fertilizers.pu.embedded_intensity = 0.75;
    c.fertilizers.can.price = 420.0;
    c.fertilizers.pu.price = 520.0;
    return c;
}

struct World {
    Population pop = synthesize_population(295, 1);
    SocialNetwork net = watts_strogatz(295, 4, 0.1, 1);
};

const World& world()
{
    static const World w;
    return w;
}

bool subset_of(const AdoptionFlags& a, const AdoptionFlags& b)
{
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] && !b[i]) {
            return false;
        }
    }
    return true;
}

TEST(Dynamics, AdoptionProbabilityExamples)
{
    AdoptionParams p;
    EXPECT_DOUBLE_EQ(adoption_probability(0, 0, 0, p), 0.005);
    p.policy_delta = 0.15;
    EXPECT_EQ(adoption_probability(1, 1, 1, p), 1.0);
    p.policy_delta = 0.08;
    EXPECT_NEAR(adoption_probability(0.5, 0.5, 0.5, p), 0.55, 1e-15);
    EXPECT_THROW(adoption_probability(std::nan(""), 0, 0, p), std::invalid_argument);
    EXPECT_THROW(adoption_probability(0, INFINITY, 0, p), std::invalid_argument);
    const auto t = AdoptionParams::theoretical();
    EXPECT_EQ(t.beta0, 0.02);
    EXPECT_EQ(t.omega, 0.4);
    EXPECT_EQ(t.beta_size, 0.2);
    EXPECT_EQ(t.beta_milk, 0.2);
}

TEST(Dynamics, PropertyProbabilityClampedAndMonotone)
{
    std::mt19937_64 rng(61);
    std::uniform_real_distribution<double> u(0.0, 1.0), coef(-1.0, 2.0);
    for (int trial = 0; trial < 2000; ++trial) {
        AdoptionParams p{coef(rng), coef(rng), coef(rng), coef(rng), coef(rng)};
        const double peer = u(rng), size = u(rng), milk = u(rng);
        const double prob = adoption_probability(peer, size, milk, p);
        EXPECT_GE(prob, 0.0);
        EXPECT_LE(prob, 1.0);
        const double raw = p.beta0 + p.omega * peer + p.beta_size * size + p.beta_milk * milk + p.policy_delta;
        EXPECT_DOUBLE_EQ(prob, std::clamp(raw, 0.0, 1.0));
        AdoptionParams q = p;
        q.beta0 += u(rng);
        q.policy_delta += u(rng);
        q.omega += u(rng);
        EXPECT_GE(adoption_probability(peer, size, milk, q), prob);
    }
}

TEST(Dynamics, SeedInitialAdopters)
{
    RunRng rng(1);
    const auto s = seed_initial_adopters(295, 0.01, rng);
    EXPECT_EQ(std::count(s.adopted.begin(), s.adopted.end(), 1), 3);
    EXPECT_EQ(s.year, 0);
    RunRng rng2(1);
    EXPECT_EQ(seed_initial_adopters(295, 0.01, rng2).adopted, s.adopted);
    RunRng rng3(1);
    const auto none = seed_initial_adopters(295, 0.0, rng3);
    EXPECT_EQ(std::count(none.adopted.begin(), none.adopted.end(), 1), 0);
    EXPECT_THROW(seed_initial_adopters(10, 1.0, rng3), std::invalid_argument);
}

TEST(Dynamics, SeedsVaryAcrossRuns)
{
    RunRng a(derive_seed(1, kDefaultSeedFamily, 0)), b(derive_seed(1, kDefaultSeedFamily, 1));
    EXPECT_NE(seed_initial_adopters(295, 0.05, a).adopted, seed_initial_adopters(295, 0.05, b).adopted);
}

TEST(Dynamics, StepKeepsAdoptersAndAdvancesYear)
{
    const auto& w = world();
    RunRng rng(3);
    SimState all{4, AdoptionFlags(295, 1)};
    const auto next = step_year(all, w.pop, w.net, AdoptionParams{}, rng);
    EXPECT_EQ(next.year, 5);
    EXPECT_EQ(next.adopted, all.adopted);
}

TEST(Dynamics, ZeroProbabilityNeverAdopts)
{
    const auto& w = world();
    AdoptionParams zero{0.0, 0.0, 0.0, 0.0, 0.0};
    RunRng rng(5);
    SimState s = seed_initial_adopters(295, 0.01, rng);
    const auto start = s.adopted;
    for (int t = 0; t < 15; ++t) {
        s = step_year(s, w.pop, w.net, zero, rng);
    }
    EXPECT_EQ(s.adopted, start);
}

TEST(Dynamics, StepMatchesBinomialExpectation)
{
    const auto& w = world();
    RunRng seed_rng(7);
    const SimState start = seed_initial_adopters(295, 0.01, seed_rng);
    AdoptionParams params;
    params.policy_delta = 0.08;
    double expected = 0.0, variance = 0.0;
    for (std::size_t i = 0; i < 295; ++i) {
        if (start.adopted[i]) {
            continue;
        }
        double peer = 0.0;
        for (auto j : w.net.neighbors(i)) {
            peer += start.adopted[j];
        }
        peer /= static_cast<double>(w.net.degree(i));
        const double p = std::clamp(params.beta0 + params.omega * peer + params.beta_size * w.pop.size_norm()[i] +
                                        params.beta_milk * w.pop.milk_norm()[i] + params.policy_delta,
                                    0.0, 1.0);
        expected += p;
        variance += p * (1.0 - p);
    }
    constexpr int draws = 10000;
    RunRng rng(11);
    double total = 0.0;
    for (int d = 0; d < draws; ++d) {
        const auto next = step_year(start, w.pop, w.net, params, rng);
        total += static_cast<double>(std::count(next.adopted.begin(), next.adopted.end(), 1) -
                                     std::count(start.adopted.begin(), start.adopted.end(), 1));
    }
    const double se = std::sqrt(variance / draws);
    EXPECT_NEAR(total / draws, expected, 3.0 * se);
}

TEST(Dynamics, PeerSignalIsLagged)
{
    std::vector<Farm> farms;
    for (int i = 0; i < 10; ++i) {
        farms.push_back(testing::make_farm(i, 10.0));
    }
    const Population pop(farms);
    const auto ring = watts_strogatz(10, 2, 0.0, 1);
    AdoptionParams contagion{0.0, 1.0, 0.0, 0.0, 0.0};
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        SimState s{0, AdoptionFlags(10, 0)};
        s.adopted[0] = 1;
        RunRng rng(seed);
        const auto next = step_year(s, pop, ring, contagion, rng);
        for (std::size_t i = 2; i <= 8; ++i) {
            EXPECT_EQ(next.adopted[i], 0) << "farm " << i << " adopted without an adopting neighbor last year";
        }
    }
}

TEST(Dynamics, SubsidyRunStartsAtSeedShareAndNeverDeclines)
{
    const auto& w = world();
    const auto traj = run_scenario(default_config(PolicyKind::subsidy), w.pop, w.net, 42);
    ASSERT_EQ(traj.years.size(), 16u);
    EXPECT_EQ(traj.horizon(), 15);
    EXPECT_DOUBLE_EQ(traj.years[0].adoption_fraction, 3.0 / 295.0);
    const auto a = traj.adoption();
    EXPECT_TRUE(std::is_sorted(a.begin(), a.end()));
    const auto sub = traj.subsidy();
    EXPECT_TRUE(std::is_sorted(sub.begin(), sub.end()));
    for (const auto& rec : traj.years) {
        EXPECT_EQ(rec.tax_eur, 0.0);
    }
}

TEST(Dynamics, RunIsDeterministic)
{
    const auto& w = world();
    const auto cfg = default_config(PolicyKind::carbon_tax);
    EXPECT_EQ(trajectory_to_csv(run_scenario(cfg, w.pop, w.net, 9)), trajectory_to_csv(run_scenario(cfg, w.pop, w.net, 9)));
    EXPECT_NE(trajectory_to_csv(run_scenario(cfg, w.pop, w.net, 9)), trajectory_to_csv(run_scenario(cfg, w.pop, w.net, 10)));
}

TEST(Dynamics, TrajectoryCsvHeader)
{
    const auto& w = world();
    const auto csv = trajectory_to_csv(run_scenario(default_config(), w.pop, w.net, 1));
    EXPECT_EQ(csv.substr(0, csv.find('\n')), "year,adoption_fraction,emissions_gg,tax_eur,subsidy_eur");
    EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 17);
}

TEST(Dynamics, TaxRunNeedsEmbeddedIntensity)
{
    const auto& w = world();
    auto cfg = default_config(PolicyKind::carbon_tax);
    cfg.fertilizers.can.embedded_intensity.reset();
    EXPECT_THROW(run_scenario(cfg, w.pop, w.net, 1), ConfigError);
}

TEST(Dynamics, PolicyDeltaRules)
{
    auto cfg = default_config(PolicyKind::carbon_tax);
    EXPECT_EQ(policy_delta(cfg), 0.08);
    cfg.fertilizers.can.price = 50.0;
    cfg.fertilizers.pu.price = 2000.0;
    EXPECT_EQ(policy_delta(cfg), 0.0);
    cfg = default_config(PolicyKind::subsidy);
    EXPECT_DOUBLE_EQ(policy_delta(cfg), 0.15);
    cfg.policy.subsidy_rate = 150.0;
    EXPECT_DOUBLE_EQ(policy_delta(cfg), 0.1125);
    cfg.policy.subsidy_rate = 0.0;
    EXPECT_EQ(policy_delta(cfg), 0.0);
    EXPECT_EQ(policy_delta(default_config()), 0.0);
}

TEST(Dynamics, SnapshotsAgreeWithTrajectory)
{
    const auto& w = world();
    const auto traj = run_scenario(default_config(PolicyKind::subsidy), w.pop, w.net, 77);
    std::size_t previous = 0;
    for (int year : {1, 5, 15}) {
        const auto snap = snapshot(traj.states[static_cast<std::size_t>(year)], year, w.net, w.pop);
        EXPECT_DOUBLE_EQ(static_cast<double>(snap.adopter_count()) / 295.0,
                         traj.years[static_cast<std::size_t>(year)].adoption_fraction);
        EXPECT_GE(snap.adopter_count(), previous);
        previous = snap.adopter_count();
    }
}

TEST(Dynamics, NoPeerInfluenceIsPathwiseSlower)
{
    const auto& w = world();
    const auto with = default_config();
    auto without = with;
    without.adoption.omega = 0.0;
    double gap = 0.0;
    for (std::size_t r = 0; r < 50; ++r) {
        const auto seed = derive_seed(1, kDefaultSeedFamily, r);
        const auto a = run_scenario(with, w.pop, w.net, seed);
        const auto b = run_scenario(without, w.pop, w.net, seed);
        for (std::size_t t = 0; t < a.states.size(); ++t) {
            EXPECT_TRUE(subset_of(b.states[t], a.states[t]));
            gap += a.years[t].adoption_fraction - b.years[t].adoption_fraction;
        }
    }
    EXPECT_GT(gap, 0.0);
}

TEST(Dynamics, PropertyParameterMonotonicityWithCommonRandomNumbers)
{
    const auto& w = world();
    std::mt19937_64 rng(67);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 60; ++trial) {
        ScenarioConfig lo = default_config(trial % 2 ? PolicyKind::subsidy : PolicyKind::none);
        lo.adoption = {0.01 * u(rng), u(rng), 0.1 * u(rng), 0.1 * u(rng), 0.0};
        lo.policy.subsidy_rate = 200.0 * u(rng);
        ScenarioConfig hi = lo;
        hi.adoption.beta0 += 0.01 * u(rng);
        hi.adoption.omega += 0.2 * u(rng);
        hi.policy.subsidy_rate += 100.0 * u(rng);
        const auto seed = rng();
        const auto a = run_scenario(lo, w.pop, w.net, seed);
        const auto b = run_scenario(hi, w.pop, w.net, seed);
        for (std::size_t t = 0; t < a.states.size(); ++t) {
            EXPECT_TRUE(subset_of(a.states[t], b.states[t])) << "trial " << trial << " year " << t;
        }
    }
}

TEST(Dynamics, ConfigValidationNamesField)
{
    auto cfg = default_config();
    cfg.horizon = 0;
    try {
        cfg.validate();
        FAIL();
    }
    catch (const ConfigError& e) {
        EXPECT_NE(std::string(e.what()).find("dynamics.horizon"), std::string::npos);
    }
    cfg = default_config();
    cfg.initial_adopter_fraction = 1.0;
    EXPECT_THROW(cfg.validate(), ConfigError);
}

} // namespace
} // namespace fertdiff
