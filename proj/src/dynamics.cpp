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
#include "fertdiff/io.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace fertdiff
{

AdoptionParams AdoptionParams::theoretical()
{
    return {0.02, 0.4, 0.2, 0.2, 0.0};
}

void AdoptionParams::validate() const
{
    const std::pair<const char*, double> fields[] = {{"beta0", beta0},         {"omega", omega},
                                                      {"beta_size", beta_size}, {"beta_milk", beta_milk},
                                                      {"policy_delta", policy_delta}};
    for (auto [name, v] : fields) {
        if (!std::isfinite(v)) {
            throw ConfigError(std::string("dynamics.") + name + " must be finite");
        }
    }
}

double adoption_probability(double peer, double size_norm, double milk_norm, const AdoptionParams& params)
{
    if (!std::isfinite(peer) || !std::isfinite(size_norm) || !std::isfinite(milk_norm)) {
        throw std::invalid_argument("adoption_probability: non-finite input");
    }
    params.validate();
    const double raw = params.beta0 + params.omega * peer + params.beta_size * size_norm +
                       params.beta_milk * milk_norm + params.policy_delta;
    return std::clamp(raw, 0.0, 1.0);
}

void ScenarioConfig::validate() const
{
    if (horizon < 1) {
        throw ConfigError("dynamics.horizon must be at least 1");
    }
    if (!(initial_adopter_fraction >= 0.0 && initial_adopter_fraction < 1.0)) {
        throw ConfigError("dynamics.initial_adopter_fraction must lie in [0, 1)");
    }
    adoption.validate();
    policy.validate();
    fertilizers.validate();
    if (!(response.subsidy_reference_rate > 0.0)) {
        throw ConfigError("policy.subsidy_reference_rate must be positive");
    }
    if (!std::isfinite(response.tax_delta) || !std::isfinite(response.subsidy_delta)) {
        throw ConfigError("policy.tax_delta and policy.subsidy_delta must be finite");
    }
}

double policy_delta(const ScenarioConfig& config)
{
    switch (config.policy.kind) {
    case PolicyKind::none:
        return 0.0;
    case PolicyKind::carbon_tax:
        return tax_makes_can_dearer(config.policy, config.fertilizers) ? config.response.tax_delta : 0.0;
    case PolicyKind::subsidy:
        return config.response.subsidy_delta * config.policy.subsidy_rate / config.response.subsidy_reference_rate;
    }
    return 0.0;
}

SimState seed_initial_adopters(std::size_t n, double fraction, RunRng& rng)
{
    if (!(fraction >= 0.0 && fraction < 1.0)) {
        throw std::invalid_argument("seed_initial_adopters: fraction must lie in [0, 1)");
    }
    SimState state;
    state.adopted.assign(n, 0);
    const auto count = static_cast<std::size_t>(std::llround(static_cast<double>(n) * fraction));
    std::vector<std::size_t> ids(n);
    std::iota(ids.begin(), ids.end(), std::size_t{0});
    std::vector<std::size_t> chosen;
    chosen.reserve(count);
    std::sample(ids.begin(), ids.end(), std::back_inserter(chosen), count, rng);
    for (auto i : chosen) {
        state.adopted[i] = 1;
    }
    return state;
}

SimState step_year(const SimState& state, const Population& pop, const SocialNetwork& net,
                   const AdoptionParams& params, RunRng& rng)
{
    if (state.adopted.size() != pop.size() || net.size() != pop.size()) {
        throw std::invalid_argument("step_year: population, network and state sizes differ");
    }
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    SimState next{state.year + 1, state.adopted};
    for (std::size_t i = 0; i < pop.size(); ++i) {
        const double u = unit(rng);
        if (state.adopted[i]) {
            continue;
        }
        const double peer = peer_signal(i, state.adopted, net);
        const double p = adoption_probability(peer, pop.size_norm()[i], pop.milk_norm()[i], params);
        if (u < p) {
            next.adopted[i] = 1;
        }
    }
    return next;
}

namespace
{

YearRecord record_year(const SimState& state, const Population& pop, const ScenarioConfig& config)
{
    YearRecord rec;
    rec.year = state.year;
    const auto adopters = std::count(state.adopted.begin(), state.adopted.end(), std::uint8_t{1});
    rec.adoption_fraction = pop.empty() ? 0.0 : static_cast<double>(adopters) / static_cast<double>(pop.size());
    rec.emissions_gg = sector_emissions(pop, state.adopted, config.fertilizers);
    const auto flow = policy_cashflow(pop, state.adopted, config.policy, config.fertilizers);
    rec.tax_eur = flow.tax_total;
    rec.subsidy_eur = flow.subsidy_total;
    return rec;
}

std::vector<double> column(const Trajectory& traj, double YearRecord::*field)
{
    std::vector<double> out;
    out.reserve(traj.years.size());
    for (const auto& rec : traj.years) {
        out.push_back(rec.*field);
    }
    return out;
}

} // namespace

std::vector<double> Trajectory::adoption() const
{
    return column(*this, &YearRecord::adoption_fraction);
}
std::vector<double> Trajectory::emissions() const
{
    return column(*this, &YearRecord::emissions_gg);
}
std::vector<double> Trajectory::tax() const
{
    return column(*this, &YearRecord::tax_eur);
}
std::vector<double> Trajectory::subsidy() const
{
    return column(*this, &YearRecord::subsidy_eur);
}

Trajectory run_scenario(const ScenarioConfig& config, const Population& pop, const SocialNetwork& net,
                        std::uint64_t run_seed)
{
    config.validate();
    if (net.size() != pop.size()) {
        throw std::invalid_argument("run_scenario: network has " + std::to_string(net.size()) +
                                    " nodes but population has " + std::to_string(pop.size()) + " farms");
    }
    RunRng rng(run_seed);
    Trajectory traj;
    traj.seed = run_seed;
    traj.years.reserve(static_cast<std::size_t>(config.horizon) + 1);
    traj.states.reserve(static_cast<std::size_t>(config.horizon) + 1);

    SimState state = seed_initial_adopters(pop.size(), config.initial_adopter_fraction, rng);
    traj.years.push_back(record_year(state, pop, config));
    traj.states.push_back(state.adopted);

    AdoptionParams params = config.adoption;
    while (state.year < config.horizon) {
        // prices are static, but the tax trigger is re-evaluated each year
        params.policy_delta = policy_delta(config);
        state = step_year(state, pop, net, params, rng);
        traj.years.push_back(record_year(state, pop, config));
        traj.states.push_back(state.adopted);
    }
    return traj;
}

std::string trajectory_to_csv(const Trajectory& traj)
{
    std::ostringstream out;
    out << "year,adoption_fraction,emissions_gg,tax_eur,subsidy_eur\n";
    for (const auto& rec : traj.years) {
        out << rec.year << ',' << format_double(rec.adoption_fraction) << ',' << format_double(rec.emissions_gg) << ','
            << format_double(rec.tax_eur) << ',' << format_double(rec.subsidy_eur) << '\n';
    }
    return out.str();
}

} // namespace fertdiff
