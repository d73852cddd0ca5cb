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
#ifndef FERTDIFF_DYNAMICS_H
#define FERTDIFF_DYNAMICS_H

#include "fertdiff/emissions.h"
#include "fertdiff/network.h"
#include "fertdiff/policy.h"
#include "fertdiff/population.h"

#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace fertdiff
{

/// Random stream owned by a single run.
using RunRng = std::mt19937_64;

/**
 * Coefficients of the linear adoption probability
 *   P = beta0 + omega * peer + beta_size * size_norm + beta_milk * milk_norm + policy_delta,
 * clamped to [0, 1].
 */
struct AdoptionParams {
    double beta0 = 0.005;
    double omega = 0.85;
    double beta_size = 0.04;
    double beta_milk = 0.04;
    double policy_delta = 0.0;

    /// The uncalibrated coefficient set (0.02, 0.4, 0.2, 0.2).
    static AdoptionParams theoretical();

    void validate() const;
};

double adoption_probability(double peer, double size_norm, double milk_norm, const AdoptionParams& params);

/// How each instrument shifts the adoption probability.
struct PolicyResponse {
    double tax_delta = 0.08;
    double subsidy_delta = 0.15;          ///< shift at the reference rate
    double subsidy_reference_rate = 200.0; ///< EUR per t PU; the shift scales linearly with the rate
};

struct ScenarioConfig {
    int horizon = 15;
    PolicyInstrument policy;
    double initial_adopter_fraction = 0.01;
    AdoptionParams adoption;
    PolicyResponse response;
    FertilizerTable fertilizers;

    /// Throws ConfigError naming the first invalid field.
    void validate() const;
};

/// Probability shift of the active instrument. The tax shift only applies while taxed CAN is dearer per t N.
double policy_delta(const ScenarioConfig& config);

struct SimState {
    int year = 0;
    AdoptionFlags adopted;
};

/// Marks round(n * fraction) distinct farms, drawn uniformly, as adopters at year 0.
SimState seed_initial_adopters(std::size_t n, double fraction, RunRng& rng);

/**
 * Advances one year. Peer signals come from the previous year's flags.
 * One uniform is drawn per farm in index order (adopters' draws are
 * discarded) so that runs sharing a stream stay coupled draw-for-draw.
 */
SimState step_year(const SimState& state, const Population& pop, const SocialNetwork& net,
                   const AdoptionParams& params, RunRng& rng);

struct YearRecord {
    int year = 0;
    double adoption_fraction = 0.0;
    double emissions_gg = 0.0;
    double tax_eur = 0.0;
    double subsidy_eur = 0.0;
};

/// One run: records for years 0..T and the adoption flags of each year.
struct Trajectory {
    std::uint64_t seed = 0;
    std::vector<YearRecord> years;
    std::vector<AdoptionFlags> states;

    int horizon() const
    {
        return years.empty() ? 0 : years.back().year;
    }
    std::vector<double> adoption() const;
    std::vector<double> emissions() const;
    std::vector<double> tax() const;
    std::vector<double> subsidy() const;
};

/// Seeds year 0 and runs T annual steps. Deterministic for (config, run_seed).
Trajectory run_scenario(const ScenarioConfig& config, const Population& pop, const SocialNetwork& net,
                        std::uint64_t run_seed);

/// Columns: year, adoption_fraction, emissions_gg, tax_eur, subsidy_eur.
std::string trajectory_to_csv(const Trajectory& traj);

} // namespace fertdiff

#endif // FERTDIFF_DYNAMICS_H
