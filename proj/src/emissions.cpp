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

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace fertdiff
{

std::string_view to_string(FertilizerKind kind)
{
    switch (kind) {
    case FertilizerKind::CAN:
        return "CAN";
    case FertilizerKind::UREA:
        return "UREA";
    case FertilizerKind::PU:
        return "PU";
    case FertilizerKind::P:
        return "P";
    case FertilizerKind::K:
        return "K";
    }
    return "?";
}

std::string_view config_name(FertilizerKind kind)
{
    switch (kind) {
    case FertilizerKind::CAN:
        return "can";
    case FertilizerKind::UREA:
        return "urea";
    case FertilizerKind::PU:
        return "pu";
    case FertilizerKind::P:
        return "p";
    case FertilizerKind::K:
        return "k";
    }
    return "?";
}

void FertilizerTable::validate() const
{
    for (const auto* spec : {&can, &urea, &pu}) {
        const std::string name = "fertilizers." + std::string(config_name(spec->kind)) + "_";
        if (!(spec->n_content > 0.0 && spec->n_content <= 1.0)) {
            throw ConfigError(name + "n_content must lie in (0, 1]");
        }
        if (!(spec->ef >= 0.0) || !std::isfinite(spec->ef)) {
            throw ConfigError(name + "ef must be non-negative");
        }
        if (!(spec->price >= 0.0) || !std::isfinite(spec->price)) {
            throw ConfigError(name + "price must be non-negative");
        }
        if (spec->embedded_intensity && !(*spec->embedded_intensity >= 0.0)) {
            throw ConfigError(name + "embedded_intensity must be non-negative");
        }
    }
}

double fertilizer_quantity(double n_kg, const FertilizerSpec& spec)
{
    if (!(spec.n_content > 0.0)) {
        throw std::invalid_argument("fertilizer_quantity: nitrogen content must be positive");
    }
    if (!(n_kg >= 0.0)) {
        throw std::invalid_argument("fertilizer_quantity: nitrogen must be non-negative");
    }
    return (n_kg / 1000.0) / spec.n_content;
}

double n2o_direct(double n_kg, const FertilizerSpec& spec)
{
    if (!(n_kg >= 0.0)) {
        throw std::invalid_argument("n2o_direct: nitrogen must be non-negative");
    }
    return n_kg * spec.ef * EmissionConstants::n2o_mass_ratio;
}

double co2_equivalent(double n2o_kg)
{
    return n2o_kg * EmissionConstants::gwp_n2o;
}

double farm_fertilizer_co2eq(const Farm& farm, bool adopted, const FertilizerTable& table)
{
    return co2_equivalent(n2o_direct(farm.nitrogen_kg, adopted ? table.pu : table.can));
}

double sector_emissions(const Population& pop, std::span<const std::uint8_t> adopted, const FertilizerTable& table)
{
    if (adopted.size() != pop.size()) {
        throw std::invalid_argument("sector_emissions: adoption vector size does not match population");
    }
    double total_kg = 0.0;
    for (std::size_t i = 0; i < pop.size(); ++i) {
        total_kg += farm_fertilizer_co2eq(pop[i], adopted[i] != 0, table);
    }
    return total_kg / 1.0e6;
}

double carbon_intensity(const Farm& farm)
{
    if (!(farm.fpcm_kg > 0.0)) {
        throw std::invalid_argument("carbon_intensity: farm " + std::to_string(farm.id) + " has no FPCM output");
    }
    return farm.total_emissions_kg / farm.fpcm_kg;
}

double post_policy_intensity(double ci_base, double delta, double mean_adoption_final)
{
    if (!(ci_base >= 0.0) || !(delta >= 0.0) || !(mean_adoption_final >= 0.0 && mean_adoption_final <= 1.0)) {
        throw std::invalid_argument("post_policy_intensity: inputs out of range");
    }
    const double cut = delta * mean_adoption_final;
    if (cut > 1.0) {
        throw std::invalid_argument("post_policy_intensity: delta * adoption exceeds 1");
    }
    return ci_base * (1.0 - cut);
}

double intensity_reduction_at_full_adoption(const FertilizerTable& table, double fertilizer_share)
{
    if (!(fertilizer_share >= 0.0 && fertilizer_share <= 1.0)) {
        throw ConfigError("emissions.fertilizer_share must lie in [0, 1]");
    }
    if (!(table.can.ef > 0.0)) {
        throw ConfigError("fertilizers.can_ef must be positive to derive an intensity reduction");
    }
    const double ef_cut = 1.0 - table.pu.ef / table.can.ef;
    return std::max(0.0, ef_cut) * fertilizer_share;
}

} // namespace fertdiff
