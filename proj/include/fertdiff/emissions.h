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
#ifndef FERTDIFF_EMISSIONS_H
#define FERTDIFF_EMISSIONS_H

#include "fertdiff/population.h"

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>

namespace fertdiff
{

enum class FertilizerKind
{
    CAN,
    UREA,
    PU,
    P,
    K,
};

std::string_view to_string(FertilizerKind kind);

/// Lowercase name used in configuration keys ("can", "pu", ...).
std::string_view config_name(FertilizerKind kind);

/**
 * Nitrogen fertilizer product. embedded_intensity (t CO2 per t product) has no
 * default and must come from configuration before any tax is computed.
 */
struct FertilizerSpec {
    FertilizerKind kind = FertilizerKind::CAN;
    double n_content = 0.0; ///< mass fraction of N
    double ef = 0.0;        ///< kg N2O-N per kg N applied
    std::optional<double> embedded_intensity;
    double price = 0.0; ///< EUR per t product
};

/// The three nitrogen products the model distinguishes.
struct FertilizerTable {
    FertilizerSpec can{FertilizerKind::CAN, 0.27, 0.0149, std::nullopt, 0.0};
    FertilizerSpec urea{FertilizerKind::UREA, 0.46, 0.0025, std::nullopt, 0.0};
    FertilizerSpec pu{FertilizerKind::PU, 0.46, 0.0040, std::nullopt, 0.0};

    /// Throws ConfigError if a spec breaks 0 < n_content <= 1, ef >= 0 or price >= 0.
    void validate() const;
};

struct EmissionConstants {
    static constexpr double n2o_mass_ratio = 44.0 / 28.0;
    static constexpr double gwp_n2o = 298.0;
};

/// Tonnes of product delivering n_kg of nitrogen.
double fertilizer_quantity(double n_kg, const FertilizerSpec& spec);

/// Direct N2O (kg) from applying n_kg of nitrogen as this product.
double n2o_direct(double n_kg, const FertilizerSpec& spec);

/// kg CO2-eq of a mass of N2O.
double co2_equivalent(double n2o_kg);

/// Direct fertilizer CO2-eq (kg) of one farm given its adoption state.
double farm_fertilizer_co2eq(const Farm& farm, bool adopted, const FertilizerTable& table);

/// Sector direct fertilizer emissions in Gg CO2-eq; adopters use PU, others CAN.
double sector_emissions(const Population& pop, std::span<const std::uint8_t> adopted, const FertilizerTable& table);

/// kg CO2-eq per kg FPCM.
double carbon_intensity(const Farm& farm);

/// ci_base * (1 - delta * mean_adoption_final).
double post_policy_intensity(double ci_base, double delta, double mean_adoption_final);

/// Whole-farm intensity reduction at full adoption: the fertilizer EF cut scaled by the fertilizer share.
double intensity_reduction_at_full_adoption(const FertilizerTable& table, double fertilizer_share);

struct IntensityRecord {
    double ci_base = 0.0;
    double ci_post = 0.0;
    double delta = 0.0;
    double mean_adoption_final = 0.0;
};

} // namespace fertdiff

#endif // FERTDIFF_EMISSIONS_H
