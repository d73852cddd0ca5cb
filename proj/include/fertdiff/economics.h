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
#ifndef FERTDIFF_ECONOMICS_H
#define FERTDIFF_ECONOMICS_H

#include "fertdiff/population.h"

#include <span>
#include <string>

namespace fertdiff
{

/// Market prices, EUR per tonne of product (lime per tonne applied).
struct PriceTable {
    double can = 0.0;
    double urea = 0.0;
    double pu = 0.0;
    double p = 0.0;
    double k = 0.0;
    double lime = 0.0;

    void validate() const;
};

/// Product masses of one farm, kg (lime in t).
struct FertilizerMix {
    double can_kg = 0.0;
    double urea_kg = 0.0;
    double pu_kg = 0.0;
    double p_kg = 0.0;
    double k_kg = 0.0;
    double lime_t = 0.0;
};

FertilizerMix mix_of(const Farm& farm);

/// EUR cost of one mix.
double mix_cost(const FertilizerMix& mix, const PriceTable& prices);

/// Sector fertilizer expenditure with the recorded product mix.
double baseline_cost(const Population& pop, const PriceTable& prices);

enum class SubstitutionMode
{
    /// PU_new = PU + alpha * CAN (product mass moves across unchanged)
    as_written,
    /// PU_new = PU + alpha * CAN * NC_CAN / NC_PU (nitrogen mass conserved)
    n_equivalent,
};

/// Moves share alpha of CAN into PU; urea, P, K and lime are untouched.
FertilizerMix apply_substitution(const Farm& farm, double alpha, SubstitutionMode mode = SubstitutionMode::as_written,
                                 double nc_can = 0.27, double nc_pu = 0.46);

/// Sector fertilizer expenditure after substitution at share alpha.
double policy_cost(const Population& pop, double alpha, const PriceTable& prices,
                   SubstitutionMode mode = SubstitutionMode::as_written, double nc_can = 0.27, double nc_pu = 0.46);

/// Cumulative abatement in t CO2-eq between two Gg/year series.
double total_abatement(std::span<const double> base_gg, std::span<const double> policy_gg);

struct AbatementReport {
    double total_abatement_t = 0.0;
    double delta_cost = 0.0;
    double government_expenditure = 0.0;
    double mac = 0.0;
    double private_cost = 0.0;
    double social_cost = 0.0;

    std::string to_json() const;
    std::string to_text() const;
};

/// Private cost = delta_cost / A; social cost additionally internalizes government spending.
AbatementReport abatement_costs(double delta_cost, double abatement_t, double gov_expenditure);

/**
 * Farm-gate milk price components. Composition percentages multiply the
 * per-unit component prices to give a per-kg value, which is converted to a
 * per-litre figure before processing deduction and VAT.
 */
struct MilkPriceParams {
    double protein_price = 0.0;
    double fat_price = 0.0;
    double kg_per_litre = 1.0297;
    double processing_cost = 0.0;
    double vat_multiplier = 1.044594;
    double bonus = 0.0;
    bool bonus_enabled = true;
};

double milk_price_per_litre(const Farm& farm, const MilkPriceParams& params);

/// Revenue for milk_yield_litres delivered.
double milk_revenue(const Farm& farm, const MilkPriceParams& params, double milk_yield_litres);

} // namespace fertdiff

#endif // FERTDIFF_ECONOMICS_H
