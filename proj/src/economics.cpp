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
#include "fertdiff/io.h"

#include <json.hpp>

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace fertdiff
{

void PriceTable::validate() const
{
    const std::pair<const char*, double> fields[] = {{"can", can}, {"urea", urea}, {"pu", pu}, {"p", p}, {"k", k}, {"lime", lime}};
    for (auto [name, v] : fields) {
        if (!(v >= 0.0) || !std::isfinite(v)) {
            throw ConfigError(std::string("prices.") + name + " must be non-negative");
        }
    }
}

FertilizerMix mix_of(const Farm& farm)
{
    return {farm.can_kg, farm.urea_kg, farm.pu_kg, farm.p_kg, farm.k_kg, farm.lime_t};
}

double mix_cost(const FertilizerMix& mix, const PriceTable& prices)
{
    return prices.can * mix.can_kg / 1000.0 + prices.urea * mix.urea_kg / 1000.0 + prices.pu * mix.pu_kg / 1000.0 +
           prices.p * mix.p_kg / 1000.0 + prices.k * mix.k_kg / 1000.0 + prices.lime * mix.lime_t;
}

double baseline_cost(const Population& pop, const PriceTable& prices)
{
    double total = 0.0;
    for (const auto& farm : pop.farms()) {
        total += mix_cost(mix_of(farm), prices);
    }
    return total;
}

FertilizerMix apply_substitution(const Farm& farm, double alpha, SubstitutionMode mode, double nc_can, double nc_pu)
{
    if (!(alpha >= 0.0 && alpha <= 1.0)) {
        throw std::invalid_argument("apply_substitution: alpha must lie in [0, 1]");
    }
    FertilizerMix mix = mix_of(farm);
    const double moved = alpha * farm.can_kg;
    mix.can_kg = farm.can_kg * (1.0 - alpha);
    if (mode == SubstitutionMode::as_written) {
        mix.pu_kg = farm.pu_kg + moved;
    }
    else {
        if (!(nc_can > 0.0 && nc_pu > 0.0)) {
            throw std::invalid_argument("apply_substitution: nitrogen contents must be positive");
        }
        mix.pu_kg = farm.pu_kg + moved * nc_can / nc_pu;
    }
    return mix;
}

double policy_cost(const Population& pop, double alpha, const PriceTable& prices, SubstitutionMode mode, double nc_can,
                   double nc_pu)
{
    double total = 0.0;
    for (const auto& farm : pop.farms()) {
        total += mix_cost(apply_substitution(farm, alpha, mode, nc_can, nc_pu), prices);
    }
    return total;
}

double total_abatement(std::span<const double> base_gg, std::span<const double> policy_gg)
{
    if (base_gg.size() != policy_gg.size()) {
        throw std::invalid_argument("total_abatement: series lengths differ (" + std::to_string(base_gg.size()) +
                                    " vs " + std::to_string(policy_gg.size()) + ")");
    }
    double sum = 0.0;
    for (std::size_t t = 0; t < base_gg.size(); ++t) {
        sum += base_gg[t] - policy_gg[t];
    }
    return sum * 1.0e3;
}

AbatementReport abatement_costs(double delta_cost, double abatement_t, double gov_expenditure)
{
    if (!(abatement_t > 0.0)) {
        throw NumericError("abatement_costs: abatement must be positive to form a cost per tonne");
    }
    AbatementReport r;
    r.total_abatement_t = abatement_t;
    r.delta_cost = delta_cost;
    r.government_expenditure = gov_expenditure;
    r.mac = delta_cost / abatement_t;
    r.private_cost = r.mac;
    r.social_cost = (delta_cost + gov_expenditure) / abatement_t;
    return r;
}

std::string AbatementReport::to_json() const
{
    nlohmann::ordered_json j;
    j["total_abatement_t"] = total_abatement_t;
    j["delta_cost_eur"] = delta_cost;
    j["government_expenditure_eur"] = government_expenditure;
    j["mac_eur_per_t"] = mac;
    j["private_cost_eur_per_t"] = private_cost;
    j["social_cost_eur_per_t"] = social_cost;
    return j.dump(2) + "\n";
}

std::string AbatementReport::to_text() const
{
    std::ostringstream out;
    out << "total_abatement_t " << format_double(total_abatement_t) << '\n'
        << "delta_cost_eur " << format_double(delta_cost) << '\n'
        << "government_expenditure_eur " << format_double(government_expenditure) << '\n'
        << "mac_eur_per_t " << format_double(mac) << '\n'
        << "private_cost_eur_per_t " << format_double(private_cost) << '\n'
        << "social_cost_eur_per_t " << format_double(social_cost) << '\n';
    return out.str();
}

double milk_price_per_litre(const Farm& farm, const MilkPriceParams& params)
{
    if (farm.protein_pct < 0.0 || farm.fat_pct < 0.0 || params.protein_price < 0.0 || params.fat_price < 0.0) {
        throw std::invalid_argument("milk_price_per_litre: composition and prices must be non-negative");
    }
    const double component_value = farm.protein_pct * params.protein_price + farm.fat_pct * params.fat_price;
    const double bonus = params.bonus_enabled ? params.bonus : 0.0;
    return (component_value * params.kg_per_litre - params.processing_cost) * params.vat_multiplier + bonus;
}

double milk_revenue(const Farm& farm, const MilkPriceParams& params, double milk_yield_litres)
{
    return milk_price_per_litre(farm, params) * milk_yield_litres;
}

} // namespace fertdiff
