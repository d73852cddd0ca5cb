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
#ifndef FERTDIFF_POPULATION_H
#define FERTDIFF_POPULATION_H

#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace fertdiff
{

/**
 * One dairy farm agent. Masses are kg/year unless noted.
 * total_emissions_kg is an exogenous whole-farm GHG total (kg CO2-eq/year)
 * and is only used for carbon-intensity analytics.
 */
struct Farm {
    std::int64_t id = 0;
    double land_area_ha = 0.0;
    double milk_production_kg = 0.0;
    double livestock_units = 0.0;
    double nitrogen_kg = 0.0;
    double can_kg = 0.0;
    double urea_kg = 0.0;
    double pu_kg = 0.0;
    double p_kg = 0.0;
    double k_kg = 0.0;
    double lime_t = 0.0;
    double total_emissions_kg = 0.0;
    double fpcm_kg = 0.0;
    double protein_pct = 0.0;
    double fat_pct = 0.0;

    bool operator==(const Farm&) const = default;
};

/// CSV column names, in file order.
const std::vector<std::string>& farm_field_names();

/// Throws std::invalid_argument naming the farm and field if a Farm violates its invariants.
void validate_farm(const Farm& farm);

/// Divides by the maximum so the largest entry becomes exactly 1. Requires a positive maximum.
std::vector<double> max_normalize(std::span<const double> values);

/**
 * Immutable farm population with max-normalized size and milk scores.
 * Shared read-only by all simulation runs.
 */
class Population
{
public:
    Population() = default;
    explicit Population(std::vector<Farm> farms);

    std::size_t size() const
    {
        return m_farms.size();
    }
    bool empty() const
    {
        return m_farms.empty();
    }
    const std::vector<Farm>& farms() const
    {
        return m_farms;
    }
    const Farm& operator[](std::size_t i) const
    {
        return m_farms[i];
    }
    const std::vector<double>& size_norm() const
    {
        return m_size_norm;
    }
    const std::vector<double>& milk_norm() const
    {
        return m_milk_norm;
    }

    /// Farms at the given indices, keeping the normalized scores of this population.
    Population subset(std::span<const std::size_t> indices) const;

private:
    std::vector<Farm> m_farms;
    std::vector<double> m_size_norm;
    std::vector<double> m_milk_norm;
};

/// Maps each Farm field name to the header name used in the file. Missing entries map to themselves.
using ColumnMap = std::map<std::string, std::string>;

/// Loads a population CSV. Row order is preserved. Throws ParseError naming row/column.
Population load_population(const std::filesystem::path& path, const ColumnMap& schema = {});

/// Serializes with the canonical header; values round-trip exactly.
std::string population_to_csv(const Population& pop);

/**
 * Constants of the synthetic farm generator. These are stand-ins for an
 * unpublished dataset, chosen to land in plausible Irish dairy envelopes
 * (sector mean carbon intensity near 1.0 kg CO2-eq/kg FPCM).
 */
struct SyntheticPopulationParams {
    double area_median_ha = 55.0;
    double area_sigma_log = 0.45;
    double area_min_ha = 10.0;
    double area_max_ha = 300.0;
    double milk_yield_min = 5500.0; ///< kg milk per ha
    double milk_yield_max = 11500.0;
    double n_rate_min = 150.0; ///< kg N per ha
    double n_rate_max = 250.0;
    double stocking_min = 1.6; ///< LU per ha
    double stocking_max = 2.8;
    double p_rate_min = 10.0; ///< kg P product per ha
    double p_rate_max = 30.0;
    double k_rate_min = 20.0; ///< kg K product per ha
    double k_rate_max = 50.0;
    double lime_rate_min = 0.1; ///< t lime per ha
    double lime_rate_max = 0.6;
    double fat_min = 3.8; ///< percent
    double fat_max = 4.8;
    double protein_min = 3.2;
    double protein_max = 3.8;
    double intensity_mean = 1.0; ///< kg CO2-eq per kg FPCM
    double intensity_sd = 0.2;
    double intensity_min = 0.6;
    double intensity_max = 1.8;
    double can_n_content = 0.27; ///< all nitrogen is supplied as CAN at baseline
};

/// Fat-and-protein-corrected milk (IDF formula) for a milk mass and composition in percent.
double fpcm_from_milk(double milk_kg, double fat_pct, double protein_pct);

/// Deterministic synthetic population for (n, seed). Throws std::invalid_argument when n < 2.
Population synthesize_population(std::size_t n, std::uint64_t seed,
                                 const SyntheticPopulationParams& params = {});

/// Per-farm size-quartile labels 0..3 (0 = smallest land area).
struct QuartileAssignment {
    std::vector<int> labels;

    /// Indices of farms with the given label, in population order.
    std::vector<std::size_t> members(int quartile) const;
};

/// Ranks by land area (ties by id) and cuts the ranking into four near-equal contiguous groups.
QuartileAssignment assign_quartiles(const Population& pop);

} // namespace fertdiff

#endif // FERTDIFF_POPULATION_H
