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
#include "fertdiff/population.h"
#include "fertdiff/error.h"
#include "fertdiff/io.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numeric>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>

namespace fertdiff
{

namespace
{

// Field accessors in canonical column order (id handled separately).
struct FieldRef {
    const char* name;
    double Farm::*member;
};

constexpr FieldRef kNumericFields[] = {
    {"land_area_ha", &Farm::land_area_ha},
    {"milk_production_kg", &Farm::milk_production_kg},
    {"livestock_units", &Farm::livestock_units},
    {"nitrogen_kg", &Farm::nitrogen_kg},
    {"can_kg", &Farm::can_kg},
    {"urea_kg", &Farm::urea_kg},
    {"pu_kg", &Farm::pu_kg},
    {"p_kg", &Farm::p_kg},
    {"k_kg", &Farm::k_kg},
    {"lime_t", &Farm::lime_t},
    {"total_emissions_kg", &Farm::total_emissions_kg},
    {"fpcm_kg", &Farm::fpcm_kg},
    {"protein_pct", &Farm::protein_pct},
    {"fat_pct", &Farm::fat_pct},
};

std::optional<std::string> farm_violation(const Farm& farm)
{
    for (const auto& f : kNumericFields) {
        const double v = farm.*(f.member);
        if (!std::isfinite(v) || v < 0.0) {
            return std::string(f.name) + " must be finite and non-negative (got " + format_double(v) + ")";
        }
    }
    if (!(farm.land_area_ha > 0.0)) {
        return std::string("land_area_ha must be positive");
    }
    if (!(farm.fpcm_kg > 0.0)) {
        return std::string("fpcm_kg must be positive");
    }
    return std::nullopt;
}

std::int64_t parse_id(std::string_view cell, std::size_t row)
{
    std::int64_t id = 0;
    auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), id);
    if (cell.empty() || ec != std::errc() || ptr != cell.data() + cell.size()) {
        throw ParseError("row " + std::to_string(row) + ", column 'id': not an integer: '" + std::string(cell) +
                         "'");
    }
    return id;
}

} // namespace

const std::vector<std::string>& farm_field_names()
{
    static const std::vector<std::string> names = [] {
        std::vector<std::string> n{"id"};
        for (const auto& f : kNumericFields) {
            n.emplace_back(f.name);
        }
        return n;
    }();
    return names;
}

void validate_farm(const Farm& farm)
{
    if (auto msg = farm_violation(farm)) {
        throw std::invalid_argument("farm " + std::to_string(farm.id) + ": " + *msg);
    }
}

std::vector<double> max_normalize(std::span<const double> values)
{
    if (values.empty()) {
        return {};
    }
    const double top = *std::max_element(values.begin(), values.end());
    if (!(top > 0.0) || !std::isfinite(top)) {
        throw std::invalid_argument("max_normalize: maximum must be positive and finite");
    }
    std::vector<double> out(values.size());
    std::transform(values.begin(), values.end(), out.begin(), [top](double v) {
        return v / top;
    });
    return out;
}

Population::Population(std::vector<Farm> farms)
    : m_farms(std::move(farms))
{
    std::set<std::int64_t> ids;
    std::vector<double> area, milk;
    area.reserve(m_farms.size());
    milk.reserve(m_farms.size());
    for (const auto& farm : m_farms) {
        validate_farm(farm);
        if (!ids.insert(farm.id).second) {
            throw std::invalid_argument("duplicate farm id " + std::to_string(farm.id));
        }
        area.push_back(farm.land_area_ha);
        milk.push_back(farm.milk_production_kg);
    }
    m_size_norm = max_normalize(area);
    // A population with no milk at all has no meaningful milk score.
    if (!milk.empty() && *std::max_element(milk.begin(), milk.end()) > 0.0) {
        m_milk_norm = max_normalize(milk);
    }
    else {
        m_milk_norm.assign(milk.size(), 0.0);
    }
}

Population Population::subset(std::span<const std::size_t> indices) const
{
    Population out;
    for (std::size_t i : indices) {
        if (i >= m_farms.size()) {
            throw std::out_of_range("Population::subset: index " + std::to_string(i) + " out of range");
        }
        out.m_farms.push_back(m_farms[i]);
        out.m_size_norm.push_back(m_size_norm[i]);
        out.m_milk_norm.push_back(m_milk_norm[i]);
    }
    std::set<std::int64_t> ids;
    for (const auto& farm : out.m_farms) {
        if (!ids.insert(farm.id).second) {
            throw std::invalid_argument("Population::subset: index list repeats farm " + std::to_string(farm.id));
        }
    }
    return out;
}

Population load_population(const std::filesystem::path& path, const ColumnMap& schema)
{
    const CsvTable table = read_csv(path);
    const auto& names = farm_field_names();
    std::vector<int> cols;
    cols.reserve(names.size());
    for (const auto& name : names) {
        auto it = schema.find(name);
        const std::string& header = it == schema.end() ? name : it->second;
        const int c = table.column(header);
        if (c < 0) {
            throw ParseError(path.string() + ": missing column '" + header + "'");
        }
        cols.push_back(c);
    }

    std::vector<Farm> farms;
    farms.reserve(table.rows.size());
    std::set<std::int64_t> ids;
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        const auto& row = table.rows[r];
        const std::size_t row_no = r + 1; // 1-based data row
        Farm farm;
        farm.id = parse_id(row[static_cast<std::size_t>(cols[0])], row_no);
        for (std::size_t f = 0; f < std::size(kNumericFields); ++f) {
            const auto& cell = row[static_cast<std::size_t>(cols[f + 1])];
            farm.*(kNumericFields[f].member) = parse_double(cell, row_no, names[f + 1]);
        }
        if (auto msg = farm_violation(farm)) {
            throw ParseError(path.string() + ": row " + std::to_string(row_no) + ": " + *msg);
        }
        if (!ids.insert(farm.id).second) {
            throw ParseError(path.string() + ": row " + std::to_string(row_no) + ": duplicate id " +
                             std::to_string(farm.id));
        }
        farms.push_back(farm);
    }
    return Population(std::move(farms));
}

std::string population_to_csv(const Population& pop)
{
    std::ostringstream out;
    const auto& names = farm_field_names();
    for (std::size_t i = 0; i < names.size(); ++i) {
        out << (i ? "," : "") << names[i];
    }
    out << '\n';
    for (const auto& farm : pop.farms()) {
        out << farm.id;
        for (const auto& f : kNumericFields) {
            out << ',' << format_double(farm.*(f.member));
        }
        out << '\n';
    }
    return out.str();
}

double fpcm_from_milk(double milk_kg, double fat_pct, double protein_pct)
{
    return milk_kg * (0.1226 * fat_pct + 0.0776 * protein_pct + 0.2534);
}

Population synthesize_population(std::size_t n, std::uint64_t seed, const SyntheticPopulationParams& params)
{
    if (n < 2) {
        throw std::invalid_argument("synthesize_population: n must be at least 2 (got " + std::to_string(n) + ")");
    }
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> std_normal(0.0, 1.0);
    auto uniform = [&rng](double lo, double hi) {
        return std::uniform_real_distribution<double>(lo, hi)(rng);
    };

    std::vector<Farm> farms;
    farms.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        Farm f;
        f.id = static_cast<std::int64_t>(i);
        const double z = std_normal(rng);
        f.land_area_ha = std::clamp(params.area_median_ha * std::exp(params.area_sigma_log * z), params.area_min_ha,
                                    params.area_max_ha);
        f.milk_production_kg = f.land_area_ha * uniform(params.milk_yield_min, params.milk_yield_max);
        f.nitrogen_kg = f.land_area_ha * uniform(params.n_rate_min, params.n_rate_max);
        f.can_kg = f.nitrogen_kg / params.can_n_content;
        f.livestock_units = f.land_area_ha * uniform(params.stocking_min, params.stocking_max);
        f.p_kg = f.land_area_ha * uniform(params.p_rate_min, params.p_rate_max);
        f.k_kg = f.land_area_ha * uniform(params.k_rate_min, params.k_rate_max);
        f.lime_t = f.land_area_ha * uniform(params.lime_rate_min, params.lime_rate_max);
        f.fat_pct = uniform(params.fat_min, params.fat_max);
        f.protein_pct = uniform(params.protein_min, params.protein_max);
        f.fpcm_kg = fpcm_from_milk(f.milk_production_kg, f.fat_pct, f.protein_pct);
        const double intensity = std::clamp(params.intensity_mean + params.intensity_sd * std_normal(rng),
                                            params.intensity_min, params.intensity_max);
        f.total_emissions_kg = f.fpcm_kg * intensity;
        farms.push_back(f);
    }
    return Population(std::move(farms));
}

std::vector<std::size_t> QuartileAssignment::members(int quartile) const
{
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (labels[i] == quartile) {
            out.push_back(i);
        }
    }
    return out;
}

QuartileAssignment assign_quartiles(const Population& pop)
{
    if (pop.empty()) {
        throw std::invalid_argument("assign_quartiles: empty population");
    }
    const std::size_t n = pop.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&pop](std::size_t a, std::size_t b) {
        const auto& fa = pop[a];
        const auto& fb = pop[b];
        if (fa.land_area_ha != fb.land_area_ha) {
            return fa.land_area_ha < fb.land_area_ha;
        }
        return fa.id < fb.id;
    });
    QuartileAssignment out;
    out.labels.assign(n, 0);
    for (std::size_t rank = 0; rank < n; ++rank) {
        out.labels[order[rank]] = static_cast<int>(rank * 4 / n);
    }
    return out;
}

} // namespace fertdiff
