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
#include "fertdiff/policy.h"
#include "fertdiff/error.h"

#include <cmath>
#include <stdexcept>

namespace fertdiff
{

std::string_view to_string(PolicyKind kind)
{
    switch (kind) {
    case PolicyKind::none:
        return "baseline";
    case PolicyKind::carbon_tax:
        return "tax";
    case PolicyKind::subsidy:
        return "subsidy";
    }
    return "?";
}

PolicyKind parse_policy_kind(std::string_view name)
{
    if (name == "baseline" || name == "none") {
        return PolicyKind::none;
    }
    if (name == "tax" || name == "carbon_tax") {
        return PolicyKind::carbon_tax;
    }
    if (name == "subsidy") {
        return PolicyKind::subsidy;
    }
    throw ConfigError("unknown scenario '" + std::string(name) + "' (expected baseline, tax or subsidy)");
}

void PolicyInstrument::validate() const
{
    if (!(tax_rate >= 0.0) || !std::isfinite(tax_rate)) {
        throw ConfigError("policy.tax_rate must be non-negative");
    }
    if (!(subsidy_rate >= 0.0) || !std::isfinite(subsidy_rate)) {
        throw ConfigError("policy.subsidy_rate must be non-negative");
    }
}

double tax_liability(double q_tonnes, const FertilizerSpec& spec, double rate)
{
    if (!spec.embedded_intensity) {
        throw ConfigError("fertilizers." + std::string(config_name(spec.kind)) + "_embedded_intensity is not configured");
    }
    if (!(q_tonnes >= 0.0)) {
        throw std::invalid_argument("tax_liability: quantity must be non-negative");
    }
    return q_tonnes * *spec.embedded_intensity * rate;
}

double subsidy_payment(double q_pu_tonnes, double rate)
{
    if (!(q_pu_tonnes >= 0.0)) {
        throw std::invalid_argument("subsidy_payment: quantity must be non-negative");
    }
    return rate * q_pu_tonnes;
}

PolicyCashflow policy_cashflow(const Population& pop, std::span<const std::uint8_t> adopted,
                               const PolicyInstrument& instrument, const FertilizerTable& table)
{
    if (adopted.size() != pop.size()) {
        throw std::invalid_argument("policy_cashflow: adoption vector size does not match population");
    }
    PolicyCashflow flow;
    if (instrument.kind == PolicyKind::none) {
        return flow;
    }
    for (std::size_t i = 0; i < pop.size(); ++i) {
        const double n_kg = pop[i].nitrogen_kg;
        if (adopted[i]) {
            const double q_pu = fertilizer_quantity(n_kg, table.pu);
            if (instrument.kind == PolicyKind::subsidy) {
                flow.subsidy_total += subsidy_payment(q_pu, instrument.subsidy_rate);
            }
            else if (instrument.tax_adopters) {
                flow.tax_total += tax_liability(q_pu, table.pu, instrument.tax_rate);
            }
        }
        else if (instrument.kind == PolicyKind::carbon_tax) {
            flow.tax_total += tax_liability(fertilizer_quantity(n_kg, table.can), table.can, instrument.tax_rate);
        }
    }
    flow.combined = flow.tax_total + flow.subsidy_total;
    return flow;
}

double cost_per_tonne_n(const FertilizerSpec& spec, double tax_per_t_product)
{
    return (spec.price + tax_per_t_product) / spec.n_content;
}

bool tax_makes_can_dearer(const PolicyInstrument& instrument, const FertilizerTable& table)
{
    const double can_tax = tax_liability(1.0, table.can, instrument.tax_rate);
    const double pu_tax = instrument.tax_adopters ? tax_liability(1.0, table.pu, instrument.tax_rate) : 0.0;
    return cost_per_tonne_n(table.can, can_tax) > cost_per_tonne_n(table.pu, pu_tax);
}

} // namespace fertdiff
