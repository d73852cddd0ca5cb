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
#ifndef FERTDIFF_POLICY_H
#define FERTDIFF_POLICY_H

#include "fertdiff/emissions.h"
#include "fertdiff/population.h"

#include <cstdint>
#include <span>
#include <string>
#include <string_view>

namespace fertdiff
{

enum class PolicyKind
{
    none,
    carbon_tax,
    subsidy,
};

std::string_view to_string(PolicyKind kind);

/// Parses "baseline"/"none", "tax"/"carbon_tax" or "subsidy". Throws ConfigError otherwise.
PolicyKind parse_policy_kind(std::string_view name);

struct PolicyInstrument {
    PolicyKind kind = PolicyKind::none;
    double tax_rate = 71.0;      ///< EUR per t CO2 embedded in taxed product
    double subsidy_rate = 200.0; ///< EUR per t PU
    bool tax_adopters = false;   ///< also tax PU on its own embedded emissions

    void validate() const;
};

/// EUR of carbon tax on q_tonnes of product. Throws ConfigError if the spec has no embedded intensity.
double tax_liability(double q_tonnes, const FertilizerSpec& spec, double rate);

/// EUR of subsidy on q_pu_tonnes of protected urea.
double subsidy_payment(double q_pu_tonnes, double rate);

struct PolicyCashflow {
    double tax_total = 0.0;
    double subsidy_total = 0.0;
    double combined = 0.0;
};

/// Annual tax on non-adopters' CAN and subsidy on adopters' PU under the active instrument.
PolicyCashflow policy_cashflow(const Population& pop, std::span<const std::uint8_t> adopted,
                               const PolicyInstrument& instrument, const FertilizerTable& table);

/// Effective EUR per t of nitrogen when buying CAN or PU, including any tax.
double cost_per_tonne_n(const FertilizerSpec& spec, double tax_per_t_product);

/// True when taxed CAN costs more per tonne of N than (possibly taxed) PU.
bool tax_makes_can_dearer(const PolicyInstrument& instrument, const FertilizerTable& table);

} // namespace fertdiff

#endif // FERTDIFF_POLICY_H
