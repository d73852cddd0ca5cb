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
#include "fertdiff/config.h"
#include "fertdiff/error.h"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <charconv>
#include <fstream>
#include <functional>
#include <map>

namespace fertdiff
{

namespace
{

std::string trim(std::string_view s)
{
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos) {
        return {};
    }
    const auto e = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(b, e - b + 1));
}

double to_double(const std::string& text, const std::string& field)
{
    const std::string t = trim(text);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (t.empty() || ec != std::errc() || ptr != t.data() + t.size() || !std::isfinite(v)) {
        throw ConfigError(field + ": '" + text + "' is not a finite number");
    }
    return v;
}

std::uint64_t to_uint(const std::string& text, const std::string& field)
{
    const std::string t = trim(text);
    std::uint64_t v = 0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (t.empty() || ec != std::errc() || ptr != t.data() + t.size()) {
        throw ConfigError(field + ": '" + text + "' is not a non-negative integer");
    }
    return v;
}

bool to_bool(const std::string& text, const std::string& field)
{
    const std::string t = trim(text);
    if (t == "true" || t == "1" || t == "yes") {
        return true;
    }
    if (t == "false" || t == "0" || t == "no") {
        return false;
    }
    throw ConfigError(field + ": '" + text + "' is not a boolean");
}

PolicyKind to_policy(const std::string& text, const std::string& field)
{
    try {
        return parse_policy_kind(trim(text));
    }
    catch (const ConfigError& e) {
        throw ConfigError(field + ": " + e.what());
    }
}

using Setter = std::function<void(StudyConfig&, const std::string&, const std::string&,
                                  const std::filesystem::path&)>;

#define FD_DOUBLE(expr) [](StudyConfig& c, const std::string& v, const std::string& f, const auto&) { expr = to_double(v, f); }
#define FD_UINT(expr) [](StudyConfig& c, const std::string& v, const std::string& f, const auto&) { expr = to_uint(v, f); }
#define FD_BOOL(expr) [](StudyConfig& c, const std::string& v, const std::string& f, const auto&) { expr = to_bool(v, f); }

const std::map<std::string, Setter>& setters()
{
    static const std::map<std::string, Setter> table = {
        {"population.source",
         [](StudyConfig& c, const std::string& v, const std::string& f, const std::filesystem::path&) {
             const auto t = trim(v);
             if (t == "synthetic") {
                 c.population_csv.reset();
             }
             else if (t != "csv") {
                 throw ConfigError(f + ": expected 'synthetic' or 'csv'");
             }
         }},
        {"population.path",
         [](StudyConfig& c, const std::string& v, const std::string&, const std::filesystem::path& base) {
             std::filesystem::path p = trim(v);
             c.population_csv = p.is_relative() && !base.empty() ? base / p : p;
         }},
        {"population.n", FD_UINT(c.n_farms)},
        {"population.seed", FD_UINT(c.population_seed)},

        {"network.k", FD_UINT(c.network_k)},
        {"network.p", FD_DOUBLE(c.network_p)},
        {"network.seed", FD_UINT(c.network_seed)},
        {"network.snapshot_years",
         [](StudyConfig& c, const std::string& v, const std::string& f, const std::filesystem::path&) {
             c.snapshot_years.clear();
             for (double y : parse_double_list(v, f)) {
                 if (y != std::floor(y)) {
                     throw ConfigError(f + ": years must be integers");
                 }
                 c.snapshot_years.push_back(static_cast<int>(y));
             }
         }},

        {"dynamics.horizon",
         [](StudyConfig& c, const std::string& v, const std::string& f, const std::filesystem::path&) {
             c.scenario.horizon = static_cast<int>(to_uint(v, f));
         }},
        {"dynamics.initial_adopter_fraction", FD_DOUBLE(c.scenario.initial_adopter_fraction)},
        {"dynamics.preset",
         [](StudyConfig& c, const std::string& v, const std::string& f, const std::filesystem::path&) {
             const auto t = trim(v);
             if (t == "theoretical") {
                 c.scenario.adoption = AdoptionParams::theoretical();
             }
             else if (t == "calibrated") {
                 c.scenario.adoption = AdoptionParams{};
             }
             else {
                 throw ConfigError(f + ": expected 'calibrated' or 'theoretical'");
             }
         }},
        {"dynamics.beta0", FD_DOUBLE(c.scenario.adoption.beta0)},
        {"dynamics.omega", FD_DOUBLE(c.scenario.adoption.omega)},
        {"dynamics.beta_size", FD_DOUBLE(c.scenario.adoption.beta_size)},
        {"dynamics.beta_milk", FD_DOUBLE(c.scenario.adoption.beta_milk)},

        {"policy.tax_rate", FD_DOUBLE(c.scenario.policy.tax_rate)},
        {"policy.subsidy_rate", FD_DOUBLE(c.scenario.policy.subsidy_rate)},
        {"policy.tax_adopters", FD_BOOL(c.scenario.policy.tax_adopters)},
        {"policy.tax_delta", FD_DOUBLE(c.scenario.response.tax_delta)},
        {"policy.subsidy_delta", FD_DOUBLE(c.scenario.response.subsidy_delta)},
        {"policy.subsidy_reference_rate", FD_DOUBLE(c.scenario.response.subsidy_reference_rate)},

        {"fertilizers.can_n_content", FD_DOUBLE(c.scenario.fertilizers.can.n_content)},
        {"fertilizers.can_ef", FD_DOUBLE(c.scenario.fertilizers.can.ef)},
        {"fertilizers.can_embedded_intensity", FD_DOUBLE(c.scenario.fertilizers.can.embedded_intensity)},
        {"fertilizers.urea_n_content", FD_DOUBLE(c.scenario.fertilizers.urea.n_content)},
        {"fertilizers.urea_ef", FD_DOUBLE(c.scenario.fertilizers.urea.ef)},
        {"fertilizers.urea_embedded_intensity", FD_DOUBLE(c.scenario.fertilizers.urea.embedded_intensity)},
        {"fertilizers.pu_n_content", FD_DOUBLE(c.scenario.fertilizers.pu.n_content)},
        {"fertilizers.pu_ef", FD_DOUBLE(c.scenario.fertilizers.pu.ef)},
        {"fertilizers.pu_embedded_intensity", FD_DOUBLE(c.scenario.fertilizers.pu.embedded_intensity)},

        {"prices.can", FD_DOUBLE(c.prices.can)},
        {"prices.urea", FD_DOUBLE(c.prices.urea)},
        {"prices.pu", FD_DOUBLE(c.prices.pu)},
        {"prices.p", FD_DOUBLE(c.prices.p)},
        {"prices.k", FD_DOUBLE(c.prices.k)},
        {"prices.lime", FD_DOUBLE(c.prices.lime)},

        {"emissions.fertilizer_share", FD_DOUBLE(c.fertilizer_share)},
        {"emissions.intensity_delta", FD_DOUBLE(c.intensity_delta)},
        {"stats.tail_threshold", FD_DOUBLE(c.tail_threshold)},
        {"economics.substitution",
         [](StudyConfig& c, const std::string& v, const std::string& f, const std::filesystem::path&) {
             const auto t = trim(v);
             if (t == "as_written") {
                 c.substitution = SubstitutionMode::as_written;
             }
             else if (t == "n_equivalent") {
                 c.substitution = SubstitutionMode::n_equivalent;
             }
             else {
                 throw ConfigError(f + ": expected 'as_written' or 'n_equivalent'");
             }
         }},

        {"montecarlo.iterations", FD_UINT(c.iterations)},
        {"montecarlo.base_seed", FD_UINT(c.base_seed)},
        {"montecarlo.workers", FD_UINT(c.workers)},

        {"calibrate.anchors",
         [](StudyConfig& c, const std::string& v, const std::string& f, const std::filesystem::path& base) {
             std::filesystem::path p = trim(v);
             if (p.is_relative() && !base.empty()) {
                 p = base / p;
             }
             try {
                 c.anchors = load_anchors(p, c.anchors.first_test_year);
             }
             catch (const std::exception& e) {
                 throw ConfigError(f + ": " + e.what());
             }
         }},
        {"calibrate.first_test_year",
         [](StudyConfig& c, const std::string& v, const std::string& f, const std::filesystem::path&) {
             c.anchors.first_test_year = static_cast<int>(to_uint(v, f));
         }},
        {"calibrate.grid",
         [](StudyConfig& c, const std::string& v, const std::string& f, const std::filesystem::path&) {
             c.calibration_grid = parse_double_list(v, f);
         }},
        {"calibrate.iterations", FD_UINT(c.calibration_iterations)},
        {"calibrate.observed_only", FD_BOOL(c.observed_only)},
        {"calibrate.enabled", FD_BOOL(c.run_calibration)},
        {"calibrate.sensitivity", FD_BOOL(c.run_sensitivity)},
        {"calibrate.omega_values",
         [](StudyConfig& c, const std::string& v, const std::string& f, const std::filesystem::path&) {
             c.omega_values = parse_double_list(v, f);
         }},
        {"calibrate.subsidy_rates",
         [](StudyConfig& c, const std::string& v, const std::string& f, const std::filesystem::path&) {
             c.subsidy_rates = parse_double_list(v, f);
         }},

        {"scenarios.baseline",
         [](StudyConfig& c, const std::string& v, const std::string& f, const std::filesystem::path&) {
             c.slot_policies[0] = to_policy(v, f);
         }},
        {"scenarios.tax",
         [](StudyConfig& c, const std::string& v, const std::string& f, const std::filesystem::path&) {
             c.slot_policies[1] = to_policy(v, f);
         }},
        {"scenarios.subsidy",
         [](StudyConfig& c, const std::string& v, const std::string& f, const std::filesystem::path&) {
             c.slot_policies[2] = to_policy(v, f);
         }},
        {"quartiles.policy",
         [](StudyConfig& c, const std::string& v, const std::string& f, const std::filesystem::path&) {
             c.quartile_policy = to_policy(v, f);
         }},
    };
    return table;
}

#undef FD_DOUBLE
#undef FD_UINT
#undef FD_BOOL

} // namespace

std::vector<double> parse_double_list(const std::string& text, const std::string& field)
{
    std::vector<double> out;
    std::size_t start = 0;
    while (start <= text.size()) {
        const auto comma = text.find(',', start);
        const auto piece = text.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
        out.push_back(to_double(piece, field));
        if (comma == std::string::npos) {
            break;
        }
        start = comma + 1;
    }
    return out;
}

void apply_config_value(StudyConfig& config, const std::string& key, const std::string& value,
                        const std::filesystem::path& base_dir)
{
    const auto& table = setters();
    const auto it = table.find(key);
    if (it == table.end()) {
        throw ConfigError(key + ": unknown configuration key");
    }
    it->second(config, value, key, base_dir);
}

StudyConfig parse_study_config(std::istream& in, const std::filesystem::path& base_dir)
{
    namespace pt = boost::property_tree;
    pt::ptree tree;
    try {
        pt::read_ini(in, tree);
    }
    catch (const pt::ini_parser_error& e) {
        throw ConfigError(std::string("config: ") + e.message() + " at line " + std::to_string(e.line()));
    }
    StudyConfig config;
    // population.path is applied after the whole file is read.
    std::optional<std::string> population_path;
    std::string population_source = "synthetic";
    for (const auto& [section, keys] : tree) {
        if (!keys.data().empty() && keys.empty()) {
            throw ConfigError(section + ": key outside of a section");
        }
        for (const auto& [key, node] : keys) {
            const std::string name = section + "." + key;
            const std::string value = node.get_value<std::string>();
            if (name == "population.path") {
                population_path = value;
                continue;
            }
            if (name == "population.source") {
                population_source = trim(value);
            }
            apply_config_value(config, name, value, base_dir);
        }
    }
    if (population_source == "csv") {
        if (!population_path) {
            throw ConfigError("population.path: required when population.source = csv");
        }
        apply_config_value(config, "population.path", *population_path, base_dir);
    }
    config.validate();
    return config;
}

StudyConfig load_study_config(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open config file " + path.string());
    }
    return parse_study_config(in, path.parent_path());
}

} // namespace fertdiff
