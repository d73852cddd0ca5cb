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
#ifndef FERTDIFF_CONFIG_H
#define FERTDIFF_CONFIG_H

#include "fertdiff/pipeline.h"

#include <filesystem>
#include <istream>
#include <string>

namespace fertdiff
{

/**
 * Reads an INI study configuration. Sections: population, network, dynamics,
 * policy, fertilizers, prices, emissions, economics, stats, montecarlo,
 * calibrate, scenarios, quartiles. Keys not present keep their defaults;
 * relative paths resolve against base_dir. Throws ConfigError naming the
 * offending section.key.
 */
StudyConfig parse_study_config(std::istream& in, const std::filesystem::path& base_dir = {});

StudyConfig load_study_config(const std::filesystem::path& path);

/// Applies one "section.key=value" assignment. Throws ConfigError for unknown keys or bad values.
void apply_config_value(StudyConfig& config, const std::string& key, const std::string& value,
                        const std::filesystem::path& base_dir = {});

/// Comma-separated list of doubles.
std::vector<double> parse_double_list(const std::string& text, const std::string& field);

} // namespace fertdiff

#endif // FERTDIFF_CONFIG_H
