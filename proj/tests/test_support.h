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
#ifndef FERTDIFF_TEST_SUPPORT_H
#define FERTDIFF_TEST_SUPPORT_H

#include "fertdiff/io.h"
#include "fertdiff/population.h"

#include <gtest/gtest.h>

#include <filesystem>
#include <random>
#include <string>
#include <vector>

namespace fertdiff::testing
{

/// Fresh per-test scratch directory under the system temp dir.
inline std::filesystem::path scratch_dir()
{
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    auto dir = std::filesystem::temp_directory_path() / "fertdiff_tests" /
               (std::string(info->test_suite_name()) + "." + info->name());
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

inline std::filesystem::path write_file(const std::filesystem::path& path, const std::string& content)
{
    write_text_file(path, content);
    return path;
}

/// Farm with every field valid and the given area, nitrogen and emissions.
inline Farm make_farm(std::int64_t id, double area, double n_kg = 100.0, double emissions = 1000.0,
                      double fpcm = 1000.0)
{
    Farm f;
    f.id = id;
    f.land_area_ha = area;
    f.milk_production_kg = area * 8000.0;
    f.livestock_units = area * 2.0;
    f.nitrogen_kg = n_kg;
    f.can_kg = n_kg / 0.27;
    f.total_emissions_kg = emissions;
    f.fpcm_kg = fpcm;
    f.protein_pct = 3.5;
    f.fat_pct = 4.2;
    return f;
}

inline std::vector<double> uniform_sample(std::mt19937_64& rng, std::size_t n, double lo, double hi)
{
    std::uniform_real_distribution<double> u(lo, hi);
    std::vector<double> out(n);
    for (auto& x : out) {
        x = u(rng);
    }
    return out;
}

} // namespace fertdiff::testing

#endif // FERTDIFF_TEST_SUPPORT_H
