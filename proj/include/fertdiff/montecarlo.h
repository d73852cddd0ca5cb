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
#ifndef FERTDIFF_MONTECARLO_H
#define FERTDIFF_MONTECARLO_H

#include "fertdiff/dynamics.h"

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace fertdiff
{

/// Seed family shared by every scenario of a comparison, so run i of each scenario is paired.
inline constexpr std::string_view kDefaultSeedFamily = "abm";

/// Stable 64-bit stream seed for run `run_index` of a seed family.
std::uint64_t derive_seed(std::uint64_t base_seed, std::string_view family, std::uint64_t run_index);

/// Worker count from FERTDIFF_WORKERS, else the hardware concurrency (at least 1).
std::size_t default_worker_count();

/// Calls fn(i) for i in [0, n) on up to `workers` threads. Rethrows the first failure.
void parallel_for(std::size_t n, std::size_t workers, const std::function<void(std::size_t)>& fn);

struct EnsembleOptions {
    std::size_t workers = 0; ///< 0 selects default_worker_count()
    std::string seed_family{kDefaultSeedFamily};
};

struct Ensemble {
    std::vector<Trajectory> runs;
    std::string tag;
    std::uint64_t base_seed = 0;
    std::size_t n_iterations = 0;
};

/// n independent runs; run i uses derive_seed(base_seed, family, i). Independent of scheduling.
Ensemble run_ensemble(const ScenarioConfig& config, const Population& pop, const SocialNetwork& net, std::size_t n,
                      std::uint64_t base_seed, const EnsembleOptions& options = {});

struct DiffusionMetrics {
    std::optional<int> t50;
    std::optional<int> t90;
    double peak_velocity = 0.0;
    int peak_year = 0;
};

/// Threshold years over years 1..T and the peak annual increment of one run.
DiffusionMetrics diffusion_metrics(const Trajectory& traj);

struct MetricStats {
    double mean = 0.0;
    double std = 0.0;
    std::size_t reached = 0; ///< runs in which the quantity exists
};

struct EnsembleSummary {
    std::vector<int> years;
    std::vector<double> mean_adoption;
    std::vector<double> std_adoption;
    std::vector<double> mean_emissions;
    std::vector<double> std_emissions;
    std::vector<double> mean_tax;
    std::vector<double> mean_subsidy;
    std::vector<DiffusionMetrics> metrics;
    /// Threshold years of runs that never cross count as T + 1.
    MetricStats t50;
    MetricStats t90;
    MetricStats peak_velocity;
    MetricStats peak_year;
};

EnsembleSummary summarize_ensemble(const Ensemble& ens);

/// year, mean/std adoption, mean/std emissions, mean tax and subsidy.
std::string ensemble_summary_csv(const EnsembleSummary& summary);

/// Per-run cumulative abatement (t CO2-eq) over years 1..T, paired by run index.
std::vector<double> abatement_distribution(const Ensemble& base, const Ensemble& policy);

} // namespace fertdiff

#endif // FERTDIFF_MONTECARLO_H
