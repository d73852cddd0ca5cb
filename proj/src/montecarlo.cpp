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
#include "fertdiff/montecarlo.h"
#include "fertdiff/economics.h"
#include "fertdiff/io.h"
#include "fertdiff/stats.h"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace fertdiff
{

namespace
{

constexpr std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

constexpr std::uint64_t fnv1a64(std::string_view s)
{
    std::uint64_t h = 0xCBF29CE484222325ULL;
    for (char c : s) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001B3ULL;
    }
    return h;
}

std::vector<double> slice_from_year_one(const std::vector<double>& series)
{
    return std::vector<double>(series.begin() + 1, series.end());
}

MetricStats stats_of(const std::vector<double>& values, std::size_t reached)
{
    MetricStats s;
    s.reached = reached;
    if (!values.empty()) {
        s.mean = mean(values);
        s.std = sample_std(values);
    }
    return s;
}

} // namespace

std::uint64_t derive_seed(std::uint64_t base_seed, std::string_view family, std::uint64_t run_index)
{
    return splitmix64(splitmix64(splitmix64(base_seed) ^ fnv1a64(family)) + run_index);
}

std::size_t default_worker_count()
{
    if (const char* env = std::getenv("FERTDIFF_WORKERS")) {
        try {
            const long v = std::stol(env);
            if (v > 0) {
                return static_cast<std::size_t>(v);
            }
        }
        catch (const std::exception&) {
            // fall through to the hardware default
        }
    }
    return std::max<std::size_t>(1, std::thread::hardware_concurrency());
}

void parallel_for(std::size_t n, std::size_t workers, const std::function<void(std::size_t)>& fn)
{
    if (workers == 0) {
        workers = default_worker_count();
    }
    workers = std::min(workers, n);
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) {
            fn(i);
        }
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (std::size_t w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                for (std::size_t i = next++; i < n; i = next++) {
                    try {
                        fn(i);
                    }
                    catch (...) {
                        std::lock_guard lock(failure_mutex);
                        if (!failure) {
                            failure = std::current_exception();
                        }
                        next = n;
                    }
                }
            });
        }
    }
    if (failure) {
        std::rethrow_exception(failure);
    }
}

Ensemble run_ensemble(const ScenarioConfig& config, const Population& pop, const SocialNetwork& net, std::size_t n,
                      std::uint64_t base_seed, const EnsembleOptions& options)
{
    if (n < 1) {
        throw std::invalid_argument("run_ensemble: need at least one iteration");
    }
    config.validate();
    Ensemble ens;
    ens.tag = std::string(to_string(config.policy.kind));
    ens.base_seed = base_seed;
    ens.n_iterations = n;
    ens.runs.resize(n);
    parallel_for(n, options.workers, [&](std::size_t i) {
        ens.runs[i] = run_scenario(config, pop, net, derive_seed(base_seed, options.seed_family, i));
    });
    return ens;
}

DiffusionMetrics diffusion_metrics(const Trajectory& traj)
{
    const auto adoption = traj.adoption();
    DiffusionMetrics m;
    const auto from_one = slice_from_year_one(adoption);
    m.t50 = threshold_year(from_one, 0.5, 1);
    m.t90 = threshold_year(from_one, 0.9, 1);
    const auto peak = peak_velocity(adoption, 0);
    m.peak_velocity = peak.peak;
    m.peak_year = peak.year;
    return m;
}

EnsembleSummary summarize_ensemble(const Ensemble& ens)
{
    if (ens.runs.empty()) {
        throw std::invalid_argument("summarize_ensemble: empty ensemble");
    }
    EnsembleSummary s;
    const std::size_t n_years = ens.runs.front().years.size();
    std::vector<double> adoption(ens.runs.size()), emissions(ens.runs.size()), tax(ens.runs.size()),
        subsidy(ens.runs.size());
    for (std::size_t t = 0; t < n_years; ++t) {
        for (std::size_t r = 0; r < ens.runs.size(); ++r) {
            const auto& rec = ens.runs[r].years.at(t);
            adoption[r] = rec.adoption_fraction;
            emissions[r] = rec.emissions_gg;
            tax[r] = rec.tax_eur;
            subsidy[r] = rec.subsidy_eur;
        }
        s.years.push_back(ens.runs.front().years[t].year);
        s.mean_adoption.push_back(mean(adoption));
        s.std_adoption.push_back(sample_std(adoption));
        s.mean_emissions.push_back(mean(emissions));
        s.std_emissions.push_back(sample_std(emissions));
        s.mean_tax.push_back(mean(tax));
        s.mean_subsidy.push_back(mean(subsidy));
    }

    const int censored = ens.runs.front().horizon() + 1;
    std::vector<double> t50, t90, peak, peak_year;
    std::size_t t50_reached = 0, t90_reached = 0;
    for (const auto& run : ens.runs) {
        const auto m = diffusion_metrics(run);
        s.metrics.push_back(m);
        t50.push_back(m.t50.value_or(censored));
        t90.push_back(m.t90.value_or(censored));
        t50_reached += m.t50 ? 1 : 0;
        t90_reached += m.t90 ? 1 : 0;
        peak.push_back(m.peak_velocity);
        peak_year.push_back(m.peak_year);
    }
    s.t50 = stats_of(t50, t50_reached);
    s.t90 = stats_of(t90, t90_reached);
    s.peak_velocity = stats_of(peak, ens.runs.size());
    s.peak_year = stats_of(peak_year, ens.runs.size());
    return s;
}

std::string ensemble_summary_csv(const EnsembleSummary& summary)
{
    std::ostringstream out;
    out << "year,mean_adoption,std_adoption,mean_emissions_gg,std_emissions_gg,mean_tax_eur,mean_subsidy_eur\n";
    for (std::size_t t = 0; t < summary.years.size(); ++t) {
        out << summary.years[t] << ',' << format_double(summary.mean_adoption[t]) << ','
            << format_double(summary.std_adoption[t]) << ',' << format_double(summary.mean_emissions[t]) << ','
            << format_double(summary.std_emissions[t]) << ',' << format_double(summary.mean_tax[t]) << ','
            << format_double(summary.mean_subsidy[t]) << '\n';
    }
    return out.str();
}

std::vector<double> abatement_distribution(const Ensemble& base, const Ensemble& policy)
{
    if (base.runs.size() != policy.runs.size()) {
        throw std::invalid_argument("abatement_distribution: ensembles have different run counts");
    }
    std::vector<double> totals;
    totals.reserve(base.runs.size());
    for (std::size_t i = 0; i < base.runs.size(); ++i) {
        const auto& b = base.runs[i];
        const auto& p = policy.runs[i];
        if (b.years.size() != p.years.size()) {
            throw std::invalid_argument("abatement_distribution: run " + std::to_string(i) +
                                        " has mismatched horizons");
        }
        totals.push_back(total_abatement(slice_from_year_one(b.emissions()), slice_from_year_one(p.emissions())));
    }
    return totals;
}

} // namespace fertdiff
