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
#ifndef FERTDIFF_PIPELINE_H
#define FERTDIFF_PIPELINE_H

#include "fertdiff/calibrate.h"
#include "fertdiff/economics.h"
#include "fertdiff/montecarlo.h"
#include "fertdiff/stats.h"

#include <array>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace fertdiff
{

/// Scenario slots of a study, in report order.
enum class ScenarioRole
{
    baseline,
    tax,
    subsidy,
};

inline constexpr std::array<ScenarioRole, 3> kScenarioRoles{ScenarioRole::baseline, ScenarioRole::tax,
                                                           ScenarioRole::subsidy};

std::string_view to_string(ScenarioRole role);

struct StudyConfig {
    // population
    std::optional<std::filesystem::path> population_csv; ///< synthetic population when unset
    std::size_t n_farms = 295;
    std::uint64_t population_seed = 1;

    // network
    std::size_t network_k = 4;
    double network_p = 0.1;
    std::uint64_t network_seed = 1;

    // simulation
    ScenarioConfig scenario; ///< policy.kind is overridden per slot
    std::array<PolicyKind, 3> slot_policies{PolicyKind::none, PolicyKind::carbon_tax, PolicyKind::subsidy};
    std::size_t iterations = 250;
    std::uint64_t base_seed = 1;
    std::size_t workers = 0; ///< 0 selects default_worker_count()
    std::vector<int> snapshot_years{1, 5, 15};

    // intensity analytics
    double fertilizer_share = 0.25;
    std::optional<double> intensity_delta; ///< overrides the share-derived reduction
    double tail_threshold = 1.25;

    // economics
    PriceTable prices;
    SubstitutionMode substitution = SubstitutionMode::as_written;

    // calibration and sensitivity
    AnchorSeries anchors = default_anchors();
    std::vector<double> calibration_grid{0.2, 0.5, 0.85};
    std::size_t calibration_iterations = 50;
    bool observed_only = false;
    std::vector<double> omega_values{0.2, 0.5, 0.85};
    std::vector<double> subsidy_rates{150.0, 200.0, 250.0};
    bool run_calibration = true;
    bool run_sensitivity = true;

    // quartiles
    PolicyKind quartile_policy = PolicyKind::subsidy;

    /// Throws ConfigError naming the first invalid field.
    void validate() const;
    /// Whole-farm intensity reduction at full adoption.
    double delta() const;
    /// Scenario config of one slot.
    ScenarioConfig scenario_for(ScenarioRole role) const;
    EnsembleOptions ensemble_options() const;
};

/// Population from the CSV if configured, else the synthetic generator.
Population build_population(const StudyConfig& config);

struct ScenarioResult {
    ScenarioRole role = ScenarioRole::baseline;
    PolicyKind policy = PolicyKind::none;
    Ensemble ensemble;
    EnsembleSummary summary;
    std::optional<LogisticFit> fit; ///< unset when the mean curve is degenerate
    std::vector<double> ci_post;    ///< per-farm intensity after the scenario's final mean adoption
    SampleSummary ci_summary;
    KsResult ks;                    ///< against the pre-policy intensities
    std::vector<double> abatement;  ///< per-run t CO2-eq against the baseline slot
    std::optional<ConvergenceReport> convergence;
    std::optional<AbatementReport> economics;
};

struct StudyReport {
    StudyConfig config;
    Population population;
    SocialNetwork network;
    double delta = 0.0;
    std::vector<double> ci_base;
    SampleSummary ci_base_summary;
    std::vector<ScenarioResult> scenarios; ///< baseline, tax, subsidy
    std::vector<NetworkSnapshot> snapshots; ///< first run of the subsidy slot
    std::optional<CalibrationResult> calibration;
    std::optional<AblationResult> ablation;
    std::vector<OmegaSensitivity> omega_sensitivity;
    std::vector<SubsidySensitivity> subsidy_sensitivity;
    /// Report sections that were not produced, with the reason.
    std::map<std::string, std::string> skipped;

    const ScenarioResult& at(ScenarioRole role) const
    {
        return scenarios.at(static_cast<std::size_t>(role));
    }
};

/// Baseline, tax and subsidy ensembles on one population and network, plus every derived analysis.
StudyReport run_full_study(const StudyConfig& config);

struct ManifestEntry {
    std::string file;
    std::string sha256;
    std::size_t bytes = 0;
};

/// Writes the report artifacts and manifest.json into dir. Returns the manifest entries.
std::vector<ManifestEntry> write_study_report(const StudyReport& report, const std::filesystem::path& dir);

struct QuartileCurve {
    int quartile = 0;
    std::size_t size = 0;
    double mean_area_ha = 0.0;
    SocialNetwork network;
    EnsembleSummary summary;
};

/// Each size quartile simulated on its own small-world network. Throws ConfigError if a quartile has n <= k.
std::vector<QuartileCurve> run_quartile_study(const StudyConfig& config);

/// Writes quartile_<q>.csv per quartile and quartiles.json. Returns the manifest entries.
std::vector<ManifestEntry> write_quartile_report(const std::vector<QuartileCurve>& curves,
                                                 const std::filesystem::path& dir);

} // namespace fertdiff

#endif // FERTDIFF_PIPELINE_H
