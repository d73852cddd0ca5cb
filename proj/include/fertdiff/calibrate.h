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
#ifndef FERTDIFF_CALIBRATE_H
#define FERTDIFF_CALIBRATE_H

#include "fertdiff/montecarlo.h"
#include "fertdiff/stats.h"

#include <filesystem>
#include <string>
#include <vector>

namespace fertdiff
{

struct AnchorPoint {
    int year = 0; ///< calendar year
    double adoption = 0.0;
    bool interpolated = false;
};

/**
 * Observed adoption by calendar year. The first anchor year maps to
 * simulation year 1; years from first_test_year on form the test window.
 */
struct AnchorSeries {
    std::vector<AnchorPoint> points;
    int first_test_year = 0;

    void validate() const;
    int first_year() const
    {
        return points.front().year;
    }
};

/// Fills missing calendar years by linear interpolation, flagging the filled rows.
AnchorSeries interpolate_anchors(std::vector<AnchorPoint> observed, int first_test_year);

/// Observed points 2019: 0.03, 2021: 0.11, 2024: 0.40, interpolated yearly; test window 2023-2024.
AnchorSeries default_anchors();

/// CSV with columns year, adoption[, interpolated]. Throws ParseError.
AnchorSeries load_anchors(const std::filesystem::path& path, int first_test_year);

std::string anchors_to_csv(const AnchorSeries& anchors);

enum class AnchorWindow
{
    train,
    test,
    all,
};

struct AnchorSelection {
    AnchorWindow window = AnchorWindow::all;
    bool observed_only = false;
};

/// Observed and simulated values on the selected anchor rows. mean_adoption is indexed by simulation year 0..T.
void anchor_pairs(const AnchorSeries& anchors, std::span<const double> mean_adoption, const AnchorSelection& sel,
                  std::vector<double>& observed, std::vector<double>& simulated);

double anchor_rmse(const AnchorSeries& anchors, std::span<const double> mean_adoption, const AnchorSelection& sel);

struct CalibrationOptions {
    std::size_t iterations = 50;
    std::uint64_t base_seed = 1;
    bool observed_only = false;
    EnsembleOptions ensemble;
};

struct CandidateScore {
    double omega = 0.0;
    double train_rmse = 0.0;
    double test_rmse = 0.0;
};

struct CalibrationResult {
    double omega = 0.0;
    double train_rmse = 0.0;
    double test_rmse = 0.0;
    /// fit of the winner over all selected rows; r2 is NaN when the observations are constant
    FitMetrics metrics;
    std::vector<CandidateScore> candidates;

    std::string to_json() const;
};

/// Baseline-policy ensemble mean adoption at a given omega.
std::vector<double> mean_adoption_at(const ScenarioConfig& config, double omega, const Population& pop,
                                     const SocialNetwork& net, const CalibrationOptions& options);

/// Grid search on test-window RMSE of the baseline ensemble mean; ties go to the smaller omega.
CalibrationResult calibrate_omega(const AnchorSeries& anchors, std::span<const double> grid,
                                  const ScenarioConfig& config, const Population& pop, const SocialNetwork& net,
                                  const CalibrationOptions& options = {});

struct ScenarioOutcome {
    PolicyKind policy = PolicyKind::none;
    EnsembleSummary summary;
};

struct OmegaSensitivity {
    double omega = 0.0;
    std::vector<ScenarioOutcome> scenarios; ///< baseline, tax, subsidy
    LogisticFit baseline_fit;               ///< fitted to the baseline mean over years 1..T

    /// Scenarios ordered by mean t50, fastest first.
    std::vector<PolicyKind> rank_order() const;
};

std::vector<OmegaSensitivity> sensitivity_omega(const ScenarioConfig& config, const Population& pop,
                                                const SocialNetwork& net, std::span<const double> values,
                                                std::size_t iterations, std::uint64_t base_seed,
                                                const EnsembleOptions& options = {});

struct SubsidySensitivity {
    double rate = 0.0;
    double delta = 0.0;
    EnsembleSummary summary;
};

/// Subsidy ensembles at each rate, with the adoption shift scaled linearly in the rate.
std::vector<SubsidySensitivity> sensitivity_subsidy(const ScenarioConfig& config, const Population& pop,
                                                    const SocialNetwork& net, std::span<const double> rates,
                                                    std::size_t iterations, std::uint64_t base_seed,
                                                    const EnsembleOptions& options = {});

struct AblationResult {
    double rmse_with = 0.0;
    double rmse_without = 0.0;
    double delta = 0.0;
};

/// RMSE over all anchor rows with the configured omega and with omega = 0.
AblationResult ablate_network(const AnchorSeries& anchors, const ScenarioConfig& config, const Population& pop,
                              const SocialNetwork& net, const CalibrationOptions& options = {});

} // namespace fertdiff

#endif // FERTDIFF_CALIBRATE_H
