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
#include "fertdiff/calibrate.h"
#include "fertdiff/error.h"
#include "fertdiff/io.h"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>
#include <stdexcept>

namespace fertdiff
{

void AnchorSeries::validate() const
{
    if (points.size() < 3) {
        throw std::invalid_argument("anchors must span at least 3 years");
    }
    for (std::size_t i = 0; i < points.size(); ++i) {
        const auto& pt = points[i];
        if (!(pt.adoption >= 0.0 && pt.adoption <= 1.0)) {
            throw std::invalid_argument("anchor " + std::to_string(pt.year) + ": adoption must lie in [0, 1]");
        }
        if (i > 0 && pt.year <= points[i - 1].year) {
            throw std::invalid_argument("anchor years must be strictly increasing");
        }
    }
}

AnchorSeries interpolate_anchors(std::vector<AnchorPoint> observed, int first_test_year)
{
    std::sort(observed.begin(), observed.end(), [](const AnchorPoint& a, const AnchorPoint& b) {
        return a.year < b.year;
    });
    AnchorSeries out;
    out.first_test_year = first_test_year;
    for (std::size_t i = 0; i < observed.size(); ++i) {
        out.points.push_back(observed[i]);
        if (i + 1 == observed.size()) {
            break;
        }
        const auto& a = observed[i];
        const auto& b = observed[i + 1];
        for (int y = a.year + 1; y < b.year; ++y) {
            const double w = static_cast<double>(y - a.year) / static_cast<double>(b.year - a.year);
            out.points.push_back({y, a.adoption + w * (b.adoption - a.adoption), true});
        }
    }
    out.validate();
    return out;
}

AnchorSeries default_anchors()
{
    return interpolate_anchors({{2019, 0.03, false}, {2021, 0.11, false}, {2024, 0.40, false}}, 2023);
}

AnchorSeries load_anchors(const std::filesystem::path& path, int first_test_year)
{
    const auto table = read_csv(path);
    const int year_col = table.column("year");
    const int adoption_col = table.column("adoption");
    const int interp_col = table.column("interpolated");
    if (year_col < 0 || adoption_col < 0) {
        throw ParseError(path.string() + ": anchor file needs 'year' and 'adoption' columns");
    }
    AnchorSeries out;
    out.first_test_year = first_test_year;
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        const auto& row = table.rows[r];
        AnchorPoint pt;
        const double year = parse_double(row[static_cast<std::size_t>(year_col)], r + 1, "year");
        if (year != std::floor(year)) {
            throw ParseError(path.string() + ": row " + std::to_string(r + 1) + ", column 'year': not an integer");
        }
        pt.year = static_cast<int>(year);
        pt.adoption = parse_double(row[static_cast<std::size_t>(adoption_col)], r + 1, "adoption");
        if (interp_col >= 0) {
            const auto& flag = row[static_cast<std::size_t>(interp_col)];
            pt.interpolated = flag == "true" || flag == "1";
        }
        out.points.push_back(pt);
    }
    try {
        out.validate();
    }
    catch (const std::invalid_argument& e) {
        throw ParseError(path.string() + ": " + e.what());
    }
    return out;
}

std::string anchors_to_csv(const AnchorSeries& anchors)
{
    std::ostringstream out;
    out << "year,adoption,interpolated\n";
    for (const auto& pt : anchors.points) {
        out << pt.year << ',' << format_double(pt.adoption) << ',' << (pt.interpolated ? "true" : "false") << '\n';
    }
    return out.str();
}

void anchor_pairs(const AnchorSeries& anchors, std::span<const double> mean_adoption, const AnchorSelection& sel,
                  std::vector<double>& observed, std::vector<double>& simulated)
{
    observed.clear();
    simulated.clear();
    const int origin = anchors.first_year();
    for (const auto& pt : anchors.points) {
        if (sel.observed_only && pt.interpolated) {
            continue;
        }
        const bool is_test = pt.year >= anchors.first_test_year;
        if ((sel.window == AnchorWindow::train && is_test) || (sel.window == AnchorWindow::test && !is_test)) {
            continue;
        }
        const auto sim_year = static_cast<std::size_t>(pt.year - origin + 1);
        if (sim_year >= mean_adoption.size()) {
            throw std::invalid_argument("anchor year " + std::to_string(pt.year) + " lies beyond the horizon");
        }
        observed.push_back(pt.adoption);
        simulated.push_back(mean_adoption[sim_year]);
    }
}

double anchor_rmse(const AnchorSeries& anchors, std::span<const double> mean_adoption, const AnchorSelection& sel)
{
    std::vector<double> obs, sim;
    anchor_pairs(anchors, mean_adoption, sel, obs, sim);
    if (obs.empty()) {
        throw std::invalid_argument("anchor_rmse: no anchor rows selected");
    }
    return rmse(obs, sim);
}

std::vector<double> mean_adoption_at(const ScenarioConfig& config, double omega, const Population& pop,
                                     const SocialNetwork& net, const CalibrationOptions& options)
{
    ScenarioConfig cfg = config;
    cfg.policy.kind = PolicyKind::none;
    cfg.adoption.omega = omega;
    const auto ens = run_ensemble(cfg, pop, net, options.iterations, options.base_seed, options.ensemble);
    return summarize_ensemble(ens).mean_adoption;
}

std::string CalibrationResult::to_json() const
{
    nlohmann::ordered_json j;
    j["winner"] = omega;
    j["train_rmse"] = train_rmse;
    j["test_rmse"] = test_rmse;
    j["rmse"] = metrics.rmse;
    j["mae"] = metrics.mae;
    if (std::isfinite(metrics.r2)) {
        j["r2"] = metrics.r2;
    }
    else {
        j["r2"] = nullptr;
    }
    auto& grid = j["grid"] = nlohmann::ordered_json::array();
    for (const auto& c : candidates) {
        grid.push_back({{"omega", c.omega}, {"train_rmse", c.train_rmse}, {"test_rmse", c.test_rmse}});
    }
    return j.dump(2) + "\n";
}

CalibrationResult calibrate_omega(const AnchorSeries& anchors, std::span<const double> grid,
                                  const ScenarioConfig& config, const Population& pop, const SocialNetwork& net,
                                  const CalibrationOptions& options)
{
    if (grid.empty()) {
        throw std::invalid_argument("calibrate_omega: empty candidate grid");
    }
    anchors.validate();
    const AnchorSelection train{AnchorWindow::train, options.observed_only};
    const AnchorSelection test{AnchorWindow::test, options.observed_only};

    CalibrationResult result;
    double best = std::numeric_limits<double>::infinity();
    std::vector<double> best_mean;
    for (double omega : grid) {
        const auto mean_adoption = mean_adoption_at(config, omega, pop, net, options);
        CandidateScore score{omega, anchor_rmse(anchors, mean_adoption, train), anchor_rmse(anchors, mean_adoption, test)};
        result.candidates.push_back(score);
        if (score.test_rmse < best || (score.test_rmse == best && omega < result.omega)) {
            best = score.test_rmse;
            result.omega = omega;
            result.train_rmse = score.train_rmse;
            result.test_rmse = score.test_rmse;
            best_mean = mean_adoption;
        }
    }

    std::vector<double> obs, sim;
    anchor_pairs(anchors, best_mean, {AnchorWindow::all, options.observed_only}, obs, sim);
    try {
        result.metrics = fit_metrics(obs, sim);
    }
    catch (const NumericError&) {
        result.metrics = {rmse(obs, sim), 0.0, std::numeric_limits<double>::quiet_NaN()};
        double abs_sum = 0.0;
        for (std::size_t i = 0; i < obs.size(); ++i) {
            abs_sum += std::abs(obs[i] - sim[i]);
        }
        result.metrics.mae = abs_sum / static_cast<double>(obs.size());
    }
    return result;
}

std::vector<PolicyKind> OmegaSensitivity::rank_order() const
{
    std::vector<const ScenarioOutcome*> sorted;
    for (const auto& s : scenarios) {
        sorted.push_back(&s);
    }
    std::stable_sort(sorted.begin(), sorted.end(), [](const ScenarioOutcome* a, const ScenarioOutcome* b) {
        return a->summary.t50.mean < b->summary.t50.mean;
    });
    std::vector<PolicyKind> order;
    for (const auto* s : sorted) {
        order.push_back(s->policy);
    }
    return order;
}

std::vector<OmegaSensitivity> sensitivity_omega(const ScenarioConfig& config, const Population& pop,
                                                const SocialNetwork& net, std::span<const double> values,
                                                std::size_t iterations, std::uint64_t base_seed,
                                                const EnsembleOptions& options)
{
    std::vector<OmegaSensitivity> out;
    for (double omega : values) {
        if (!(omega >= 0.0 && omega <= 1.0)) {
            throw std::invalid_argument("sensitivity_omega: omega must lie in [0, 1]");
        }
        OmegaSensitivity entry;
        entry.omega = omega;
        for (auto kind : {PolicyKind::none, PolicyKind::carbon_tax, PolicyKind::subsidy}) {
            ScenarioConfig cfg = config;
            cfg.adoption.omega = omega;
            cfg.policy.kind = kind;
            entry.scenarios.push_back(
                {kind, summarize_ensemble(run_ensemble(cfg, pop, net, iterations, base_seed, options))});
        }
        const auto& base_mean = entry.scenarios.front().summary.mean_adoption;
        entry.baseline_fit = fit_logistic(std::span<const double>(base_mean).subspan(1), 1.0);
        out.push_back(std::move(entry));
    }
    return out;
}

std::vector<SubsidySensitivity> sensitivity_subsidy(const ScenarioConfig& config, const Population& pop,
                                                    const SocialNetwork& net, std::span<const double> rates,
                                                    std::size_t iterations, std::uint64_t base_seed,
                                                    const EnsembleOptions& options)
{
    std::vector<SubsidySensitivity> out;
    for (double rate : rates) {
        if (!(rate >= 0.0)) {
            throw std::invalid_argument("sensitivity_subsidy: rates must be non-negative");
        }
        ScenarioConfig cfg = config;
        cfg.policy.kind = PolicyKind::subsidy;
        cfg.policy.subsidy_rate = rate;
        SubsidySensitivity entry;
        entry.rate = rate;
        entry.delta = policy_delta(cfg);
        entry.summary = summarize_ensemble(run_ensemble(cfg, pop, net, iterations, base_seed, options));
        out.push_back(std::move(entry));
    }
    return out;
}

AblationResult ablate_network(const AnchorSeries& anchors, const ScenarioConfig& config, const Population& pop,
                              const SocialNetwork& net, const CalibrationOptions& options)
{
    anchors.validate();
    const AnchorSelection all{AnchorWindow::all, options.observed_only};
    AblationResult r;
    r.rmse_with = anchor_rmse(anchors, mean_adoption_at(config, config.adoption.omega, pop, net, options), all);
    if (config.adoption.omega == 0.0) {
        r.rmse_without = r.rmse_with;
    }
    else {
        r.rmse_without = anchor_rmse(anchors, mean_adoption_at(config, 0.0, pop, net, options), all);
    }
    r.delta = r.rmse_without - r.rmse_with;
    return r;
}

} // namespace fertdiff
