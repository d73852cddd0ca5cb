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
#include "fertdiff/pipeline.h"
#include "fertdiff/error.h"
#include "fertdiff/io.h"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace fertdiff
{

namespace
{

using Json = nlohmann::ordered_json;

Json number_or_null(double x)
{
    return std::isfinite(x) ? Json(x) : Json(nullptr);
}

Json to_json(const MetricStats& s)
{
    return {{"mean", s.mean}, {"std", s.std}, {"reached", s.reached}};
}

Json to_json(const LogisticFit& f)
{
    return {{"K", f.K}, {"r", f.r}, {"t0", f.t0}, {"residual_rmse", f.residual_rmse},
            {"refinement_steps", f.refinement_steps}};
}

Json to_json(const SampleSummary& s)
{
    return {{"mean", s.mean}, {"variance", s.variance}, {"tail_mass", s.tail_mass}};
}

std::span<const double> after_year_zero(const std::vector<double>& series)
{
    return std::span<const double>(series).subspan(1);
}

} // namespace

std::string_view to_string(ScenarioRole role)
{
    switch (role) {
    case ScenarioRole::baseline:
        return "baseline";
    case ScenarioRole::tax:
        return "tax";
    case ScenarioRole::subsidy:
        return "subsidy";
    }
    return "unknown";
}

void StudyConfig::validate() const
{
    if (!population_csv && n_farms < 2) {
        throw ConfigError("population.n must be at least 2");
    }
    if (network_k < 2 || network_k % 2 != 0) {
        throw ConfigError("network.k must be even and at least 2");
    }
    if (!(network_p >= 0.0 && network_p <= 1.0)) {
        throw ConfigError("network.p must lie in [0, 1]");
    }
    if (iterations < 1) {
        throw ConfigError("montecarlo.iterations must be at least 1");
    }
    if (calibration_iterations < 1) {
        throw ConfigError("calibrate.iterations must be at least 1");
    }
    if (!(fertilizer_share >= 0.0 && fertilizer_share <= 1.0)) {
        throw ConfigError("emissions.fertilizer_share must lie in [0, 1]");
    }
    if (intensity_delta && !(*intensity_delta >= 0.0 && *intensity_delta <= 1.0)) {
        throw ConfigError("emissions.intensity_delta must lie in [0, 1]");
    }
    if (!std::isfinite(tail_threshold)) {
        throw ConfigError("stats.tail_threshold must be finite");
    }
    for (int y : snapshot_years) {
        if (y < 0) {
            throw ConfigError("network.snapshot_years must be non-negative");
        }
    }
    if (calibration_grid.empty()) {
        throw ConfigError("calibrate.grid must not be empty");
    }
    for (double w : calibration_grid) {
        if (!(w >= 0.0 && w <= 1.0)) {
            throw ConfigError("calibrate.grid values must lie in [0, 1]");
        }
    }
    for (double w : omega_values) {
        if (!(w >= 0.0 && w <= 1.0)) {
            throw ConfigError("calibrate.omega_values must lie in [0, 1]");
        }
    }
    for (double r : subsidy_rates) {
        if (!(r >= 0.0) || !std::isfinite(r)) {
            throw ConfigError("calibrate.subsidy_rates must be non-negative");
        }
    }
    prices.validate();
    for (auto role : kScenarioRoles) {
        scenario_for(role).validate();
    }
    try {
        anchors.validate();
    }
    catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("calibrate.anchors: ") + e.what());
    }
}

double StudyConfig::delta() const
{
    return intensity_delta ? *intensity_delta
                           : intensity_reduction_at_full_adoption(scenario.fertilizers, fertilizer_share);
}

ScenarioConfig StudyConfig::scenario_for(ScenarioRole role) const
{
    ScenarioConfig cfg = scenario;
    cfg.policy.kind = slot_policies[static_cast<std::size_t>(role)];
    cfg.fertilizers.can.price = prices.can;
    cfg.fertilizers.urea.price = prices.urea;
    cfg.fertilizers.pu.price = prices.pu;
    return cfg;
}

EnsembleOptions StudyConfig::ensemble_options() const
{
    EnsembleOptions opts;
    opts.workers = workers;
    return opts;
}

Population build_population(const StudyConfig& config)
{
    if (config.population_csv) {
        return load_population(*config.population_csv);
    }
    return synthesize_population(config.n_farms, config.population_seed);
}

StudyReport run_full_study(const StudyConfig& config)
{
    config.validate();
    StudyReport report;
    report.config = config;
    report.population = build_population(config);
    report.network =
        watts_strogatz(report.population.size(), config.network_k, config.network_p, config.network_seed);
    const auto& pop = report.population;
    const auto& net = report.network;
    const auto opts = config.ensemble_options();

    report.delta = config.delta();
    for (const auto& farm : pop.farms()) {
        report.ci_base.push_back(carbon_intensity(farm));
    }
    report.ci_base_summary = summarize(report.ci_base, config.tail_threshold);

    for (auto role : kScenarioRoles) {
        ScenarioResult res;
        res.role = role;
        const auto cfg = config.scenario_for(role);
        res.policy = cfg.policy.kind;
        res.ensemble = run_ensemble(cfg, pop, net, config.iterations, config.base_seed, opts);
        res.ensemble.tag = std::string(to_string(role));
        res.summary = summarize_ensemble(res.ensemble);
        try {
            res.fit = fit_logistic(after_year_zero(res.summary.mean_adoption), 1.0);
        }
        catch (const NumericError& e) {
            report.skipped["logistic_fit." + res.ensemble.tag] = e.what();
        }
        const double a_final = res.summary.mean_adoption.back();
        for (double ci : report.ci_base) {
            res.ci_post.push_back(post_policy_intensity(ci, report.delta, a_final));
        }
        res.ci_summary = summarize(res.ci_post, config.tail_threshold);
        res.ks = ks_two_sample(report.ci_base, res.ci_post);
        report.scenarios.push_back(std::move(res));
    }

    const auto& base = report.scenarios.front();
    const double base_cost = baseline_cost(pop, config.prices);
    const auto& fert = config.scenario.fertilizers;
    for (auto& res : report.scenarios) {
        if (res.role == ScenarioRole::baseline) {
            continue;
        }
        const std::string tag = res.ensemble.tag;
        res.abatement = abatement_distribution(base.ensemble, res.ensemble);
        try {
            res.convergence = convergence(res.abatement);
        }
        catch (const std::exception& e) {
            report.skipped["convergence." + tag] = e.what();
        }
        const double alpha = std::clamp(res.summary.mean_adoption.back(), 0.0, 1.0);
        const double delta_cost =
            policy_cost(pop, alpha, config.prices, config.substitution, fert.can.n_content, fert.pu.n_content) -
            base_cost;
        double gov = 0.0;
        for (double s : after_year_zero(res.summary.mean_subsidy)) {
            gov += s;
        }
        const double abated =
            total_abatement(after_year_zero(base.summary.mean_emissions), after_year_zero(res.summary.mean_emissions));
        try {
            res.economics = abatement_costs(delta_cost, abated, gov);
        }
        catch (const NumericError& e) {
            report.skipped["abatement_report." + tag] = e.what();
        }
    }

    const auto& sub = report.at(ScenarioRole::subsidy);
    const auto& first_run = sub.ensemble.runs.front();
    for (int year : config.snapshot_years) {
        if (year > first_run.horizon()) {
            report.skipped["snapshot.year" + std::to_string(year)] = "year lies beyond the horizon";
            continue;
        }
        report.snapshots.push_back(snapshot(first_run.states[static_cast<std::size_t>(year)], year, net, pop));
    }

    if (config.run_calibration) {
        CalibrationOptions copts;
        copts.iterations = config.calibration_iterations;
        copts.base_seed = config.base_seed;
        copts.observed_only = config.observed_only;
        copts.ensemble = opts;
        const auto base_cfg = config.scenario_for(ScenarioRole::baseline);
        report.calibration = calibrate_omega(config.anchors, config.calibration_grid, base_cfg, pop, net, copts);
        report.ablation = ablate_network(config.anchors, base_cfg, pop, net, copts);
    }
    else {
        report.skipped["calibration"] = "disabled by configuration";
        report.skipped["ablation"] = "disabled by configuration";
    }

    if (config.run_sensitivity) {
        report.omega_sensitivity = sensitivity_omega(config.scenario_for(ScenarioRole::baseline), pop, net,
                                                     config.omega_values, config.iterations, config.base_seed, opts);
        report.subsidy_sensitivity =
            sensitivity_subsidy(config.scenario_for(ScenarioRole::subsidy), pop, net, config.subsidy_rates,
                                config.iterations, config.base_seed, opts);
    }
    else {
        report.skipped["sensitivity_omega"] = "disabled by configuration";
        report.skipped["sensitivity_subsidy"] = "disabled by configuration";
    }
    return report;
}

namespace
{

class ArtifactWriter
{
public:
    explicit ArtifactWriter(std::filesystem::path dir)
        : m_dir(std::move(dir))
    {
    }

    void add(const std::string& file, const std::string& content)
    {
        write_text_file(m_dir / file, content);
        m_entries.push_back({file, sha256_hex(content), content.size()});
    }

    std::vector<ManifestEntry> finish(const std::map<std::string, std::string>& skipped)
    {
        Json j;
        auto& arts = j["artifacts"] = Json::array();
        for (const auto& e : m_entries) {
            arts.push_back({{"file", e.file}, {"sha256", e.sha256}, {"bytes", e.bytes}});
        }
        j["skipped"] = Json::object();
        for (const auto& [section, reason] : skipped) {
            j["skipped"][section] = reason;
        }
        write_text_file(m_dir / "manifest.json", j.dump(2) + "\n");
        return m_entries;
    }

private:
    std::filesystem::path m_dir;
    std::vector<ManifestEntry> m_entries;
};

Json config_json(const StudyConfig& c, const Population& pop, const SocialNetwork& net, double delta)
{
    const auto& a = c.scenario.adoption;
    const auto& f = c.scenario.fertilizers;
    auto spec = [](const FertilizerSpec& s) {
        Json j{{"n_content", s.n_content}, {"ef", s.ef}};
        j["embedded_intensity"] = s.embedded_intensity ? Json(*s.embedded_intensity) : Json(nullptr);
        return j;
    };
    Json j;
    j["population"] = {{"source", c.population_csv ? "csv" : "synthetic"},
                       {"n", pop.size()},
                       {"seed", c.population_seed}};
    j["network"] = {{"k", net.k()},
                    {"p", net.p()},
                    {"requested_seed", c.network_seed},
                    {"seed", net.seed()},
                    {"edges", net.edge_count()},
                    {"rewired_edges", net.rewired_edges()}};
    j["dynamics"] = {{"horizon", c.scenario.horizon},
                     {"initial_adopter_fraction", c.scenario.initial_adopter_fraction},
                     {"beta0", a.beta0},
                     {"omega", a.omega},
                     {"beta_size", a.beta_size},
                     {"beta_milk", a.beta_milk},
                     {"tax_delta", c.scenario.response.tax_delta},
                     {"subsidy_delta", c.scenario.response.subsidy_delta},
                     {"subsidy_reference_rate", c.scenario.response.subsidy_reference_rate}};
    j["policy"] = {{"tax_rate", c.scenario.policy.tax_rate},
                   {"subsidy_rate", c.scenario.policy.subsidy_rate},
                   {"tax_adopters", c.scenario.policy.tax_adopters}};
    j["fertilizers"] = {{"can", spec(f.can)}, {"urea", spec(f.urea)}, {"pu", spec(f.pu)}};
    j["prices"] = {{"can", c.prices.can}, {"urea", c.prices.urea}, {"pu", c.prices.pu},
                   {"p", c.prices.p},     {"k", c.prices.k},       {"lime", c.prices.lime}};
    j["economics"] = {{"substitution",
                       c.substitution == SubstitutionMode::as_written ? "as_written" : "n_equivalent"}};
    j["emissions"] = {{"fertilizer_share", c.fertilizer_share}, {"intensity_delta", delta}};
    j["montecarlo"] = {{"iterations", c.iterations}, {"base_seed", c.base_seed}};
    j["calibrate"] = {{"grid", c.calibration_grid},
                      {"iterations", c.calibration_iterations},
                      {"observed_only", c.observed_only},
                      {"omega_values", c.omega_values},
                      {"subsidy_rates", c.subsidy_rates}};
    return j;
}

} // namespace

std::vector<ManifestEntry> write_study_report(const StudyReport& report, const std::filesystem::path& dir)
{
    ArtifactWriter out(dir);
    const auto& cfg = report.config;

    out.add("config.json", config_json(cfg, report.population, report.network, report.delta).dump(2) + "\n");
    out.add("population.csv", population_to_csv(report.population));
    out.add("network_edges.csv", edge_list_csv(report.network));

    for (const auto& res : report.scenarios) {
        const auto& tag = res.ensemble.tag;
        out.add("summary_" + tag + ".csv", ensemble_summary_csv(res.summary));
        out.add("trajectory_" + tag + "_run0.csv", trajectory_to_csv(res.ensemble.runs.front()));
    }

    {
        std::ostringstream csv;
        csv << "year";
        for (const auto& res : report.scenarios) {
            csv << ',' << res.ensemble.tag << "_gg_co2eq";
        }
        csv << '\n';
        const auto& years = report.scenarios.front().summary.years;
        for (std::size_t t = 0; t < years.size(); ++t) {
            csv << years[t];
            for (const auto& res : report.scenarios) {
                csv << ',' << format_double(res.summary.mean_emissions[t]);
            }
            csv << '\n';
        }
        out.add("emissions.csv", csv.str());
    }

    {
        std::ostringstream csv;
        csv << "run";
        for (const auto& res : report.scenarios) {
            if (res.role != ScenarioRole::baseline) {
                csv << ',' << res.ensemble.tag << "_t_co2eq";
            }
        }
        csv << '\n';
        for (std::size_t r = 0; r < cfg.iterations; ++r) {
            csv << r;
            for (const auto& res : report.scenarios) {
                if (res.role != ScenarioRole::baseline) {
                    csv << ',' << format_double(res.abatement[r]);
                }
            }
            csv << '\n';
        }
        out.add("abatement_distribution.csv", csv.str());
    }

    {
        std::ostringstream csv;
        csv << "farm_id,ci_base";
        for (const auto& res : report.scenarios) {
            csv << ",ci_post_" << res.ensemble.tag;
        }
        csv << '\n';
        for (std::size_t i = 0; i < report.population.size(); ++i) {
            csv << report.population[i].id << ',' << format_double(report.ci_base[i]);
            for (const auto& res : report.scenarios) {
                csv << ',' << format_double(res.ci_post[i]);
            }
            csv << '\n';
        }
        out.add("intensity.csv", csv.str());
    }

    {
        std::ostringstream csv;
        csv << "sample,x,density,bandwidth\n";
        auto emit = [&](const std::string& name, const std::vector<double>& sample) {
            try {
                const auto est = kde(sample);
                for (std::size_t g = 0; g < est.grid.size(); ++g) {
                    csv << name << ',' << format_double(est.grid[g]) << ',' << format_double(est.density[g]) << ','
                        << format_double(est.bandwidth) << '\n';
                }
            }
            catch (const NumericError&) {
                // constant sample: no density to draw
            }
        };
        emit("base", report.ci_base);
        for (const auto& res : report.scenarios) {
            emit(res.ensemble.tag, res.ci_post);
        }
        out.add("kde.csv", csv.str());
    }

    for (const auto& snap : report.snapshots) {
        out.add("snapshot_year" + std::to_string(snap.year) + ".csv", snapshot_to_csv(snap));
    }

    for (const auto& res : report.scenarios) {
        if (res.economics) {
            out.add("abatement_report_" + res.ensemble.tag + ".txt", res.economics->to_text());
        }
    }

    Json j;
    auto& scen = j["scenarios"] = Json::object();
    for (const auto& res : report.scenarios) {
        Json s;
        s["policy"] = std::string(to_string(res.policy));
        s["final_mean_adoption"] = res.summary.mean_adoption.back();
        s["t50"] = to_json(res.summary.t50);
        s["t90"] = to_json(res.summary.t90);
        s["peak_velocity"] = to_json(res.summary.peak_velocity);
        s["peak_year"] = to_json(res.summary.peak_year);
        s["logistic_fit"] = res.fit ? to_json(*res.fit) : Json(nullptr);
        s["intensity"] = to_json(res.ci_summary);
        s["delta_mu"] = res.ci_summary.mean - report.ci_base_summary.mean;
        s["ks"] = {{"d", res.ks.d_statistic}, {"p_value", res.ks.p_value}};
        if (res.role != ScenarioRole::baseline) {
            s["abatement_t"] = {{"mean", mean(res.abatement)}, {"std", sample_std(res.abatement)}};
            if (res.convergence) {
                const auto& rm = res.convergence->running_mean;
                s["convergence"] = {{"final_mean", res.convergence->final_mean},
                                    {"cv", number_or_null(res.convergence->cv)},
                                    {"running_mean", rm}};
            }
            if (res.economics) {
                s["economics"] = Json::parse(res.economics->to_json());
            }
        }
        scen[res.ensemble.tag] = std::move(s);
    }
    j["intensity_base"] = to_json(report.ci_base_summary);
    j["intensity_delta"] = report.delta;
    if (report.calibration) {
        j["calibration"] = Json::parse(report.calibration->to_json());
    }
    if (report.ablation) {
        j["ablation"] = {{"rmse_with", report.ablation->rmse_with},
                         {"rmse_without", report.ablation->rmse_without},
                         {"delta_rmse", report.ablation->delta}};
    }
    if (!report.omega_sensitivity.empty()) {
        auto& arr = j["sensitivity_omega"] = Json::array();
        for (const auto& o : report.omega_sensitivity) {
            Json e{{"omega", o.omega}, {"baseline_fit", to_json(o.baseline_fit)}};
            for (const auto& s : o.scenarios) {
                e["t50"][std::string(to_string(s.policy))] = s.summary.t50.mean;
            }
            auto& order = e["rank_order"] = Json::array();
            for (auto kind : o.rank_order()) {
                order.push_back(std::string(to_string(kind)));
            }
            arr.push_back(std::move(e));
        }
    }
    if (!report.subsidy_sensitivity.empty()) {
        auto& arr = j["sensitivity_subsidy"] = Json::array();
        for (const auto& s : report.subsidy_sensitivity) {
            arr.push_back({{"rate", s.rate},
                           {"delta", s.delta},
                           {"t50", to_json(s.summary.t50)},
                           {"mean_adoption", s.summary.mean_adoption}});
        }
    }
    out.add("report.json", j.dump(2) + "\n");

    if (report.calibration) {
        out.add("anchors.csv", anchors_to_csv(cfg.anchors));
    }
    return out.finish(report.skipped);
}

std::vector<QuartileCurve> run_quartile_study(const StudyConfig& config)
{
    config.validate();
    const Population pop = build_population(config);
    const auto assignment = assign_quartiles(pop);
    ScenarioConfig cfg = config.scenario_for(ScenarioRole::baseline);
    cfg.policy.kind = config.quartile_policy;

    std::vector<QuartileCurve> curves;
    for (int q = 0; q < 4; ++q) {
        const auto members = assignment.members(q);
        if (members.size() <= config.network_k) {
            throw ConfigError("quartile " + std::to_string(q) + " has " + std::to_string(members.size()) +
                              " farms, not more than network.k = " + std::to_string(config.network_k));
        }
        QuartileCurve curve;
        curve.quartile = q;
        curve.size = members.size();
        const Population sub = pop.subset(members);
        double area = 0.0;
        for (const auto& farm : sub.farms()) {
            area += farm.land_area_ha;
        }
        curve.mean_area_ha = area / static_cast<double>(sub.size());
        curve.network = watts_strogatz(sub.size(), config.network_k, config.network_p,
                                       config.network_seed + static_cast<std::uint64_t>(q));
        curve.summary = summarize_ensemble(
            run_ensemble(cfg, sub, curve.network, config.iterations, config.base_seed, config.ensemble_options()));
        curves.push_back(std::move(curve));
    }
    return curves;
}

std::vector<ManifestEntry> write_quartile_report(const std::vector<QuartileCurve>& curves,
                                                 const std::filesystem::path& dir)
{
    ArtifactWriter out(dir);
    Json j = Json::array();
    for (const auto& c : curves) {
        out.add("quartile_" + std::to_string(c.quartile) + ".csv", ensemble_summary_csv(c.summary));
        j.push_back({{"quartile", c.quartile},
                     {"size", c.size},
                     {"mean_area_ha", c.mean_area_ha},
                     {"network_seed", c.network.seed()},
                     {"t50", to_json(c.summary.t50)},
                     {"final_mean_adoption", c.summary.mean_adoption.back()}});
    }
    out.add("quartiles.json", j.dump(2) + "\n");
    return out.finish({});
}

} // namespace fertdiff
