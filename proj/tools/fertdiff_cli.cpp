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
#include "fertdiff/io.h"
#include "fertdiff/pipeline.h"

#include <CLI11.hpp>
#include <json.hpp>

#include <iostream>
#include <sstream>

namespace
{

using namespace fertdiff;
using Json = nlohmann::ordered_json;

struct CommonArgs {
    std::string config;
    std::string population;
    std::size_t workers = 0;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> iterations;
};

StudyConfig resolve(const CommonArgs& args)
{
    StudyConfig cfg = args.config.empty() ? StudyConfig{} : load_study_config(args.config);
    if (!args.population.empty()) {
        cfg.population_csv = args.population;
    }
    if (args.seed) {
        cfg.base_seed = *args.seed;
    }
    if (args.iterations) {
        cfg.iterations = *args.iterations;
    }
    if (args.workers > 0) {
        cfg.workers = args.workers;
    }
    cfg.validate();
    return cfg;
}

void add_common(CLI::App* cmd, CommonArgs& args)
{
    cmd->add_option("--config", args.config, "INI study configuration")->check(CLI::ExistingFile);
    cmd->add_option("--population", args.population, "farm CSV replacing the configured population")
        ->check(CLI::ExistingFile);
    cmd->add_option("--workers", args.workers, "worker threads (default: FERTDIFF_WORKERS or all cores)");
}

void print_manifest(const std::vector<ManifestEntry>& entries, const std::string& dir)
{
    for (const auto& e : entries) {
        std::cout << e.sha256 << "  " << (std::filesystem::path(dir) / e.file).string() << '\n';
    }
}

int cmd_gen_pop(std::size_t n, std::uint64_t seed, const std::string& out)
{
    const auto pop = synthesize_population(n, seed);
    const auto csv = population_to_csv(pop);
    write_text_file(out, csv);
    std::cout << sha256_hex(csv) << "  " << out << '\n';
    return 0;
}

int cmd_simulate(const CommonArgs& args, const std::string& scenario, const std::string& out_dir)
{
    const StudyConfig cfg = resolve(args);
    ScenarioConfig sc = cfg.scenario_for(ScenarioRole::baseline);
    sc.policy.kind = parse_policy_kind(scenario);
    sc.validate();
    const Population pop = build_population(cfg);
    const SocialNetwork net = watts_strogatz(pop.size(), cfg.network_k, cfg.network_p, cfg.network_seed);
    auto ens = run_ensemble(sc, pop, net, cfg.iterations, cfg.base_seed, cfg.ensemble_options());
    const auto summary = summarize_ensemble(ens);

    std::ostringstream runs;
    runs << "run,seed,year,adoption_fraction,emissions_gg,tax_eur,subsidy_eur\n";
    for (std::size_t r = 0; r < ens.runs.size(); ++r) {
        for (const auto& y : ens.runs[r].years) {
            runs << r << ',' << ens.runs[r].seed << ',' << y.year << ',' << format_double(y.adoption_fraction) << ','
                 << format_double(y.emissions_gg) << ',' << format_double(y.tax_eur) << ','
                 << format_double(y.subsidy_eur) << '\n';
        }
    }
    Json metrics{{"scenario", std::string(to_string(sc.policy.kind))},
                 {"iterations", cfg.iterations},
                 {"base_seed", cfg.base_seed},
                 {"network_seed", net.seed()},
                 {"final_mean_adoption", summary.mean_adoption.back()},
                 {"t50", {{"mean", summary.t50.mean}, {"std", summary.t50.std}, {"reached", summary.t50.reached}}},
                 {"t90", {{"mean", summary.t90.mean}, {"std", summary.t90.std}, {"reached", summary.t90.reached}}},
                 {"peak_velocity", {{"mean", summary.peak_velocity.mean}, {"std", summary.peak_velocity.std}}}};

    const std::filesystem::path dir(out_dir);
    const std::string tag(to_string(sc.policy.kind));
    std::vector<std::pair<std::string, std::string>> files{
        {"summary_" + tag + ".csv", ensemble_summary_csv(summary)},
        {"trajectories_" + tag + ".csv", runs.str()},
        {"metrics_" + tag + ".json", metrics.dump(2) + "\n"},
    };
    for (const auto& [name, content] : files) {
        write_text_file(dir / name, content);
        std::cout << sha256_hex(content) << "  " << (dir / name).string() << '\n';
    }
    return 0;
}

int cmd_calibrate(const CommonArgs& args, const std::string& anchors_path, std::optional<int> first_test_year,
                  const std::string& grid, const std::string& out)
{
    StudyConfig cfg = resolve(args);
    if (first_test_year) {
        cfg.anchors.first_test_year = *first_test_year;
    }
    if (!anchors_path.empty()) {
        cfg.anchors = load_anchors(anchors_path, cfg.anchors.first_test_year);
    }
    if (!grid.empty()) {
        cfg.calibration_grid = parse_double_list(grid, "--grid");
    }
    cfg.validate();
    const Population pop = build_population(cfg);
    const SocialNetwork net = watts_strogatz(pop.size(), cfg.network_k, cfg.network_p, cfg.network_seed);
    CalibrationOptions opts;
    opts.iterations = args.iterations ? *args.iterations : cfg.calibration_iterations;
    opts.base_seed = cfg.base_seed;
    opts.observed_only = cfg.observed_only;
    opts.ensemble = cfg.ensemble_options();
    const auto base_cfg = cfg.scenario_for(ScenarioRole::baseline);
    const auto result = calibrate_omega(cfg.anchors, cfg.calibration_grid, base_cfg, pop, net, opts);
    const auto json = result.to_json();
    if (!out.empty()) {
        write_text_file(out, json);
    }
    std::cout << json;
    return 0;
}

int cmd_study(const CommonArgs& args, const std::string& out_dir)
{
    const StudyConfig cfg = resolve(args);
    const auto report = run_full_study(cfg);
    print_manifest(write_study_report(report, out_dir), out_dir);
    return 0;
}

int cmd_quartiles(const CommonArgs& args, const std::string& out_dir)
{
    const StudyConfig cfg = resolve(args);
    print_manifest(write_quartile_report(run_quartile_study(cfg), out_dir), out_dir);
    return 0;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"fertdiff: protected-urea adoption simulator"};
    app.require_subcommand(1);

    std::size_t n = 295;
    std::uint64_t pop_seed = 1;
    std::string pop_out;
    auto* gen = app.add_subcommand("gen-pop", "write a synthetic farm population CSV");
    gen->add_option("--n", n, "number of farms")->capture_default_str();
    gen->add_option("--seed", pop_seed, "generator seed")->capture_default_str();
    gen->add_option("--out", pop_out, "output CSV")->required();

    CommonArgs sim_args;
    std::string scenario = "baseline";
    std::string sim_out;
    auto* sim = app.add_subcommand("simulate", "run one scenario ensemble");
    add_common(sim, sim_args);
    sim->add_option("--scenario", scenario, "baseline, tax or subsidy")
        ->check(CLI::IsMember({"baseline", "tax", "subsidy"}))
        ->capture_default_str();
    sim->add_option("--iterations", sim_args.iterations, "Monte Carlo runs");
    sim->add_option("--seed", sim_args.seed, "base seed");
    sim->add_option("--out-dir", sim_out, "output directory")->required();

    CommonArgs cal_args;
    std::string anchors, grid, cal_out;
    std::optional<int> first_test_year;
    auto* cal = app.add_subcommand("calibrate", "grid-search omega against adoption anchors");
    add_common(cal, cal_args);
    cal->add_option("--anchors", anchors, "anchor CSV (year, adoption, interpolated)")->check(CLI::ExistingFile);
    cal->add_option("--first-test-year", first_test_year, "first calendar year of the test window");
    cal->add_option("--grid", grid, "comma-separated omega candidates");
    cal->add_option("--iterations", cal_args.iterations, "runs per candidate");
    cal->add_option("--seed", cal_args.seed, "base seed");
    cal->add_option("--out", cal_out, "write the JSON report here as well");

    CommonArgs study_args;
    std::string study_out;
    auto* study = app.add_subcommand("study", "full three-scenario study with report");
    add_common(study, study_args);
    study->add_option("--iterations", study_args.iterations, "Monte Carlo runs per scenario");
    study->add_option("--seed", study_args.seed, "base seed");
    study->add_option("--out-dir", study_out, "report directory")->required();

    CommonArgs q_args;
    std::string q_out;
    auto* quart = app.add_subcommand("quartiles", "per-size-quartile adoption curves");
    add_common(quart, q_args);
    quart->add_option("--iterations", q_args.iterations, "Monte Carlo runs per quartile");
    quart->add_option("--seed", q_args.seed, "base seed");
    quart->add_option("--out-dir", q_out, "output directory")->required();

    try {
        app.parse(argc, argv);
    }
    catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    }
    catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    }
    catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (gen->parsed()) {
            return cmd_gen_pop(n, pop_seed, pop_out);
        }
        if (sim->parsed()) {
            return cmd_simulate(sim_args, scenario, sim_out);
        }
        if (cal->parsed()) {
            return cmd_calibrate(cal_args, anchors, first_test_year, grid, cal_out);
        }
        if (study->parsed()) {
            return cmd_study(study_args, study_out);
        }
        if (quart->parsed()) {
            return cmd_quartiles(q_args, q_out);
        }
    }
    catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 2;
}
