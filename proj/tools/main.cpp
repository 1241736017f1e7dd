#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "cli.hpp"
#include "fsdstack/config.hpp"

int main(int argc, char** argv) {
    CLI::App app{"fsd - cone-track racing stack: simulate, plan, and compare"};
    app.require_subcommand(1);

    fsd::cli::GlobalOptions opts;
    std::optional<std::uint64_t> seed_override;
    app.add_option("--out", opts.out_dir, "Output directory")->capture_default_str();
    app.add_option("--seed", seed_override, "Override the scenario/sweep seed");
    app.add_option("--format", opts.format, "Output format of compare (csv|json)")
        ->check(CLI::IsMember({"csv", "json"}))
        ->capture_default_str();

    auto* sim = app.add_subcommand("simulate", "Run a closed-loop scenario");
    std::string sim_scenario;
    sim->add_option("scenario", sim_scenario, "Scenario config file")->required();

    auto* plan = app.add_subcommand("plan", "Plan a trajectory on a track file");
    std::string plan_track;
    std::optional<std::string> plan_config;
    std::optional<std::string> plan_smoothing;
    plan->add_option("track", plan_track, "Track CSV file")->required();
    plan->add_option("--config", plan_config, "Planner config file");
    plan->add_option("--smoothing", plan_smoothing,
                     "Smoothing variant (raw|moving_avg|opheim|combined)");

    auto* slam = app.add_subcommand("slam-demo", "Run a SLAM-focused scenario");
    std::string slam_scenario;
    slam->add_option("scenario", slam_scenario, "Scenario config file")->required();

    auto* compare = app.add_subcommand("compare", "Run a sweep and aggregate metrics");
    std::string sweep_path;
    compare->add_option("sweep", sweep_path, "Sweep config file")->required();

    auto* gen = app.add_subcommand("gen-track", "Generate a synthetic track file");
    std::string gen_kind = "twisty";
    std::uint64_t gen_seed = 1;
    std::string gen_out = "track.csv";
    double gen_width = 4.0, gen_spacing = 3.0, gen_length = 75.0, gen_radius = 20.0;
    gen->add_option("kind", gen_kind, "acceleration|ring|twisty|hairpin")->required();
    gen->add_option("--track-seed", gen_seed, "Generator seed")->capture_default_str();
    gen->add_option("--width", gen_width, "Corridor width, m")->capture_default_str();
    gen->add_option("--spacing", gen_spacing, "Cone spacing, m")->capture_default_str();
    gen->add_option("--length", gen_length, "Straight length, m")->capture_default_str();
    gen->add_option("--radius", gen_radius, "Turn/ring radius, m")->capture_default_str();
    gen->add_option("--track-out", gen_out, "Output track file")->capture_default_str();

    auto* metrics = app.add_subcommand("metrics", "Recompute metrics from a tick log");
    std::string metrics_log;
    std::optional<std::string> metrics_ref;
    metrics->add_option("log", metrics_log, "Tick log CSV")->required();
    metrics->add_option("--ref", metrics_ref, "Reference trajectory CSV");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        app.exit(e);
        return 0;
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    opts.seed = seed_override;
    try {
        if (sim->parsed()) return fsd::cli::run_simulate(sim_scenario, opts);
        if (plan->parsed()) return fsd::cli::run_plan(plan_track, plan_config, plan_smoothing, opts);
        if (slam->parsed()) return fsd::cli::run_slam_demo(slam_scenario, opts);
        if (compare->parsed()) return fsd::cli::run_compare(sweep_path, opts);
        if (gen->parsed()) {
            fsd::KeyValueConfig params;
            params.set("width", std::to_string(gen_width));
            params.set("cone_spacing", std::to_string(gen_spacing));
            params.set("length", std::to_string(gen_length));
            params.set("radius", std::to_string(gen_radius));
            return fsd::cli::run_gen_track(gen_kind, params, gen_seed, gen_out);
        }
        if (metrics->parsed()) return fsd::cli::run_metrics(metrics_log, metrics_ref, opts);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 1;
}
