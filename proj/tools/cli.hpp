#ifndef FSDSTACK_TOOLS_CLI_HPP
#define FSDSTACK_TOOLS_CLI_HPP

#include <optional>
#include <string>

#include "fsdstack/config.hpp"

namespace fsd::cli {

struct GlobalOptions {
    std::string out_dir = ".";
    std::optional<std::uint64_t> seed;
    std::string format = "csv";  // compare output: csv or json
};

/// Runs a scenario and writes metrics.json, ticks.csv, trajectory.csv and,
/// in SLAM mode, slam_snapshots.csv (+ pose_graph.json after a closure).
int run_simulate(const std::string& scenario_path, const GlobalOptions& opts);

/// Plans on a track file and writes trajectory.csv + metrics.json.
int run_plan(const std::string& track_path, const std::optional<std::string>& config_path,
             const std::optional<std::string>& smoothing, const GlobalOptions& opts);

/// SLAM-focused run: snapshot CSV, graph dump, estimate error summary.
int run_slam_demo(const std::string& scenario_path, const GlobalOptions& opts);

/// Aggregate CSV of a sweep (controllers x smoothings x seeds), one row per
/// run in deterministic axis order.
std::string compare_csv(const KeyValueConfig& sweep);
int run_compare(const std::string& sweep_path, const GlobalOptions& opts);

int run_gen_track(const std::string& kind, const KeyValueConfig& params, std::uint64_t seed,
                  const std::string& out_path);

/// Recomputes error metrics from a tick log (optionally with the reference
/// trajectory for the path metrics).
int run_metrics(const std::string& log_path, const std::optional<std::string>& ref_path,
                const GlobalOptions& opts);

}  // namespace fsd::cli

#endif  // FSDSTACK_TOOLS_CLI_HPP
