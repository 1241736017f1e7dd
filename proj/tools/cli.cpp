#include "cli.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "fsdstack/sim/loop.hpp"
#include "fsdstack/track_io.hpp"

namespace fsd::cli {

namespace {

namespace fs = std::filesystem;

void ensure_out_dir(const std::string& dir) {
    if (!dir.empty() && dir != ".") fs::create_directories(dir);
}

std::string join(const std::string& dir, const std::string& name) {
    return (fs::path(dir) / name).string();
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.9g", v);
    return buf;
}

ScenarioConfig load_scenario(const std::string& path, const GlobalOptions& opts) {
    KeyValueConfig kv = KeyValueConfig::from_file(path);
    if (opts.seed) kv.set("seed", std::to_string(*opts.seed));
    return scenario_from_kv(kv);
}

void write_run_outputs(const RunResult& result, const GlobalOptions& opts, bool slam_files) {
    ensure_out_dir(opts.out_dir);
    save_metrics_json(result.metrics, join(opts.out_dir, "metrics.json"));
    save_tick_log_csv(result.log, join(opts.out_dir, "ticks.csv"));
    if (!result.reference.empty()) {
        save_trajectory(result.reference, join(opts.out_dir, "trajectory.csv"));
    }
    if (slam_files) {
        save_slam_snapshot_csv(result.log, join(opts.out_dir, "slam_snapshots.csv"));
        if (result.graph_valid) {
            save_graph_json(result.graph, join(opts.out_dir, "pose_graph.json"));
        }
    }
}

}  // namespace

int run_simulate(const std::string& scenario_path, const GlobalOptions& opts) {
    const ScenarioConfig cfg = load_scenario(scenario_path, opts);
    const RunResult result = run_closed_loop(cfg);
    write_run_outputs(result, opts, cfg.slam_enabled);
    std::cout << metrics_to_json(result.metrics) << "\n";
    return 0;
}

int run_plan(const std::string& track_path, const std::optional<std::string>& config_path,
             const std::optional<std::string>& smoothing, const GlobalOptions& opts) {
    const TrackMap track = load_track(track_path);
    KeyValueConfig kv;
    if (config_path) kv = KeyValueConfig::from_file(*config_path);
    if (smoothing) kv.set("planner.smoothing", *smoothing);
    const PlannerConfig cfg = planner_config_from_kv(kv);

    const PlanResult plan = plan_path(track.all_cones(), track.start_pose, cfg);
    const PathMetrics metrics = path_metrics(plan.trajectory, track.all_cones());

    ensure_out_dir(opts.out_dir);
    save_trajectory(plan.trajectory, join(opts.out_dir, "trajectory.csv"));
    std::ofstream mj(join(opts.out_dir, "metrics.json"));
    mj << path_metrics_to_json(metrics) << "\n";
    std::cout << path_metrics_to_json(metrics) << "\n";
    return 0;
}

int run_slam_demo(const std::string& scenario_path, const GlobalOptions& opts) {
    ScenarioConfig cfg = load_scenario(scenario_path, opts);
    cfg.slam_enabled = true;
    const RunResult result = run_closed_loop(cfg);
    write_run_outputs(result, opts, true);
    std::cout << "final_pose_error " << fmt(result.final_pose_error) << "\n"
              << "landmark_rmse " << fmt(result.landmark_rmse) << "\n"
              << "loop_closures " << result.loop_closures << "\n";
    return 0;
}

std::string compare_csv(const KeyValueConfig& sweep) {
    std::vector<std::string> controllers = sweep.get_list("controllers");
    std::vector<std::string> smoothings = sweep.get_list("smoothings");
    std::vector<std::string> seeds = sweep.get_list("seeds");
    if (controllers.empty()) controllers = {sweep.get_string("controller", "combined")};
    if (smoothings.empty()) smoothings = {sweep.get_string("planner.smoothing", "combined")};
    if (seeds.empty()) seeds = {sweep.get_string("seed", "42")};
    if (controllers.empty() || smoothings.empty() || seeds.empty()) {
        throw std::invalid_argument("compare: empty sweep axis");
    }

    // Validate every run configuration before launching the sweep.
    std::vector<ScenarioConfig> runs;
    for (const std::string& controller : controllers) {
        for (const std::string& smoothing : smoothings) {
            for (const std::string& seed : seeds) {
                KeyValueConfig kv = sweep;
                kv.set("controller", controller);
                kv.set("planner.smoothing", smoothing);
                kv.set("seed", seed);
                runs.push_back(scenario_from_kv(kv));
            }
        }
    }

    std::ostringstream out;
    out << "controller,smoothing,seed,mean_lap_time,rms_lateral_error,itae,"
           "max_lateral_error,mean_cvr,max_cvr,min_dist_to_boundary,dnf\n";
    std::size_t idx = 0;
    for (const std::string& controller : controllers) {
        for (const std::string& smoothing : smoothings) {
            for (const std::string& seed : seeds) {
                const RunResult r = run_closed_loop(runs[idx++]);
                const RunMetrics& m = r.metrics;
                out << controller << "," << smoothing << "," << seed << ","
                    << fmt(m.mean_lap_time) << "," << fmt(m.rms_lateral_error) << ","
                    << fmt(m.itae) << "," << fmt(m.max_lateral_error) << ","
                    << fmt(m.mean_cvr) << "," << fmt(m.max_cvr) << ","
                    << fmt(m.min_dist_to_boundary) << "," << (m.dnf ? "1" : "0") << "\n";
            }
        }
    }
    return out.str();
}

int run_compare(const std::string& sweep_path, const GlobalOptions& opts) {
    KeyValueConfig sweep = KeyValueConfig::from_file(sweep_path);
    if (opts.seed) sweep.set("seeds", std::to_string(*opts.seed));
    const std::string csv = compare_csv(sweep);
    ensure_out_dir(opts.out_dir);
    const std::string path = join(opts.out_dir, "compare.csv");
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << csv;
    std::cout << csv;
    return 0;
}

int run_gen_track(const std::string& kind, const KeyValueConfig& params, std::uint64_t seed,
                  const std::string& out_path) {
    TrackGenParams p;
    p.width = params.get_double("width", p.width);
    p.cone_spacing = params.get_double("cone_spacing", p.cone_spacing);
    p.length = params.get_double("length", p.length);
    p.radius = params.get_double("radius", p.radius);
    p.twisty_base_radius = params.get_double("base_radius", p.twisty_base_radius);
    p.twisty_amplitude = params.get_double("amplitude", p.twisty_amplitude);
    p.max_curvature = params.get_double("max_curvature", p.max_curvature);
    const TrackMap track = generate_track(track_kind_from_string(kind), p, seed);
    save_track(track, out_path);
    std::cout << "wrote " << out_path << " (" << track.left_cones.size() << " left, "
              << track.right_cones.size() << " right cones)\n";
    return 0;
}

int run_metrics(const std::string& log_path, const std::optional<std::string>& ref_path,
                const GlobalOptions& opts) {
    // Rebuild a RunLog from a tick CSV.
    std::ifstream in(log_path);
    if (!in) throw std::runtime_error("cannot open log: " + log_path);
    RunLog log;
    std::string line;
    bool header = true;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (header) {
            header = false;
            continue;
        }
        TickLog row;
        std::istringstream ls(line);
        std::string field;
        std::vector<double> vals;
        while (std::getline(ls, field, ',')) vals.push_back(std::stod(field));
        if (vals.size() < 12) throw std::runtime_error("metrics: malformed log row");
        row.t = vals[0];
        row.e = vals[1];
        row.theta_err = vals[2];
        row.alpha = vals[3];
        row.kappa_ld = vals[4];
        row.k_pp = vals[5];
        row.delta_st = vals[6];
        row.delta_pp = vals[7];
        row.delta_c = vals[8];
        row.v_target = vals[9];
        row.v_meas = vals[10];
        row.torque = vals[11];
        log.ticks.push_back(row);
    }
    if (log.ticks.size() >= 2) {
        log.dt = log.ticks[1].t - log.ticks[0].t;
    } else if (!log.ticks.empty()) {
        log.dt = log.ticks[0].t;
    }

    Trajectory ref;
    if (ref_path) ref = load_trajectory(*ref_path);
    const RunMetrics m = compute_metrics(log, ref, {});
    ensure_out_dir(opts.out_dir);
    save_metrics_json(m, join(opts.out_dir, "metrics.json"));
    std::cout << metrics_to_json(m) << "\n";
    return 0;
}

}  // namespace fsd::cli
