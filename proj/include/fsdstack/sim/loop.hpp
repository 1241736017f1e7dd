#ifndef FSDSTACK_SIM_LOOP_HPP
#define FSDSTACK_SIM_LOOP_HPP

#include <string>
#include <vector>

#include "fsdstack/sim/scenario.hpp"
#include "fsdstack/slam/pose_graph.hpp"

namespace fsd {

/// One row of the per-tick log: control log schema plus pose and ground truth.
struct TickLog {
    double t = 0.0;
    double e = 0.0;         // lateral error of the true pose vs the reference
    double theta_err = 0.0;
    double alpha = 0.0;
    double kappa_ld = 0.0;
    double k_pp = 0.0;
    double delta_st = 0.0;
    double delta_pp = 0.0;
    double delta_c = 0.0;
    double v_target = 0.0;
    double v_meas = 0.0;
    double torque = 0.0;
    double est_x = 0.0, est_y = 0.0, est_theta = 0.0;
    double true_x = 0.0, true_y = 0.0, true_theta = 0.0;
};

struct SlamSnapshot {
    int step = 0;
    double est_x = 0.0, est_y = 0.0, est_theta = 0.0;
    int n_landmarks = 0;
    double ess = 0.0;
};

struct RunLog {
    std::vector<TickLog> ticks;
    std::vector<SlamSnapshot> slam_snapshots;
    std::vector<double> lap_times;
    double dt = 0.0;
};

struct RunMetrics {
    std::vector<double> lap_times;
    double mean_lap_time = 0.0;
    double rms_lateral_error = 0.0;
    double itae = 0.0;  // integral of time-weighted absolute error
    double max_lateral_error = 0.0;
    double max_lat_acc = 0.0, mean_lat_acc = 0.0, std_lat_acc = 0.0;
    double max_cvr = 0.0, mean_cvr = 0.0, std_cvr = 0.0;
    double min_dist_to_boundary = 0.0;
    bool dnf = false;
    std::string dnf_reason;
};

struct RunResult {
    RunMetrics metrics;
    RunLog log;
    Trajectory reference;       // active reference at the end of the run
    TrackMap track;
    PoseGraph graph;            // pose graph at the last loop closure
    bool graph_valid = false;
    int loop_closures = 0;
    double final_pose_error = 0.0;       // SLAM estimate vs truth at run end
    double landmark_rmse = 0.0;          // matched landmarks vs true cones
};

/// Closed loop: sense -> estimate (SLAM or ground truth) -> classify colors ->
/// (re)plan -> control -> step. Laps are counted on directed start-line
/// crossings; the run ends after the configured laps, on timeout, or with a
/// DNF when the vehicle leaves the corridor or planning fails.
RunResult run_closed_loop(const ScenarioConfig& cfg);

/// Deterministic metric assembly from logs, the active reference, and the
/// boundary cones.
RunMetrics compute_metrics(const RunLog& log, const Trajectory& reference,
                           const std::vector<Cone>& boundary_cones);

std::string metrics_to_json(const RunMetrics& m);
void save_metrics_json(const RunMetrics& m, const std::string& path);
void save_tick_log_csv(const RunLog& log, const std::string& path);
void save_slam_snapshot_csv(const RunLog& log, const std::string& path);

}  // namespace fsd

#endif  // FSDSTACK_SIM_LOOP_HPP
