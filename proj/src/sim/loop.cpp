#include "fsdstack/sim/loop.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <optional>

#include <nlohmann/json.hpp>

#include "fsdstack/fusion/intensity.hpp"
#include "fsdstack/sim/vehicle.hpp"

namespace fsd {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Brake-limited stopping tail for open reference paths.
void apply_terminal_stop(Trajectory& traj, double a_brake) {
    if (traj.closed || traj.size() < 2) return;
    const auto s = traj.arc_lengths();
    const double s_end = s.back();
    for (std::size_t i = 0; i < traj.size(); ++i) {
        const double allowed = std::sqrt(std::max(0.0, 2.0 * a_brake * (s_end - s[i])));
        traj.points[i].speed = std::min(traj.points[i].speed, allowed);
    }
}

struct Keyframe {
    Pose2D est_pose;
    double edge_v = 0.0;      // composed odometry to the previous keyframe
    double edge_omega = 0.0;
    int ticks = 0;            // ticks aggregated into the edge
    std::vector<std::pair<double, double>> observations;  // (range, bearing)
};

/// Builds the pose graph from the keyframe history against the current best
/// map, associating recorded observations to landmarks retrospectively.
PoseGraph build_graph(const std::vector<Keyframe>& keyframes,
                      const std::vector<std::pair<int, Vec2>>& landmarks,
                      const ScenarioConfig& cfg) {
    PoseGraph g;
    double mean_ticks = 0.0;
    for (std::size_t i = 0; i < keyframes.size(); ++i) {
        g.pose_nodes.push_back(keyframes[i].est_pose);
        if (i > 0) {
            g.motion_edges.push_back({static_cast<int>(i - 1), static_cast<int>(i),
                                      keyframes[i].edge_v, keyframes[i].edge_omega});
            mean_ticks += keyframes[i].ticks;
        }
    }
    if (g.motion_edges.size() > 0) mean_ticks /= static_cast<double>(g.motion_edges.size());

    g.landmark_nodes.reserve(landmarks.size());
    for (const auto& [id, mean] : landmarks) g.landmark_nodes.push_back(mean);

    const double assoc_radius_sq = 1.5 * 1.5;
    for (std::size_t i = 0; i < keyframes.size(); ++i) {
        const Pose2D& pose = keyframes[i].est_pose;
        for (const auto& [range, bearing] : keyframes[i].observations) {
            const double heading = pose.theta + bearing;
            const Vec2 world(pose.x + range * std::cos(heading),
                             pose.y + range * std::sin(heading));
            int best = -1;
            double best_d = assoc_radius_sq;
            for (std::size_t k = 0; k < g.landmark_nodes.size(); ++k) {
                const double d = (g.landmark_nodes[k] - world).squaredNorm();
                if (d < best_d) {
                    best_d = d;
                    best = static_cast<int>(k);
                }
            }
            if (best >= 0) {
                g.observation_edges.push_back({static_cast<int>(i), best, range, bearing});
            }
        }
    }

    // Keyframe edges aggregate several odometry steps; scale the noise.
    const double agg = std::sqrt(std::max(1.0, mean_ticks));
    g.motion_sigma_v = cfg.slam.motion_noise_v * agg;
    g.motion_sigma_omega = cfg.slam.motion_noise_omega * agg;
    g.obs_sigma_range = cfg.slam.meas_noise_range;
    g.obs_sigma_bearing = cfg.slam.meas_noise_bearing;
    return g;
}

struct Stats {
    double max = 0.0, mean = 0.0, stddev = 0.0;
};

Stats series_stats(const std::vector<double>& xs) {
    Stats s;
    if (xs.empty()) return s;
    for (double x : xs) {
        s.max = std::max(s.max, x);
        s.mean += x;
    }
    s.mean /= xs.size();
    for (double x : xs) s.stddev += (x - s.mean) * (x - s.mean);
    s.stddev = std::sqrt(s.stddev / xs.size());
    return s;
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.9g", v);
    return buf;
}

}  // namespace

RunResult run_closed_loop(const ScenarioConfig& cfg) {
    cfg.validate();
    RunResult result;
    result.track = scenario_track(cfg);
    const TrackMap& track = result.track;
    if (!track.closed && cfg.laps != 1) {
        throw std::invalid_argument("run_closed_loop: open tracks support exactly one lap");
    }

    std::mt19937_64 rng_sense(splitmix64(cfg.seed ^ 0x5EED5EEDULL));
    std::mt19937_64 rng_odo(splitmix64(cfg.seed ^ 0x0D0D0D0DULL));
    std::normal_distribution<double> odo_noise_v(0.0, cfg.slam.motion_noise_v);
    std::normal_distribution<double> odo_noise_w(0.0, cfg.slam.motion_noise_omega);

    VehicleState state;
    state.pose = track.start_pose;

    std::optional<ParticleFilter> filter;
    if (cfg.slam_enabled) {
        filter.emplace(cfg.slam, track.start_pose, splitmix64(cfg.seed ^ 0x51A851A8ULL));
    }
    LoopClosureDetector closure_detector(cfg.loop_closure);

    std::vector<Keyframe> keyframes;
    Pose2D odo_accum(0.0, 0.0, 0.0);
    double dist_since_kf = 0.0;
    int ticks_since_kf = 0;
    std::optional<OdometryInput> pending_odometry;

    Trajectory reference;
    LongitudinalController longitudinal_ctrl(cfg.control);

    // Lap accounting against the start line.
    const Vec2 start_pos = track.start_pose.position();
    const Vec2 start_dir = track.start_pose.heading_vector();
    const double lateral_gate =
        track.left_cones.empty()
            ? 3.0
            : 1.0 + (track.left_cones.front().position - start_pos).norm();
    bool lap_armed = false;
    double prev_s = 0.0;
    double lap_start_time = 0.0;
    int laps_done = 0;

    // Open-track finish: progression past the last centerline point.
    const auto centerline = track_centerline(track);

    result.log.dt = cfg.dt;
    const int max_ticks =
        static_cast<int>(std::ceil(cfg.laps * cfg.lap_timeout / cfg.dt)) + 1;
    int planner_failures = 0;
    const int planner_grace_ticks = std::max(40, 2 * cfg.replan_period);

    auto try_plan = [&](const Pose2D& from, const std::vector<Cone>& cones) {
        try {
            PlanResult pr = plan_path(cones, from, cfg.planner);
            apply_terminal_stop(pr.trajectory, cfg.planner.limits.a_brake_max);
            reference = std::move(pr.trajectory);
            return true;
        } catch (const std::exception&) {
            return false;
        }
    };

    if (!cfg.slam_enabled) {
        if (!try_plan(track.start_pose, track.all_cones())) {
            result.metrics.dnf = true;
            result.metrics.dnf_reason = "planner";
            return result;
        }
    }

    for (int tick = 0; tick < max_ticks; ++tick) {
        const double t = tick * cfg.dt;

        // SLAM predict with the odometry accumulated across the last step.
        if (cfg.slam_enabled && pending_odometry) {
            filter->predict_step(*pending_odometry);
            pending_odometry.reset();
        }

        auto observations = sense(state, track, cfg.sensor, rng_sense);
        for (ConeObservation& z : observations) {
            if (z.color == ConeColor::Unknown && z.intensity_layers &&
                z.intensity_layers->size() >= 3) {
                z.color = classify_intensity(*z.intensity_layers);
            }
        }

        Pose2D est_pose = state.pose;
        std::vector<Cone> est_map;
        bool replan_due = false;

        if (cfg.slam_enabled) {
            filter->update_step(observations);
            auto estimate = filter->estimate();
            est_pose = estimate.first;

            const Particle& best = filter->particles()[best_particle_index(filter->particles())];
            est_map.reserve(best.landmarks.size());
            for (const auto& [id, lm] : best.landmarks) {
                if (lm.hit_count >= 2) est_map.emplace_back(lm.mean, lm.color);
            }

            result.log.slam_snapshots.push_back({filter->step(), est_pose.x, est_pose.y,
                                                 est_pose.theta,
                                                 static_cast<int>(best.landmarks.size()),
                                                 filter->last_ess()});

            // Keyframe cadence for the pose graph.
            if (keyframes.empty() || dist_since_kf >= cfg.keyframe_spacing) {
                Keyframe kf;
                kf.est_pose = est_pose;
                kf.edge_v = std::hypot(odo_accum.x, odo_accum.y);
                kf.edge_omega = 0.5 * odo_accum.theta;
                kf.ticks = ticks_since_kf;
                kf.observations.reserve(observations.size());
                for (const ConeObservation& z : observations) {
                    kf.observations.emplace_back(z.range, z.bearing);
                }
                keyframes.push_back(std::move(kf));
                odo_accum = Pose2D(0.0, 0.0, 0.0);
                dist_since_kf = 0.0;
                ticks_since_kf = 0;
            }

            if (closure_detector.feed(est_pose, track.start_pose) && keyframes.size() >= 3) {
                // Collect the best particle's stable landmarks as graph nodes.
                std::vector<std::pair<int, Vec2>> nodes;
                for (const auto& [id, lm] : best.landmarks) {
                    if (lm.hit_count >= 2) nodes.emplace_back(id, lm.mean);
                }
                PoseGraph graph = build_graph(keyframes, nodes, cfg);
                const OptimizeResult opt = optimize_graph(graph);
                if (opt.converged) {
                    result.graph = opt.graph;
                    result.graph_valid = true;
                    ++result.loop_closures;

                    // Correct the keyframe history and re-seed the filter
                    // from the optimized estimate.
                    for (std::size_t i = 0; i < keyframes.size(); ++i) {
                        keyframes[i].est_pose = opt.graph.pose_nodes[i];
                    }
                    std::map<int, LandmarkEstimate> reseeded = best.landmarks;
                    for (std::size_t k = 0; k < nodes.size(); ++k) {
                        auto it = reseeded.find(nodes[k].first);
                        if (it != reseeded.end()) {
                            it->second.mean = opt.graph.landmark_nodes[k];
                        }
                    }
                    const Pose2D corrected = opt.graph.pose_nodes.back();
                    filter->reseed(corrected, reseeded);
                    est_pose = corrected;
                    est_map.clear();
                    for (const auto& [id, lm] : reseeded) {
                        if (lm.hit_count >= 2) est_map.emplace_back(lm.mean, lm.color);
                    }
                    replan_due = true;
                }
            }

            if (reference.empty() || tick % cfg.replan_period == 0) replan_due = true;
        } else {
            est_map = track.all_cones();
        }

        if (cfg.slam_enabled && replan_due) {
            if (est_map.size() >= 3 && try_plan(est_pose, est_map)) {
                planner_failures = 0;
            } else if (reference.empty()) {
                if (++planner_failures > planner_grace_ticks) {
                    result.metrics.dnf = true;
                    result.metrics.dnf_reason = "planner";
                    break;
                }
            }
        }

        // Control.
        TickLog row;
        row.t = t + cfg.dt;  // error is attributed to the end of the tick
        row.v_meas = state.v;
        row.true_x = state.pose.x;
        row.true_y = state.pose.y;
        row.true_theta = state.pose.theta;
        row.est_x = est_pose.x;
        row.est_y = est_pose.y;
        row.est_theta = est_pose.theta;

        double steer_cmd = 0.0;
        double torque = 0.0;
        if (!reference.empty()) {
            const TrackingState ts =
                compute_tracking_state(est_pose, state.v, state.r, reference, cfg.control);
            const double delta_st = stanley(ts, cfg.vehicle, cfg.control);
            const double delta_pp = pure_pursuit(ts, cfg.vehicle, cfg.control);
            steer_cmd = lateral_command(cfg.controller, ts, cfg.vehicle, cfg.control);
            const double v_target = reference[ts.nearest_index].speed;
            torque = longitudinal_ctrl.step(state.v, v_target, cfg.dt);

            row.alpha = ts.alpha;
            row.kappa_ld = ts.kappa_at_lookahead;
            row.k_pp = combination_weight(ts.kappa_at_lookahead, cfg.control);
            row.delta_st = delta_st;
            row.delta_pp = delta_pp;
            row.delta_c = steer_cmd;
            row.v_target = v_target;

            // Metrics are measured from the true pose.
            const TrackingState truth =
                compute_tracking_state(state.pose, state.v, state.r, reference, cfg.control);
            row.e = truth.cross_track;
            row.theta_err = truth.relative_yaw;
        }
        row.torque = torque;
        result.log.ticks.push_back(row);

        // Vehicle step plus noisy odometry bookkeeping.
        const Pose2D pre_pose = state.pose;
        state = step_vehicle(state, steer_cmd, torque, cfg.vehicle, cfg.dt, cfg.actuator);

        const double step_dist = (state.pose.position() - pre_pose.position()).norm();
        const double step_dtheta = wrap_angle(state.pose.theta - pre_pose.theta);
        if (cfg.slam_enabled) {
            OdometryInput u;
            u.v = step_dist + odo_noise_v(rng_odo);
            u.omega = 0.5 * step_dtheta + odo_noise_w(rng_odo);
            u.dt = cfg.dt;
            pending_odometry = u;
            odo_accum = apply_motion(odo_accum, u.v, u.omega, u.dt, MotionModel::Verbatim);
            dist_since_kf += step_dist;
            ++ticks_since_kf;
        }

        // Corridor containment of the true pose.
        if (corridor_excess(track, state.pose.position()) > 0.0) {
            result.metrics.dnf = true;
            result.metrics.dnf_reason = "boundary";
            break;
        }

        // Lap accounting.
        const double t_now = (tick + 1) * cfg.dt;
        if (track.closed) {
            const Vec2 rel = state.pose.position() - start_pos;
            const double s = rel.dot(start_dir);
            const double lateral = std::abs(cross2(start_dir, rel));
            if (!lap_armed && rel.norm() > 5.0) lap_armed = true;
            if (lap_armed && prev_s < 0.0 && s >= 0.0 && lateral <= lateral_gate &&
                state.v > 0.1) {
                const double frac = s - prev_s > 1e-12 ? -prev_s / (s - prev_s) : 1.0;
                const double t_cross = t_now - cfg.dt + frac * cfg.dt;
                result.log.lap_times.push_back(t_cross - lap_start_time);
                lap_start_time = t_cross;
                lap_armed = false;
                ++laps_done;
                if (laps_done >= cfg.laps) break;
            }
            prev_s = s;
        } else if (centerline.size() >= 2) {
            const Vec2 end = centerline.back();
            Vec2 end_dir = end - centerline[centerline.size() - 2];
            if (end_dir.norm() > 1e-9) end_dir.normalize();
            if ((state.pose.position() - end).dot(end_dir) >= 0.0) {
                result.log.lap_times.push_back(t_now - lap_start_time);
                ++laps_done;
                break;
            }
        }

        if (t_now - lap_start_time > cfg.lap_timeout) {
            result.metrics.dnf = true;
            result.metrics.dnf_reason = "timeout";
            break;
        }
    }

    if (laps_done < cfg.laps && !result.metrics.dnf) {
        result.metrics.dnf = true;
        result.metrics.dnf_reason = "timeout";
    }

    result.reference = reference;

    // SLAM quality summary for convergence checks.
    if (cfg.slam_enabled && filter) {
        const auto estimate = filter->estimate();
        result.final_pose_error =
            (estimate.first.position() - state.pose.position()).norm();
        const Particle& best = filter->particles()[best_particle_index(filter->particles())];
        const auto true_cones = track.all_cones();
        std::vector<double> errors;
        for (const auto& [id, lm] : best.landmarks) {
            if (lm.hit_count < 2) continue;
            double nearest = std::numeric_limits<double>::infinity();
            for (const Cone& c : true_cones) {
                nearest = std::min(nearest, (c.position - lm.mean).squaredNorm());
            }
            errors.push_back(nearest);
        }
        double sum = 0.0;
        for (double e : errors) sum += e;
        result.landmark_rmse = errors.empty() ? 0.0 : std::sqrt(sum / errors.size());
    }

    const RunMetrics measured = compute_metrics(result.log, reference, track.all_cones());
    const bool dnf = result.metrics.dnf;
    const std::string reason = result.metrics.dnf_reason;
    result.metrics = measured;
    result.metrics.dnf = dnf;
    result.metrics.dnf_reason = reason;
    return result;
}

RunMetrics compute_metrics(const RunLog& log, const Trajectory& reference,
                           const std::vector<Cone>& boundary_cones) {
    if (log.ticks.empty()) throw std::invalid_argument("compute_metrics: empty log");
    RunMetrics m;
    m.lap_times = log.lap_times;
    if (!m.lap_times.empty()) {
        double sum = 0.0;
        for (double lt : m.lap_times) sum += lt;
        m.mean_lap_time = sum / static_cast<double>(m.lap_times.size());
    }

    double sq_sum = 0.0;
    for (const TickLog& row : log.ticks) {
        const double abs_e = std::abs(row.e);
        sq_sum += row.e * row.e;
        m.itae += row.t * abs_e * log.dt;
        m.max_lateral_error = std::max(m.max_lateral_error, abs_e);
    }
    m.rms_lateral_error = std::sqrt(sq_sum / static_cast<double>(log.ticks.size()));

    if (reference.size() >= 2) {
        constexpr double kReportSpeed = 5.0;
        std::vector<double> lat_acc;
        lat_acc.reserve(reference.size());
        for (const TrajectoryPoint& p : reference.points) {
            lat_acc.push_back(kReportSpeed * kReportSpeed * std::abs(p.curvature));
        }
        const Stats la = series_stats(lat_acc);
        m.max_lat_acc = la.max;
        m.mean_lat_acc = la.mean;
        m.std_lat_acc = la.stddev;

        const int n = static_cast<int>(reference.size());
        std::vector<double> cvr;
        const int last = reference.closed ? n : n - 1;
        for (int i = 0; i < last; ++i) {
            const int j = (i + 1) % n;
            const double ds = (reference[j].position() - reference[i].position()).norm();
            if (ds < 1e-9) continue;
            cvr.push_back(std::abs(reference[j].curvature - reference[i].curvature) / ds);
        }
        const Stats cv = series_stats(cvr);
        m.max_cvr = cv.max;
        m.mean_cvr = cv.mean;
        m.std_cvr = cv.stddev;

        double min_dist = std::numeric_limits<double>::infinity();
        for (const TrajectoryPoint& p : reference.points) {
            for (const Cone& c : boundary_cones) {
                min_dist = std::min(min_dist, (p.position() - c.position).norm());
            }
        }
        m.min_dist_to_boundary = boundary_cones.empty() ? 0.0 : min_dist;
    }
    return m;
}

std::string metrics_to_json(const RunMetrics& m) {
    nlohmann::json j;
    j["lap_times"] = m.lap_times;
    j["mean_lap_time"] = m.mean_lap_time;
    j["rms_lateral_error"] = m.rms_lateral_error;
    j["itae"] = m.itae;
    j["max_lateral_error"] = m.max_lateral_error;
    j["max_lat_acc"] = m.max_lat_acc;
    j["mean_lat_acc"] = m.mean_lat_acc;
    j["std_lat_acc"] = m.std_lat_acc;
    j["max_cvr"] = m.max_cvr;
    j["mean_cvr"] = m.mean_cvr;
    j["std_cvr"] = m.std_cvr;
    j["min_dist_to_boundary"] = m.min_dist_to_boundary;
    j["dnf"] = m.dnf;
    j["dnf_reason"] = m.dnf_reason;
    return j.dump(2);
}

void save_metrics_json(const RunMetrics& m, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write metrics json: " + path);
    out << metrics_to_json(m) << "\n";
}

void save_tick_log_csv(const RunLog& log, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write tick log: " + path);
    out << "t,e,theta,alpha,kappa_ld,k_pp,delta_st,delta_pp,delta_c,v_target,v_meas,torque,"
           "est_x,est_y,est_theta,true_x,true_y,true_theta\n";
    for (const TickLog& r : log.ticks) {
        out << fmt(r.t) << "," << fmt(r.e) << "," << fmt(r.theta_err) << "," << fmt(r.alpha)
            << "," << fmt(r.kappa_ld) << "," << fmt(r.k_pp) << "," << fmt(r.delta_st) << ","
            << fmt(r.delta_pp) << "," << fmt(r.delta_c) << "," << fmt(r.v_target) << ","
            << fmt(r.v_meas) << "," << fmt(r.torque) << "," << fmt(r.est_x) << ","
            << fmt(r.est_y) << "," << fmt(r.est_theta) << "," << fmt(r.true_x) << ","
            << fmt(r.true_y) << "," << fmt(r.true_theta) << "\n";
    }
}

void save_slam_snapshot_csv(const RunLog& log, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write slam snapshot: " + path);
    out << "step,est_x,est_y,est_theta,n_landmarks,ess\n";
    for (const SlamSnapshot& s : log.slam_snapshots) {
        out << s.step << "," << fmt(s.est_x) << "," << fmt(s.est_y) << "," << fmt(s.est_theta)
            << "," << s.n_landmarks << "," << fmt(s.ess) << "\n";
    }
}

}  // namespace fsd
