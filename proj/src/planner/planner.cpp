#include "fsdstack/planner/planner.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "fsdstack/planner/delaunay.hpp"

namespace fsd {

SmoothingMode smoothing_mode_from_string(const std::string& s) {
    if (s == "raw") return SmoothingMode::Raw;
    if (s == "moving_avg") return SmoothingMode::MovingAvg;
    if (s == "opheim") return SmoothingMode::Opheim;
    if (s == "combined") return SmoothingMode::Combined;
    throw std::invalid_argument("unknown smoothing mode: " + s);
}

std::string to_string(SmoothingMode m) {
    switch (m) {
        case SmoothingMode::Raw: return "raw";
        case SmoothingMode::MovingAvg: return "moving_avg";
        case SmoothingMode::Opheim: return "opheim";
        case SmoothingMode::Combined: return "combined";
    }
    return "raw";
}

PlannerConfig planner_config_from_kv(const KeyValueConfig& kv, const std::string& prefix) {
    PlannerConfig cfg;
    auto key = [&](const char* k) { return prefix + k; };

    cfg.weights.color = kv.get_double(key("w_color"), cfg.weights.color);
    cfg.weights.width = kv.get_double(key("w_width"), cfg.weights.width);
    cfg.weights.angle = kv.get_double(key("w_angle"), cfg.weights.angle);
    cfg.weights.distance = kv.get_double(key("w_distance"), cfg.weights.distance);
    cfg.weights.prediction = kv.get_double(key("w_prediction"), cfg.weights.prediction);

    cfg.search.horizon_depth = kv.get_int(key("horizon_depth"), cfg.search.horizon_depth);
    cfg.search.max_step = kv.get_double(key("max_step"), cfg.search.max_step);
    cfg.search.min_step = kv.get_double(key("min_step"), cfg.search.min_step);
    cfg.search.max_turn = kv.get_double(key("max_turn"), cfg.search.max_turn);
    cfg.search.max_candidates = kv.get_int(key("max_candidates"), cfg.search.max_candidates);
    cfg.search.prediction_window =
        kv.get_int(key("prediction_window"), cfg.search.prediction_window);
    cfg.search.step_target = kv.get_double(key("step_target"), cfg.search.step_target);
    cfg.search.step_sigma = kv.get_double(key("step_sigma"), cfg.search.step_sigma);
    cfg.search.prediction_sigma =
        kv.get_double(key("prediction_sigma"), cfg.search.prediction_sigma);
    cfg.search.smoothing_window = kv.get_int(key("smoothing_window"), cfg.search.smoothing_window);
    cfg.search.opheim_min_tol = kv.get_double(key("opheim_min_tol"), cfg.search.opheim_min_tol);
    cfg.search.opheim_max_tol = kv.get_double(key("opheim_max_tol"), cfg.search.opheim_max_tol);
    cfg.search.sample_ds = kv.get_double(key("sample_ds"), cfg.search.sample_ds);

    cfg.limits.a_lat_max = kv.get_double(key("a_lat_max"), cfg.limits.a_lat_max);
    cfg.limits.a_long_max = kv.get_double(key("a_long_max"), cfg.limits.a_long_max);
    cfg.limits.a_brake_max = kv.get_double(key("a_brake_max"), cfg.limits.a_brake_max);
    cfg.limits.v_max = kv.get_double(key("v_max"), cfg.limits.v_max);
    cfg.limits.v_start = kv.get_double(key("v_start"), cfg.limits.v_start);

    cfg.smoothing = smoothing_mode_from_string(kv.get_string(key("smoothing"), "combined"));
    const std::string fit = kv.get_string(key("fit"), "auto");
    if (fit == "auto") {
        cfg.fit = FitMode::Auto;
    } else if (fit == "line") {
        cfg.fit = FitMode::Line;
    } else if (fit == "spline") {
        cfg.fit = FitMode::Spline;
    } else {
        throw std::invalid_argument("unknown fit mode: " + fit);
    }
    return cfg;
}

std::vector<Vec2> apply_smoothing(const std::vector<Vec2>& points, SmoothingMode mode,
                                  const SearchConfig& cfg, bool closed) {
    switch (mode) {
        case SmoothingMode::Raw: return points;
        case SmoothingMode::MovingAvg:
            return smooth_moving_average(points, cfg.smoothing_window, closed);
        case SmoothingMode::Opheim:
            return simplify_opheim(points, cfg.opheim_min_tol, cfg.opheim_max_tol);
        case SmoothingMode::Combined:
            return simplify_opheim(smooth_moving_average(points, cfg.smoothing_window, closed),
                                   cfg.opheim_min_tol, cfg.opheim_max_tol);
    }
    return points;
}

namespace {

bool nearly_straight(const std::vector<Vec2>& pts) {
    if (pts.size() < 3) return true;
    Vec2 dir = pts.back() - pts.front();
    const double len = dir.norm();
    if (len < 1e-9) return false;
    dir /= len;
    for (const Vec2& p : pts) {
        if (std::abs(perp_distance(p, pts.front(), dir)) > 0.05) return false;
    }
    return true;
}

}  // namespace

PlanResult plan_path(const std::vector<Cone>& cones, const Pose2D& start,
                     const PlannerConfig& cfg) {
    PlanResult result;
    const auto midpoints = triangulate(cones);
    result.centerline = search_centerline(midpoints, start, cfg.weights, cfg.search);

    std::vector<Vec2> pts;
    pts.reserve(result.centerline.points.size());
    for (const Midpoint& m : result.centerline.points) pts.push_back(m.position);

    const bool closed = result.centerline.cyclic;
    result.smoothed_centerline = apply_smoothing(pts, cfg.smoothing, cfg.search, closed);

    FitMode fit = cfg.fit;
    if (fit == FitMode::Auto) {
        fit = (!closed && nearly_straight(result.smoothed_centerline)) ? FitMode::Line
                                                                       : FitMode::Spline;
    }
    Trajectory geometry;
    if (fit == FitMode::Line) {
        geometry = fit_line(result.smoothed_centerline, cfg.search.sample_ds);
    } else {
        geometry = fit_spline(result.smoothed_centerline, closed, cfg.search.sample_ds);
    }
    result.trajectory = velocity_profile(geometry, cfg.limits, closed);
    return result;
}

namespace {

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

}  // namespace

PathMetrics path_metrics(const Trajectory& traj, const std::vector<Cone>& boundary_cones) {
    if (traj.size() < 2) throw std::invalid_argument("path_metrics: need >= 2 samples");
    PathMetrics m;
    m.lap_time = lap_time(traj);

    constexpr double kReportSpeed = 5.0;  // m/s, isolates path geometry
    std::vector<double> lat_acc;
    lat_acc.reserve(traj.size());
    for (const TrajectoryPoint& p : traj.points) {
        lat_acc.push_back(kReportSpeed * kReportSpeed * std::abs(p.curvature));
    }
    const Stats la = series_stats(lat_acc);
    m.max_lat_acc = la.max;
    m.mean_lat_acc = la.mean;
    m.std_lat_acc = la.stddev;

    const int n = static_cast<int>(traj.size());
    std::vector<double> cvr;
    const int last = traj.closed ? n : n - 1;
    for (int i = 0; i < last; ++i) {
        const int j = (i + 1) % n;
        const double ds = (traj[j].position() - traj[i].position()).norm();
        if (ds < 1e-9) continue;
        cvr.push_back(std::abs(traj[j].curvature - traj[i].curvature) / ds);
    }
    const Stats cv = series_stats(cvr);
    m.max_cvr = cv.max;
    m.mean_cvr = cv.mean;
    m.std_cvr = cv.stddev;

    double min_dist = std::numeric_limits<double>::infinity();
    for (const TrajectoryPoint& p : traj.points) {
        for (const Cone& c : boundary_cones) {
            min_dist = std::min(min_dist, (p.position() - c.position).norm());
        }
    }
    m.min_dist_to_boundary = boundary_cones.empty() ? 0.0 : min_dist;
    return m;
}

std::string path_metrics_to_json(const PathMetrics& m) {
    nlohmann::json j;
    j["lap_time"] = m.lap_time;
    j["max_lat_acc"] = m.max_lat_acc;
    j["mean_lat_acc"] = m.mean_lat_acc;
    j["std_lat_acc"] = m.std_lat_acc;
    j["max_cvr"] = m.max_cvr;
    j["mean_cvr"] = m.mean_cvr;
    j["std_cvr"] = m.std_cvr;
    j["min_dist_to_boundary"] = m.min_dist_to_boundary;
    return j.dump(2);
}

}  // namespace fsd
