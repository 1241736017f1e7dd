#include "fsdstack/control/control.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace fsd {

ControllerKind controller_kind_from_string(const std::string& s) {
    if (s == "stanley") return ControllerKind::Stanley;
    if (s == "pure_pursuit") return ControllerKind::PurePursuit;
    if (s == "combined") return ControllerKind::Combined;
    throw std::invalid_argument("unknown controller: " + s);
}

std::string to_string(ControllerKind k) {
    switch (k) {
        case ControllerKind::Stanley: return "stanley";
        case ControllerKind::PurePursuit: return "pure_pursuit";
        case ControllerKind::Combined: return "combined";
    }
    return "combined";
}

void ControllerConfig::validate() const {
    if (!(k_soft > 0)) throw std::invalid_argument("ControllerConfig: k_soft must be > 0");
    if (!(l_d_min > 0)) throw std::invalid_argument("ControllerConfig: l_d_min must be > 0");
    if (!(kappa_ref > 0)) throw std::invalid_argument("ControllerConfig: kappa_ref must be > 0");
    if (k_min < 0 || k_max > 1 || k_min > k_max) {
        throw std::invalid_argument("ControllerConfig: need 0 <= k_min <= k_max <= 1");
    }
}

ControllerConfig controller_config_from_kv(const KeyValueConfig& kv, const std::string& prefix) {
    ControllerConfig cfg;
    auto key = [&](const char* k) { return prefix + k; };
    cfg.k = kv.get_double(key("k"), cfg.k);
    cfg.k_soft = kv.get_double(key("k_soft"), cfg.k_soft);
    cfg.k_v = kv.get_double(key("k_v"), cfg.k_v);
    cfg.l_d_min = kv.get_double(key("l_d_min"), cfg.l_d_min);
    cfg.k_min = kv.get_double(key("k_min"), cfg.k_min);
    cfg.k_max = kv.get_double(key("k_max"), cfg.k_max);
    cfg.kappa_ref = kv.get_double(key("kappa_ref"), cfg.kappa_ref);
    cfg.k_curve = kv.get_double(key("k_curve"), cfg.k_curve);
    cfg.k_d_yaw = kv.get_double(key("k_d_yaw"), cfg.k_d_yaw);
    cfg.k_p_long = kv.get_double(key("k_p_long"), cfg.k_p_long);
    cfg.k_i_long = kv.get_double(key("k_i_long"), cfg.k_i_long);
    cfg.validate();
    return cfg;
}

TrackingState compute_tracking_state(const Pose2D& pose, double v, double r_meas,
                                     const Trajectory& traj, const ControllerConfig& cfg) {
    if (traj.empty()) throw std::invalid_argument("compute_tracking_state: empty trajectory");
    const int n = static_cast<int>(traj.size());

    int nearest = 0;
    double best = std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; ++i) {
        const double d = (traj[i].position() - pose.position()).squaredNorm();
        if (d < best) {  // strict: ties keep the lower index
            best = d;
            nearest = i;
        }
    }

    const TrajectoryPoint& np = traj[nearest];
    const Vec2 tangent(std::cos(np.heading), std::sin(np.heading));
    const Vec2 offset = pose.position() - np.position();

    TrackingState ts;
    ts.nearest_index = static_cast<std::size_t>(nearest);
    ts.cross_track = cross2(tangent, offset);  // positive left of path
    ts.relative_yaw = wrap_angle(np.heading - pose.theta);
    ts.v = v;
    ts.r_meas = r_meas;
    ts.r_traj = np.curvature * v;

    // Walk the look-ahead arc distance along the samples.
    ts.lookahead_distance = cfg.l_d_min + cfg.k_v * v;
    double remaining = ts.lookahead_distance;
    int la = nearest;
    while (remaining > 0.0) {
        const int next = la + 1;
        if (next >= n) {
            if (traj.closed) {
                const double step = (traj[0].position() - traj[la].position()).norm();
                if (step <= 0.0) break;
                if (step >= remaining) break;
                remaining -= step;
                la = 0;
                continue;
            }
            break;  // open path: clamp at the end
        }
        const double step = (traj[next].position() - traj[la].position()).norm();
        if (step >= remaining || step <= 0.0) break;
        remaining -= step;
        la = next;
    }
    // Advance one more sample if the residual passes its midpoint.
    {
        const int next = (la + 1) % n;
        const bool can_advance = traj.closed || la + 1 < n;
        if (can_advance) {
            const double step = (traj[next].position() - traj[la].position()).norm();
            if (step > 0.0 && remaining > 0.5 * step) la = next;
        }
    }
    ts.lookahead_index = static_cast<std::size_t>(la);
    ts.kappa_at_lookahead = traj[la].curvature;

    const Vec2 to_target = traj[la].position() - pose.position();
    if (to_target.norm() > 1e-12) {
        ts.alpha = wrap_angle(std::atan2(to_target.y(), to_target.x()) - pose.theta);
    } else {
        ts.alpha = 0.0;
    }
    return ts;
}

double stanley_law(double e, double theta, double theta_ss, double v, double k, double k_soft) {
    return std::atan(k * e / (k_soft + v)) + (theta - theta_ss);
}

double steady_state_yaw(double r_traj, double v, const VehicleParams& vp) {
    return vp.mass * r_traj * v / (vp.cornering_stiffness * (1.0 + vp.l_f / vp.l_r));
}

double stanley(const TrackingState& ts, const VehicleParams& vp, const ControllerConfig& cfg) {
    const double theta_ss = steady_state_yaw(ts.r_traj, ts.v, vp);
    // The formula's error is right-of-path positive; flip the left-positive
    // state convention so positive errors steer back toward the path.
    return stanley_law(-ts.cross_track, ts.relative_yaw, theta_ss, ts.v, cfg.k, cfg.k_soft);
}

double pure_pursuit_law(double alpha, double wheelbase, double lookahead) {
    if (!(lookahead > 0.0)) throw std::invalid_argument("pure_pursuit: L_d must be > 0");
    return std::atan(2.0 * wheelbase * std::sin(alpha) / lookahead);
}

double pure_pursuit(const TrackingState& ts, const VehicleParams& vp,
                    const ControllerConfig& cfg) {
    const double lookahead = cfg.l_d_min + cfg.k_v * ts.v;
    return pure_pursuit_law(ts.alpha, vp.wheelbase(), lookahead);
}

double combination_weight(double kappa, const ControllerConfig& cfg) {
    return std::min(cfg.k_min + std::abs(kappa) / cfg.kappa_ref * cfg.k_curve, cfg.k_max);
}

double combine(double delta_st, double delta_pp, const TrackingState& ts,
               const VehicleParams& vp, const ControllerConfig& cfg) {
    const double k_pp = combination_weight(ts.kappa_at_lookahead, cfg);
    const double k_st = 1.0 - k_pp;
    double delta = k_st * delta_st + k_pp * delta_pp;
    delta += cfg.k_d_yaw * (ts.r_meas - ts.r_traj);
    return std::clamp(delta, -vp.max_steer, vp.max_steer);
}

double longitudinal(double v_meas, double v_target, const ControllerConfig& cfg) {
    return std::clamp(cfg.k_p_long * (v_target - v_meas), -1.0, 1.0);
}

double LongitudinalController::step(double v_meas, double v_target, double dt) {
    const double error = v_target - v_meas;
    if (cfg_.k_i_long != 0.0 && dt > 0.0) {
        integral_ += error * dt;
    }
    return std::clamp(cfg_.k_p_long * error + cfg_.k_i_long * integral_, -1.0, 1.0);
}

double lateral_command(ControllerKind kind, const TrackingState& ts, const VehicleParams& vp,
                       const ControllerConfig& cfg) {
    const double delta_st = stanley(ts, vp, cfg);
    const double delta_pp = pure_pursuit(ts, vp, cfg);
    switch (kind) {
        case ControllerKind::Stanley:
            return std::clamp(delta_st, -vp.max_steer, vp.max_steer);
        case ControllerKind::PurePursuit:
            return std::clamp(delta_pp, -vp.max_steer, vp.max_steer);
        case ControllerKind::Combined:
            return combine(delta_st, delta_pp, ts, vp, cfg);
    }
    return 0.0;
}

}  // namespace fsd
