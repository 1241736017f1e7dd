#include "fsdstack/planner/velocity.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace fsd {

void VelocityLimits::validate() const {
    if (!(a_lat_max > 0) || !(a_long_max > 0) || !(a_brake_max > 0) || !(v_max > 0)) {
        throw std::invalid_argument("VelocityLimits: limits must be positive");
    }
    if (v_start < 0) throw std::invalid_argument("VelocityLimits: v_start must be >= 0");
}

double friction_ellipse_budget(double a_long_cap, double v, double kappa, double a_lat_max) {
    const double lat_ratio = v * v * std::abs(kappa) / a_lat_max;
    return a_long_cap * std::sqrt(std::max(0.0, 1.0 - lat_ratio * lat_ratio));
}

namespace {

std::vector<double> segment_lengths(const Trajectory& traj, bool closed) {
    const std::size_t n = traj.size();
    std::vector<double> ds;
    ds.reserve(n);
    for (std::size_t i = 1; i < n; ++i) {
        ds.push_back((traj[i].position() - traj[i - 1].position()).norm());
    }
    if (closed) ds.push_back((traj[0].position() - traj[n - 1].position()).norm());
    return ds;
}

}  // namespace

Trajectory velocity_profile(const Trajectory& traj, const VelocityLimits& lim, bool closed) {
    lim.validate();
    const int n = static_cast<int>(traj.size());
    if (n < 2) throw std::invalid_argument("velocity_profile: need >= 2 samples");

    const auto seg = segment_lengths(traj, closed);
    double mean_ds = 0.0;
    for (double d : seg) mean_ds += d;
    mean_ds /= seg.size();
    for (double d : seg) {
        if (std::abs(d - mean_ds) > 0.10 * mean_ds) {
            throw std::invalid_argument("velocity_profile: non-uniform sample spacing");
        }
    }

    // Pass (a): curvature cap.
    std::vector<double> v(n);
    for (int i = 0; i < n; ++i) {
        const double kappa = std::abs(traj[i].curvature);
        const double cap = kappa > 1e-12 ? std::sqrt(lim.a_lat_max / kappa) : lim.v_max;
        v[i] = std::min(lim.v_max, cap);
    }

    auto forward_pass = [&]() {
        double change = 0.0;
        const int last = closed ? n : n - 1;
        for (int i = 0; i < last; ++i) {
            const int j = (i + 1) % n;
            const double a = friction_ellipse_budget(lim.a_long_max, v[i], traj[i].curvature,
                                                     lim.a_lat_max);
            const double reachable = std::sqrt(v[i] * v[i] + 2.0 * a * seg[i]);
            if (reachable < v[j]) {
                change = std::max(change, v[j] - reachable);
                v[j] = reachable;
            }
        }
        return change;
    };
    auto backward_pass = [&]() {
        double change = 0.0;
        const int first = closed ? n - 1 : n - 2;
        for (int i = first; i >= 0; --i) {
            const int j = (i + 1) % n;
            const double a = friction_ellipse_budget(lim.a_brake_max, v[j], traj[j].curvature,
                                                     lim.a_lat_max);
            const double reachable = std::sqrt(v[j] * v[j] + 2.0 * a * seg[i]);
            if (reachable < v[i]) {
                change = std::max(change, v[i] - reachable);
                v[i] = reachable;
            }
        }
        return change;
    };

    if (closed) {
        for (int sweep = 0; sweep < 10; ++sweep) {
            const double change = std::max(forward_pass(), backward_pass());
            if (change < 1e-6) break;
        }
    } else {
        v[0] = std::min(v[0], lim.v_start);
        forward_pass();
        backward_pass();
    }

    Trajectory out = traj;
    for (int i = 0; i < n; ++i) out.points[i].speed = v[i];
    return out;
}

double lap_time(const Trajectory& traj) {
    const int n = static_cast<int>(traj.size());
    if (n == 0) throw std::invalid_argument("lap_time: empty trajectory");
    if (n < 2) throw std::invalid_argument("lap_time: need >= 2 samples");
    const auto seg = segment_lengths(traj, traj.closed);
    double t = 0.0;
    for (std::size_t i = 0; i < seg.size(); ++i) {
        const int j = (static_cast<int>(i) + 1) % n;
        if (static_cast<int>(i) > 0 && traj[i].speed <= 0.0) {
            throw std::invalid_argument("lap_time: zero speed at interior sample");
        }
        const double v_mid = 0.5 * (traj[i].speed + traj[j].speed);
        if (!(v_mid > 0.0)) throw std::invalid_argument("lap_time: unreachable profile segment");
        t += seg[i] / v_mid;
    }
    return t;
}

}  // namespace fsd
