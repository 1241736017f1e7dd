#ifndef FSDSTACK_PLANNER_VELOCITY_HPP
#define FSDSTACK_PLANNER_VELOCITY_HPP

#include "fsdstack/types.hpp"

namespace fsd {

struct VelocityLimits {
    double a_lat_max = 8.0;    // m/s^2
    double a_long_max = 6.0;   // m/s^2
    double a_brake_max = 8.0;  // m/s^2
    double v_max = 15.0;       // m/s
    double v_start = 0.0;      // m/s, open tracks only

    void validate() const;
};

/// Longitudinal acceleration still available at speed v and curvature kappa
/// under the friction-ellipse coupling with the lateral demand v^2|kappa|.
double friction_ellipse_budget(double a_long_cap, double v, double kappa, double a_lat_max);

/// Forward-backward velocity profile under curvature, power, brake and
/// friction-ellipse limits. Requires near-uniform sample spacing (+-10%) and
/// populated curvature. Closed tracks iterate both passes to a fixed point;
/// open tracks start from v_start. Returns a copy with speeds filled in.
Trajectory velocity_profile(const Trajectory& traj, const VelocityLimits& lim, bool closed);

inline Trajectory velocity_profile(const Trajectory& traj, const VelocityLimits& lim) {
    return velocity_profile(traj, lim, traj.closed);
}

/// Trapezoidal lap/traversal time over the profiled trajectory.
double lap_time(const Trajectory& traj);

}  // namespace fsd

#endif  // FSDSTACK_PLANNER_VELOCITY_HPP
