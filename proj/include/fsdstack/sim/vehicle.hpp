#ifndef FSDSTACK_SIM_VEHICLE_HPP
#define FSDSTACK_SIM_VEHICLE_HPP

#include "fsdstack/types.hpp"

namespace fsd {

struct VehicleState {
    Pose2D pose;
    double v = 0.0;             // m/s, >= 0
    double r = 0.0;             // rad/s, yaw rate
    double steer_actual = 0.0;  // rad, |.| <= max_steer
};

struct ActuatorConfig {
    double steer_slew_rate = 3.49;  // rad/s (~200 deg/s); infinity disables the lag
};

/// Kinematic bicycle step: the commanded steer is slewed, the torque demand
/// maps to a friction-ellipse-capped acceleration, then [x, y, theta, v] is
/// integrated with RK4. Speed never goes negative.
VehicleState step_vehicle(const VehicleState& s, double steer_cmd, double torque_demand,
                          const VehicleParams& vp, double dt, const ActuatorConfig& act = {});

}  // namespace fsd

#endif  // FSDSTACK_SIM_VEHICLE_HPP
