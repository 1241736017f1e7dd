#include "fsdstack/sim/vehicle.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "fsdstack/planner/velocity.hpp"

namespace fsd {

VehicleState step_vehicle(const VehicleState& s, double steer_cmd, double torque_demand,
                          const VehicleParams& vp, double dt, const ActuatorConfig& act) {
    if (!(dt > 0.0)) throw std::invalid_argument("step_vehicle: dt must be positive");

    steer_cmd = std::clamp(steer_cmd, -vp.max_steer, vp.max_steer);
    double steer = steer_cmd;
    if (std::isfinite(act.steer_slew_rate)) {
        const double max_delta = act.steer_slew_rate * dt;
        steer = s.steer_actual + std::clamp(steer_cmd - s.steer_actual, -max_delta, max_delta);
    }

    torque_demand = std::clamp(torque_demand, -1.0, 1.0);
    const double cap = torque_demand >= 0.0 ? vp.a_long_max : vp.a_brake_max;
    const double kappa = std::tan(steer) / vp.wheelbase();
    double accel = torque_demand * friction_ellipse_budget(cap, s.v, kappa, vp.a_lat_max);
    if (s.v <= 0.0 && accel < 0.0) accel = 0.0;  // no reverse

    // RK4 over [x, y, theta, v] with steer and accel held for the step.
    struct State {
        double x, y, theta, v;
    };
    auto deriv = [&](const State& st) {
        State d;
        const double v = std::max(st.v, 0.0);
        d.x = v * std::cos(st.theta);
        d.y = v * std::sin(st.theta);
        d.theta = v * kappa;
        d.v = accel;
        return d;
    };
    const State y0{s.pose.x, s.pose.y, s.pose.theta, s.v};
    auto advance = [](const State& a, const State& d, double h) {
        return State{a.x + h * d.x, a.y + h * d.y, a.theta + h * d.theta, a.v + h * d.v};
    };
    const State k1 = deriv(y0);
    const State k2 = deriv(advance(y0, k1, dt / 2));
    const State k3 = deriv(advance(y0, k2, dt / 2));
    const State k4 = deriv(advance(y0, k3, dt));

    VehicleState out;
    out.pose = Pose2D(y0.x + dt / 6.0 * (k1.x + 2 * k2.x + 2 * k3.x + k4.x),
                      y0.y + dt / 6.0 * (k1.y + 2 * k2.y + 2 * k3.y + k4.y),
                      y0.theta + dt / 6.0 * (k1.theta + 2 * k2.theta + 2 * k3.theta + k4.theta));
    out.v = std::max(0.0, y0.v + dt * accel);
    out.steer_actual = steer;
    out.r = out.v * kappa;
    return out;
}

}  // namespace fsd
