#ifndef FSDSTACK_CONTROL_CONTROL_HPP
#define FSDSTACK_CONTROL_CONTROL_HPP

#include <string>

#include "fsdstack/config.hpp"
#include "fsdstack/types.hpp"

namespace fsd {

enum class ControllerKind { Stanley, PurePursuit, Combined };

ControllerKind controller_kind_from_string(const std::string& s);
std::string to_string(ControllerKind k);

struct ControllerConfig {
    double k = 2.5;          // 1/s, cross-track gain
    double k_soft = 1.0;     // m/s, low-speed softening
    double k_v = 0.35;       // s, look-ahead velocity gain
    double l_d_min = 2.0;    // m, minimum look-ahead distance
    double k_min = 0.25;     // combination weight floor
    double k_max = 0.9;      // combination weight ceiling
    double kappa_ref = 0.08;  // 1/m, curvature normalizer of the schedule
    double k_curve = 0.5;    // weight per curvature ratio
    double k_d_yaw = -0.05;  // steering per rad/s; negative values damp
    double k_p_long = 0.5;   // torque demand per m/s speed error
    double k_i_long = 0.0;   // optional integral gain, disabled by default

    void validate() const;
};

ControllerConfig controller_config_from_kv(const KeyValueConfig& kv,
                                           const std::string& prefix = "control.");

/// Geometric state of the vehicle relative to the reference trajectory.
/// Sign conventions: cross-track error positive left of the path, angles
/// CCW-positive, steering left-positive.
struct TrackingState {
    double cross_track = 0.0;          // e, m, positive left of path
    double relative_yaw = 0.0;         // theta = path heading - vehicle heading
    double v = 0.0;                    // m/s
    double r_meas = 0.0;               // rad/s, measured yaw rate
    double r_traj = 0.0;               // rad/s, trajectory yaw rate at nearest point
    double kappa_at_lookahead = 0.0;   // 1/m
    double alpha = 0.0;                // rad, bearing to the look-ahead point
    double lookahead_distance = 0.0;   // m, L_d actually used
    std::size_t nearest_index = 0;
    std::size_t lookahead_index = 0;
};

struct ControlOutput {
    double steer = 0.0;          // rad, saturated to max_steer
    double torque_demand = 0.0;  // normalized [-1, 1]
};

/// Locates the nearest trajectory point (ties -> lower index), the signed
/// cross-track error, relative yaw, and the look-ahead point at arc distance
/// L_d = l_d_min + k_v * v along the path.
TrackingState compute_tracking_state(const Pose2D& pose, double v, double r_meas,
                                     const Trajectory& traj, const ControllerConfig& cfg);

/// Stanley steering law as a pure formula. `e` here is the path-relative
/// offset with the car right of the path positive, so positive errors command
/// a corrective left steer.
double stanley_law(double e, double theta, double theta_ss, double v, double k, double k_soft);

/// Steady-state yaw offset from the trajectory yaw rate.
double steady_state_yaw(double r_traj, double v, const VehicleParams& vp);

/// Stanley controller on a TrackingState (unsaturated).
double stanley(const TrackingState& ts, const VehicleParams& vp, const ControllerConfig& cfg);

/// Pure Pursuit law: arctan(2 L sin(alpha) / L_d).
double pure_pursuit_law(double alpha, double wheelbase, double lookahead);
double pure_pursuit(const TrackingState& ts, const VehicleParams& vp,
                    const ControllerConfig& cfg);

/// Curvature-scheduled Pure Pursuit share, min(k_min + |kappa|/kappa_ref * k_curve, k_max).
double combination_weight(double kappa, const ControllerConfig& cfg);

/// Linear combination of both laws plus yaw damping, saturated to max_steer.
double combine(double delta_st, double delta_pp, const TrackingState& ts,
               const VehicleParams& vp, const ControllerConfig& cfg);

/// Proportional longitudinal controller; output clamped to [-1, 1].
double longitudinal(double v_meas, double v_target, const ControllerConfig& cfg);

/// Longitudinal P(+I) controller; the integral accumulator makes it stateful
/// when k_i_long is enabled.
class LongitudinalController {
public:
    explicit LongitudinalController(const ControllerConfig& cfg) : cfg_(cfg) {}
    double step(double v_meas, double v_target, double dt);
    void reset() { integral_ = 0.0; }

private:
    ControllerConfig cfg_;
    double integral_ = 0.0;
};

/// One lateral control step with the selected controller kind.
double lateral_command(ControllerKind kind, const TrackingState& ts, const VehicleParams& vp,
                       const ControllerConfig& cfg);

}  // namespace fsd

#endif  // FSDSTACK_CONTROL_CONTROL_HPP
