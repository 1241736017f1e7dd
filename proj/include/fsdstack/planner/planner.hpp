#ifndef FSDSTACK_PLANNER_PLANNER_HPP
#define FSDSTACK_PLANNER_PLANNER_HPP

#include <string>
#include <vector>

#include "fsdstack/config.hpp"
#include "fsdstack/planner/centerline.hpp"
#include "fsdstack/planner/smoothing.hpp"
#include "fsdstack/planner/spline.hpp"
#include "fsdstack/planner/velocity.hpp"

namespace fsd {

enum class SmoothingMode { Raw, MovingAvg, Opheim, Combined };
enum class FitMode { Auto, Line, Spline };

SmoothingMode smoothing_mode_from_string(const std::string& s);
std::string to_string(SmoothingMode m);

struct PlannerConfig {
    RewardWeights weights;
    SearchConfig search;
    VelocityLimits limits;
    SmoothingMode smoothing = SmoothingMode::Combined;
    FitMode fit = FitMode::Auto;
};

/// Reads `planner.*`-prefixed keys; missing keys keep their defaults.
PlannerConfig planner_config_from_kv(const KeyValueConfig& kv,
                                     const std::string& prefix = "planner.");

struct PlanResult {
    Trajectory trajectory;
    CenterlineResult centerline;            // as selected by the search
    std::vector<Vec2> smoothed_centerline;  // after the configured smoothing
};

/// Full pipeline: triangulate -> centerline search -> smoothing -> line or
/// spline fit -> velocity profile.
PlanResult plan_path(const std::vector<Cone>& cones, const Pose2D& start,
                     const PlannerConfig& cfg);

/// Applies the configured smoothing variant to raw centerline positions.
std::vector<Vec2> apply_smoothing(const std::vector<Vec2>& points, SmoothingMode mode,
                                  const SearchConfig& cfg, bool closed);

struct PathMetrics {
    double lap_time = 0.0;
    double max_lat_acc = 0.0;  // at the constant 5 m/s reporting speed
    double mean_lat_acc = 0.0;
    double std_lat_acc = 0.0;
    double max_cvr = 0.0;  // |d kappa / d s|, 1/m^2
    double mean_cvr = 0.0;
    double std_cvr = 0.0;
    double min_dist_to_boundary = 0.0;
};

/// Geometry metrics of a profiled trajectory. Lateral acceleration uses the
/// constant 5 m/s convention so path shape is compared independently of the
/// velocity profile.
PathMetrics path_metrics(const Trajectory& traj, const std::vector<Cone>& boundary_cones);

std::string path_metrics_to_json(const PathMetrics& m);

}  // namespace fsd

#endif  // FSDSTACK_PLANNER_PLANNER_HPP
