#ifndef FSDSTACK_SLAM_POSE_GRAPH_HPP
#define FSDSTACK_SLAM_POSE_GRAPH_HPP

#include <string>
#include <vector>

#include <Eigen/Core>

#include "fsdstack/types.hpp"

namespace fsd {

struct MotionEdge {
    int prev = 0;
    int curr = 0;
    double v = 0.0;      // per-step displacement (verbatim units)
    double omega = 0.0;  // per-step half heading change
};

struct ObservationEdge {
    int pose = 0;
    int landmark = 0;
    double range = 0.0;
    double bearing = 0.0;
};

/// Landmark/pose factor graph over the two residuals. Edge information
/// matrices are the inverse noise covariances derived from the stored sigmas.
struct PoseGraph {
    std::vector<Pose2D> pose_nodes;
    std::vector<Vec2> landmark_nodes;
    std::vector<MotionEdge> motion_edges;
    std::vector<ObservationEdge> observation_edges;

    double motion_sigma_v = 0.05;
    double motion_sigma_omega = 0.02;
    double obs_sigma_range = 0.1;
    double obs_sigma_bearing = 0.0175;

    void validate() const;
};

/// Body-frame landmark observation residual:
/// R(p_theta) (l - p_xy) - [m_r cos(m_theta), m_r sin(m_theta)].
Eigen::Vector2d landmark_residual(const Pose2D& pose, const Vec2& landmark, double m_r,
                                  double m_theta);

/// Motion residual between consecutive poses under the per-step model; the
/// heading component is wrapped so poses produced by the motion model itself
/// give an exact zero.
Eigen::Vector3d pose_residual(const Pose2D& prev, const Pose2D& curr, double v, double omega);

/// Analytic Jacobians, exposed for the finite-difference checks.
void landmark_residual_jacobians(const Pose2D& pose, const Vec2& landmark,
                                 Eigen::Matrix<double, 2, 3>& wrt_pose,
                                 Eigen::Matrix2d& wrt_landmark);
void pose_residual_jacobians(const Pose2D& prev, const Pose2D& curr, double v, double omega,
                             Eigen::Matrix3d& wrt_prev, Eigen::Matrix3d& wrt_curr);

/// Total weighted squared-residual cost of the graph.
double graph_cost(const PoseGraph& g);

struct OptimizeOptions {
    int max_iterations = 100;
    double cost_tolerance = 1e-9;
    double gradient_tolerance = 1e-9;
    double max_damping = 1e8;
};

struct OptimizeResult {
    PoseGraph graph;
    bool converged = false;
    int iterations = 0;
    double initial_cost = 0.0;
    double final_cost = 0.0;
};

/// Gauss-Newton with Levenberg damping fallback; pose node 0 is held fixed as
/// the gauge anchor. Cost is non-increasing over accepted iterations. If the
/// damping exceeds max_damping the input graph is returned unchanged with
/// converged = false.
OptimizeResult optimize_graph(const PoseGraph& g, const OptimizeOptions& opts = {});

std::string graph_to_json(const PoseGraph& g);
void save_graph_json(const PoseGraph& g, const std::string& path);

}  // namespace fsd

#endif  // FSDSTACK_SLAM_POSE_GRAPH_HPP
