#include "fsdstack/slam/pose_graph.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <nlohmann/json.hpp>

namespace fsd {

void PoseGraph::validate() const {
    const int np = static_cast<int>(pose_nodes.size());
    const int nl = static_cast<int>(landmark_nodes.size());
    for (const MotionEdge& e : motion_edges) {
        if (e.prev < 0 || e.prev >= np || e.curr < 0 || e.curr >= np) {
            throw std::invalid_argument("PoseGraph: motion edge references missing node");
        }
    }
    for (const ObservationEdge& e : observation_edges) {
        if (e.pose < 0 || e.pose >= np || e.landmark < 0 || e.landmark >= nl) {
            throw std::invalid_argument("PoseGraph: observation edge references missing node");
        }
    }
}

Eigen::Vector2d landmark_residual(const Pose2D& pose, const Vec2& landmark, double m_r,
                                  double m_theta) {
    const double c = std::cos(pose.theta), s = std::sin(pose.theta);
    const double dx = landmark.x() - pose.x;
    const double dy = landmark.y() - pose.y;
    return Eigen::Vector2d(c * dx + s * dy - m_r * std::cos(m_theta),
                           -s * dx + c * dy - m_r * std::sin(m_theta));
}

Eigen::Vector3d pose_residual(const Pose2D& prev, const Pose2D& curr, double v, double omega) {
    const double a = prev.theta + omega;
    return Eigen::Vector3d(curr.x - prev.x - v * std::cos(a), curr.y - prev.y - v * std::sin(a),
                           wrap_angle(curr.theta - prev.theta - 2.0 * omega));
}

void landmark_residual_jacobians(const Pose2D& pose, const Vec2& landmark,
                                 Eigen::Matrix<double, 2, 3>& wrt_pose,
                                 Eigen::Matrix2d& wrt_landmark) {
    const double c = std::cos(pose.theta), s = std::sin(pose.theta);
    const double dx = landmark.x() - pose.x;
    const double dy = landmark.y() - pose.y;
    wrt_landmark << c, s, -s, c;
    wrt_pose << -c, -s, -s * dx + c * dy, s, -c, -c * dx - s * dy;
}

void pose_residual_jacobians(const Pose2D& prev, const Pose2D& curr, double v, double omega,
                             Eigen::Matrix3d& wrt_prev, Eigen::Matrix3d& wrt_curr) {
    (void)curr;
    const double a = prev.theta + omega;
    wrt_prev << -1.0, 0.0, v * std::sin(a), 0.0, -1.0, -v * std::cos(a), 0.0, 0.0, -1.0;
    wrt_curr = Eigen::Matrix3d::Identity();
}

namespace {

/// Observation information from the measurement noise mapped through the
/// polar-to-cartesian Jacobian at the measured range/bearing.
Eigen::Matrix2d observation_information(const PoseGraph& g, const ObservationEdge& e) {
    Eigen::Matrix2d j;
    j << std::cos(e.bearing), -e.range * std::sin(e.bearing), std::sin(e.bearing),
        e.range * std::cos(e.bearing);
    Eigen::Matrix2d q = Eigen::Matrix2d::Zero();
    q(0, 0) = g.obs_sigma_range * g.obs_sigma_range;
    q(1, 1) = g.obs_sigma_bearing * g.obs_sigma_bearing;
    Eigen::Matrix2d cov = j * q * j.transpose();
    cov += 1e-12 * Eigen::Matrix2d::Identity();
    return cov.inverse();
}

/// Motion information from an isotropized step covariance; keeps the weights
/// independent of the (unknown) heading.
Eigen::Matrix3d motion_information(const PoseGraph& g, const MotionEdge& e) {
    const double sigma_p_sq = g.motion_sigma_v * g.motion_sigma_v +
                              e.v * e.v * g.motion_sigma_omega * g.motion_sigma_omega + 1e-12;
    const double sigma_t_sq = 4.0 * g.motion_sigma_omega * g.motion_sigma_omega + 1e-12;
    Eigen::Matrix3d info = Eigen::Matrix3d::Zero();
    info(0, 0) = 1.0 / sigma_p_sq;
    info(1, 1) = 1.0 / sigma_p_sq;
    info(2, 2) = 1.0 / sigma_t_sq;
    return info;
}

}  // namespace

double graph_cost(const PoseGraph& g) {
    double cost = 0.0;
    for (const MotionEdge& e : g.motion_edges) {
        const Eigen::Vector3d r =
            pose_residual(g.pose_nodes[e.prev], g.pose_nodes[e.curr], e.v, e.omega);
        cost += r.dot(motion_information(g, e) * r);
    }
    for (const ObservationEdge& e : g.observation_edges) {
        const Eigen::Vector2d r =
            landmark_residual(g.pose_nodes[e.pose], g.landmark_nodes[e.landmark], e.range,
                              e.bearing);
        cost += r.dot(observation_information(g, e) * r);
    }
    return cost;
}

OptimizeResult optimize_graph(const PoseGraph& input, const OptimizeOptions& opts) {
    input.validate();
    OptimizeResult result;
    result.graph = input;
    result.initial_cost = graph_cost(input);
    result.final_cost = result.initial_cost;

    const int np = static_cast<int>(input.pose_nodes.size());
    const int nl = static_cast<int>(input.landmark_nodes.size());
    const int dim = 3 * (np - 1) + 2 * nl;  // pose 0 anchored
    if (np < 2 || dim <= 0 ||
        (input.motion_edges.empty() && input.observation_edges.empty())) {
        result.converged = true;  // nothing to optimize
        return result;
    }

    PoseGraph g = input;
    auto pose_offset = [](int i) { return 3 * (i - 1); };
    auto landmark_offset = [&](int k) { return 3 * (np - 1) + 2 * k; };

    double cost = result.initial_cost;
    double damping = 0.0;
    bool converged = false;
    int iter = 0;

    for (; iter < opts.max_iterations; ++iter) {
        // Assemble the normal equations J^T W J dx = -J^T W r.
        std::vector<Eigen::Triplet<double>> triplets;
        Eigen::VectorXd gradient = Eigen::VectorXd::Zero(dim);

        auto add_block = [&](int row0, int col0, const Eigen::MatrixXd& block) {
            for (int r = 0; r < block.rows(); ++r) {
                for (int c = 0; c < block.cols(); ++c) {
                    triplets.emplace_back(row0 + r, col0 + c, block(r, c));
                }
            }
        };

        for (const MotionEdge& e : g.motion_edges) {
            const Eigen::Matrix3d w = motion_information(g, e);
            const Eigen::Vector3d r =
                pose_residual(g.pose_nodes[e.prev], g.pose_nodes[e.curr], e.v, e.omega);
            Eigen::Matrix3d ja, jb;
            pose_residual_jacobians(g.pose_nodes[e.prev], g.pose_nodes[e.curr], e.v, e.omega,
                                    ja, jb);
            const bool free_a = e.prev > 0;
            const bool free_b = e.curr > 0;
            if (free_a) {
                add_block(pose_offset(e.prev), pose_offset(e.prev), ja.transpose() * w * ja);
                gradient.segment<3>(pose_offset(e.prev)) += ja.transpose() * w * r;
            }
            if (free_b) {
                add_block(pose_offset(e.curr), pose_offset(e.curr), jb.transpose() * w * jb);
                gradient.segment<3>(pose_offset(e.curr)) += jb.transpose() * w * r;
            }
            if (free_a && free_b) {
                add_block(pose_offset(e.prev), pose_offset(e.curr), ja.transpose() * w * jb);
                add_block(pose_offset(e.curr), pose_offset(e.prev), jb.transpose() * w * ja);
            }
        }

        for (const ObservationEdge& e : g.observation_edges) {
            const Eigen::Matrix2d w = observation_information(g, e);
            const Eigen::Vector2d r = landmark_residual(
                g.pose_nodes[e.pose], g.landmark_nodes[e.landmark], e.range, e.bearing);
            Eigen::Matrix<double, 2, 3> jp;
            Eigen::Matrix2d jl;
            landmark_residual_jacobians(g.pose_nodes[e.pose], g.landmark_nodes[e.landmark], jp,
                                        jl);
            const bool free_p = e.pose > 0;
            const int lo = landmark_offset(e.landmark);
            add_block(lo, lo, jl.transpose() * w * jl);
            gradient.segment<2>(lo) += jl.transpose() * w * r;
            if (free_p) {
                const int po = pose_offset(e.pose);
                add_block(po, po, jp.transpose() * w * jp);
                gradient.segment<3>(po) += jp.transpose() * w * r;
                add_block(po, lo, jp.transpose() * w * jl);
                add_block(lo, po, jl.transpose() * w * jp);
            }
        }

        if (gradient.lpNorm<Eigen::Infinity>() < opts.gradient_tolerance) {
            converged = true;
            break;
        }

        Eigen::SparseMatrix<double> h(dim, dim);
        h.setFromTriplets(triplets.begin(), triplets.end());
        const Eigen::VectorXd diag = h.diagonal();

        // Levenberg loop: retry with more damping until a step is accepted.
        bool accepted = false;
        while (!accepted) {
            Eigen::SparseMatrix<double> h_damped = h;
            for (int i = 0; i < dim; ++i) {
                h_damped.coeffRef(i, i) = diag(i) + damping * std::max(diag(i), 1e-12);
            }
            Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver;
            solver.compute(h_damped);
            bool solve_ok = solver.info() == Eigen::Success;
            Eigen::VectorXd step;
            if (solve_ok) {
                step = solver.solve(-gradient);
                solve_ok = solver.info() == Eigen::Success && step.allFinite();
            }

            if (solve_ok) {
                PoseGraph candidate = g;
                for (int i = 1; i < np; ++i) {
                    const int o = pose_offset(i);
                    candidate.pose_nodes[i] =
                        Pose2D(g.pose_nodes[i].x + step(o), g.pose_nodes[i].y + step(o + 1),
                               g.pose_nodes[i].theta + step(o + 2));
                }
                for (int k = 0; k < nl; ++k) {
                    const int o = landmark_offset(k);
                    candidate.landmark_nodes[k] =
                        g.landmark_nodes[k] + Vec2(step(o), step(o + 1));
                }
                const double new_cost = graph_cost(candidate);
                if (std::isfinite(new_cost) && new_cost <= cost) {
                    const double improvement = cost - new_cost;
                    g = candidate;
                    cost = new_cost;
                    damping = damping > 0.0 ? damping * 0.3 : 0.0;
                    if (damping < 1e-9) damping = 0.0;
                    accepted = true;
                    if (improvement < opts.cost_tolerance) converged = true;
                    break;
                }
            }
            // Singular system or cost increase: raise the damping.
            damping = damping > 0.0 ? damping * 10.0 : 1e-6;
            if (damping > opts.max_damping) {
                result.converged = false;  // hand back the input untouched
                result.iterations = iter;
                return result;
            }
        }
        if (converged) break;
    }

    result.graph = g;
    result.converged = converged || iter < opts.max_iterations;
    result.iterations = iter;
    result.final_cost = cost;
    return result;
}

std::string graph_to_json(const PoseGraph& g) {
    nlohmann::json j;
    j["pose_nodes"] = nlohmann::json::array();
    for (const Pose2D& p : g.pose_nodes) {
        j["pose_nodes"].push_back({{"x", p.x}, {"y", p.y}, {"theta", p.theta}});
    }
    j["landmark_nodes"] = nlohmann::json::array();
    for (const Vec2& l : g.landmark_nodes) {
        j["landmark_nodes"].push_back({{"x", l.x()}, {"y", l.y()}});
    }
    j["motion_edges"] = nlohmann::json::array();
    for (const MotionEdge& e : g.motion_edges) {
        j["motion_edges"].push_back(
            {{"prev", e.prev}, {"curr", e.curr}, {"v", e.v}, {"omega", e.omega}});
    }
    j["observation_edges"] = nlohmann::json::array();
    for (const ObservationEdge& e : g.observation_edges) {
        j["observation_edges"].push_back({{"pose", e.pose},
                                          {"landmark", e.landmark},
                                          {"range", e.range},
                                          {"bearing", e.bearing}});
    }
    j["sigmas"] = {{"motion_v", g.motion_sigma_v},
                   {"motion_omega", g.motion_sigma_omega},
                   {"obs_range", g.obs_sigma_range},
                   {"obs_bearing", g.obs_sigma_bearing}};
    return j.dump(2);
}

void save_graph_json(const PoseGraph& g, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write graph json: " + path);
    out << graph_to_json(g) << "\n";
}

}  // namespace fsd
