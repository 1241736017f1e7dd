#ifndef FSDSTACK_PLANNER_DELAUNAY_HPP
#define FSDSTACK_PLANNER_DELAUNAY_HPP

#include <array>
#include <vector>

#include "fsdstack/types.hpp"

namespace fsd {

/// Midpoint of a Delaunay triangle edge between two cones. The left/right
/// labels follow storage order; the reward resolves actual left/right from
/// the travel direction when scoring.
struct Midpoint {
    Vec2 position{0.0, 0.0};
    Cone left_cone;
    Cone right_cone;
    double edge_length = 0.0;  // local track width estimate
};

/// Triangle as indices into the input point set.
using TriangleIndices = std::array<int, 3>;

/// Bowyer-Watson Delaunay triangulation. Throws on < 3 points or a fully
/// collinear input.
std::vector<TriangleIndices> delaunay_triangles(const std::vector<Vec2>& points);

/// Midpoints of all unique triangulation edges over the cone map.
std::vector<Midpoint> triangulate(const std::vector<Cone>& cones);

}  // namespace fsd

#endif  // FSDSTACK_PLANNER_DELAUNAY_HPP
