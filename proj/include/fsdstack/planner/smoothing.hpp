#ifndef FSDSTACK_PLANNER_SMOOTHING_HPP
#define FSDSTACK_PLANNER_SMOOTHING_HPP

#include <vector>

#include "fsdstack/geometry.hpp"

namespace fsd {

/// Moving-average smoothing with an odd window. Open paths keep their
/// endpoints (the window shrinks symmetrically towards them); closed paths
/// wrap around. Point count is preserved.
std::vector<Vec2> smooth_moving_average(const std::vector<Vec2>& points, int window,
                                        bool closed = false);

/// Opheim simplification: from each anchor a ray is cast through the first
/// point beyond min_tol; points are dropped while they stay within min_tol
/// perpendicular distance of the ray and within max_tol arc distance of the
/// anchor. The first violating point becomes the next anchor. Endpoints are
/// always kept; the output is a subsequence of the input.
std::vector<Vec2> simplify_opheim(const std::vector<Vec2>& points, double min_tol,
                                  double max_tol);

}  // namespace fsd

#endif  // FSDSTACK_PLANNER_SMOOTHING_HPP
