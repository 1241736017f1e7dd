#ifndef FSDSTACK_PLANNER_CENTERLINE_HPP
#define FSDSTACK_PLANNER_CENTERLINE_HPP

#include <vector>

#include "fsdstack/planner/reward.hpp"

namespace fsd {

struct CenterlineResult {
    std::vector<Midpoint> points;
    bool cyclic = false;
};

/// Greedy centerline search over triangle-edge midpoints, starting from the
/// vehicle pose. Each step picks the candidate maximizing cumulative reward
/// over `horizon_depth` plies; candidates are unused midpoints within
/// [min_step, max_step] and +-max_turn of the previous direction, capped at
/// the max_candidates nearest. Terminates when no candidate remains or when
/// the path returns to its first point (cyclic).
CenterlineResult search_centerline(const std::vector<Midpoint>& midpoints, const Pose2D& start,
                                   const RewardWeights& weights, const SearchConfig& cfg);

}  // namespace fsd

#endif  // FSDSTACK_PLANNER_CENTERLINE_HPP
