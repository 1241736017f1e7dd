#ifndef FSDSTACK_PLANNER_REWARD_HPP
#define FSDSTACK_PLANNER_REWARD_HPP

#include <vector>

#include "fsdstack/planner/delaunay.hpp"

namespace fsd {

/// Weights of the centerline reward factors. Track width dominates prediction
/// by default; all weights are non-negative.
struct RewardWeights {
    double color = 3.0;
    double width = 5.0;
    double angle = 2.0;
    double distance = 1.0;
    double prediction = 0.5;

    double sum() const { return color + width + angle + distance + prediction; }
    void validate() const;
};

struct SearchConfig {
    int horizon_depth = 3;        // lookahead plies
    double max_step = 3.5;        // m, candidate gate
    double min_step = 0.5;        // m, rejects degenerate zero-length steps
    double max_turn = 0.9;        // rad per step, candidate gate
    int max_candidates = 8;       // nearest candidates kept per ply
    int prediction_window = 3;    // trailing points feeding the predictive model
    double step_target = 2.5;     // m, preferred midpoint spacing
    double step_sigma = 1.0;      // m, distance factor spread
    double prediction_sigma = 1.0;  // m, prediction factor spread
    int smoothing_window = 5;     // moving-average window (odd)
    double opheim_min_tol = 0.2;  // m
    double opheim_max_tol = 6.0;  // m
    double sample_ds = 0.5;       // m, output trajectory spacing

    void validate() const;
};

/// Track-width score: 1 on the rule-optimal [3, 5] m plateau, Gaussian decay
/// to -0.3 outside. `printed_asymmetric_tail` reproduces the upper branch
/// centred at 3 instead of the mirrored decay at 5.
double track_width_score(double width_m, bool printed_asymmetric_tail = false);

/// Weighted sum of the five factor scores (color, width, angle, distance,
/// prediction), each normalized to [-1, 1]. `history` holds the most recent
/// centerline points, oldest first; factors that need more history than given
/// score neutral (1).
double midpoint_reward(const Midpoint& candidate, const std::vector<Vec2>& history,
                       const RewardWeights& weights, const SearchConfig& cfg);

/// Constant-turn extrapolation of the next centerline point from the trailing
/// window; used by the prediction factor.
Vec2 predict_next_point(const std::vector<Vec2>& history, int window);

}  // namespace fsd

#endif  // FSDSTACK_PLANNER_REWARD_HPP
