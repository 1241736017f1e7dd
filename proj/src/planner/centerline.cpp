#include "fsdstack/planner/centerline.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fsd {

namespace {

struct SearchContext {
    const std::vector<Midpoint>& midpoints;
    const RewardWeights& weights;
    const SearchConfig& cfg;
    std::vector<char>& used;
};

std::vector<int> gather_candidates(const SearchContext& ctx, const std::vector<Vec2>& history) {
    const Vec2& cur = history.back();
    const bool have_dir = history.size() >= 2;
    Vec2 prev_dir(1.0, 0.0);
    if (have_dir) {
        prev_dir = history[history.size() - 1] - history[history.size() - 2];
        if (prev_dir.norm() > 1e-12) prev_dir.normalize();
    }

    std::vector<std::pair<double, int>> scored;
    for (int i = 0; i < static_cast<int>(ctx.midpoints.size()); ++i) {
        if (ctx.used[i]) continue;
        const Vec2 step = ctx.midpoints[i].position - cur;
        const double d = step.norm();
        if (d < ctx.cfg.min_step || d > ctx.cfg.max_step) continue;
        if (have_dir) {
            const double turn = wrap_angle(std::atan2(step.y(), step.x()) -
                                           std::atan2(prev_dir.y(), prev_dir.x()));
            if (std::abs(turn) > ctx.cfg.max_turn) continue;
        }
        scored.emplace_back(d, i);
    }
    std::sort(scored.begin(), scored.end());
    if (static_cast<int>(scored.size()) > ctx.cfg.max_candidates) {
        scored.resize(ctx.cfg.max_candidates);
    }
    std::vector<int> out;
    out.reserve(scored.size());
    for (const auto& [d, i] : scored) out.push_back(i);
    return out;
}

/// Best cumulative reward achievable in `depth` plies from the given history.
double horizon_value(const SearchContext& ctx, std::vector<Vec2>& history, int depth) {
    if (depth == 0) return 0.0;
    const auto candidates = gather_candidates(ctx, history);
    double best = 0.0;  // dead end contributes nothing further
    for (int idx : candidates) {
        const double reward = midpoint_reward(ctx.midpoints[idx], history, ctx.weights, ctx.cfg);
        ctx.used[idx] = 1;
        history.push_back(ctx.midpoints[idx].position);
        const double value = reward + horizon_value(ctx, history, depth - 1);
        history.pop_back();
        ctx.used[idx] = 0;
        best = std::max(best, value);
    }
    return best;
}

}  // namespace

CenterlineResult search_centerline(const std::vector<Midpoint>& midpoints, const Pose2D& start,
                                   const RewardWeights& weights, const SearchConfig& cfg) {
    weights.validate();
    cfg.validate();

    std::vector<char> used(midpoints.size(), 0);
    SearchContext ctx{midpoints, weights, cfg, used};

    // Seed the history with a virtual point behind the start pose so the
    // first step is judged against the vehicle's heading.
    std::vector<Vec2> history;
    history.push_back(start.position() - cfg.step_target * start.heading_vector());
    history.push_back(start.position());

    CenterlineResult result;
    double path_length = 0.0;

    while (true) {
        const auto candidates = gather_candidates(ctx, history);
        if (candidates.empty()) {
            if (result.points.empty()) {
                throw std::runtime_error("search_centerline: no reachable first midpoint");
            }
            break;
        }

        int best_idx = -1;
        double best_value = -std::numeric_limits<double>::infinity();
        for (int idx : candidates) {
            const double reward = midpoint_reward(midpoints[idx], history, weights, cfg);
            used[idx] = 1;
            history.push_back(midpoints[idx].position);
            const double value = reward + horizon_value(ctx, history, cfg.horizon_depth - 1);
            history.pop_back();
            used[idx] = 0;
            if (value > best_value) {  // strict: earliest candidate wins ties
                best_value = value;
                best_idx = idx;
            }
        }

        path_length += (midpoints[best_idx].position - history.back()).norm();
        used[best_idx] = 1;
        history.push_back(midpoints[best_idx].position);
        result.points.push_back(midpoints[best_idx]);

        // Loop closure: back within one step of the first midpoint after
        // covering meaningful distance.
        if (result.points.size() >= 4 && path_length > 4.0 * cfg.max_step) {
            const double gap = (history.back() - result.points.front().position).norm();
            if (gap <= cfg.max_step) {
                result.cyclic = true;
                break;
            }
        }
    }
    return result;
}

}  // namespace fsd
