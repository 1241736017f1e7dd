#ifndef FSDSTACK_TESTS_SUPPORT_CORRIDOR_HPP
#define FSDSTACK_TESTS_SUPPORT_CORRIDOR_HPP

#include <algorithm>
#include <random>
#include <utility>
#include <vector>

#include "fsdstack/planner/centerline.hpp"

namespace fsd::test {

struct CorridorMap {
    std::vector<Cone> cones;
    Pose2D start;
    std::vector<Vec2> pair_midpoints;  // ground-truth centerline
};

/// Two-lane corridor with optional constant curvature and seeded jitter on
/// cone placement. curvature > 0 bends left.
inline CorridorMap make_corridor(int n_pairs, double spacing, double width, double curvature,
                                 std::uint64_t seed, double jitter = 0.0,
                                 bool known_colors = true) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> noise(0.0, jitter);

    CorridorMap map;
    double heading = 0.0;
    Vec2 pos(0.0, 0.0);
    for (int i = 0; i < n_pairs; ++i) {
        const Vec2 left_normal(-std::sin(heading), std::cos(heading));
        Vec2 left = pos + 0.5 * width * left_normal;
        Vec2 right = pos - 0.5 * width * left_normal;
        if (jitter > 0.0) {
            left += Vec2(noise(rng), noise(rng));
            right += Vec2(noise(rng), noise(rng));
        }
        map.cones.emplace_back(left, known_colors ? ConeColor::Blue : ConeColor::Unknown);
        map.cones.emplace_back(right, known_colors ? ConeColor::Yellow : ConeColor::Unknown);
        map.pair_midpoints.push_back(0.5 * (left + right));
        pos += spacing * Vec2(std::cos(heading), std::sin(heading));
        heading += curvature * spacing;
    }
    map.start = Pose2D(map.pair_midpoints.front().x(), map.pair_midpoints.front().y(), 0.0);
    return map;
}

/// Exhaustive maximum-cumulative-reward search over the same candidate gating
/// as the production search; the oracle for corridor-scale maps.
class BruteForceSearch {
public:
    BruteForceSearch(const std::vector<Midpoint>& midpoints, const RewardWeights& weights,
                     const SearchConfig& cfg)
        : midpoints_(midpoints), weights_(weights), cfg_(cfg) {}

    std::vector<int> run(const Pose2D& start) {
        used_.assign(midpoints_.size(), 0);
        best_total_ = -std::numeric_limits<double>::infinity();
        best_path_.clear();
        std::vector<Vec2> history{start.position() - cfg_.step_target * start.heading_vector(),
                                  start.position()};
        std::vector<int> path;
        nodes_ = 0;
        dfs(history, path, 0.0);
        return best_path_;
    }

    long long nodes() const { return nodes_; }

private:
    std::vector<int> candidates(const std::vector<Vec2>& history) const {
        const Vec2& cur = history.back();
        const Vec2 prev_dir = history[history.size() - 1] - history[history.size() - 2];
        std::vector<std::pair<double, int>> scored;
        for (int i = 0; i < static_cast<int>(midpoints_.size()); ++i) {
            if (used_[i]) continue;
            const Vec2 step = midpoints_[i].position - cur;
            const double d = step.norm();
            if (d < cfg_.min_step || d > cfg_.max_step) continue;
            const double turn = wrap_angle(std::atan2(step.y(), step.x()) -
                                           std::atan2(prev_dir.y(), prev_dir.x()));
            if (std::abs(turn) > cfg_.max_turn) continue;
            scored.emplace_back(d, i);
        }
        std::sort(scored.begin(), scored.end());
        if (static_cast<int>(scored.size()) > cfg_.max_candidates) {
            scored.resize(cfg_.max_candidates);
        }
        std::vector<int> out;
        for (const auto& [d, i] : scored) out.push_back(i);
        return out;
    }

    void dfs(std::vector<Vec2>& history, std::vector<int>& path, double total) {
        ++nodes_;
        const auto cands = candidates(history);
        if (cands.empty()) {
            if (total > best_total_) {
                best_total_ = total;
                best_path_ = path;
            }
            return;
        }
        for (int idx : cands) {
            const double reward = midpoint_reward(midpoints_[idx], history, weights_, cfg_);
            used_[idx] = 1;
            history.push_back(midpoints_[idx].position);
            path.push_back(idx);
            dfs(history, path, total + reward);
            path.pop_back();
            history.pop_back();
            used_[idx] = 0;
        }
    }

    const std::vector<Midpoint>& midpoints_;
    RewardWeights weights_;
    SearchConfig cfg_;
    mutable std::vector<char> used_;
    std::vector<int> best_path_;
    double best_total_ = 0.0;
    long long nodes_ = 0;
};

}  // namespace fsd::test

#endif  // FSDSTACK_TESTS_SUPPORT_CORRIDOR_HPP
