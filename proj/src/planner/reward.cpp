#include "fsdstack/planner/reward.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fsd {

void RewardWeights::validate() const {
    if (color < 0 || width < 0 || angle < 0 || distance < 0 || prediction < 0) {
        throw std::invalid_argument("RewardWeights: weights must be non-negative");
    }
    if (sum() <= 0.0) {
        throw std::invalid_argument("RewardWeights: at least one weight must be positive");
    }
}

void SearchConfig::validate() const {
    if (horizon_depth < 1) throw std::invalid_argument("SearchConfig: horizon_depth >= 1");
    if (max_step <= 0 || max_turn <= 0 || step_target <= 0 || step_sigma <= 0 ||
        prediction_sigma <= 0 || sample_ds <= 0 || opheim_min_tol <= 0 || opheim_max_tol <= 0) {
        throw std::invalid_argument("SearchConfig: scales must be positive");
    }
    if (opheim_min_tol >= opheim_max_tol) {
        throw std::invalid_argument("SearchConfig: opheim_min_tol < opheim_max_tol required");
    }
    if (max_candidates < 1) throw std::invalid_argument("SearchConfig: max_candidates >= 1");
    if (smoothing_window < 1 || smoothing_window % 2 == 0) {
        throw std::invalid_argument("SearchConfig: smoothing_window must be odd and >= 1");
    }
}

double track_width_score(double width_m, bool printed_asymmetric_tail) {
    if (width_m < 0.0) throw std::invalid_argument("track_width_score: negative width");
    if (width_m >= 3.0 && width_m <= 5.0) return 1.0;
    const double center = width_m < 3.0 ? 3.0 : (printed_asymmetric_tail ? 3.0 : 5.0);
    const double z = (width_m - center) / 0.4;
    return 1.3 * std::exp(-0.5 * z * z) - 0.3;
}

namespace {

double gaussian_score(double deviation, double sigma) {
    const double z = deviation / sigma;
    return std::exp(-0.5 * z * z);
}

double color_score(const Midpoint& m, const Vec2& travel_dir) {
    const ConeColor ca = m.left_cone.color;
    const ConeColor cb = m.right_cone.color;
    if (ca == ConeColor::Unknown || cb == ConeColor::Unknown) return 0.0;
    // Resolve which endpoint lies left of the travel direction.
    const double side_a = cross2(travel_dir, m.left_cone.position - m.position);
    const double side_b = cross2(travel_dir, m.right_cone.position - m.position);
    if (side_a == 0.0 || side_b == 0.0 || (side_a > 0) == (side_b > 0)) return 0.0;
    const ConeColor left = side_a > 0 ? ca : cb;
    const ConeColor right = side_a > 0 ? cb : ca;
    if (left == ConeColor::Blue && right == ConeColor::Yellow) return 1.0;
    if (left == ConeColor::Yellow && right == ConeColor::Blue) return -1.0;
    return 0.0;
}

}  // namespace

Vec2 predict_next_point(const std::vector<Vec2>& history, int window) {
    const int n = static_cast<int>(history.size());
    if (n < 2) throw std::invalid_argument("predict_next_point: need >= 2 history points");
    const int w = std::min(window + 1, n);  // window counts trailing steps' endpoints
    const int first = n - w;

    double mean_len = 0.0;
    int steps = 0;
    for (int i = first + 1; i < n; ++i) {
        mean_len += (history[i] - history[i - 1]).norm();
        ++steps;
    }
    mean_len /= steps;

    const Vec2 last_dir = history[n - 1] - history[n - 2];
    double heading = std::atan2(last_dir.y(), last_dir.x());
    // Mean heading change across the window approximates the local turn rate.
    double mean_turn = 0.0;
    int turns = 0;
    for (int i = first + 2; i < n; ++i) {
        const Vec2 d0 = history[i - 1] - history[i - 2];
        const Vec2 d1 = history[i] - history[i - 1];
        mean_turn += wrap_angle(std::atan2(d1.y(), d1.x()) - std::atan2(d0.y(), d0.x()));
        ++turns;
    }
    if (turns > 0) mean_turn /= turns;

    heading = wrap_angle(heading + mean_turn);
    return history[n - 1] + mean_len * Vec2(std::cos(heading), std::sin(heading));
}

double midpoint_reward(const Midpoint& candidate, const std::vector<Vec2>& history,
                       const RewardWeights& weights, const SearchConfig& cfg) {
    const int n = static_cast<int>(history.size());

    const double width = std::clamp(track_width_score(candidate.edge_length), -1.0, 1.0);

    double color = 0.0;
    double angle = 1.0;
    double distance = 1.0;
    double prediction = 1.0;

    if (n >= 1) {
        const Vec2 step = candidate.position - history.back();
        const double step_len = step.norm();
        distance = gaussian_score(step_len - cfg.step_target, cfg.step_sigma);
        if (step_len > 1e-12) {
            color = color_score(candidate, step / step_len);
        }
        if (n >= 2) {
            const Vec2 prev = history[n - 1] - history[n - 2];
            if (prev.norm() > 1e-12 && step_len > 1e-12) {
                const double turn = wrap_angle(std::atan2(step.y(), step.x()) -
                                               std::atan2(prev.y(), prev.x()));
                angle = gaussian_score(turn, 0.5 * cfg.max_turn);
            }
            if (n >= 3) {
                const Vec2 predicted = predict_next_point(history, cfg.prediction_window);
                prediction =
                    gaussian_score((candidate.position - predicted).norm(), cfg.prediction_sigma);
            }
        }
    }

    return weights.color * color + weights.width * width + weights.angle * angle +
           weights.distance * distance + weights.prediction * prediction;
}

}  // namespace fsd
