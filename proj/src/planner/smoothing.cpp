#include "fsdstack/planner/smoothing.hpp"

#include <algorithm>
#include <stdexcept>

namespace fsd {

std::vector<Vec2> smooth_moving_average(const std::vector<Vec2>& points, int window,
                                        bool closed) {
    if (window < 1 || window % 2 == 0) {
        throw std::invalid_argument("smooth_moving_average: window must be odd and >= 1");
    }
    const int n = static_cast<int>(points.size());
    if (n == 0 || window == 1) return points;

    const int half = window / 2;
    std::vector<Vec2> out(points.size());
    for (int i = 0; i < n; ++i) {
        int radius = half;
        if (!closed) {
            // Shrink symmetrically near the ends; endpoints stay fixed.
            radius = std::min({half, i, n - 1 - i});
        }
        Vec2 sum(0.0, 0.0);
        for (int k = -radius; k <= radius; ++k) {
            const int j = closed ? ((i + k) % n + n) % n : i + k;
            sum += points[j];
        }
        out[i] = sum / static_cast<double>(2 * radius + 1);
    }
    return out;
}

std::vector<Vec2> simplify_opheim(const std::vector<Vec2>& points, double min_tol,
                                  double max_tol) {
    if (min_tol >= max_tol) {
        throw std::invalid_argument("simplify_opheim: min_tol must be < max_tol");
    }
    const int n = static_cast<int>(points.size());
    if (n < 2) throw std::invalid_argument("simplify_opheim: need >= 2 points");
    if (n == 2) return points;

    // Cumulative arc length along the input.
    std::vector<double> arc(n, 0.0);
    for (int i = 1; i < n; ++i) arc[i] = arc[i - 1] + (points[i] - points[i - 1]).norm();

    std::vector<Vec2> out;
    out.push_back(points.front());
    int anchor = 0;
    while (anchor < n - 1) {
        // Ray through the first point beyond min_tol of the anchor.
        int ray_idx = anchor + 1;
        while (ray_idx < n && (points[ray_idx] - points[anchor]).norm() <= min_tol) ++ray_idx;
        if (ray_idx >= n) break;  // tail collapses onto the anchor

        Vec2 dir = points[ray_idx] - points[anchor];
        dir.normalize();

        int next_anchor = -1;
        for (int i = ray_idx + 1; i < n; ++i) {
            const double perp = std::abs(perp_distance(points[i], points[anchor], dir));
            const double along = arc[i] - arc[anchor];
            if (perp > min_tol || along > max_tol) {
                next_anchor = i;
                break;
            }
        }
        if (next_anchor < 0) break;  // rest of the line fits the corridor
        out.push_back(points[next_anchor]);
        anchor = next_anchor;
    }
    if ((out.back() - points.back()).norm() > 0.0) out.push_back(points.back());
    return out;
}

}  // namespace fsd
