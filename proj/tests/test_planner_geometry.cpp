#include <doctest.h>

#include <random>

#include "fsdstack/planner/delaunay.hpp"
#include "fsdstack/planner/reward.hpp"
#include "fsdstack/planner/smoothing.hpp"
#include "fsdstack/planner/spline.hpp"

using namespace fsd;

TEST_CASE("unit square triangulates into two triangles and five midpoints") {
    std::vector<Cone> cones = {{0.0, 0.0, ConeColor::Blue},
                               {1.0, 0.0, ConeColor::Yellow},
                               {1.0, 1.0, ConeColor::Blue},
                               {0.0, 1.0, ConeColor::Yellow}};
    const auto midpoints = triangulate(cones);
    CHECK(midpoints.size() == 5);  // 4 sides + 1 diagonal
    for (const Midpoint& m : midpoints) {
        CHECK((m.position - 0.5 * (m.left_cone.position + m.right_cone.position)).norm() <
              1e-12);
        CHECK(m.edge_length ==
              doctest::Approx((m.left_cone.position - m.right_cone.position).norm()));
    }
}

TEST_CASE("triangle gives three midpoints, degenerate inputs throw") {
    std::vector<Cone> tri = {{0.0, 0.0, ConeColor::Blue},
                             {2.0, 0.0, ConeColor::Yellow},
                             {1.0, 1.5, ConeColor::Blue}};
    CHECK(triangulate(tri).size() == 3);

    std::vector<Cone> two = {{0.0, 0.0, ConeColor::Blue}, {1.0, 0.0, ConeColor::Yellow}};
    CHECK_THROWS_AS(triangulate(two), std::invalid_argument);

    std::vector<Cone> collinear = {{0.0, 0.0, ConeColor::Blue},
                                   {1.0, 0.0, ConeColor::Yellow},
                                   {2.0, 0.0, ConeColor::Blue},
                                   {3.0, 0.0, ConeColor::Yellow}};
    CHECK_THROWS_AS(triangulate(collinear), std::invalid_argument);
}

TEST_CASE("delaunay empty-circumcircle property on random points") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> coord(-10.0, 10.0);
    std::vector<Vec2> pts;
    for (int i = 0; i < 60; ++i) pts.emplace_back(coord(rng), coord(rng));
    const auto tris = delaunay_triangles(pts);
    CHECK(tris.size() > 0);

    auto circumcircle = [&](const TriangleIndices& t, Vec2& center, double& r_sq) {
        const Vec2 a = pts[t[0]], b = pts[t[1]], c = pts[t[2]];
        const double d = 2.0 * ((b - a).x() * (c - a).y() - (b - a).y() * (c - a).x());
        const double ux = ((b - a).squaredNorm() * (c - a).y() -
                           (c - a).squaredNorm() * (b - a).y()) / d;
        const double uy = ((c - a).squaredNorm() * (b - a).x() -
                           (b - a).squaredNorm() * (c - a).x()) / d;
        center = a + Vec2(ux, uy);
        r_sq = Vec2(ux, uy).squaredNorm();
    };
    for (const TriangleIndices& t : tris) {
        Vec2 center;
        double r_sq;
        circumcircle(t, center, r_sq);
        for (int i = 0; i < static_cast<int>(pts.size()); ++i) {
            if (i == t[0] || i == t[1] || i == t[2]) continue;
            CHECK((pts[i] - center).squaredNorm() >= r_sq - 1e-7 * r_sq);
        }
    }
}

TEST_CASE("track width score has the plateau and the printed values") {
    CHECK(track_width_score(4.0) == doctest::Approx(1.0));
    CHECK(track_width_score(3.0) == doctest::Approx(1.0));
    CHECK(track_width_score(5.0) == doctest::Approx(1.0));
    CHECK(track_width_score(2.0) == doctest::Approx(-0.2428819863).epsilon(1e-9));
    CHECK_THROWS_AS(track_width_score(-1.0), std::invalid_argument);
}

TEST_CASE("track width score is continuous and maximal on the plateau") {
    for (double eps = 1e-3; eps > 1e-10; eps *= 0.1) {
        CHECK(std::abs(track_width_score(3.0 - eps) - 1.0) < 10.0 * eps);
        CHECK(std::abs(track_width_score(5.0 + eps) - 1.0) < 10.0 * eps);
    }
    double max_score = -1e9;
    for (double w = 0.0; w <= 10.0; w += 0.001) {
        max_score = std::max(max_score, track_width_score(w));
    }
    CHECK(max_score == doctest::Approx(1.0));
    // Mirror symmetry about the plateau.
    CHECK(track_width_score(2.5) == doctest::Approx(track_width_score(5.5)).epsilon(1e-12));
    // The printed form keeps the lower-branch center for x > 5.
    CHECK(track_width_score(6.0, true) ==
          doctest::Approx(1.3 * std::exp(-0.5 * std::pow((6.0 - 3.0) / 0.4, 2)) - 0.3));
}

TEST_CASE("midpoint reward factor arithmetic") {
    RewardWeights weights;
    SearchConfig cfg;
    // History along +x with perfect spacing so every factor can score 1.
    std::vector<Vec2> history;
    for (int i = 0; i < 4; ++i) history.emplace_back(i * cfg.step_target, 0.0);

    Midpoint perfect;
    perfect.position = Vec2(4 * cfg.step_target, 0.0);
    perfect.left_cone = Cone(perfect.position + Vec2(0.0, 2.0), ConeColor::Blue);
    perfect.right_cone = Cone(perfect.position - Vec2(0.0, 2.0), ConeColor::Yellow);
    perfect.edge_length = 4.0;
    CHECK(midpoint_reward(perfect, history, weights, cfg) ==
          doctest::Approx(weights.sum()).epsilon(1e-9));

    Midpoint swapped = perfect;  // colors inverted across the track
    swapped.left_cone.color = ConeColor::Yellow;
    swapped.right_cone.color = ConeColor::Blue;
    CHECK(midpoint_reward(swapped, history, weights, cfg) ==
          doctest::Approx(weights.sum() - 2.0 * weights.color).epsilon(1e-9));

    Midpoint unknown = perfect;
    unknown.left_cone.color = ConeColor::Unknown;
    unknown.right_cone.color = ConeColor::Unknown;
    CHECK(midpoint_reward(unknown, history, weights, cfg) ==
          doctest::Approx(weights.sum() - weights.color).epsilon(1e-9));
}

TEST_CASE("moving average: identity, uniform collinear, zigzag means") {
    std::vector<Vec2> collinear;
    for (int i = 0; i < 10; ++i) collinear.emplace_back(i * 1.0, 2.0 * i);
    const auto same = smooth_moving_average(collinear, 5);
    for (std::size_t i = 0; i < collinear.size(); ++i) {
        CHECK((same[i] - collinear[i]).norm() < 1e-12);
    }

    CHECK((smooth_moving_average(collinear, 1)[3] - collinear[3]).norm() < 1e-12);

    std::vector<Vec2> zigzag = {{0, 0}, {1, 1}, {2, 0}, {3, 1}, {4, 0}};
    const auto smoothed = smooth_moving_average(zigzag, 3);
    CHECK(smoothed[0].y() == doctest::Approx(0.0));
    CHECK(smoothed[1].y() == doctest::Approx(1.0 / 3.0));
    CHECK(smoothed[2].y() == doctest::Approx(2.0 / 3.0));
    CHECK(smoothed[3].y() == doctest::Approx(1.0 / 3.0));
    CHECK(smoothed[4].y() == doctest::Approx(0.0));

    CHECK_THROWS_AS(smooth_moving_average(zigzag, 4), std::invalid_argument);
    CHECK(smooth_moving_average(zigzag, 3).size() == zigzag.size());
}

TEST_CASE("moving average wraps on closed paths") {
    std::vector<Vec2> ring;
    for (int i = 0; i < 12; ++i) {
        const double a = 2.0 * M_PI * i / 12;
        ring.emplace_back(std::cos(a), std::sin(a));
    }
    const auto smoothed = smooth_moving_average(ring, 3, true);
    CHECK(smoothed.size() == ring.size());
    // Every point shrinks toward the centroid by the same factor.
    const double r0 = smoothed[0].norm();
    for (const Vec2& p : smoothed) CHECK(p.norm() == doctest::Approx(r0).epsilon(1e-9));
    CHECK(r0 < 1.0);
}

TEST_CASE("opheim keeps two points and drops collinear runs") {
    std::vector<Vec2> two = {{0, 0}, {1, 0}};
    CHECK(simplify_opheim(two, 0.1, 5.0) == two);

    std::vector<Vec2> line;
    for (int i = 0; i < 100; ++i) line.emplace_back(0.1 * i, 0.0);
    const auto simplified = simplify_opheim(line, 0.1, 5.0);
    CHECK(simplified.size() <= 4);
    CHECK(simplified.front() == line.front());
    CHECK(simplified.back() == line.back());
    for (std::size_t i = 1; i < simplified.size(); ++i) {
        CHECK((simplified[i] - simplified[i - 1]).norm() <= 5.0 + 0.2 + 1e-12);
    }
}

TEST_CASE("opheim retains a right-angle corner") {
    std::vector<Vec2> corner;
    for (int i = 0; i <= 10; ++i) corner.emplace_back(0.2 * i, 0.0);
    for (int i = 1; i <= 10; ++i) corner.emplace_back(2.0, 0.2 * i);
    const auto simplified = simplify_opheim(corner, 0.15, 10.0);
    bool has_corner = false;
    for (const Vec2& p : simplified) {
        if ((p - Vec2(2.0, 0.0)).norm() < 0.25) has_corner = true;
    }
    CHECK(has_corner);
    // Output must be a subsequence of the input.
    std::size_t cursor = 0;
    for (const Vec2& p : simplified) {
        while (cursor < corner.size() && (corner[cursor] - p).norm() > 1e-12) ++cursor;
        CHECK(cursor < corner.size());
    }
    CHECK_THROWS_AS(simplify_opheim(corner, 5.0, 1.0), std::invalid_argument);
}

TEST_CASE("line fit recovers axis-aligned and diagonal lines") {
    std::vector<Vec2> flat = {{0, 0}, {1, 0}, {2, 0}, {3, 0}, {4, 0}};
    const Trajectory t1 = fit_line(flat, 0.5);
    for (const TrajectoryPoint& p : t1.points) {
        CHECK(p.heading == doctest::Approx(0.0));
        CHECK(p.curvature == doctest::Approx(0.0));
        CHECK(std::abs(p.y) < 1e-12);
    }

    std::vector<Vec2> diag = {{0, 0}, {1, 1}, {2, 2}, {3, 3}};
    CHECK(fit_line(diag, 0.5).points.front().heading == doctest::Approx(M_PI / 4));

    // Offsets mirror-symmetric about the centroid cancel in the TLS fit.
    std::vector<Vec2> noisy;
    for (int i = 0; i < 20; ++i) {
        const double offset = (i < 5 || i >= 15) ? 0.1 : -0.1;
        noisy.emplace_back(i * 1.0, 1.0 + offset);
    }
    const Trajectory t2 = fit_line(noisy, 1.0);
    for (const TrajectoryPoint& p : t2.points) CHECK(p.y == doctest::Approx(1.0).epsilon(1e-9));

    std::vector<Vec2> coincident = {{1, 1}, {1, 1}, {1, 1}};
    CHECK_THROWS_AS(fit_line(coincident, 0.5), std::invalid_argument);
}

TEST_CASE("spline on a straight line has zero curvature") {
    std::vector<Vec2> pts;
    for (int i = 0; i < 8; ++i) pts.emplace_back(1.5 * i, 0.75 * i);
    const Trajectory traj = fit_spline(pts, false, 0.5);
    for (const TrajectoryPoint& p : traj.points) CHECK(std::abs(p.curvature) < 1e-9);
}

TEST_CASE("closed spline over a circle recovers the curvature") {
    const double radius = 10.0;
    auto circle_points = [&](int n) {
        std::vector<Vec2> pts;
        for (int i = 0; i < n; ++i) {
            const double a = 2.0 * M_PI * i / n;
            pts.emplace_back(radius * std::cos(a), radius * std::sin(a));
        }
        return pts;
    };

    // At 16 knots the cubic-spline curvature error is bounded by the
    // interpolation estimate h^2 f'''' / 12 (about 1.3e-3 here).
    {
        const std::vector<Vec2> pts = circle_points(16);
        const double chord = (pts[1] - pts[0]).norm();
        const double omega = (2.0 * M_PI / 16) / chord;
        const double bound = chord * chord / 12.0 * radius * std::pow(omega, 4) * 1.1;
        const Trajectory traj = fit_spline(pts, true, 0.5);
        CHECK(traj.closed);
        for (const TrajectoryPoint& p : traj.points) {
            CHECK(std::abs(p.curvature - 0.1) < bound);
            CHECK(p.position().norm() == doctest::Approx(radius).epsilon(1e-3));
        }
    }

    // A slightly denser knot set reaches the 1e-3 absolute figure.
    {
        const Trajectory traj = fit_spline(circle_points(20), true, 0.5);
        for (const TrajectoryPoint& p : traj.points) {
            CHECK(std::abs(p.curvature - 0.1) < 1e-3);
        }
        // Near-uniform sampling distance, including the wrap segment.
        const auto s = traj.arc_lengths();
        const double ds = s[1] - s[0];
        for (std::size_t i = 2; i < traj.size(); ++i) {
            CHECK(std::abs((s[i] - s[i - 1]) - ds) < 0.1 * ds);
        }
    }
}

TEST_CASE("spline is C2 and interpolates its knots") {
    std::vector<Vec2> pts = {{0, 0}, {2, 1}, {4, -1}, {6, 2}, {8, 0}, {10, 1}};
    const CubicSpline2D spline(pts, false);
    // Knot interpolation.
    double t = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        if (i > 0) t += (pts[i] - pts[i - 1]).norm();
        CHECK((spline.eval(t) - pts[i]).norm() < 1e-9);
    }
    // Second-derivative continuity at interior knots by finite differences.
    t = 0.0;
    for (std::size_t i = 1; i + 1 < pts.size(); ++i) {
        t += (pts[i] - pts[i - 1]).norm();
        const double eps = 1e-7;
        CHECK((spline.deriv2(t + eps) - spline.deriv2(t - eps)).norm() < 1e-6);
    }

    std::vector<Vec2> dup = {{0, 0}, {1, 0}, {1, 0}, {2, 0}};
    CHECK_THROWS_AS(fit_spline(dup, false, 0.5), std::invalid_argument);
    std::vector<Vec2> few = {{0, 0}, {1, 0}, {2, 0}};
    CHECK_THROWS_AS(fit_spline(few, false, 0.5), std::invalid_argument);
}
