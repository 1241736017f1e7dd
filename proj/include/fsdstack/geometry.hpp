#ifndef FSDSTACK_GEOMETRY_HPP
#define FSDSTACK_GEOMETRY_HPP

#include <cmath>
#include <stdexcept>

#include <Eigen/Core>

namespace fsd {

using Vec2 = Eigen::Vector2d;

/// Wraps an angle to the half-open interval (-pi, pi].
inline double wrap_angle(double a) {
    if (!std::isfinite(a)) {
        throw std::domain_error("wrap_angle: non-finite input");
    }
    // fmod keeps |a| small before the branch adjustments
    a = std::fmod(a, 2.0 * M_PI);
    if (a <= -M_PI) a += 2.0 * M_PI;
    if (a > M_PI) a -= 2.0 * M_PI;
    return a;
}

/// Planar pose. theta is kept in (-pi, pi] by every mutating helper.
struct Pose2D {
    double x = 0.0;
    double y = 0.0;
    double theta = 0.0;

    Pose2D() = default;
    Pose2D(double x_, double y_, double theta_) : x(x_), y(y_), theta(wrap_angle(theta_)) {}

    Vec2 position() const { return Vec2(x, y); }
    Vec2 heading_vector() const { return Vec2(std::cos(theta), std::sin(theta)); }

    /// Transforms a world-frame point into this pose's body frame.
    Vec2 to_body(const Vec2& world) const {
        const double c = std::cos(theta), s = std::sin(theta);
        const Vec2 d = world - position();
        return Vec2(c * d.x() + s * d.y(), -s * d.x() + c * d.y());
    }

    /// Transforms a body-frame point into the world frame.
    Vec2 to_world(const Vec2& body) const {
        const double c = std::cos(theta), s = std::sin(theta);
        return Vec2(x + c * body.x() - s * body.y(), y + s * body.x() + c * body.y());
    }
};

/// z-component of the 2D cross product; positive when b points left of a.
inline double cross2(const Vec2& a, const Vec2& b) {
    return a.x() * b.y() - a.y() * b.x();
}

/// Signed perpendicular distance of p from the line through a with unit direction dir.
inline double perp_distance(const Vec2& p, const Vec2& a, const Vec2& dir) {
    return cross2(dir, p - a);
}

/// Total length of a polyline.
template <typename PointRange>
inline double polyline_length(const PointRange& pts) {
    double len = 0.0;
    for (std::size_t i = 1; i < pts.size(); ++i) {
        len += (Vec2(pts[i].x(), pts[i].y()) - Vec2(pts[i - 1].x(), pts[i - 1].y())).norm();
    }
    return len;
}

}  // namespace fsd

#endif  // FSDSTACK_GEOMETRY_HPP
