#ifndef FSDSTACK_TYPES_HPP
#define FSDSTACK_TYPES_HPP

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "fsdstack/geometry.hpp"

namespace fsd {

enum class ConeColor {
    Blue,         // left track boundary
    Yellow,       // right track boundary
    OrangeSmall,  // start/stop zone
    OrangeLarge,
    Unknown
};

std::string to_string(ConeColor c);
ConeColor cone_color_from_string(const std::string& s);

struct Cone {
    Vec2 position{0.0, 0.0};
    ConeColor color = ConeColor::Unknown;

    Cone() = default;
    Cone(double x, double y, ConeColor c) : position(x, y), color(c) {}
    Cone(const Vec2& p, ConeColor c) : position(p), color(c) {}
};

/// Range-bearing measurement of a single cone. intensity_layers, when present,
/// holds per-layer median intensities ordered bottom-to-top.
struct ConeObservation {
    double range = 0.0;    // m, >= 0
    double bearing = 0.0;  // rad, wrapped to (-pi, pi]
    ConeColor color = ConeColor::Unknown;
    std::optional<std::vector<double>> intensity_layers;

    ConeObservation() = default;
    ConeObservation(double r, double b, ConeColor c = ConeColor::Unknown)
        : range(r), bearing(wrap_angle(b)), color(c) {
        if (r < 0.0) throw std::invalid_argument("ConeObservation: negative range");
    }
};

/// One sample of the reference trajectory. Curvature is signed, left turn positive.
struct TrajectoryPoint {
    double x = 0.0;
    double y = 0.0;
    double heading = 0.0;    // rad
    double curvature = 0.0;  // 1/m
    double speed = 0.0;      // m/s, >= 0

    Vec2 position() const { return Vec2(x, y); }
};

/// Reference trajectory plus its closure flag; the planner->controller contract.
struct Trajectory {
    std::vector<TrajectoryPoint> points;
    bool closed = false;

    bool empty() const { return points.empty(); }
    std::size_t size() const { return points.size(); }
    const TrajectoryPoint& operator[](std::size_t i) const { return points[i]; }

    /// Cumulative arc length at each point (chord approximation).
    std::vector<double> arc_lengths() const;
    double total_length() const;
};

struct VehicleParams {
    double mass = 200.0;                  // kg
    double cornering_stiffness = 8000.0;  // N/rad, front axle
    double l_f = 0.765;                   // m, CoG to front axle
    double l_r = 0.785;                   // m, CoG to rear axle
    double max_steer = 0.45;              // rad
    double a_long_max = 6.0;              // m/s^2
    double a_brake_max = 8.0;             // m/s^2
    double a_lat_max = 8.0;               // m/s^2
    double v_max = 15.0;                  // m/s

    double wheelbase() const { return l_f + l_r; }
    void validate() const;
};

/// 2D cone map. left = blue side, right = yellow side in the driving direction.
struct TrackMap {
    std::vector<Cone> left_cones;
    std::vector<Cone> right_cones;
    std::vector<Cone> start_cones;
    Pose2D start_pose;
    bool closed = false;
    bool generated = false;

    std::vector<Cone> all_cones() const;
    void validate() const;
};

}  // namespace fsd

#endif  // FSDSTACK_TYPES_HPP
