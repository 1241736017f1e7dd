#include "fsdstack/types.hpp"

#include <algorithm>
#include <limits>

namespace fsd {

std::string to_string(ConeColor c) {
    switch (c) {
        case ConeColor::Blue: return "blue";
        case ConeColor::Yellow: return "yellow";
        case ConeColor::OrangeSmall: return "orange_small";
        case ConeColor::OrangeLarge: return "orange_large";
        case ConeColor::Unknown: return "unknown";
    }
    return "unknown";
}

ConeColor cone_color_from_string(const std::string& s) {
    if (s == "blue") return ConeColor::Blue;
    if (s == "yellow") return ConeColor::Yellow;
    if (s == "orange_small") return ConeColor::OrangeSmall;
    if (s == "orange_large") return ConeColor::OrangeLarge;
    if (s == "unknown") return ConeColor::Unknown;
    throw std::invalid_argument("unknown cone color: " + s);
}

std::vector<double> Trajectory::arc_lengths() const {
    std::vector<double> s(points.size(), 0.0);
    for (std::size_t i = 1; i < points.size(); ++i) {
        s[i] = s[i - 1] + (points[i].position() - points[i - 1].position()).norm();
    }
    return s;
}

double Trajectory::total_length() const {
    if (points.empty()) return 0.0;
    double len = arc_lengths().back();
    if (closed && points.size() > 1) {
        len += (points.front().position() - points.back().position()).norm();
    }
    return len;
}

void VehicleParams::validate() const {
    auto positive = [](double v, const char* name) {
        if (!(v > 0.0)) {
            throw std::invalid_argument(std::string("VehicleParams: ") + name +
                                        " must be positive");
        }
    };
    positive(mass, "mass");
    positive(cornering_stiffness, "cornering_stiffness");
    positive(l_f, "l_f");
    positive(l_r, "l_r");
    positive(max_steer, "max_steer");
    positive(a_long_max, "a_long_max");
    positive(a_brake_max, "a_brake_max");
    positive(a_lat_max, "a_lat_max");
    positive(v_max, "v_max");
}

std::vector<Cone> TrackMap::all_cones() const {
    std::vector<Cone> out;
    out.reserve(left_cones.size() + right_cones.size() + start_cones.size());
    out.insert(out.end(), left_cones.begin(), left_cones.end());
    out.insert(out.end(), right_cones.begin(), right_cones.end());
    out.insert(out.end(), start_cones.begin(), start_cones.end());
    return out;
}

void TrackMap::validate() const {
    for (const Cone& c : all_cones()) {
        if (!std::isfinite(c.position.x()) || !std::isfinite(c.position.y())) {
            throw std::invalid_argument("TrackMap: non-finite cone position");
        }
    }
    if (closed && (left_cones.size() < 3 || right_cones.size() < 3)) {
        throw std::invalid_argument("TrackMap: closed track needs >= 3 cones per side");
    }
    if (generated) {
        // Corridor width check applies to generated tracks only; competition maps
        // may violate the nominal 3-5 m rule.
        constexpr double kMinWidth = 2.5;
        constexpr double kMaxWidth = 6.0;
        for (const Cone& l : left_cones) {
            double best = std::numeric_limits<double>::infinity();
            for (const Cone& r : right_cones) {
                best = std::min(best, (l.position - r.position).norm());
            }
            if (!right_cones.empty() && (best < kMinWidth || best > kMaxWidth)) {
                throw std::invalid_argument(
                    "TrackMap: generated corridor width " + std::to_string(best) +
                    " m outside [2.5, 6.0]");
            }
        }
    }
}

}  // namespace fsd
