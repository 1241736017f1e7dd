#include "fsdstack/sim/track_gen.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

namespace fsd {

TrackKind track_kind_from_string(const std::string& s) {
    if (s == "acceleration") return TrackKind::Acceleration;
    if (s == "ring") return TrackKind::Ring;
    if (s == "twisty") return TrackKind::Twisty;
    if (s == "hairpin") return TrackKind::Hairpin;
    throw std::invalid_argument("unknown track kind: " + s);
}

std::string to_string(TrackKind k) {
    switch (k) {
        case TrackKind::Acceleration: return "acceleration";
        case TrackKind::Ring: return "ring";
        case TrackKind::Twisty: return "twisty";
        case TrackKind::Hairpin: return "hairpin";
    }
    return "twisty";
}

void TrackGenParams::validate() const {
    if (width < 3.0 || width > 5.0) {
        throw std::invalid_argument("TrackGenParams: width must be within [3, 5] m");
    }
    if (!(cone_spacing > 0.0) || cone_spacing > 5.0) {
        throw std::invalid_argument("TrackGenParams: cone_spacing in (0, 5] m");
    }
    if (!(length > 0.0) || !(radius > 0.0) || !(twisty_base_radius > 0.0)) {
        throw std::invalid_argument("TrackGenParams: lengths must be positive");
    }
    if (radius <= width) {
        throw std::invalid_argument("TrackGenParams: turn radius must exceed the track width");
    }
    if (!(max_curvature > 0.0) || 1.0 / max_curvature <= 0.5 * width) {
        throw std::invalid_argument("TrackGenParams: min turn radius below half width");
    }
}

namespace {

/// Places cone pairs every cone_spacing of arc along a sampled centerline.
/// The left cone sits half a width along the left normal of the tangent.
TrackMap cones_along_centerline(const std::vector<Vec2>& center, bool closed, double width,
                                double cone_spacing) {
    const int n = static_cast<int>(center.size());
    std::vector<double> arc(n, 0.0);
    for (int i = 1; i < n; ++i) arc[i] = arc[i - 1] + (center[i] - center[i - 1]).norm();
    double total = arc.back();
    if (closed) total += (center[0] - center[n - 1]).norm();

    const int pairs = std::max(2, static_cast<int>(std::floor(total / cone_spacing)) +
                                      (closed ? 0 : 1));
    const double ds = closed ? total / pairs : total / (pairs - 1);

    TrackMap track;
    track.closed = closed;
    track.generated = true;

    int seg = 0;
    for (int k = 0; k < pairs; ++k) {
        const double target = std::min(k * ds, total - (closed ? ds * 0.0 : 0.0));
        while (seg + 1 < n && arc[seg + 1] < target) ++seg;
        const int j = std::min(seg + 1, n - 1);
        const double span = arc[j] - arc[seg];
        const double frac = span > 0.0 ? (target - arc[seg]) / span : 0.0;
        const Vec2 pos = center[seg] + frac * (center[j] - center[seg]);
        Vec2 tangent = center[j] - center[seg];
        if (closed && k * ds >= arc[n - 1]) {
            tangent = center[0] - center[n - 1];
            const Vec2 base = center[n - 1];
            const double local = k * ds - arc[n - 1];
            const double wrap_len = tangent.norm();
            const Vec2 wrapped = base + (wrap_len > 0 ? local / wrap_len : 0.0) * tangent;
            track.left_cones.emplace_back(wrapped + 0.5 * width *
                                                        Vec2(-tangent.y(), tangent.x()).normalized(),
                                          ConeColor::Blue);
            track.right_cones.emplace_back(
                wrapped - 0.5 * width * Vec2(-tangent.y(), tangent.x()).normalized(),
                ConeColor::Yellow);
            continue;
        }
        if (tangent.norm() < 1e-12) tangent = Vec2(1.0, 0.0);
        tangent.normalize();
        const Vec2 left_normal(-tangent.y(), tangent.x());
        track.left_cones.emplace_back(pos + 0.5 * width * left_normal, ConeColor::Blue);
        track.right_cones.emplace_back(pos - 0.5 * width * left_normal, ConeColor::Yellow);
    }

    Vec2 dir = center[1] - center[0];
    track.start_pose = Pose2D(center[0].x(), center[0].y(), std::atan2(dir.y(), dir.x()));
    return track;
}

TrackMap make_acceleration(const TrackGenParams& p) {
    TrackMap track;
    track.closed = false;
    track.generated = true;
    const int pairs = static_cast<int>(std::floor(p.length / p.cone_spacing)) + 1;
    for (int k = 0; k < pairs; ++k) {
        const double x = k * p.cone_spacing;
        track.left_cones.emplace_back(Vec2(x, 0.5 * p.width), ConeColor::Blue);
        track.right_cones.emplace_back(Vec2(x, -0.5 * p.width), ConeColor::Yellow);
    }
    track.start_cones.emplace_back(Vec2(0.0, 0.5 * p.width + 0.6), ConeColor::OrangeLarge);
    track.start_cones.emplace_back(Vec2(0.0, -0.5 * p.width - 0.6), ConeColor::OrangeLarge);
    track.start_pose = Pose2D(0.0, 0.0, 0.0);
    return track;
}

TrackMap make_ring(const TrackGenParams& p) {
    TrackMap track;
    track.closed = true;
    track.generated = true;
    const double circumference = 2.0 * M_PI * p.radius;
    const int pairs = std::max(8, static_cast<int>(std::round(circumference / p.cone_spacing)));
    for (int k = 0; k < pairs; ++k) {
        const double phi = 2.0 * M_PI * k / pairs;
        const Vec2 radial(std::cos(phi), std::sin(phi));
        // CCW travel: the inner boundary is on the left.
        track.left_cones.emplace_back((p.radius - 0.5 * p.width) * radial, ConeColor::Blue);
        track.right_cones.emplace_back((p.radius + 0.5 * p.width) * radial, ConeColor::Yellow);
    }
    track.start_pose = Pose2D(p.radius, 0.0, M_PI / 2.0);
    return track;
}

TrackMap make_twisty(const TrackGenParams& p, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> phase(0.0, 2.0 * M_PI);
    std::uniform_real_distribution<double> amp(0.5, 1.0);
    std::uniform_int_distribution<int> sign(0, 1);

    const int harmonics[3] = {2, 3, 5};
    double a[3], ph[3];
    for (int i = 0; i < 3; ++i) {
        a[i] = p.twisty_amplitude * amp(rng) * (sign(rng) ? 1.0 : -1.0) / (i + 1);
        ph[i] = phase(rng);
    }

    const int samples = 2048;
    std::vector<Vec2> center(samples);
    double scale = 1.0;
    for (int attempt = 0; attempt < 30; ++attempt) {
        for (int i = 0; i < samples; ++i) {
            const double phi = 2.0 * M_PI * i / samples;
            double r = 1.0;
            for (int h = 0; h < 3; ++h) r += scale * a[h] * std::sin(harmonics[h] * phi + ph[h]);
            r *= p.twisty_base_radius;
            center[i] = Vec2(r * std::cos(phi), r * std::sin(phi));
        }
        // Curvature bound via finite differences on the dense polygon.
        double max_kappa = 0.0;
        for (int i = 0; i < samples; ++i) {
            const Vec2& prev = center[(i + samples - 1) % samples];
            const Vec2& cur = center[i];
            const Vec2& next = center[(i + 1) % samples];
            const Vec2 d1 = next - prev;
            const Vec2 d2 = next - 2.0 * cur + prev;
            const double h = 0.5 * d1.norm();
            if (h < 1e-9) continue;
            const double kappa = std::abs(cross2(d1 / (2.0 * h), d2 / (h * h)));
            max_kappa = std::max(max_kappa, kappa);
        }
        if (max_kappa <= p.max_curvature) break;
        scale *= 0.85;
    }
    return cones_along_centerline(center, true, p.width, p.cone_spacing);
}

TrackMap make_hairpin(const TrackGenParams& p) {
    std::vector<Vec2> center;
    const double step = 0.5;
    for (double x = 0.0; x < p.length; x += step) center.emplace_back(x, 0.0);
    const Vec2 turn_center(p.length, p.radius);
    const int arc_steps = std::max(16, static_cast<int>(std::round(M_PI * p.radius / step)));
    for (int i = 0; i <= arc_steps; ++i) {
        const double ang = -M_PI / 2.0 + M_PI * i / arc_steps;
        center.emplace_back(turn_center + p.radius * Vec2(std::cos(ang), std::sin(ang)));
    }
    for (double x = p.length - step; x >= 0.0; x -= step) {
        center.emplace_back(x, 2.0 * p.radius);
    }
    return cones_along_centerline(center, false, p.width, p.cone_spacing);
}

}  // namespace

TrackMap generate_track(TrackKind kind, const TrackGenParams& params, std::uint64_t seed) {
    params.validate();
    TrackMap track;
    switch (kind) {
        case TrackKind::Acceleration: track = make_acceleration(params); break;
        case TrackKind::Ring: track = make_ring(params); break;
        case TrackKind::Twisty: track = make_twisty(params, seed); break;
        case TrackKind::Hairpin: track = make_hairpin(params); break;
    }
    track.validate();
    return track;
}

std::vector<Vec2> track_centerline(const TrackMap& track) {
    std::vector<Vec2> center;
    const std::size_t n = std::min(track.left_cones.size(), track.right_cones.size());
    center.reserve(n);
    if (track.left_cones.size() == track.right_cones.size()) {
        for (std::size_t i = 0; i < n; ++i) {
            center.push_back(
                0.5 * (track.left_cones[i].position + track.right_cones[i].position));
        }
        return center;
    }
    // Unequal boundaries (hand-made maps): pair each left cone with its
    // nearest right cone.
    for (const Cone& l : track.left_cones) {
        double best = std::numeric_limits<double>::infinity();
        Vec2 match = l.position;
        for (const Cone& r : track.right_cones) {
            const double d = (l.position - r.position).squaredNorm();
            if (d < best) {
                best = d;
                match = r.position;
            }
        }
        center.push_back(0.5 * (l.position + match));
    }
    return center;
}

double corridor_excess(const TrackMap& track, const Vec2& position) {
    const auto center = track_centerline(track);
    const std::size_t n = center.size();
    if (n < 2) throw std::invalid_argument("corridor_excess: degenerate track");

    auto pair_half_width = [&](std::size_t i) {
        if (i < track.left_cones.size() && i < track.right_cones.size() &&
            track.left_cones.size() == track.right_cones.size()) {
            return 0.5 * (track.left_cones[i].position - track.right_cones[i].position).norm();
        }
        return 2.0;  // nominal fallback
    };

    double best_dist = std::numeric_limits<double>::infinity();
    double best_half = 2.0;
    const std::size_t segs = track.closed ? n : n - 1;
    for (std::size_t i = 0; i < segs; ++i) {
        const std::size_t j = (i + 1) % n;
        const Vec2 a = center[i];
        const Vec2 b = center[j];
        const Vec2 ab = b - a;
        const double len_sq = ab.squaredNorm();
        double t = len_sq > 0.0 ? (position - a).dot(ab) / len_sq : 0.0;
        t = std::clamp(t, 0.0, 1.0);
        const double d = (position - (a + t * ab)).norm();
        if (d < best_dist) {
            best_dist = d;
            best_half = 0.5 * (pair_half_width(i) + pair_half_width(j));
        }
    }
    return best_dist - best_half;
}

}  // namespace fsd
