#ifndef FSDSTACK_SIM_TRACK_GEN_HPP
#define FSDSTACK_SIM_TRACK_GEN_HPP

#include <cstdint>
#include <string>

#include "fsdstack/types.hpp"

namespace fsd {

enum class TrackKind { Acceleration, Ring, Twisty, Hairpin };

TrackKind track_kind_from_string(const std::string& s);
std::string to_string(TrackKind k);

struct TrackGenParams {
    double width = 4.0;         // m, corridor width
    double cone_spacing = 3.0;  // m, along each boundary
    double length = 75.0;       // m, acceleration/hairpin straights
    double radius = 20.0;       // m, ring radius / hairpin turn radius
    double twisty_base_radius = 24.0;  // m, twisty mean radius
    double twisty_amplitude = 0.16;    // relative harmonic amplitude
    double max_curvature = 0.12;       // 1/m, twisty curvature bound

    void validate() const;
};

/// Deterministic synthetic layouts: two parallel rows (acceleration), an
/// annulus (ring), a seeded smooth closed course (twisty), or an out-and-back
/// 180-degree turn (hairpin). Blue cones bound the left side in the driving
/// direction.
TrackMap generate_track(TrackKind kind, const TrackGenParams& params, std::uint64_t seed);

/// Ground-truth centerline points of a generated track (pairwise midpoints).
std::vector<Vec2> track_centerline(const TrackMap& track);

/// Signed corridor check against the paired boundaries: distance from the
/// centerline polyline minus the local half width; positive means outside.
double corridor_excess(const TrackMap& track, const Vec2& position);

}  // namespace fsd

#endif  // FSDSTACK_SIM_TRACK_GEN_HPP
