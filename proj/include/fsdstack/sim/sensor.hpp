#ifndef FSDSTACK_SIM_SENSOR_HPP
#define FSDSTACK_SIM_SENSOR_HPP

#include <map>
#include <random>
#include <vector>

#include "fsdstack/sim/vehicle.hpp"
#include "fsdstack/types.hpp"

namespace fsd {

struct SensorConfig {
    double max_range = 15.0;  // m
    double fov = M_PI;        // rad, centered on the heading
    double noise_range = 0.05;            // m, std dev
    double noise_bearing = 0.0087;        // rad, std dev (~0.5 deg)
    double color_visibility_range = 10.0; // m; beyond it color reads Unknown
    double detection_dropout_prob = 0.0;
    int intensity_layers = 5;
    double intensity_amplitude = 20.0;  // template peak-to-base difference
    double intensity_base = 20.0;
    double intensity_noise = 0.0;  // std dev added per layer

    void validate() const;
};

/// Per-layer median intensity template for a cone color: blue peaks in the
/// middle, yellow dips; orange/unknown are flat.
std::vector<double> intensity_template(ConeColor color, const SensorConfig& cfg);

/// Range-bearing cone sensing with FoV/range gating, dropouts, Gaussian noise
/// and distance-limited color visibility. Deterministic given the rng state;
/// cones are scanned left, right, then start, in storage order.
std::vector<ConeObservation> sense(const VehicleState& state, const TrackMap& track,
                                   const SensorConfig& cfg, std::mt19937_64& rng);

}  // namespace fsd

#endif  // FSDSTACK_SIM_SENSOR_HPP
