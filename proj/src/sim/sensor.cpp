#include "fsdstack/sim/sensor.hpp"

#include <cmath>
#include <stdexcept>

namespace fsd {

void SensorConfig::validate() const {
    if (!(max_range > 0)) throw std::invalid_argument("SensorConfig: max_range must be > 0");
    if (!(fov > 0) || fov > 2.0 * M_PI) {
        throw std::invalid_argument("SensorConfig: fov in (0, 2pi]");
    }
    if (detection_dropout_prob < 0 || detection_dropout_prob > 1) {
        throw std::invalid_argument("SensorConfig: dropout probability in [0, 1]");
    }
    if (intensity_layers < 3) throw std::invalid_argument("SensorConfig: >= 3 intensity layers");
}

std::vector<double> intensity_template(ConeColor color, const SensorConfig& cfg) {
    const int n = cfg.intensity_layers;
    std::vector<double> layers(n, cfg.intensity_base);
    if (color != ConeColor::Blue && color != ConeColor::Yellow) return layers;
    // Parabolic bump peaking (blue) or dipping (yellow) at the middle layer.
    const double mid = 0.5 * (n - 1);
    for (int i = 0; i < n; ++i) {
        const double z = (i - mid) / mid;  // [-1, 1]
        const double bump = 1.0 - z * z;
        layers[i] = color == ConeColor::Blue ? cfg.intensity_base + cfg.intensity_amplitude * bump
                                             : cfg.intensity_base + cfg.intensity_amplitude *
                                                                        (1.0 - bump);
    }
    return layers;
}

std::vector<ConeObservation> sense(const VehicleState& state, const TrackMap& track,
                                   const SensorConfig& cfg, std::mt19937_64& rng) {
    cfg.validate();
    std::vector<ConeObservation> out;
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::normal_distribution<double> range_noise(0.0, cfg.noise_range);
    std::normal_distribution<double> bearing_noise(0.0, cfg.noise_bearing);
    std::normal_distribution<double> layer_noise(0.0, cfg.intensity_noise);

    for (const Cone& cone : track.all_cones()) {
        const Vec2 body = state.pose.to_body(cone.position);
        const double true_range = body.norm();
        const double true_bearing = std::atan2(body.y(), body.x());
        if (true_range > cfg.max_range) continue;
        if (std::abs(true_bearing) > 0.5 * cfg.fov) continue;
        if (cfg.detection_dropout_prob > 0.0 && unit(rng) < cfg.detection_dropout_prob) continue;

        double range = true_range;
        double bearing = true_bearing;
        if (cfg.noise_range > 0.0) range = std::max(0.0, range + range_noise(rng));
        if (cfg.noise_bearing > 0.0) bearing = wrap_angle(bearing + bearing_noise(rng));

        const ConeColor color =
            true_range <= cfg.color_visibility_range ? cone.color : ConeColor::Unknown;
        ConeObservation obs(range, bearing, color);

        std::vector<double> layers = intensity_template(cone.color, cfg);
        if (cfg.intensity_noise > 0.0) {
            for (double& l : layers) l += layer_noise(rng);
        }
        obs.intensity_layers = std::move(layers);
        out.push_back(std::move(obs));
    }
    return out;
}

}  // namespace fsd
