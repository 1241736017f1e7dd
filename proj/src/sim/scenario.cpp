#include "fsdstack/sim/scenario.hpp"

#include <stdexcept>

#include "fsdstack/track_io.hpp"

namespace fsd {

void ScenarioConfig::validate() const {
    if (!(dt > 0.0) || dt > 0.1) throw std::invalid_argument("ScenarioConfig: dt in (0, 0.1]");
    if (laps < 1) throw std::invalid_argument("ScenarioConfig: laps >= 1");
    if (!(lap_timeout > 0)) throw std::invalid_argument("ScenarioConfig: lap_timeout > 0");
    if (replan_period < 1) throw std::invalid_argument("ScenarioConfig: replan_period >= 1");
    if (!(keyframe_spacing > 0)) {
        throw std::invalid_argument("ScenarioConfig: keyframe_spacing > 0");
    }
    vehicle.validate();
    control.validate();
    slam.validate();
    sensor.validate();
}

ScenarioConfig scenario_from_kv(const KeyValueConfig& kv) {
    ScenarioConfig cfg;

    cfg.track_file = kv.get_string("track.file", "");
    cfg.track_kind = track_kind_from_string(kv.get_string("track.kind", "twisty"));
    cfg.track_seed = static_cast<std::uint64_t>(kv.get_int("track.seed", 1));
    cfg.track_params.width = kv.get_double("track.width", cfg.track_params.width);
    cfg.track_params.cone_spacing =
        kv.get_double("track.cone_spacing", cfg.track_params.cone_spacing);
    cfg.track_params.length = kv.get_double("track.length", cfg.track_params.length);
    cfg.track_params.radius = kv.get_double("track.radius", cfg.track_params.radius);
    cfg.track_params.twisty_base_radius =
        kv.get_double("track.base_radius", cfg.track_params.twisty_base_radius);
    cfg.track_params.twisty_amplitude =
        kv.get_double("track.amplitude", cfg.track_params.twisty_amplitude);
    cfg.track_params.max_curvature =
        kv.get_double("track.max_curvature", cfg.track_params.max_curvature);

    cfg.laps = kv.get_int("laps", cfg.laps);
    cfg.dt = kv.get_double("dt", cfg.dt);
    cfg.lap_timeout = kv.get_double("lap_timeout", cfg.lap_timeout);
    cfg.seed = static_cast<std::uint64_t>(kv.get_int("seed", static_cast<int>(cfg.seed)));
    cfg.slam_enabled = kv.get_bool("slam.enabled", cfg.slam_enabled);
    cfg.replan_period = kv.get_int("replan_period", cfg.replan_period);
    cfg.keyframe_spacing = kv.get_double("keyframe_spacing", cfg.keyframe_spacing);
    cfg.controller = controller_kind_from_string(kv.get_string("controller", "combined"));

    cfg.planner = planner_config_from_kv(kv);
    cfg.control = controller_config_from_kv(kv);

    cfg.vehicle.mass = kv.get_double("vehicle.mass", cfg.vehicle.mass);
    cfg.vehicle.cornering_stiffness =
        kv.get_double("vehicle.cornering_stiffness", cfg.vehicle.cornering_stiffness);
    cfg.vehicle.l_f = kv.get_double("vehicle.l_f", cfg.vehicle.l_f);
    cfg.vehicle.l_r = kv.get_double("vehicle.l_r", cfg.vehicle.l_r);
    cfg.vehicle.max_steer = kv.get_double("vehicle.max_steer", cfg.vehicle.max_steer);
    cfg.vehicle.a_long_max = kv.get_double("vehicle.a_long_max", cfg.vehicle.a_long_max);
    cfg.vehicle.a_brake_max = kv.get_double("vehicle.a_brake_max", cfg.vehicle.a_brake_max);
    cfg.vehicle.a_lat_max = kv.get_double("vehicle.a_lat_max", cfg.vehicle.a_lat_max);
    cfg.vehicle.v_max = kv.get_double("vehicle.v_max", cfg.vehicle.v_max);
    cfg.actuator.steer_slew_rate =
        kv.get_double("vehicle.steer_slew_rate", cfg.actuator.steer_slew_rate);

    // Keep the vehicle's own envelope as the planner's default limits.
    cfg.planner.limits.a_lat_max = kv.get_double("planner.a_lat_max", cfg.vehicle.a_lat_max);
    cfg.planner.limits.a_long_max = kv.get_double("planner.a_long_max", cfg.vehicle.a_long_max);
    cfg.planner.limits.a_brake_max =
        kv.get_double("planner.a_brake_max", cfg.vehicle.a_brake_max);
    cfg.planner.limits.v_max = kv.get_double("planner.v_max", cfg.vehicle.v_max);

    cfg.sensor.max_range = kv.get_double("sensor.max_range", cfg.sensor.max_range);
    cfg.sensor.fov = kv.get_double("sensor.fov", cfg.sensor.fov);
    cfg.sensor.noise_range = kv.get_double("sensor.noise_range", cfg.sensor.noise_range);
    cfg.sensor.noise_bearing = kv.get_double("sensor.noise_bearing", cfg.sensor.noise_bearing);
    cfg.sensor.color_visibility_range =
        kv.get_double("sensor.color_visibility_range", cfg.sensor.color_visibility_range);
    cfg.sensor.detection_dropout_prob =
        kv.get_double("sensor.dropout", cfg.sensor.detection_dropout_prob);
    cfg.sensor.intensity_noise =
        kv.get_double("sensor.intensity_noise", cfg.sensor.intensity_noise);

    cfg.slam.n_particles = kv.get_int("slam.n_particles", cfg.slam.n_particles);
    cfg.slam.motion_noise_v = kv.get_double("slam.motion_noise_v", cfg.slam.motion_noise_v);
    cfg.slam.motion_noise_omega =
        kv.get_double("slam.motion_noise_omega", cfg.slam.motion_noise_omega);
    cfg.slam.meas_noise_range = kv.get_double("slam.meas_noise_range", cfg.sensor.noise_range);
    cfg.slam.meas_noise_bearing =
        kv.get_double("slam.meas_noise_bearing", cfg.sensor.noise_bearing);
    cfg.slam.association_gate = kv.get_double("slam.association_gate", cfg.slam.association_gate);
    cfg.slam.new_landmark_gate =
        kv.get_double("slam.new_landmark_gate", cfg.slam.new_landmark_gate);
    cfg.slam.resample_trigger = kv.get_double("slam.resample_trigger", cfg.slam.resample_trigger);
    cfg.slam.always_resample = kv.get_bool("slam.always_resample", cfg.slam.always_resample);
    const std::string proposal = kv.get_string("slam.proposal", "fastslam2");
    if (proposal == "fastslam1") {
        cfg.slam.proposal = ProposalMode::FastSlam1;
    } else if (proposal == "fastslam2") {
        cfg.slam.proposal = ProposalMode::FastSlam2;
    } else {
        throw std::invalid_argument("unknown slam.proposal: " + proposal);
    }
    const std::string model = kv.get_string("slam.motion_model", "verbatim");
    if (model == "verbatim") {
        cfg.slam.motion_model = MotionModel::Verbatim;
    } else if (model == "conventional") {
        cfg.slam.motion_model = MotionModel::Conventional;
    } else {
        throw std::invalid_argument("unknown slam.motion_model: " + model);
    }

    cfg.loop_closure.radius = kv.get_double("slam.loop_radius", cfg.loop_closure.radius);
    cfg.loop_closure.min_path_length =
        kv.get_double("slam.loop_min_path", cfg.loop_closure.min_path_length);

    cfg.validate();
    return cfg;
}

ScenarioConfig scenario_from_file(const std::string& path) {
    return scenario_from_kv(KeyValueConfig::from_file(path));
}

TrackMap scenario_track(const ScenarioConfig& cfg) {
    if (!cfg.track_file.empty()) return load_track(cfg.track_file);
    return generate_track(cfg.track_kind, cfg.track_params, cfg.track_seed);
}

}  // namespace fsd
