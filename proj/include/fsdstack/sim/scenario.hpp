#ifndef FSDSTACK_SIM_SCENARIO_HPP
#define FSDSTACK_SIM_SCENARIO_HPP

#include <cstdint>
#include <string>

#include "fsdstack/config.hpp"
#include "fsdstack/control/control.hpp"
#include "fsdstack/planner/planner.hpp"
#include "fsdstack/sim/sensor.hpp"
#include "fsdstack/sim/track_gen.hpp"
#include "fsdstack/slam/loop_closure.hpp"
#include "fsdstack/slam/particle_filter.hpp"

namespace fsd {

struct ScenarioConfig {
    // Track source: a file path, or a generator kind + params + seed.
    std::string track_file;
    TrackKind track_kind = TrackKind::Twisty;
    TrackGenParams track_params;
    std::uint64_t track_seed = 1;

    int laps = 1;
    double dt = 0.05;           // s, (0, 0.1]
    double lap_timeout = 120.0;  // simulated seconds per lap
    std::uint64_t seed = 42;

    bool slam_enabled = false;  // false -> ground-truth pose and map
    int replan_period = 10;     // ticks between replans in SLAM mode
    double keyframe_spacing = 1.5;  // m between pose-graph keyframes

    ControllerKind controller = ControllerKind::Combined;

    PlannerConfig planner;
    ControllerConfig control;
    VehicleParams vehicle;
    SensorConfig sensor;
    SlamConfig slam;
    ActuatorConfig actuator;
    LoopClosureConfig loop_closure;

    void validate() const;
};

ScenarioConfig scenario_from_kv(const KeyValueConfig& kv);
ScenarioConfig scenario_from_file(const std::string& path);

/// Resolves the scenario's track (loads the file or runs the generator).
TrackMap scenario_track(const ScenarioConfig& cfg);

}  // namespace fsd

#endif  // FSDSTACK_SIM_SCENARIO_HPP
