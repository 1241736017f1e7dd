"""Cone-track racing stack: landmark SLAM, centerline planning, velocity
profiling, Stanley/Pure-Pursuit control, and a closed-loop simulator."""

from fsdstack._core import (
    Pose2D,
    TrackMap,
    classify_intensity,
    combination_weight,
    generate_track,
    load_track,
    plan,
    project,
    pure_pursuit_law,
    run_scenario,
    save_track,
    stanley_law,
    track_width_score,
    wrap_angle,
)

__all__ = [
    "Pose2D",
    "TrackMap",
    "classify_intensity",
    "combination_weight",
    "generate_track",
    "load_track",
    "plan",
    "project",
    "pure_pursuit_law",
    "run_scenario",
    "save_track",
    "stanley_law",
    "track_width_score",
    "wrap_angle",
]
