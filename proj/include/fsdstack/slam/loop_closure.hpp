#ifndef FSDSTACK_SLAM_LOOP_CLOSURE_HPP
#define FSDSTACK_SLAM_LOOP_CLOSURE_HPP

#include <vector>

#include "fsdstack/geometry.hpp"

namespace fsd {

struct LoopClosureConfig {
    double radius = 2.0;           // m, distance to the start pose
    double min_path_length = 20.0;  // m, accumulated path before arming
};

/// Fires when the pose returns within `radius` of the start after covering
/// more than `min_path_length` since the last closure; at most once per lap
/// (the detector must leave the start region before re-arming).
class LoopClosureDetector {
public:
    explicit LoopClosureDetector(const LoopClosureConfig& cfg = {}) : cfg_(cfg) {}

    bool feed(const Pose2D& pose, const Pose2D& start_pose);
    double path_length() const { return path_length_; }
    int closures() const { return closures_; }
    void reset();

private:
    LoopClosureConfig cfg_;
    double path_length_ = 0.0;
    double length_at_last_fire_ = 0.0;
    bool has_prev_ = false;
    bool inside_region_ = false;
    Vec2 prev_{0.0, 0.0};
    int closures_ = 0;
};

/// Runs the detector over a pose trace; true when any closure fired.
bool detect_loop_closure(const std::vector<Pose2D>& trace, const Pose2D& start_pose,
                         const LoopClosureConfig& cfg = {});

}  // namespace fsd

#endif  // FSDSTACK_SLAM_LOOP_CLOSURE_HPP
