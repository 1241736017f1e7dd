#include "fsdstack/slam/loop_closure.hpp"

#include <stdexcept>

namespace fsd {

bool LoopClosureDetector::feed(const Pose2D& pose, const Pose2D& start_pose) {
    if (has_prev_) path_length_ += (pose.position() - prev_).norm();
    prev_ = pose.position();
    has_prev_ = true;

    const double dist = (pose.position() - start_pose.position()).norm();
    const bool in_region = dist <= cfg_.radius;
    bool fired = false;
    if (in_region && !inside_region_ &&
        path_length_ - length_at_last_fire_ > cfg_.min_path_length) {
        fired = true;
        ++closures_;
        length_at_last_fire_ = path_length_;
    }
    inside_region_ = in_region;
    return fired;
}

void LoopClosureDetector::reset() {
    path_length_ = 0.0;
    length_at_last_fire_ = 0.0;
    has_prev_ = false;
    inside_region_ = false;
    closures_ = 0;
}

bool detect_loop_closure(const std::vector<Pose2D>& trace, const Pose2D& start_pose,
                         const LoopClosureConfig& cfg) {
    if (trace.empty()) throw std::invalid_argument("detect_loop_closure: empty trace");
    LoopClosureDetector detector(cfg);
    for (const Pose2D& p : trace) detector.feed(p, start_pose);
    return detector.closures() > 0;
}

}  // namespace fsd
