#ifndef FSDSTACK_TRACK_IO_HPP
#define FSDSTACK_TRACK_IO_HPP

#include <string>

#include "fsdstack/types.hpp"

namespace fsd {

/// Raised on malformed track/trajectory files; carries the offending line number.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& path, int line, const std::string& what)
        : std::runtime_error(path + ":" + std::to_string(line) + ": " + what), line_(line) {}
    int line() const { return line_; }

private:
    int line_;
};

class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

// Track file format:
//   # generated: true|false, closed: true|false
//   tag,x,y,color
//   cone,<x>,<y>,<blue|yellow|orange_small|orange_large>
//   start_pose,<x>,<y>,<heading rad>
TrackMap load_track(const std::string& path);
void save_track(const TrackMap& track, const std::string& path);

// Trajectory file format: s,x,y,heading,curvature,speed (s = cumulative arc length).
void save_trajectory(const Trajectory& traj, const std::string& path);
Trajectory load_trajectory(const std::string& path);

}  // namespace fsd

#endif  // FSDSTACK_TRACK_IO_HPP
