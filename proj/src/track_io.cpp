#include "fsdstack/track_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

namespace fsd {

namespace {

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r\n");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r\n");
    return s.substr(begin, end - begin + 1);
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> fields;
    std::istringstream in(line);
    std::string field;
    while (std::getline(in, field, ',')) fields.push_back(trim(field));
    return fields;
}

double parse_double(const std::string& s, const std::string& path, int lineno) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw ParseError(path, lineno, "not a number: '" + s + "'");
    }
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.15g", v);
    return buf;
}

}  // namespace

TrackMap load_track(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open track file: " + path);

    TrackMap track;
    bool saw_any_row = false;
    bool saw_header = false;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        line = trim(line);
        if (line.empty()) continue;
        if (line[0] == '#') {
            // flag line: "# generated: true, closed: false"
            if (line.find("generated:") != std::string::npos) {
                track.generated = line.find("generated: true") != std::string::npos;
            }
            if (line.find("closed:") != std::string::npos) {
                track.closed = line.find("closed: true") != std::string::npos;
            }
            continue;
        }
        const auto fields = split_csv(line);
        if (!saw_header) {
            if (fields.size() != 4 || fields[0] != "tag") {
                throw ParseError(path, lineno, "expected header 'tag,x,y,color'");
            }
            saw_header = true;
            continue;
        }
        if (fields.size() != 4) {
            throw ParseError(path, lineno, "expected 4 fields, got " +
                                               std::to_string(fields.size()));
        }
        const double x = parse_double(fields[1], path, lineno);
        const double y = parse_double(fields[2], path, lineno);
        if (fields[0] == "cone") {
            ConeColor color;
            try {
                color = cone_color_from_string(fields[3]);
            } catch (const std::exception& e) {
                throw ParseError(path, lineno, e.what());
            }
            const Cone cone(x, y, color);
            switch (color) {
                case ConeColor::Blue: track.left_cones.push_back(cone); break;
                case ConeColor::Yellow: track.right_cones.push_back(cone); break;
                default: track.start_cones.push_back(cone); break;
            }
        } else if (fields[0] == "start_pose") {
            // heading rides in the color column
            track.start_pose = Pose2D(x, y, parse_double(fields[3], path, lineno));
        } else {
            throw ParseError(path, lineno, "unknown tag '" + fields[0] + "'");
        }
        saw_any_row = true;
    }
    if (!saw_header || !saw_any_row) {
        throw ParseError(path, lineno, "empty track file");
    }
    try {
        track.validate();
    } catch (const std::exception& e) {
        throw ValidationError(std::string(e.what()) + " (" + path + ")");
    }
    return track;
}

void save_track(const TrackMap& track, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write track file: " + path);
    out << "# generated: " << (track.generated ? "true" : "false")
        << ", closed: " << (track.closed ? "true" : "false") << "\n";
    out << "tag,x,y,color\n";
    out << "start_pose," << fmt(track.start_pose.x) << "," << fmt(track.start_pose.y) << ","
        << fmt(track.start_pose.theta) << "\n";
    auto dump = [&](const std::vector<Cone>& cones) {
        for (const Cone& c : cones) {
            out << "cone," << fmt(c.position.x()) << "," << fmt(c.position.y()) << ","
                << to_string(c.color) << "\n";
        }
    };
    dump(track.left_cones);
    dump(track.right_cones);
    dump(track.start_cones);
    if (!out) throw std::runtime_error("write failed: " + path);
}

void save_trajectory(const Trajectory& traj, const std::string& path) {
    if (traj.empty()) throw std::invalid_argument("save_trajectory: empty trajectory");
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write trajectory file: " + path);
    out << "s,x,y,heading,curvature,speed\n";
    const auto s = traj.arc_lengths();
    for (std::size_t i = 0; i < traj.size(); ++i) {
        const TrajectoryPoint& p = traj[i];
        out << fmt(s[i]) << "," << fmt(p.x) << "," << fmt(p.y) << "," << fmt(p.heading) << ","
            << fmt(p.curvature) << "," << fmt(p.speed) << "\n";
    }
    if (!out) throw std::runtime_error("write failed: " + path);
}

Trajectory load_trajectory(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open trajectory file: " + path);
    Trajectory traj;
    std::string line;
    int lineno = 0;
    bool saw_header = false;
    while (std::getline(in, line)) {
        ++lineno;
        line = trim(line);
        if (line.empty() || line[0] == '#') continue;
        const auto fields = split_csv(line);
        if (!saw_header) {
            if (fields.size() != 6 || fields[0] != "s") {
                throw ParseError(path, lineno, "expected header 's,x,y,heading,curvature,speed'");
            }
            saw_header = true;
            continue;
        }
        if (fields.size() != 6) {
            throw ParseError(path, lineno, "expected 6 fields, got " +
                                               std::to_string(fields.size()));
        }
        TrajectoryPoint p;
        p.x = parse_double(fields[1], path, lineno);
        p.y = parse_double(fields[2], path, lineno);
        p.heading = parse_double(fields[3], path, lineno);
        p.curvature = parse_double(fields[4], path, lineno);
        p.speed = parse_double(fields[5], path, lineno);
        traj.points.push_back(p);
    }
    if (!saw_header || traj.empty()) throw ParseError(path, lineno, "empty trajectory file");
    return traj;
}

}  // namespace fsd
