#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "fsdstack/control/control.hpp"
#include "fsdstack/fusion/camera.hpp"
#include "fsdstack/fusion/fuse.hpp"
#include "fsdstack/fusion/intensity.hpp"
#include "fsdstack/planner/delaunay.hpp"
#include "fsdstack/planner/planner.hpp"
#include "fsdstack/sim/loop.hpp"
#include "fsdstack/track_io.hpp"

namespace py = pybind11;
using namespace fsd;

namespace {

py::dict trajectory_to_dict(const Trajectory& traj) {
    std::vector<double> x, y, heading, curvature, speed;
    for (const TrajectoryPoint& p : traj.points) {
        x.push_back(p.x);
        y.push_back(p.y);
        heading.push_back(p.heading);
        curvature.push_back(p.curvature);
        speed.push_back(p.speed);
    }
    py::dict d;
    d["x"] = x;
    d["y"] = y;
    d["heading"] = heading;
    d["curvature"] = curvature;
    d["speed"] = speed;
    d["closed"] = traj.closed;
    return d;
}

py::dict metrics_to_dict(const RunMetrics& m) {
    py::dict d;
    d["lap_times"] = m.lap_times;
    d["mean_lap_time"] = m.mean_lap_time;
    d["rms_lateral_error"] = m.rms_lateral_error;
    d["itae"] = m.itae;
    d["max_lateral_error"] = m.max_lateral_error;
    d["max_lat_acc"] = m.max_lat_acc;
    d["mean_lat_acc"] = m.mean_lat_acc;
    d["std_lat_acc"] = m.std_lat_acc;
    d["max_cvr"] = m.max_cvr;
    d["mean_cvr"] = m.mean_cvr;
    d["std_cvr"] = m.std_cvr;
    d["min_dist_to_boundary"] = m.min_dist_to_boundary;
    d["dnf"] = m.dnf;
    d["dnf_reason"] = m.dnf_reason;
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Cone-track racing stack: SLAM, planning, control, simulation";

    m.def("wrap_angle", &wrap_angle, py::arg("angle"),
          "Wrap an angle to the half-open interval (-pi, pi].");

    py::class_<Pose2D>(m, "Pose2D")
        .def(py::init<double, double, double>(), py::arg("x"), py::arg("y"), py::arg("theta"))
        .def_readonly("x", &Pose2D::x)
        .def_readonly("y", &Pose2D::y)
        .def_readonly("theta", &Pose2D::theta)
        .def("__repr__", [](const Pose2D& p) {
            return "Pose2D(" + std::to_string(p.x) + ", " + std::to_string(p.y) + ", " +
                   std::to_string(p.theta) + ")";
        });

    py::class_<TrackMap>(m, "TrackMap")
        .def_property_readonly("left_cones",
                               [](const TrackMap& t) {
                                   std::vector<std::pair<double, double>> out;
                                   for (const Cone& c : t.left_cones)
                                       out.emplace_back(c.position.x(), c.position.y());
                                   return out;
                               })
        .def_property_readonly("right_cones",
                               [](const TrackMap& t) {
                                   std::vector<std::pair<double, double>> out;
                                   for (const Cone& c : t.right_cones)
                                       out.emplace_back(c.position.x(), c.position.y());
                                   return out;
                               })
        .def_readonly("closed", &TrackMap::closed)
        .def_readonly("start_pose", &TrackMap::start_pose);

    m.def(
        "generate_track",
        [](const std::string& kind, std::uint64_t seed, double width, double cone_spacing,
           double length, double radius) {
            TrackGenParams p;
            p.width = width;
            p.cone_spacing = cone_spacing;
            p.length = length;
            p.radius = radius;
            return generate_track(track_kind_from_string(kind), p, seed);
        },
        py::arg("kind"), py::arg("seed") = 1, py::arg("width") = 4.0,
        py::arg("cone_spacing") = 3.0, py::arg("length") = 75.0, py::arg("radius") = 20.0,
        "Generate a synthetic track (acceleration|ring|twisty|hairpin).");

    m.def("load_track", &load_track, py::arg("path"));
    m.def("save_track", &save_track, py::arg("track"), py::arg("path"));

    m.def(
        "plan",
        [](const TrackMap& track, const std::string& smoothing, const std::string& config_text) {
            KeyValueConfig kv = KeyValueConfig::from_string(config_text);
            kv.set("planner.smoothing", smoothing);
            PlannerConfig cfg = planner_config_from_kv(kv);
            const PlanResult result = plan_path(track.all_cones(), track.start_pose, cfg);
            py::dict d = trajectory_to_dict(result.trajectory);
            const PathMetrics pm = path_metrics(result.trajectory, track.all_cones());
            d["lap_time"] = pm.lap_time;
            d["mean_cvr"] = pm.mean_cvr;
            d["max_cvr"] = pm.max_cvr;
            d["min_dist_to_boundary"] = pm.min_dist_to_boundary;
            return d;
        },
        py::arg("track"), py::arg("smoothing") = "combined", py::arg("config") = "",
        "Plan a velocity-profiled trajectory on a cone map.");

    m.def(
        "run_scenario",
        [](const std::string& config_text) {
            const ScenarioConfig cfg = scenario_from_kv(KeyValueConfig::from_string(config_text));
            const RunResult result = run_closed_loop(cfg);
            py::dict d = metrics_to_dict(result.metrics);
            d["reference"] = trajectory_to_dict(result.reference);
            d["loop_closures"] = result.loop_closures;
            d["final_pose_error"] = result.final_pose_error;
            d["landmark_rmse"] = result.landmark_rmse;
            return d;
        },
        py::arg("config"),
        "Run a closed-loop scenario from config text and return its metrics.");

    m.def("track_width_score", &track_width_score, py::arg("width"),
          py::arg("printed_asymmetric_tail") = false);

    m.def(
        "classify_intensity",
        [](const std::vector<double>& layers, double epsilon_flat) {
            return to_string(classify_intensity(layers, epsilon_flat));
        },
        py::arg("layers"), py::arg("epsilon_flat") = kDefaultFlatEpsilon,
        "Cone color from per-layer median intensities (bottom-to-top).");

    m.def("stanley_law", &stanley_law, py::arg("e"), py::arg("theta"), py::arg("theta_ss"),
          py::arg("v"), py::arg("k"), py::arg("k_soft"));
    m.def("pure_pursuit_law", &pure_pursuit_law, py::arg("alpha"), py::arg("wheelbase"),
          py::arg("lookahead"));
    m.def(
        "combination_weight",
        [](double kappa, double k_min, double k_max, double kappa_ref, double k_curve) {
            ControllerConfig cfg;
            cfg.k_min = k_min;
            cfg.k_max = k_max;
            cfg.kappa_ref = kappa_ref;
            cfg.k_curve = k_curve;
            return combination_weight(kappa, cfg);
        },
        py::arg("kappa"), py::arg("k_min") = 0.25, py::arg("k_max") = 0.9,
        py::arg("kappa_ref") = 0.08, py::arg("k_curve") = 0.5);

    m.def(
        "project",
        [](double fx, double fy, double cx, double cy, int width, int height,
           const std::vector<double>& point) -> py::object {
            CameraModel cam;
            cam.fx = fx;
            cam.fy = fy;
            cam.cx = cx;
            cam.cy = cy;
            cam.width = width;
            cam.height = height;
            if (point.size() != 3) throw std::invalid_argument("point must have 3 entries");
            const auto px = project(cam, Eigen::Vector3d(point[0], point[1], point[2]));
            if (!px) return py::none();
            return py::make_tuple(px->x(), px->y());
        },
        py::arg("fx"), py::arg("fy"), py::arg("cx"), py::arg("cy"), py::arg("width"),
        py::arg("height"), py::arg("point"),
        "Pinhole projection with identity extrinsics; None when behind the camera.");
}
