#include "fsdstack/fusion/camera.hpp"

#include <fstream>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

namespace fsd {

Eigen::Matrix3d CameraModel::intrinsics() const {
    Eigen::Matrix3d k = Eigen::Matrix3d::Identity();
    k(0, 0) = fx;
    k(1, 1) = fy;
    k(0, 2) = cx;
    k(1, 2) = cy;
    return k;
}

void CameraModel::validate() const {
    if (!(fx > 0.0) || !(fy > 0.0)) {
        throw std::invalid_argument("CameraModel: focal lengths must be positive");
    }
    const Eigen::Matrix3d rtr = rotation.transpose() * rotation;
    if ((rtr - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff() > 1e-9) {
        throw std::invalid_argument("CameraModel: rotation not orthonormal");
    }
    if (std::abs(rotation.determinant() - 1.0) > 1e-9) {
        throw std::invalid_argument("CameraModel: rotation determinant != +1");
    }
}

std::optional<Vec2> project(const CameraModel& cam, const Eigen::Vector3d& world) {
    const Eigen::Vector3d camera_pt = cam.rotation * world + cam.translation;
    const Eigen::Vector3d homog = cam.intrinsics() * camera_pt;
    const double w = homog.z();
    if (w <= 0.0 || std::abs(w) < 1e-12) return std::nullopt;
    return Vec2(homog.x() / w, homog.y() / w);
}

Eigen::Vector3d backproject(const CameraModel& cam, const Vec2& pixel, double depth) {
    const Eigen::Vector3d camera_pt(depth * (pixel.x() - cam.cx) / cam.fx,
                                    depth * (pixel.y() - cam.cy) / cam.fy, depth);
    return cam.rotation.transpose() * (camera_pt - cam.translation);
}

CameraModel load_camera(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open camera file: " + path);
    nlohmann::json j;
    in >> j;
    CameraModel cam;
    cam.fx = j.at("fx").get<double>();
    cam.fy = j.at("fy").get<double>();
    cam.cx = j.at("cx").get<double>();
    cam.cy = j.at("cy").get<double>();
    cam.width = j.at("width").get<int>();
    cam.height = j.at("height").get<int>();
    const auto r = j.at("R").get<std::vector<double>>();
    const auto t = j.at("T").get<std::vector<double>>();
    if (r.size() != 9 || t.size() != 3) {
        throw std::runtime_error("camera file: R must have 9 entries, T must have 3");
    }
    for (int i = 0; i < 3; ++i) {
        for (int k = 0; k < 3; ++k) cam.rotation(i, k) = r[3 * i + k];  // row-major
        cam.translation(i) = t[i];
    }
    cam.validate();
    return cam;
}

void save_camera(const CameraModel& cam, const std::string& path) {
    nlohmann::json j;
    j["fx"] = cam.fx;
    j["fy"] = cam.fy;
    j["cx"] = cam.cx;
    j["cy"] = cam.cy;
    j["width"] = cam.width;
    j["height"] = cam.height;
    std::vector<double> r(9), t(3);
    for (int i = 0; i < 3; ++i) {
        for (int k = 0; k < 3; ++k) r[3 * i + k] = cam.rotation(i, k);
        t[i] = cam.translation(i);
    }
    j["R"] = r;
    j["T"] = t;
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write camera file: " + path);
    out << j.dump(2) << "\n";
}

}  // namespace fsd
