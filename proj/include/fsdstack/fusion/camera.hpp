#ifndef FSDSTACK_FUSION_CAMERA_HPP
#define FSDSTACK_FUSION_CAMERA_HPP

#include <optional>
#include <string>

#include <Eigen/Core>

#include "fsdstack/geometry.hpp"

namespace fsd {

/// Pinhole camera: intrinsics K plus world-to-camera extrinsics [R|T].
struct CameraModel {
    double fx = 1.0, fy = 1.0;  // focal lengths, px
    double cx = 0.0, cy = 0.0;  // principal point, px
    Eigen::Matrix3d rotation = Eigen::Matrix3d::Identity();
    Eigen::Vector3d translation = Eigen::Vector3d::Zero();
    int width = 0, height = 0;

    Eigen::Matrix3d intrinsics() const;
    void validate() const;

    bool in_image(const Vec2& px) const {
        return px.x() >= 0.0 && px.x() < width && px.y() >= 0.0 && px.y() < height;
    }
};

/// Projects a world point onto the image plane. nullopt = behind the camera
/// (non-positive projective depth).
std::optional<Vec2> project(const CameraModel& cam, const Eigen::Vector3d& world);

/// Inverse of project for a given projective depth w (camera-frame z).
Eigen::Vector3d backproject(const CameraModel& cam, const Vec2& pixel, double depth);

CameraModel load_camera(const std::string& path);
void save_camera(const CameraModel& cam, const std::string& path);

}  // namespace fsd

#endif  // FSDSTACK_FUSION_CAMERA_HPP
