#ifndef FSDSTACK_FUSION_FUSE_HPP
#define FSDSTACK_FUSION_FUSE_HPP

#include <vector>

#include "fsdstack/fusion/camera.hpp"
#include "fsdstack/types.hpp"

namespace fsd {

struct BoundingBox {
    double x_min = 0.0, y_min = 0.0;
    double x_max = 0.0, y_max = 0.0;
    ConeColor color = ConeColor::Unknown;
    double confidence = 1.0;

    bool contains(const Vec2& px) const {
        return px.x() >= x_min && px.x() <= x_max && px.y() >= y_min && px.y() <= y_max;
    }
    Vec2 center() const { return Vec2(0.5 * (x_min + x_max), 0.5 * (y_min + y_max)); }
};

enum class FusionSource { LidarOnly, Fused, RejectedFalsePositive };

struct FusedCone {
    Eigen::Vector3d position = Eigen::Vector3d::Zero();
    ConeColor color = ConeColor::Unknown;
    FusionSource source = FusionSource::LidarOnly;
};

/// LiDAR cluster center with the color suggested by its intensity profile
/// (Unknown when the profile was flat or missing).
struct ClusterCandidate {
    Eigen::Vector3d center = Eigen::Vector3d::Zero();
    ConeColor intensity_color = ConeColor::Unknown;
};

struct FusionDiagnostics {
    int color_disagreements = 0;  // camera box color != intensity color (both known)
};

/// Per-cluster fusion decision:
///  - projection behind camera or outside the image -> LidarOnly, intensity color
///  - inside the image and inside >= 1 box -> Fused, box color (nearest center wins)
///  - inside the image, outside every box -> RejectedFalsePositive
std::vector<FusedCone> fuse(const std::vector<ClusterCandidate>& clusters,
                            const std::vector<BoundingBox>& boxes, const CameraModel& cam,
                            FusionDiagnostics* diag = nullptr);

}  // namespace fsd

#endif  // FSDSTACK_FUSION_FUSE_HPP
