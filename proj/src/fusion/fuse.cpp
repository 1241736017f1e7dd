#include "fsdstack/fusion/fuse.hpp"

#include <limits>

namespace fsd {

std::vector<FusedCone> fuse(const std::vector<ClusterCandidate>& clusters,
                            const std::vector<BoundingBox>& boxes, const CameraModel& cam,
                            FusionDiagnostics* diag) {
    std::vector<FusedCone> out;
    out.reserve(clusters.size());
    for (const ClusterCandidate& cluster : clusters) {
        FusedCone cone;
        cone.position = cluster.center;

        const auto px = project(cam, cluster.center);
        if (!px || !cam.in_image(*px)) {
            // Outside the camera FoV: LiDAR-only detection, intensity color.
            cone.source = FusionSource::LidarOnly;
            cone.color = cluster.intensity_color;
            out.push_back(cone);
            continue;
        }

        const BoundingBox* best = nullptr;
        double best_dist = std::numeric_limits<double>::infinity();
        for (const BoundingBox& box : boxes) {
            if (!box.contains(*px)) continue;
            const double d = (box.center() - *px).squaredNorm();
            if (d < best_dist) {
                best_dist = d;
                best = &box;
            }
        }
        if (best != nullptr) {
            cone.source = FusionSource::Fused;
            cone.color = best->color;
            if (diag != nullptr && best->color != ConeColor::Unknown &&
                cluster.intensity_color != ConeColor::Unknown &&
                best->color != cluster.intensity_color) {
                ++diag->color_disagreements;
            }
        } else {
            // In view but no detection backs it up.
            cone.source = FusionSource::RejectedFalsePositive;
            cone.color = cluster.intensity_color;
        }
        out.push_back(cone);
    }
    return out;
}

}  // namespace fsd
