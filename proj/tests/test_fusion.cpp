#include <doctest.h>

#include <random>

#include "fsdstack/fusion/camera.hpp"
#include "fsdstack/fusion/fuse.hpp"
#include "fsdstack/fusion/intensity.hpp"

using namespace fsd;

namespace {

CameraModel test_camera() {
    CameraModel cam;
    cam.fx = cam.fy = 100.0;
    cam.cx = cam.cy = 50.0;
    cam.width = 100;
    cam.height = 100;
    return cam;
}

}  // namespace

TEST_CASE("intensity classifier matches the stripe profiles") {
    CHECK(classify_intensity({10, 30, 10}) == ConeColor::Blue);    // peak in the middle
    CHECK(classify_intensity({30, 10, 30}) == ConeColor::Yellow);  // dip in the middle
    CHECK(classify_intensity({10, 10, 10}) == ConeColor::Unknown);
    CHECK(intensity_fit_coefficient({10, 30, 10}) == doctest::Approx(-20.0));
    CHECK_THROWS_AS(classify_intensity({10, 30}), std::invalid_argument);
}

TEST_CASE("intensity classification is invariant under affine rescaling") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> value(0.0, 50.0);
    std::uniform_real_distribution<double> gain(0.5, 3.0);
    std::uniform_real_distribution<double> offset(-20.0, 20.0);
    int informative = 0;
    for (int trial = 0; trial < 500; ++trial) {
        std::vector<double> layers(5);
        for (double& l : layers) l = value(rng);
        const double a = gain(rng), b = offset(rng);
        std::vector<double> scaled = layers;
        for (double& l : scaled) l = a * l + b;
        // Only profiles decisively non-flat after scaling must agree.
        if (std::abs(intensity_fit_coefficient(layers)) * a <= kDefaultFlatEpsilon) continue;
        if (std::abs(intensity_fit_coefficient(layers)) <= kDefaultFlatEpsilon) continue;
        CHECK(classify_intensity(layers) == classify_intensity(scaled));
        ++informative;
    }
    CHECK(informative > 100);
}

TEST_CASE("reversing the layer order flips no classification") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> value(0.0, 50.0);
    for (int trial = 0; trial < 500; ++trial) {
        std::vector<double> layers(4 + trial % 3);
        for (double& l : layers) l = value(rng);
        std::vector<double> reversed(layers.rbegin(), layers.rend());
        CHECK(classify_intensity(layers) == classify_intensity(reversed));
    }
}

TEST_CASE("projection maps the optical axis to the principal point") {
    const CameraModel cam = test_camera();
    const auto center = project(cam, {0.0, 0.0, 2.0});
    REQUIRE(center.has_value());
    CHECK(center->x() == doctest::Approx(50.0));
    CHECK(center->y() == doctest::Approx(50.0));

    const auto off = project(cam, {1.0, 0.0, 2.0});
    REQUIRE(off.has_value());
    CHECK(off->x() == doctest::Approx(100.0));  // (100*1 + 50*2) / 2
    CHECK(off->y() == doctest::Approx(50.0));

    CHECK_FALSE(project(cam, {0.0, 0.0, -1.0}).has_value());
}

TEST_CASE("project inverts backproject to 1e-6") {
    CameraModel cam = test_camera();
    // Non-trivial extrinsics: rotation about z plus a translation.
    const double ang = 0.3;
    cam.rotation << std::cos(ang), -std::sin(ang), 0, std::sin(ang), std::cos(ang), 0, 0, 0, 1;
    cam.translation << 0.4, -0.2, 0.1;
    cam.validate();

    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> px(0.0, 100.0);
    std::uniform_real_distribution<double> depth(0.5, 30.0);
    for (int i = 0; i < 1000; ++i) {
        const Vec2 pixel(px(rng), px(rng));
        const double d = depth(rng);
        const Eigen::Vector3d world = backproject(cam, pixel, d);
        const auto reprojected = project(cam, world);
        REQUIRE(reprojected.has_value());
        CHECK((*reprojected - pixel).norm() < 1e-6);
    }
}

TEST_CASE("fusion rules") {
    const CameraModel cam = test_camera();
    std::vector<BoundingBox> boxes;
    boxes.push_back({40.0, 40.0, 60.0, 60.0, ConeColor::Yellow, 0.9});

    SUBCASE("outside the FoV stays lidar-only with the intensity color") {
        // Projects to (-50, 50): x = (100*-2 + 50*2)/2.
        const auto cones = fuse({{{-2.0, 0.0, 2.0}, ConeColor::Blue}}, boxes, cam);
        REQUIRE(cones.size() == 1);
        CHECK(cones[0].source == FusionSource::LidarOnly);
        CHECK(cones[0].color == ConeColor::Blue);
    }
    SUBCASE("inside a box adopts the camera color") {
        const auto cones = fuse({{{0.0, 0.0, 2.0}, ConeColor::Blue}}, boxes, cam);
        REQUIRE(cones.size() == 1);
        CHECK(cones[0].source == FusionSource::Fused);
        CHECK(cones[0].color == ConeColor::Yellow);
    }
    SUBCASE("in view without any box is a false positive") {
        const auto cones = fuse({{{0.0, 0.0, 2.0}, ConeColor::Blue}}, {}, cam);
        REQUIRE(cones.size() == 1);
        CHECK(cones[0].source == FusionSource::RejectedFalsePositive);
    }
    SUBCASE("behind the camera stays lidar-only") {
        const auto cones = fuse({{{0.0, 0.0, -2.0}, ConeColor::Yellow}}, boxes, cam);
        REQUIRE(cones.size() == 1);
        CHECK(cones[0].source == FusionSource::LidarOnly);
        CHECK(cones[0].color == ConeColor::Yellow);
    }
    SUBCASE("overlapping boxes: nearest center wins") {
        std::vector<BoundingBox> overlap = boxes;
        overlap.push_back({52.0, 48.0, 58.0, 52.0, ConeColor::Blue, 0.9});
        // Projects to (55, 50): inside both boxes, nearer the second's center.
        const auto cones = fuse({{{0.1, 0.0, 2.0}, ConeColor::Unknown}}, overlap, cam);
        REQUIRE(cones.size() == 1);
        CHECK(cones[0].color == ConeColor::Blue);
    }
}

TEST_CASE("fuse partitions its input across the three sources") {
    const CameraModel cam = test_camera();
    std::vector<BoundingBox> boxes;
    boxes.push_back({30.0, 30.0, 70.0, 70.0, ConeColor::Blue, 1.0});

    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> coord(-3.0, 3.0);
    std::uniform_real_distribution<double> z(-5.0, 5.0);
    std::vector<ClusterCandidate> clusters;
    for (int i = 0; i < 200; ++i) {
        clusters.push_back({{coord(rng), coord(rng), z(rng)}, ConeColor::Unknown});
    }
    const auto cones = fuse(clusters, boxes, cam);
    CHECK(cones.size() == clusters.size());
    int lidar = 0, fused = 0, rejected = 0;
    for (const FusedCone& c : cones) {
        switch (c.source) {
            case FusionSource::LidarOnly: ++lidar; break;
            case FusionSource::Fused: ++fused; break;
            case FusionSource::RejectedFalsePositive: ++rejected; break;
        }
    }
    CHECK(lidar + fused + rejected == static_cast<int>(clusters.size()));
    CHECK(lidar > 0);
    CHECK(fused > 0);
    CHECK(rejected > 0);
}

TEST_CASE("camera calibration file round-trips") {
    CameraModel cam = test_camera();
    cam.translation << 0.1, 0.2, 0.3;
    const std::string path = "/tmp/fsd_camera_test.json";
    save_camera(cam, path);
    const CameraModel loaded = load_camera(path);
    CHECK(loaded.fx == doctest::Approx(cam.fx));
    CHECK((loaded.translation - cam.translation).norm() < 1e-12);
    CHECK(loaded.width == cam.width);
}
