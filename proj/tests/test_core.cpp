#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>

#include "fsdstack/config.hpp"
#include "fsdstack/track_io.hpp"

using namespace fsd;

namespace {

std::string temp_path(const std::string& name) {
    return (std::filesystem::temp_directory_path() / name).string();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path);
    out << content;
}

}  // namespace

TEST_CASE("wrap_angle maps into (-pi, pi]") {
    CHECK(wrap_angle(0.0) == doctest::Approx(0.0));
    CHECK(wrap_angle(3.0 * M_PI) == doctest::Approx(M_PI));
    CHECK(wrap_angle(-M_PI) == doctest::Approx(M_PI));  // half-open boundary
    CHECK(wrap_angle(M_PI) == doctest::Approx(M_PI));
    CHECK_THROWS_AS(wrap_angle(std::numeric_limits<double>::quiet_NaN()), std::domain_error);
    CHECK_THROWS_AS(wrap_angle(std::numeric_limits<double>::infinity()), std::domain_error);
}

TEST_CASE("wrap_angle is idempotent and 2pi-periodic") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> angle(-10.0, 10.0);
    for (int i = 0; i < 1000; ++i) {
        const double a = angle(rng);
        const double w = wrap_angle(a);
        CHECK(w > -M_PI);
        CHECK(w <= M_PI);
        CHECK(wrap_angle(w) == doctest::Approx(w).epsilon(1e-12));
        for (int k = -3; k <= 3; ++k) {
            CHECK(wrap_angle(a + 2.0 * M_PI * k) == doctest::Approx(w).epsilon(1e-9));
        }
    }
}

TEST_CASE("pose frame transforms invert each other") {
    const Pose2D pose(1.5, -2.0, 0.7);
    const Vec2 world(3.0, 4.0);
    const Vec2 body = pose.to_body(world);
    CHECK((pose.to_world(body) - world).norm() < 1e-12);
}

TEST_CASE("load_track parses a minimal open corridor") {
    const std::string path = temp_path("track_minimal.csv");
    write_file(path,
               "# generated: false, closed: false\n"
               "tag,x,y,color\n"
               "start_pose,0,0,0\n"
               "cone,0,2,blue\n"
               "cone,3,2,blue\n"
               "cone,0,-2,yellow\n"
               "cone,3,-2,yellow\n");
    const TrackMap track = load_track(path);
    CHECK(track.left_cones.size() == 2);
    CHECK(track.right_cones.size() == 2);
    CHECK_FALSE(track.closed);
    CHECK_FALSE(track.generated);
}

TEST_CASE("load_track rejects a too-narrow generated corridor") {
    const std::string path = temp_path("track_narrow.csv");
    write_file(path,
               "# generated: true, closed: false\n"
               "tag,x,y,color\n"
               "start_pose,0,0,0\n"
               "cone,0,1,blue\n"
               "cone,3,1,blue\n"
               "cone,0,-1,yellow\n"
               "cone,3,-1,yellow\n");
    CHECK_THROWS_AS(load_track(path), ValidationError);
}

TEST_CASE("load_track rejects empty and malformed files") {
    const std::string empty = temp_path("track_empty.csv");
    write_file(empty, "");
    CHECK_THROWS_AS(load_track(empty), ParseError);

    const std::string bad = temp_path("track_bad.csv");
    write_file(bad,
               "tag,x,y,color\n"
               "cone,not_a_number,2,blue\n");
    try {
        load_track(bad);
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.line() == 2);
    }
}

TEST_CASE("track save/load round-trips cones to 1e-9") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> coord(-50.0, 50.0);
    TrackMap track;
    track.closed = false;
    for (int i = 0; i < 20; ++i) {
        track.left_cones.emplace_back(Vec2(coord(rng), coord(rng)), ConeColor::Blue);
        track.right_cones.emplace_back(Vec2(coord(rng), coord(rng)), ConeColor::Yellow);
    }
    track.start_cones.emplace_back(Vec2(0.5, -0.25), ConeColor::OrangeLarge);
    track.start_pose = Pose2D(0.125, -3.5, 0.625);

    const std::string path = temp_path("track_roundtrip.csv");
    save_track(track, path);
    const TrackMap loaded = load_track(path);
    REQUIRE(loaded.left_cones.size() == track.left_cones.size());
    REQUIRE(loaded.right_cones.size() == track.right_cones.size());
    REQUIRE(loaded.start_cones.size() == track.start_cones.size());
    for (std::size_t i = 0; i < track.left_cones.size(); ++i) {
        CHECK((loaded.left_cones[i].position - track.left_cones[i].position).norm() < 1e-9);
        CHECK(loaded.left_cones[i].color == track.left_cones[i].color);
    }
    CHECK(loaded.start_pose.x == doctest::Approx(track.start_pose.x).epsilon(1e-12));
    CHECK(loaded.start_pose.theta == doctest::Approx(track.start_pose.theta).epsilon(1e-12));
}

TEST_CASE("save_trajectory writes a single row for a single point") {
    Trajectory traj;
    traj.points.push_back({});
    const std::string path = temp_path("traj_single.csv");
    save_trajectory(traj, path);
    std::ifstream in(path);
    std::string line;
    int rows = 0;
    while (std::getline(in, line)) ++rows;
    CHECK(rows == 2);  // header + one data row
}

TEST_CASE("trajectory write-then-read matches to 1e-9") {
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> coord(-100.0, 100.0);
    std::uniform_real_distribution<double> speed(0.0, 20.0);
    Trajectory traj;
    for (int i = 0; i < 100; ++i) {
        TrajectoryPoint p;
        p.x = coord(rng);
        p.y = coord(rng);
        p.heading = wrap_angle(coord(rng) * 0.01);
        p.curvature = coord(rng) * 1e-3;
        p.speed = speed(rng);
        traj.points.push_back(p);
    }
    const std::string path = temp_path("traj_roundtrip.csv");
    save_trajectory(traj, path);
    const Trajectory loaded = load_trajectory(path);
    REQUIRE(loaded.size() == traj.size());
    for (std::size_t i = 0; i < traj.size(); ++i) {
        CHECK(std::abs(loaded[i].x - traj[i].x) < 1e-9);
        CHECK(std::abs(loaded[i].y - traj[i].y) < 1e-9);
        CHECK(std::abs(loaded[i].heading - traj[i].heading) < 1e-9);
        CHECK(std::abs(loaded[i].curvature - traj[i].curvature) < 1e-9);
        CHECK(std::abs(loaded[i].speed - traj[i].speed) < 1e-9);
    }
}

TEST_CASE("save_trajectory surfaces unwritable paths and empty input") {
    Trajectory traj;
    traj.points.push_back({});
    CHECK_THROWS_AS(save_trajectory(traj, "/nonexistent_dir/traj.csv"), std::runtime_error);
    Trajectory empty;
    CHECK_THROWS_AS(save_trajectory(empty, temp_path("never.csv")), std::invalid_argument);
}

TEST_CASE("closed tracks need three cones per side") {
    TrackMap track;
    track.closed = true;
    track.left_cones.emplace_back(Vec2(0, 2), ConeColor::Blue);
    track.left_cones.emplace_back(Vec2(3, 2), ConeColor::Blue);
    track.right_cones.emplace_back(Vec2(0, -2), ConeColor::Yellow);
    track.right_cones.emplace_back(Vec2(3, -2), ConeColor::Yellow);
    CHECK_THROWS_AS(track.validate(), std::invalid_argument);
}

TEST_CASE("config parser handles comments, lists and type errors") {
    const auto kv = KeyValueConfig::from_string(
        "# header comment\n"
        "alpha = 1.5  # trailing\n"
        "name = twisty\n"
        "flag = true\n"
        "items = a, b, c\n");
    CHECK(kv.get_double("alpha", 0.0) == doctest::Approx(1.5));
    CHECK(kv.get_string("name", "") == "twisty");
    CHECK(kv.get_bool("flag", false));
    CHECK(kv.get_list("items").size() == 3);
    CHECK(kv.get_double("missing", 2.5) == doctest::Approx(2.5));
    CHECK_THROWS_AS(KeyValueConfig::from_string("novalue\n"), std::runtime_error);
    CHECK_THROWS_AS(kv.get_double("name", 0.0), std::runtime_error);
}
