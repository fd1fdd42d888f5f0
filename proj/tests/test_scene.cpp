#include <doctest.h>

#include <algorithm>
#include <fstream>
#include <sstream>

#include "motioncone/errors.hpp"
#include "motioncone/scene.hpp"
#include "oracles.hpp"

using namespace motioncone;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const char* kMinimal = R"({
  "schema_version": 1,
  "object": {"polygon_mm": [[-10, -5], [10, -5], [10, 5], [-10, 5]], "mass_g": 50},
  "grasp": {"force_N": 30, "mu": 0.5},
  "pushers": [{"label": "left", "points_mm": [[-10, 0]], "normals": [[1, 0]], "mu": 0.4}]
})";

std::vector<std::string> issues_of(const std::string& text) {
  try {
    parse_scene_text(text, "t.scene");
  } catch (const SceneError& e) {
    return e.issues();
  }
  return {};
}

bool mentions(const std::vector<std::string>& issues, const std::string& needle) {
  return std::any_of(issues.begin(), issues.end(),
                     [&](const std::string& s) { return s.find(needle) != std::string::npos; });
}

std::string replace(std::string s, const std::string& from, const std::string& to) {
  const auto at = s.find(from);
  REQUIRE(at != std::string::npos);
  return s.replace(at, from.size(), to);
}

}  // namespace

TEST_CASE("bundled objects carry their material, size and mass") {
  struct Row {
    const char* scene;
    const char* material;
    std::vector<double> dims;
    double mass;
  };
  const Row rows[] = {{"square_prism", "Al 6061", {100, 25, 25}, 202},
                      {"rect_prism", "Delrin", {80, 25, 38}, 113},
                      {"t_shape", "ABS", {70, 25, 50}, 62}};
  for (const auto& r : rows) {
    for (const std::string suffix : {"", "_lowfric"}) {
      const Scene s = oracle::load(r.scene + suffix);
      CHECK(s.object.material == r.material);
      CHECK(s.object.dims_mm == r.dims);
      CHECK(s.object.mass_g == r.mass);
      CHECK(s.mass_kg() == doctest::Approx(r.mass * 1e-3));
      REQUIRE(s.pushers.size() == 3);
      CHECK(s.pusher_index("left").has_value());
      CHECK(s.pusher_index("bottom").has_value());
      CHECK(s.pusher_index("right").has_value());
      CHECK_FALSE(s.pusher_index("top").has_value());
    }
  }
  // The low-friction variants differ only in pusher friction.
  const Scene hi = oracle::load("rect_prism"), lo = oracle::load("rect_prism_lowfric");
  for (std::size_t i = 0; i < hi.pushers.size(); ++i) CHECK(lo.pushers[i].mu < hi.pushers[i].mu);
}

TEST_CASE("emit and parse round trip") {
  for (const char* name : {"square_prism", "square_prism_lowfric", "rect_prism", "rect_prism_lowfric",
                           "t_shape", "t_shape_lowfric"}) {
    const Scene s = oracle::load(name);
    const std::string text = emit_scene(s);
    const Scene back = parse_scene_text(text);
    CHECK(back == s);
    CHECK(emit_scene(back) == text);
  }
}

TEST_CASE("defaults are resolved") {
  const Scene s = parse_scene_text(kMinimal);
  CHECK(s.grasp.n_fingers == 2);
  CHECK(s.grasp.patch_radius_mm == 5.0);
  CHECK(s.grasp.pressure_constant == 0.6);
  CHECK(s.gravity.vector_mps2 == Vec2(0.0, -9.81));
  CHECK(s.planner.step == 1.0);
  CHECK(s.planner.rewire_radius == 3.0);
  CHECK(s.planner.same_pusher_cost == 0.1);
  CHECK(s.planner.switch_pusher_cost == 1.0);
  CHECK(s.planner.length_scale == 25.0);
  // Finger anywhere over the part inflated by the patch radius.
  CHECK(s.planner.bounds_x == std::array<double, 2>{-15.0, 15.0});
  CHECK(s.planner.bounds_z == std::array<double, 2>{-10.0, 10.0});
  CHECK(s.planner.bounds_theta_deg == std::array<double, 2>{-90.0, 90.0});
}

TEST_CASE("center of gravity frame") {
  const Scene t = oracle::load("t_shape");
  const auto poly = t.object_polygon();
  REQUIRE(poly.size() == t.object.polygon_mm.size());
  for (std::size_t i = 0; i < poly.size(); ++i)
    CHECK((poly[i] - (t.object.polygon_mm[i] - t.object.cog_mm)).norm() == 0.0);
  const auto left = t.pusher_contact(*t.pusher_index("left"));
  const auto& raw = t.pushers[*t.pusher_index("left")];
  CHECK(left.label == "left");
  CHECK((left.points[0].position - (raw.points_mm[0] - t.object.cog_mm)).norm() == 0.0);
  CHECK(left.mu == raw.mu);
}

TEST_CASE("plane tilt scales in-plane gravity") {
  Scene s = parse_scene_text(kMinimal);
  CHECK((s.in_plane_gravity() - Vec2(0.0, -9.81)).norm() <= 1e-12);
  s.gravity.tilt_deg = 60.0;
  CHECK((s.in_plane_gravity() - Vec2(0.0, -9.81 * 0.5)).norm() <= 1e-12);
}

TEST_CASE("self-intersecting polygon names the edge pair") {
  const auto issues = issues_of(replace(kMinimal, "[[-10, -5], [10, -5], [10, 5], [-10, 5]]",
                                        "[[-10, -5], [10, 5], [10, -5], [-10, 5]]"));
  REQUIRE_FALSE(issues.empty());
  CHECK(mentions(issues, "edges 0 and 2 intersect"));
}

TEST_CASE("clockwise polygon") {
  const auto issues = issues_of(replace(kMinimal, "[[-10, -5], [10, -5], [10, 5], [-10, 5]]",
                                        "[[-10, 5], [10, 5], [10, -5], [-10, -5]]"));
  CHECK(mentions(issues, "counterclockwise"));
}

TEST_CASE("invariant failures are listed exhaustively") {
  std::string text = replace(kMinimal, "\"mass_g\": 50", "\"mass_g\": -1");
  text = replace(text, "\"force_N\": 30", "\"force_N\": 0, \"pressure_constant\": 2");
  text = replace(text, "\"mu\": 0.4", "\"mu\": -0.4");
  const auto issues = issues_of(text);
  CHECK(issues.size() >= 4);
  CHECK(mentions(issues, "object.mass_g"));
  CHECK(mentions(issues, "grasp.force_N"));
  CHECK(mentions(issues, "grasp.pressure_constant"));
  CHECK(mentions(issues, "pushers[0].mu"));
  for (const auto& i : issues) CHECK(i.rfind("t.scene: ", 0) == 0);
}

TEST_CASE("schema problems") {
  CHECK(mentions(issues_of("{\"schema_version\": 1,\n  \"object\": [}"), "t.scene:2:"));
  CHECK(mentions(issues_of(replace(kMinimal, "\"schema_version\": 1,", "")), "schema_version"));
  CHECK(mentions(issues_of(replace(kMinimal, "\"schema_version\": 1", "\"schema_version\": 7")),
                 "unsupported version"));
  CHECK(mentions(issues_of(replace(kMinimal, "\"mass_g\": 50", "\"mass_g\": \"heavy\"")),
                 "object.mass_g"));
  // Two points but one normal.
  CHECK(mentions(issues_of(replace(kMinimal, "[[-10, 0]]", "[[-10, 0], [-10, 2]]")), "pushers[0].normals"));
  CHECK_THROWS_AS(parse_scene("/nonexistent/x.scene"), SceneError);
}

TEST_CASE("bundled files parse from disk byte-for-byte") {
  const std::string text = read_file(oracle::scene_path("square_prism"));
  CHECK(parse_scene_text(text) == oracle::load("square_prism"));
}
