#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "motioncone/contact.hpp"
#include "motioncone/types.hpp"

namespace motioncone {

inline constexpr int kSceneSchemaVersion = 1;

// All file-boundary units: mm, g, N, degrees. Geometry is given in the
// object's model frame; cog_mm places the center of gravity in that frame.
struct SceneObject {
  std::string name;
  std::string material;
  std::vector<double> dims_mm;   // informational [L, B, H]
  std::vector<Vec2> polygon_mm;  // counterclockwise in (x, z)
  double mass_g = 0.0;
  Vec2 cog_mm = Vec2::Zero();

  bool operator==(const SceneObject&) const = default;
};

struct SceneGravity {
  Vec2 vector_mps2{0.0, -9.81};  // in the pusher (object) frame
  double tilt_deg = 0.0;         // plane tilt from vertical; in-plane part scales by cos

  bool operator==(const SceneGravity&) const = default;
};

struct SceneGrasp {
  Vec2 finger_center_mm = Vec2::Zero();  // gripper frame
  double patch_radius_mm = 5.0;
  double pressure_constant = 0.6;
  int n_fingers = 2;
  double force_N = 45.0;
  double mu = 0.5;

  bool operator==(const SceneGrasp&) const = default;
};

struct ScenePusher {
  std::string label;
  std::vector<Vec2> points_mm;  // model frame
  std::vector<Vec2> normals;    // unit, into the object
  double mu = 0.5;

  bool operator==(const ScenePusher&) const = default;
};

// Planner settings after defaults are resolved against the object.
struct ScenePlanner {
  double step = 1.0;
  std::array<double, 3> goal_tolerance{1.0, 1.0, 1.0};  // mm, mm, deg
  double cost_threshold = -1.0;                          // < 0: no threshold
  double same_pusher_cost = 0.1;
  double switch_pusher_cost = 1.0;
  double length_scale = 25.0;
  double t_init = 1e-4;
  int max_fail = 10;
  double rewire_radius = 3.0;
  double goal_bias = 0.1;
  int max_iterations = 20000;
  std::array<double, 2> bounds_x{0.0, 0.0};
  std::array<double, 2> bounds_z{0.0, 0.0};
  std::array<double, 2> bounds_theta_deg{-90.0, 90.0};

  bool operator==(const ScenePlanner&) const = default;
};

struct Scene {
  int schema_version = kSceneSchemaVersion;
  std::string name;
  std::string notes;
  SceneObject object;
  SceneGravity gravity;
  SceneGrasp grasp;
  std::vector<ScenePusher> pushers;
  ScenePlanner planner;

  bool operator==(const Scene&) const = default;

  /// Object outline with the origin at the center of gravity.
  std::vector<Vec2> object_polygon() const;
  /// Pusher in the object (center-of-gravity) frame.
  PusherContact pusher_contact(std::size_t index) const;
  std::optional<std::size_t> pusher_index(const std::string& label) const;
  double mass_kg() const { return object.mass_g * 1e-3; }
  /// In-plane gravitational acceleration in the object frame, m/s^2.
  Vec2 in_plane_gravity() const;
  LimitSurfaceModel limit_surface() const;
};

/// Every invariant violation, not only the first.
std::vector<std::string> validate_scene(const Scene& scene);

/// Parses a scene JSON document, resolving defaults. Throws SceneError with
/// all schema and invariant issues found.
Scene parse_scene_text(const std::string& text, const std::string& source = "<scene>");
Scene parse_scene(const std::string& path);

/// Normalized form with every default written out.
std::string emit_scene(const Scene& scene);

/// Sampling bounds used when a scene does not set them: finger-patch positions
/// covering the object's bounding box inflated by the patch radius.
void resolve_default_bounds(Scene& scene);

}  // namespace motioncone
