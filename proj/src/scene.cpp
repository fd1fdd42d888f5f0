#include "motioncone/scene.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "motioncone/errors.hpp"

namespace motioncone {

using nlohmann::json;

namespace {

std::string join_issues(const std::vector<std::string>& issues) {
  std::string out = "invalid scene:";
  for (const auto& i : issues) out += "\n  - " + i;
  return out;
}

double cross2(const Vec2& a, const Vec2& b) { return a.x() * b.y() - a.y() * b.x(); }

bool segments_intersect(const Vec2& p1, const Vec2& p2, const Vec2& q1, const Vec2& q2) {
  auto orient = [](const Vec2& a, const Vec2& b, const Vec2& c) { return cross2(b - a, c - a); };
  auto on_segment = [](const Vec2& a, const Vec2& b, const Vec2& p) {
    return std::min(a.x(), b.x()) - 1e-12 <= p.x() && p.x() <= std::max(a.x(), b.x()) + 1e-12 &&
           std::min(a.y(), b.y()) - 1e-12 <= p.y() && p.y() <= std::max(a.y(), b.y()) + 1e-12;
  };
  const double d1 = orient(q1, q2, p1), d2 = orient(q1, q2, p2);
  const double d3 = orient(p1, p2, q1), d4 = orient(p1, p2, q2);
  if (((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) && ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0)))
    return true;
  if (d1 == 0 && on_segment(q1, q2, p1)) return true;
  if (d2 == 0 && on_segment(q1, q2, p2)) return true;
  if (d3 == 0 && on_segment(p1, p2, q1)) return true;
  if (d4 == 0 && on_segment(p1, p2, q2)) return true;
  return false;
}

double distance_to_segment(const Vec2& p, const Vec2& a, const Vec2& b) {
  const Vec2 ab = b - a;
  const double len2 = ab.squaredNorm();
  const double s = len2 > 0.0 ? std::clamp((p - a).dot(ab) / len2, 0.0, 1.0) : 0.0;
  return (p - (a + s * ab)).norm();
}

// Collects schema issues with dotted field paths while reading.
class Reader {
 public:
  explicit Reader(std::vector<std::string>& issues) : issues_(issues) {}

  const json* member(const json& obj, const std::string& key, const std::string& path,
                     bool required) {
    if (!obj.is_object()) return nullptr;
    auto it = obj.find(key);
    if (it == obj.end() || it->is_null()) {
      if (required) issues_.push_back(path + ": required field missing");
      return nullptr;
    }
    return &*it;
  }

  double number(const json& obj, const std::string& key, const std::string& path, double def,
                bool required = false) {
    const json* v = member(obj, key, path, required);
    if (!v) return def;
    if (!v->is_number()) {
      issues_.push_back(path + ": expected a number");
      return def;
    }
    return v->get<double>();
  }

  int integer(const json& obj, const std::string& key, const std::string& path, int def) {
    const json* v = member(obj, key, path, false);
    if (!v) return def;
    if (!v->is_number_integer()) {
      issues_.push_back(path + ": expected an integer");
      return def;
    }
    return v->get<int>();
  }

  std::string string(const json& obj, const std::string& key, const std::string& path,
                     const std::string& def, bool required = false) {
    const json* v = member(obj, key, path, required);
    if (!v) return def;
    if (!v->is_string()) {
      issues_.push_back(path + ": expected a string");
      return def;
    }
    return v->get<std::string>();
  }

  std::optional<std::vector<double>> numbers(const json& v, const std::string& path,
                                             std::size_t expected = 0) {
    if (!v.is_array()) {
      issues_.push_back(path + ": expected an array of numbers");
      return std::nullopt;
    }
    std::vector<double> out;
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (!v[i].is_number()) {
        issues_.push_back(path + "[" + std::to_string(i) + "]: expected a number");
        return std::nullopt;
      }
      out.push_back(v[i].get<double>());
    }
    if (expected && out.size() != expected) {
      issues_.push_back(path + ": expected " + std::to_string(expected) + " entries, got " +
                        std::to_string(out.size()));
      return std::nullopt;
    }
    return out;
  }

  Vec2 vec2(const json& obj, const std::string& key, const std::string& path, const Vec2& def,
            bool required = false) {
    const json* v = member(obj, key, path, required);
    if (!v) return def;
    auto n = numbers(*v, path, 2);
    return n ? Vec2((*n)[0], (*n)[1]) : def;
  }

  std::vector<Vec2> points(const json& obj, const std::string& key, const std::string& path,
                           bool required) {
    std::vector<Vec2> out;
    const json* v = member(obj, key, path, required);
    if (!v) return out;
    if (!v->is_array()) {
      issues_.push_back(path + ": expected an array of [x, z] pairs");
      return out;
    }
    for (std::size_t i = 0; i < v->size(); ++i) {
      auto n = numbers((*v)[i], path + "[" + std::to_string(i) + "]", 2);
      if (n) out.emplace_back((*n)[0], (*n)[1]);
    }
    return out;
  }

  template <std::size_t N>
  std::array<double, N> fixed(const json& obj, const std::string& key, const std::string& path,
                              const std::array<double, N>& def) {
    const json* v = member(obj, key, path, false);
    if (!v) return def;
    auto n = numbers(*v, path, N);
    if (!n) return def;
    std::array<double, N> out;
    std::copy(n->begin(), n->end(), out.begin());
    return out;
  }

 private:
  std::vector<std::string>& issues_;
};

json vec2_json(const Vec2& v) { return json::array({v.x(), v.y()}); }

json points_json(const std::vector<Vec2>& pts) {
  json a = json::array();
  for (const auto& p : pts) a.push_back(vec2_json(p));
  return a;
}

}  // namespace

SceneError::SceneError(std::vector<std::string> issues)
    : Error(join_issues(issues)), issues_(std::move(issues)) {}

std::vector<Vec2> Scene::object_polygon() const {
  std::vector<Vec2> out;
  for (const auto& p : object.polygon_mm) out.push_back(p - object.cog_mm);
  return out;
}

PusherContact Scene::pusher_contact(std::size_t index) const {
  const ScenePusher& sp = pushers.at(index);
  PusherContact pc;
  pc.label = sp.label;
  pc.mu = sp.mu;
  for (std::size_t i = 0; i < sp.points_mm.size(); ++i) {
    const Vec2 n = i < sp.normals.size() ? sp.normals[i] : Vec2::UnitY();
    pc.points.push_back({sp.points_mm[i] - object.cog_mm, n.normalized()});
  }
  return pc;
}

std::optional<std::size_t> Scene::pusher_index(const std::string& label) const {
  for (std::size_t i = 0; i < pushers.size(); ++i)
    if (pushers[i].label == label) return i;
  return std::nullopt;
}

Vec2 Scene::in_plane_gravity() const {
  return gravity.vector_mps2 * std::cos(deg2rad(gravity.tilt_deg));
}

LimitSurfaceModel Scene::limit_surface() const {
  return LimitSurfaceModel::from_grasp(grasp.mu, grasp.force_N, grasp.n_fingers,
                                       grasp.patch_radius_mm, grasp.pressure_constant);
}

std::vector<std::string> validate_scene(const Scene& s) {
  std::vector<std::string> issues;
  if (s.schema_version != kSceneSchemaVersion)
    issues.push_back("schema_version: unsupported version " + std::to_string(s.schema_version));

  const auto& poly = s.object.polygon_mm;
  const std::size_t n = poly.size();
  if (n < 3) {
    issues.push_back("object.polygon_mm: needs at least 3 vertices");
  } else {
    double area2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) area2 += cross2(poly[i], poly[(i + 1) % n]);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) {
        const bool adjacent = j == i + 1 || (i == 0 && j == n - 1);
        if (adjacent) continue;
        if (segments_intersect(poly[i], poly[(i + 1) % n], poly[j], poly[(j + 1) % n]))
          issues.push_back("object.polygon_mm: edges " + std::to_string(i) + " and " +
                           std::to_string(j) + " intersect (polygon not simple)");
      }
    if (!(area2 > 0.0)) issues.push_back("object.polygon_mm: vertices must be counterclockwise");
  }
  if (!(s.object.mass_g > 0.0)) issues.push_back("object.mass_g: must be > 0");
  if (!(s.grasp.force_N > 0.0)) issues.push_back("grasp.force_N: must be > 0");
  if (!(s.grasp.mu > 0.0)) issues.push_back("grasp.mu: must be > 0");
  if (!(s.grasp.patch_radius_mm > 0.0)) issues.push_back("grasp.patch_radius_mm: must be > 0");
  if (!(s.grasp.pressure_constant > 0.0 && s.grasp.pressure_constant <= 1.0))
    issues.push_back("grasp.pressure_constant: must lie in (0, 1]");
  if (s.grasp.n_fingers < 1) issues.push_back("grasp.n_fingers: must be >= 1");
  if (s.pushers.empty()) issues.push_back("pushers: at least one pusher required");

  for (std::size_t i = 0; i < s.pushers.size(); ++i) {
    const ScenePusher& p = s.pushers[i];
    const std::string path = "pushers[" + std::to_string(i) + "]";
    if (p.label.empty()) issues.push_back(path + ".label: must be non-empty");
    for (std::size_t j = 0; j < i; ++j)
      if (s.pushers[j].label == p.label && !p.label.empty())
        issues.push_back(path + ".label: duplicate label '" + p.label + "'");
    if (p.points_mm.empty() || p.points_mm.size() > 2)
      issues.push_back(path + ".points_mm: a pusher has 1 or 2 contact points");
    if (p.normals.size() != p.points_mm.size())
      issues.push_back(path + ".normals: one normal per contact point required");
    for (std::size_t k = 0; k < p.normals.size(); ++k)
      if (!(p.normals[k].norm() > 0.0))
        issues.push_back(path + ".normals[" + std::to_string(k) + "]: must be nonzero");
    if (!(p.mu >= 0.0)) issues.push_back(path + ".mu: must be >= 0");
    if (n >= 3)
      for (std::size_t k = 0; k < p.points_mm.size(); ++k) {
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t e = 0; e < n; ++e)
          best = std::min(best, distance_to_segment(p.points_mm[k], poly[e], poly[(e + 1) % n]));
        if (best > 1e-6)
          issues.push_back(path + ".points_mm[" + std::to_string(k) +
                           "]: not on the object outline");
      }
  }

  const ScenePlanner& pl = s.planner;
  if (!(pl.step > 0.0)) issues.push_back("planner.step: must be > 0");
  if (!(pl.length_scale > 0.0)) issues.push_back("planner.length_scale: must be > 0");
  for (int k = 0; k < 3; ++k)
    if (!(pl.goal_tolerance[k] > 0.0))
      issues.push_back("planner.goal_tolerance: entries must be > 0");
  if (!(pl.t_init > 0.0)) issues.push_back("planner.t_init: must be > 0");
  if (pl.max_fail < 1) issues.push_back("planner.max_fail: must be >= 1");
  if (!(pl.rewire_radius > 0.0)) issues.push_back("planner.rewire_radius: must be > 0");
  if (!(pl.goal_bias >= 0.0 && pl.goal_bias <= 1.0))
    issues.push_back("planner.goal_bias: must lie in [0, 1]");
  if (pl.max_iterations < 1) issues.push_back("planner.max_iterations: must be >= 1");
  if (!(pl.bounds_x[0] < pl.bounds_x[1]) || !(pl.bounds_z[0] < pl.bounds_z[1]) ||
      !(pl.bounds_theta_deg[0] < pl.bounds_theta_deg[1]))
    issues.push_back("planner.bounds: each range must be well ordered");
  return issues;
}

void resolve_default_bounds(Scene& s) {
  const auto poly = s.object_polygon();
  if (poly.empty()) return;
  double xmin = poly[0].x(), xmax = xmin, zmin = poly[0].y(), zmax = zmin;
  for (const auto& p : poly) {
    xmin = std::min(xmin, p.x());
    xmax = std::max(xmax, p.x());
    zmin = std::min(zmin, p.y());
    zmax = std::max(zmax, p.y());
  }
  const double r = s.grasp.patch_radius_mm;
  const Vec2 f = s.grasp.finger_center_mm;
  // At theta = 0 the finger sits at f - q in the object frame.
  s.planner.bounds_x = {f.x() - xmax - r, f.x() - xmin + r};
  s.planner.bounds_z = {f.y() - zmax - r, f.y() - zmin + r};
}

Scene parse_scene_text(const std::string& text, const std::string& source) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i < std::min(e.byte > 0 ? e.byte - 1 : 0, text.size()); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw SceneError({source + ":" + std::to_string(line) + ":" + std::to_string(col) +
                      ": JSON syntax error: " + e.what()});
  }

  std::vector<std::string> issues;
  Reader rd(issues);
  Scene s;
  if (!doc.is_object()) throw SceneError({source + ": top level must be a JSON object"});

  s.schema_version = rd.integer(doc, "schema_version", "schema_version", -1);
  if (!doc.contains("schema_version")) issues.push_back("schema_version: required field missing");
  s.name = rd.string(doc, "name", "name", "");
  s.notes = rd.string(doc, "notes", "notes", "");

  static const json empty = json::object();
  const json* obj = rd.member(doc, "object", "object", true);
  const json& o = obj ? *obj : empty;
  s.object.name = rd.string(o, "name", "object.name", "");
  s.object.material = rd.string(o, "material", "object.material", "");
  if (const json* d = rd.member(o, "dims_mm", "object.dims_mm", false))
    if (auto v = rd.numbers(*d, "object.dims_mm")) s.object.dims_mm = *v;
  s.object.polygon_mm = rd.points(o, "polygon_mm", "object.polygon_mm", true);
  s.object.mass_g = rd.number(o, "mass_g", "object.mass_g", 0.0, true);
  s.object.cog_mm = rd.vec2(o, "cog_mm", "object.cog_mm", Vec2::Zero());

  const json* grav = rd.member(doc, "gravity", "gravity", false);
  const json& g = grav ? *grav : empty;
  s.gravity.vector_mps2 = rd.vec2(g, "vector_mps2", "gravity.vector_mps2", Vec2(0.0, -9.81));
  s.gravity.tilt_deg = rd.number(g, "tilt_deg", "gravity.tilt_deg", 0.0);

  const json* gr = rd.member(doc, "grasp", "grasp", true);
  const json& gp = gr ? *gr : empty;
  SceneGrasp dg;
  s.grasp.finger_center_mm = rd.vec2(gp, "finger_center_mm", "grasp.finger_center_mm", dg.finger_center_mm);
  s.grasp.patch_radius_mm = rd.number(gp, "patch_radius_mm", "grasp.patch_radius_mm", dg.patch_radius_mm);
  s.grasp.pressure_constant = rd.number(gp, "pressure_constant", "grasp.pressure_constant", dg.pressure_constant);
  s.grasp.n_fingers = rd.integer(gp, "n_fingers", "grasp.n_fingers", dg.n_fingers);
  s.grasp.force_N = rd.number(gp, "force_N", "grasp.force_N", dg.force_N, true);
  s.grasp.mu = rd.number(gp, "mu", "grasp.mu", dg.mu, true);

  if (const json* ps = rd.member(doc, "pushers", "pushers", true)) {
    if (!ps->is_array()) {
      issues.push_back("pushers: expected an array");
    } else {
      for (std::size_t i = 0; i < ps->size(); ++i) {
        const std::string path = "pushers[" + std::to_string(i) + "]";
        const json& pj = (*ps)[i];
        if (!pj.is_object()) {
          issues.push_back(path + ": expected an object");
          continue;
        }
        ScenePusher p;
        p.label = rd.string(pj, "label", path + ".label", "", true);
        p.points_mm = rd.points(pj, "points_mm", path + ".points_mm", true);
        p.normals = rd.points(pj, "normals", path + ".normals", true);
        p.mu = rd.number(pj, "mu", path + ".mu", 0.0, true);
        s.pushers.push_back(std::move(p));
      }
    }
  }

  const json* plj = rd.member(doc, "planner", "planner", false);
  const json& pl = plj ? *plj : empty;
  ScenePlanner def;
  s.planner.step = rd.number(pl, "step", "planner.step", def.step);
  s.planner.goal_tolerance = rd.fixed<3>(pl, "goal_tolerance", "planner.goal_tolerance", def.goal_tolerance);
  s.planner.cost_threshold = rd.number(pl, "cost_threshold", "planner.cost_threshold", def.cost_threshold);
  s.planner.same_pusher_cost = rd.number(pl, "same_pusher_cost", "planner.same_pusher_cost", def.same_pusher_cost);
  s.planner.switch_pusher_cost = rd.number(pl, "switch_pusher_cost", "planner.switch_pusher_cost", def.switch_pusher_cost);
  s.planner.length_scale = rd.number(pl, "length_scale", "planner.length_scale", def.length_scale);
  s.planner.t_init = rd.number(pl, "t_init", "planner.t_init", def.t_init);
  s.planner.max_fail = rd.integer(pl, "max_fail", "planner.max_fail", def.max_fail);
  s.planner.rewire_radius = rd.number(pl, "rewire_radius", "planner.rewire_radius", 3.0 * s.planner.step);
  s.planner.goal_bias = rd.number(pl, "goal_bias", "planner.goal_bias", def.goal_bias);
  s.planner.max_iterations = rd.integer(pl, "max_iterations", "planner.max_iterations", def.max_iterations);
  s.planner.bounds_theta_deg = rd.fixed<2>(pl, "bounds_theta_deg", "planner.bounds_theta_deg", def.bounds_theta_deg);

  resolve_default_bounds(s);
  s.planner.bounds_x = rd.fixed<2>(pl, "bounds_x", "planner.bounds_x", s.planner.bounds_x);
  s.planner.bounds_z = rd.fixed<2>(pl, "bounds_z", "planner.bounds_z", s.planner.bounds_z);

  // Plain-data issues first, then invariants over what could be read.
  for (auto& i : validate_scene(s))
    if (std::find(issues.begin(), issues.end(), i) == issues.end()) issues.push_back(i);
  if (!issues.empty()) {
    for (auto& i : issues) i = source + ": " + i;
    throw SceneError(std::move(issues));
  }
  return s;
}

Scene parse_scene(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SceneError({path + ": cannot open scene file"});
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_scene_text(ss.str(), path);
}

std::string emit_scene(const Scene& s) {
  json doc;
  doc["schema_version"] = s.schema_version;
  doc["name"] = s.name;
  doc["notes"] = s.notes;
  doc["object"] = {{"name", s.object.name},
                   {"material", s.object.material},
                   {"dims_mm", s.object.dims_mm},
                   {"polygon_mm", points_json(s.object.polygon_mm)},
                   {"mass_g", s.object.mass_g},
                   {"cog_mm", vec2_json(s.object.cog_mm)}};
  doc["gravity"] = {{"vector_mps2", vec2_json(s.gravity.vector_mps2)},
                    {"tilt_deg", s.gravity.tilt_deg}};
  doc["grasp"] = {{"finger_center_mm", vec2_json(s.grasp.finger_center_mm)},
                  {"patch_radius_mm", s.grasp.patch_radius_mm},
                  {"pressure_constant", s.grasp.pressure_constant},
                  {"n_fingers", s.grasp.n_fingers},
                  {"force_N", s.grasp.force_N},
                  {"mu", s.grasp.mu}};
  json ps = json::array();
  for (const auto& p : s.pushers)
    ps.push_back({{"label", p.label},
                  {"points_mm", points_json(p.points_mm)},
                  {"normals", points_json(p.normals)},
                  {"mu", p.mu}});
  doc["pushers"] = ps;
  const ScenePlanner& pl = s.planner;
  doc["planner"] = {{"step", pl.step},
                    {"goal_tolerance", pl.goal_tolerance},
                    {"cost_threshold", pl.cost_threshold},
                    {"same_pusher_cost", pl.same_pusher_cost},
                    {"switch_pusher_cost", pl.switch_pusher_cost},
                    {"length_scale", pl.length_scale},
                    {"t_init", pl.t_init},
                    {"max_fail", pl.max_fail},
                    {"rewire_radius", pl.rewire_radius},
                    {"goal_bias", pl.goal_bias},
                    {"max_iterations", pl.max_iterations},
                    {"bounds_x", pl.bounds_x},
                    {"bounds_z", pl.bounds_z},
                    {"bounds_theta_deg", pl.bounds_theta_deg}};
  return doc.dump(2) + "\n";
}

}  // namespace motioncone
