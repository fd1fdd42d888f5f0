#include "motioncone/io.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

#include <json.hpp>

#include "motioncone/errors.hpp"

namespace motioncone {

using nlohmann::json;

namespace {

std::string num(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

json pose_json(const PlanarPose& q) { return json::array({q.x, q.z, rad2deg(q.theta)}); }

}  // namespace

std::string trajectory_to_json(const Trajectory& traj, bool with_wall_time) {
  json doc;
  json segs = json::array();
  for (const auto& s : traj.segments) {
    json wps = json::array();
    for (const auto& q : s.waypoints) wps.push_back(pose_json(q));
    segs.push_back({{"pusher", s.pusher}, {"waypoints", wps}});
  }
  doc["segments"] = segs;
  doc["cost"] = traj.cost;
  doc["switches"] = traj.switches;
  doc["seed"] = traj.seed;
  doc["iterations"] = traj.iterations;
  if (with_wall_time) doc["wall_time_s"] = traj.wall_time_s;
  return doc.dump(2) + "\n";
}

Trajectory trajectory_from_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(std::string("trajectory: JSON syntax error: ") + e.what());
  }
  Trajectory t;
  try {
    for (const auto& s : doc.at("segments")) {
      TrajectorySegment seg;
      seg.pusher = s.at("pusher").get<std::string>();
      for (const auto& w : s.at("waypoints")) {
        if (!w.is_array() || w.size() != 3)
          throw Error("trajectory: waypoint must be [x, z, theta_deg]");
        seg.waypoints.emplace_back(w[0].get<double>(), w[1].get<double>(),
                                   deg2rad(w[2].get<double>()));
      }
      t.segments.push_back(std::move(seg));
    }
    t.cost = doc.value("cost", 0.0);
    t.switches = doc.value("switches", 0);
    t.seed = doc.value("seed", std::uint64_t{0});
    t.iterations = doc.value("iterations", 0);
    t.wall_time_s = doc.value("wall_time_s", 0.0);
  } catch (const json::exception& e) {
    throw Error(std::string("trajectory: ") + e.what());
  }
  return t;
}

std::string iteration_log_csv(const std::vector<IterationRecord>& log) {
  std::ostringstream os;
  os << "iteration,event,tree_size,temperature,best_goal_cost\n";
  for (const auto& r : log)
    os << r.iteration << ',' << r.event << ',' << r.tree_size << ',' << num(r.temperature) << ','
       << num(r.best_goal_cost) << '\n';
  return os.str();
}

std::string cone_csv(const MotionCone& cone) {
  std::ostringstream os;
  os << "panel,index,c0,c1,c2,magnitude\n";
  const std::size_t n = cone.generators.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Wrench& w = cone.pusher_wrenches[i];
    os << "pusher_wrench," << i << ',' << num(w.fx) << ',' << num(w.fz) << ',' << num(w.my) << ','
       << num(cone.pusher_magnitude[i]) << '\n';
  }
  for (std::size_t i = 0; i < n; ++i) {
    const Wrench& w = cone.grasp_wrenches[i];
    os << "grasp_wrench," << i << ',' << num(w.fx) << ',' << num(w.fz) << ',' << num(w.my) << ','
       << num(cone.source.limit_surface().f_max()) << '\n';
  }
  for (std::size_t i = 0; i < n; ++i) {
    const Twist& t = cone.generators[i];
    os << "motion_cone," << i << ',' << num(t.vx) << ',' << num(t.vz) << ',' << num(t.wy) << ",1\n";
  }
  return os.str();
}

std::string validation_csv(const ValidationReport& rep) {
  std::ostringstream os;
  os << "idx,dx_mm,dz_mm,dtheta_deg,predicted,oracle,boundary_flag\n";
  for (const auto& s : rep.samples)
    os << s.idx << ',' << num(s.displacement.x()) << ',' << num(s.displacement.y()) << ','
       << num(rad2deg(s.displacement.z())) << ',' << (s.predicted_stick ? "stick" : "slip") << ','
       << (s.oracle_stick ? "stick" : "slip") << ',' << (s.boundary ? 1 : 0) << '\n';
  return os.str();
}

std::string validation_summary_json(const ValidationReport& rep) {
  json doc;
  doc["n_samples"] = rep.n_samples;
  doc["pusher"] = rep.pusher;
  doc["seed"] = rep.seed;
  doc["ranges"] = {{"x_mm", rep.ranges.x_mm},
                   {"z_mm", rep.ranges.z_mm},
                   {"theta_deg", rep.ranges.theta_deg}};
  doc["counts"] = {{"predicted_stick_oracle_stick", rep.confusion[0][0]},
                   {"predicted_stick_oracle_slip", rep.confusion[0][1]},
                   {"predicted_slip_oracle_stick", rep.confusion[1][0]},
                   {"predicted_slip_oracle_slip", rep.confusion[1][1]},
                   {"boundary_band", rep.n_boundary},
                   {"outside_band", rep.n_outside_band},
                   {"agree_outside_band", rep.n_agree_outside_band}};
  doc["agreement_rate"] = rep.agreement_rate();
  return doc.dump(2) + "\n";
}

SimulationReport simulate_trajectory(const Scene& scene, const Trajectory& traj, double step) {
  SimulationReport rep;
  const TwistMetric m(scene.planner.length_scale);
  int counter = 0;
  for (int si = 0; si < static_cast<int>(traj.segments.size()); ++si) {
    const TrajectorySegment& seg = traj.segments[si];
    const auto idx = scene.pusher_index(seg.pusher);
    for (std::size_t k = 0; k + 1 < seg.waypoints.size(); ++k) {
      SimulationStep s;
      s.segment = si;
      s.step = counter++;
      s.pusher = seg.pusher;
      s.from = seg.waypoints[k];
      s.to = seg.waypoints[k + 1];
      const Twist d = displacement(s.from, s.to);
      s.length = m.norm(d);
      s.grasp_ok = grasp_maintained(scene, s.to);
      if (!idx) {
        s.issue = "unknown pusher '" + seg.pusher + "'";
      } else if (!(s.length > 0.0)) {
        s.issue = "zero-length step";
      } else if (s.length > step * (1.0 + 1e-6)) {
        s.issue = "step longer than the unit step";
      } else {
        PushConfig cfg = PushConfig::from_scene(scene, s.from, *idx);
        const Twist u = m.normalize(d);
        const StablePushCheck chk = check_stable_push(cfg, u);
        s.stable = chk.stable;
        s.residual = chk.residual;
        s.dissipation = chk.dissipation;
        try {
          const PushOutcome out = propagate(cfg, u, s.length);
          s.mode = to_string(out.mode);
          s.replay_error = m.distance(out.q_new, s.to);
        } catch (const ConeUnavailable& e) {
          s.mode = "unavailable";
        }
        if (!s.stable)
          s.issue = "twist outside the motion cone";
        else if (s.dissipation > 1e-12)
          s.issue = "positive dissipation";
        else if (!s.grasp_ok)
          s.issue = "grasp lost";
      }
      s.pass = s.issue.empty();
      if (s.pass)
        ++rep.n_pass;
      else if (rep.first_failure < 0)
        rep.first_failure = s.step;
      rep.steps.push_back(std::move(s));
    }
  }
  return rep;
}

std::string simulation_json(const SimulationReport& rep) {
  json steps = json::array();
  for (const auto& s : rep.steps)
    steps.push_back({{"step", s.step},
                     {"segment", s.segment},
                     {"pusher", s.pusher},
                     {"from", pose_json(s.from)},
                     {"to", pose_json(s.to)},
                     {"length", s.length},
                     {"stable", s.stable},
                     {"force_balance_residual", s.residual},
                     {"dissipation", s.dissipation},
                     {"grasp_maintained", s.grasp_ok},
                     {"propagate_mode", s.mode},
                     {"replay_error", s.replay_error},
                     {"pass", s.pass},
                     {"issue", s.issue}});
  json doc;
  doc["n_steps"] = rep.steps.size();
  doc["n_pass"] = rep.n_pass;
  doc["pass"] = rep.pass();
  doc["first_failure"] = rep.first_failure < 0 ? json(nullptr) : json(rep.first_failure);
  doc["steps"] = steps;
  return doc.dump(2) + "\n";
}

}  // namespace motioncone
