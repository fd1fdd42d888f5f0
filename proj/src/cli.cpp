#include "motioncone/cli.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>

#include <CLI11.hpp>

#include "log.hpp"
#include "motioncone/errors.hpp"
#include "motioncone/io.hpp"
#include "motioncone/planner.hpp"
#include "motioncone/push_dynamics.hpp"
#include "motioncone/scene.hpp"

namespace motioncone {

namespace {

struct InvalidInput : Error {
  using Error::Error;
};

std::vector<double> split_numbers(const std::string& text, char sep, const std::string& what) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, sep)) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (item.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw InvalidInput(what + ": cannot parse '" + item + "' as a number");
    }
  }
  return out;
}

PlanarPose parse_pose(const std::string& text, const std::string& what) {
  const auto v = split_numbers(text, ',', what);
  if (v.size() != 3) throw InvalidInput(what + ": expected \"x,z,theta_deg\"");
  return {v[0], v[1], deg2rad(v[2])};
}

ValidationRanges parse_ranges(const std::string& text) {
  std::stringstream ss(text);
  std::string part;
  std::vector<std::array<double, 2>> r;
  while (std::getline(ss, part, ',')) {
    const auto v = split_numbers(part, ':', "--ranges");
    if (v.size() != 2) throw InvalidInput("--ranges: expected \"x0:x1,z0:z1,t0:t1\"");
    if (!(v[0] <= v[1])) throw InvalidInput("--ranges: range '" + part + "' is not well ordered");
    r.push_back({v[0], v[1]});
  }
  if (r.size() != 3) throw InvalidInput("--ranges: expected three ranges");
  return {r[0], r[1], r[2]};
}

void write_output(const std::string& path, const std::string& content, std::ostream& out) {
  if (path == "-") {
    out << content;
    out.flush();
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw InvalidInput("cannot open '" + path + "' for writing");
  f << content;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidInput("cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::size_t pusher_by_label(const Scene& scene, const std::string& label) {
  const auto idx = scene.pusher_index(label);
  if (!idx) {
    std::string known;
    for (const auto& p : scene.pushers) known += (known.empty() ? "" : ", ") + p.label;
    throw InvalidInput("unknown pusher '" + label + "' (scene has: " + known + ")");
  }
  return *idx;
}

}  // namespace

void configure_logging() {
  auto logger = detail::logger();
  const char* env = std::getenv("MOTIONCONE_LOG");
  const std::string level = env ? env : "error";
  if (level == "debug")
    logger->set_level(spdlog::level::debug);
  else if (level == "info")
    logger->set_level(spdlog::level::info);
  else
    logger->set_level(spdlog::level::err);
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Motion cones for prehensile pushing and in-hand regrasp planning", "motioncone"};
  app.require_subcommand(1);

  std::string scene_path, out_path, goal_text, start_text = "0,0,0", pose_text = "0,0,0";
  std::string pusher_label, ranges_text = "0:10,-5:5,-35:35", traj_path, iter_log, summary_path;
  std::uint64_t seed = 0;
  int n = 2000;
  int max_iterations = -1;

  auto* plan_cmd = app.add_subcommand("plan", "Plan a regrasp with stable pushes");
  plan_cmd->add_option("--scene", scene_path, "Scene file")->required();
  plan_cmd->add_option("--goal", goal_text, "Goal pose \"x,z,theta_deg\"")->required();
  plan_cmd->add_option("--start", start_text, "Start pose \"x,z,theta_deg\"");
  plan_cmd->add_option("--seed", seed, "Random seed");
  plan_cmd->add_option("--out", out_path, "Trajectory JSON, - for stdout")->required();
  plan_cmd->add_option("--iter-log", iter_log, "Per-iteration CSV (default <out>.log.csv)");
  plan_cmd->add_option("--max-iterations", max_iterations, "Override the scene's iteration cap");

  auto* cone_cmd = app.add_subcommand("cone", "Dump the wrench and motion cones at a pose");
  cone_cmd->add_option("--scene", scene_path, "Scene file")->required();
  cone_cmd->add_option("--pose", pose_text, "Object pose \"x,z,theta_deg\"");
  cone_cmd->add_option("--pusher", pusher_label, "Pusher label")->required();
  cone_cmd->add_option("--out", out_path, "CSV, - for stdout")->required();

  auto* val_cmd = app.add_subcommand("validate", "Monte Carlo stick/slip validation");
  val_cmd->add_option("--scene", scene_path, "Scene file")->required();
  val_cmd->add_option("--pusher", pusher_label, "Pusher label")->required();
  val_cmd->add_option("--n", n, "Number of sampled pushes");
  val_cmd->add_option("--ranges", ranges_text, "Displacement box \"x0:x1,z0:z1,t0:t1\" (mm, mm, deg)");
  val_cmd->add_option("--pose", pose_text, "Object pose \"x,z,theta_deg\"");
  val_cmd->add_option("--seed", seed, "Random seed");
  val_cmd->add_option("--out", out_path, "Per-sample CSV, - for stdout")->required();
  val_cmd->add_option("--summary", summary_path, "Summary JSON (default <out>.summary.json)");

  auto* sim_cmd = app.add_subcommand("simulate", "Replay and audit a trajectory");
  sim_cmd->add_option("--scene", scene_path, "Scene file")->required();
  sim_cmd->add_option("--traj", traj_path, "Trajectory JSON")->required();
  sim_cmd->add_option("--out", out_path, "Audit JSON, - for stdout")->required();

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "motioncone: " << e.what() << "\n";
    return e.get_exit_code() == 0 ? kExitOk : kExitInvalidInput;
  }

  try {
    Scene scene;
    try {
      scene = parse_scene(scene_path);
    } catch (const SceneError& e) {
      err << "motioncone: " << e.what() << "\n";
      return kExitInvalidInput;
    }

    if (plan_cmd->parsed()) {
      PlannerParams params = PlannerParams::from_scene(scene, seed);
      if (max_iterations > 0) params.max_iterations = max_iterations;
      const PlanarPose start = parse_pose(start_text, "--start");
      const PlanarPose goal = parse_pose(goal_text, "--goal");
      if (!params.in_bounds(start) || !params.in_bounds(goal))
        throw InvalidInput("start or goal outside the scene's sampling bounds");
      if (!grasp_maintained(scene, start)) throw InvalidInput("start pose does not hold the grasp");
      PlanResult res;
      try {
        res = plan(scene, start, goal, params);
      } catch (const InfeasibleStart& e) {
        err << "motioncone: " << e.what() << "\n";
        return kExitInfeasible;
      }
      const std::string log_path = !iter_log.empty() ? iter_log
                                   : out_path != "-"  ? out_path + ".log.csv"
                                                      : "";
      if (!log_path.empty()) write_output(log_path, iteration_log_csv(res.log), out);
      if (!res.found) {
        err << "motioncone: no plan found within " << params.max_iterations << " iterations\n";
        return kExitInfeasible;
      }
      write_output(out_path, trajectory_to_json(res.trajectory), out);
      return kExitOk;
    }

    if (cone_cmd->parsed()) {
      const std::size_t k = pusher_by_label(scene, pusher_label);
      const PushConfig cfg = PushConfig::from_scene(scene, parse_pose(pose_text, "--pose"), k);
      MotionCone cone;
      try {
        cone = polyhedral_cone(cfg);
      } catch (const NoPositiveRoot& e) {
        err << "motioncone: " << e.what() << "\n";
        return kExitInfeasible;
      } catch (const AmbiguousRoot& e) {
        err << "motioncone: " << e.what() << "\n";
        return kExitInfeasible;
      }
      write_output(out_path, cone_csv(cone), out);
      return kExitOk;
    }

    if (val_cmd->parsed()) {
      if (n < 1) throw InvalidInput("--n must be >= 1");
      const std::size_t k = pusher_by_label(scene, pusher_label);
      ValidationReport rep;
      try {
        rep = monte_carlo_validation(scene, k, n, parse_ranges(ranges_text), seed,
                                     parse_pose(pose_text, "--pose"));
      } catch (const NoPositiveRoot& e) {
        err << "motioncone: " << e.what() << "\n";
        return kExitInfeasible;
      }
      write_output(out_path, validation_csv(rep), out);
      const std::string sp = !summary_path.empty() ? summary_path
                             : out_path != "-"      ? out_path + ".summary.json"
                                                    : "";
      if (!sp.empty()) write_output(sp, validation_summary_json(rep), out);
      detail::logger()->info("validate: agreement outside the boundary band {:.4f}", rep.agreement_rate());
      return kExitOk;
    }

    if (sim_cmd->parsed()) {
      Trajectory traj;
      try {
        traj = trajectory_from_json(read_file(traj_path));
      } catch (const InvalidInput&) {
        throw;
      } catch (const Error& e) {
        throw InvalidInput(e.what());
      }
      const SimulationReport rep = simulate_trajectory(scene, traj, scene.planner.step);
      write_output(out_path, simulation_json(rep), out);
      if (!rep.pass()) {
        const SimulationStep& s = rep.steps[rep.first_failure];
        err << "motioncone: audit failed at step " << s.step << " (segment " << s.segment
            << ", pusher " << s.pusher << "): " << s.issue << "\n";
        return kExitInfeasible;
      }
      return kExitOk;
    }
  } catch (const InvalidInput& e) {
    err << "motioncone: " << e.what() << "\n";
    return kExitInvalidInput;
  } catch (const std::invalid_argument& e) {
    err << "motioncone: " << e.what() << "\n";
    return kExitInvalidInput;
  } catch (const std::exception& e) {
    err << "motioncone: internal error: " << e.what() << "\n";
    return kExitInternal;
  }
  return kExitInternal;
}

}  // namespace motioncone
