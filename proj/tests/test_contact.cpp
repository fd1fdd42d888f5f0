#include <doctest.h>

#include <cmath>
#include <random>

#include "motioncone/contact.hpp"
#include "motioncone/errors.hpp"
#include "oracles.hpp"

using namespace motioncone;

namespace {

const LimitSurfaceModel kLs = LimitSurfaceModel::from_grasp(0.5, 45.0, 2, 7.5, 0.6);

Wrench random_surface_wrench(std::mt19937_64& rng, const LimitSurfaceModel& ls) {
  const Vec3 u = oracle::random_unit(rng);
  return {u.x(), u.y(), u.z() * ls.rc()};
}

}  // namespace

TEST_CASE("limit surface construction") {
  CHECK(kLs.f_max() == doctest::Approx(2 * 0.5 * 45.0));
  CHECK(kLs.tau_max() == doctest::Approx(7.5 * 0.6 * 45.0));
  CHECK(kLs.rc() == doctest::Approx(4.5));
  const Vec3 d = kLs.A().diagonal();
  CHECK(d.x() == doctest::Approx(1.0 / (45.0 * 45.0)));
  CHECK(d.z() == doctest::Approx(1.0 / (202.5 * 202.5)));
  CHECK(kLs.A().llt().info() == Eigen::Success);
  CHECK_THROWS_AS(LimitSurfaceModel(0.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(LimitSurfaceModel(1.0, -1.0), std::invalid_argument);
}

TEST_CASE("pure translation gives an opposing tangential force") {
  const auto w = ls_wrench_from_twist(kLs, {1.0, 0.0, 0.0});
  CHECK(w.unit.fx == doctest::Approx(-1.0));
  CHECK(w.unit.fz == doctest::Approx(0.0));
  CHECK(w.unit.my == doctest::Approx(0.0));
  CHECK(w.full.fx == doctest::Approx(-kLs.f_max()));
}

TEST_CASE("pure rotation gives an opposing torque") {
  const auto w = ls_wrench_from_twist(kLs, {0.0, 0.0, 1.0});
  CHECK(w.unit.my / kLs.rc() == doctest::Approx(-1.0));
  CHECK(w.full.my == doctest::Approx(-kLs.tau_max()));
  CHECK(w.unit.fx == doctest::Approx(0.0));
}

TEST_CASE("zero twist is rejected") {
  CHECK_THROWS_AS(ls_wrench_from_twist(kLs, {0.0, 0.0, 0.0}), LimitSurfaceError);
}

TEST_CASE("surface normal ratios and unit residual") {
  std::mt19937_64 rng(21);
  std::normal_distribution<double> n(0.0, 1.0);
  const double rc = kLs.rc();
  for (int i = 0; i < 1000; ++i) {
    const Twist v{n(rng), n(rng), n(rng) * 0.2};
    const auto w = ls_wrench_from_twist(kLs, v);
    // The twist is the gradient direction A w: vx / wy = rc^2 fx / my.
    CHECK(v.vx / v.wy == doctest::Approx(rc * rc * w.unit.fx / w.unit.my).epsilon(1e-10));
    CHECK(v.vz / v.wy == doctest::Approx(rc * rc * w.unit.fz / w.unit.my).epsilon(1e-10));
    CHECK(std::abs(kLs.unit_residual(w.unit)) <= 1e-10);
    // Maximal dissipation: friction power is negative.
    CHECK(w.full.vec().dot(v.vec()) < 0.0);
  }
}

TEST_CASE("twist from wrench") {
  const ContactFrame id = ContactFrame::from_normal(Vec2::Zero(), Vec2::UnitY());
  const TwistMetric m(25.0);
  const Twist t = ls_twist_from_wrench(kLs, {-1.0, 0.0, 0.0}, id, m);
  CHECK(t.vx == doctest::Approx(1.0));
  CHECK(t.vz == doctest::Approx(0.0));
  const Twist r = ls_twist_from_wrench(kLs, {0.0, 0.0, -kLs.rc()}, id, m);
  CHECK(r.wy > 0.0);
  CHECK(r.vx == doctest::Approx(0.0));
  CHECK(r.vz == doctest::Approx(0.0));
  CHECK_THROWS_AS(ls_twist_from_wrench(kLs, {0.5, 0.0, 0.0}, id, m), LimitSurfaceError);
}

TEST_CASE("wrench -> twist -> wrench round trip") {
  std::mt19937_64 rng(22);
  const TwistMetric m(25.0);
  for (int i = 0; i < 1000; ++i) {
    const ContactFrame f = ContactFrame::from_angle({std::uniform_real_distribution<>(-30, 30)(rng), 3.0},
                                                    std::uniform_real_distribution<>(-1, 1)(rng));
    const Wrench w = random_surface_wrench(rng, kLs);
    const Twist t = ls_twist_from_wrench(kLs, w, f, m);
    const Vec3 vc = twist_jacobian(f) * t.vec();
    const auto back = ls_wrench_from_twist(kLs, Twist::from(vc));
    CHECK((back.unit.vec() - w.vec()).norm() <= 1e-10 * (1 + kLs.rc()));
  }
}

TEST_CASE("friction cone edges") {
  const double s = 1.0 / std::sqrt(2.0);
  auto e = friction_cone_edges(Vec2::UnitY(), 1.0);
  CHECK(std::abs(std::abs(e[0].x()) - s) < 1e-15);
  CHECK(e[0].x() == doctest::Approx(-e[1].x()));
  CHECK(e[0].y() == doctest::Approx(s));
  CHECK(e[1].y() == doctest::Approx(s));
  e = friction_cone_edges(Vec2::UnitY(), 0.0);
  CHECK((e[0] - Vec2::UnitY()).norm() == 0.0);
  CHECK((e[1] - Vec2::UnitY()).norm() == 0.0);
  e = friction_cone_edges(Vec2::UnitX(), 0.5);
  const Vec2 a = Vec2(1.0, 0.5).normalized(), b = Vec2(1.0, -0.5).normalized();
  const bool match = ((e[0] - a).norm() < 1e-15 && (e[1] - b).norm() < 1e-15) ||
                     ((e[0] - b).norm() < 1e-15 && (e[1] - a).norm() < 1e-15);
  CHECK(match);
}

TEST_CASE("point pusher at the origin") {
  const PusherContact p{"p", {{Vec2::Zero(), Vec2::UnitY()}}, 1.0};
  const auto cone = generalized_friction_cone(p);
  REQUIRE(cone.generators.size() == 2);
  const double s = 1.0 / std::sqrt(2.0);
  for (const auto& g : cone.generators) {
    CHECK(std::abs(g.fx) == doctest::Approx(s));
    CHECK(g.fz == doctest::Approx(s));
    CHECK(g.my == doctest::Approx(0.0));
  }
  CHECK(cone.generators[0].fx == doctest::Approx(-cone.generators[1].fx));
}

TEST_CASE("line pusher moments") {
  const double d = 10.0, h = 5.0, mu = 0.4;
  const PusherContact p{"line", {{{-d, -h}, Vec2::UnitY()}, {{d, -h}, Vec2::UnitY()}}, mu};
  const auto cone = generalized_friction_cone(p);
  REQUIRE(cone.generators.size() == 4);
  for (const auto& g : cone.generators) {
    CHECK(g.vec().norm() == doctest::Approx(1.0));
    CHECK(g.fz > 0.0);
    CHECK(std::abs(g.fx) == doctest::Approx(mu * g.fz));
    // my = z fx - x fz with z = -h and x = +-d
    const bool left = std::abs(g.my - (-h * g.fx + d * g.fz)) < 1e-12;
    const bool right = std::abs(g.my - (-h * g.fx - d * g.fz)) < 1e-12;
    CHECK((left || right));
  }
}

TEST_CASE("duplicate generators collapse") {
  const PusherContact p{"f", {{{0.0, -3.0}, Vec2::UnitY()}}, 0.0};
  CHECK(generalized_friction_cone(p).generators.size() == 1);
  const PusherContact bad{"bad", {}, 0.3};
  CHECK_THROWS(generalized_friction_cone(bad));
}

TEST_CASE("constituent friction cones map into the generalized cone") {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const PusherContact p{"line", {{{-50.0, 12.0}, Vec2::UnitX()}, {{-50.0, -12.0}, Vec2::UnitX()}}, 0.3};
  std::vector<Vec3> gens;
  for (const auto& g : generalized_friction_cone(p).generators) gens.push_back(g.vec());
  for (int i = 0; i < 1000; ++i) {
    const auto& pt = p.points[i % 2];
    const Vec2 t(pt.normal.y(), -pt.normal.x());
    const double s = (2.0 * u(rng) - 1.0) * p.mu;
    const Vec2 f = (pt.normal + s * t) * (0.1 + u(rng));
    CHECK(oracle::in_cone(gens, oracle::point_wrench(pt.position, f)));
  }
  // A force pulling on the face is outside.
  CHECK_FALSE(oracle::in_cone(gens, oracle::point_wrench({-50.0, 0.0}, {-1.0, 0.0})));
}
