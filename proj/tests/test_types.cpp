#include <doctest.h>

#include <numbers>
#include <random>

#include "motioncone/types.hpp"
#include "oracles.hpp"

using namespace motioncone;

namespace {

ContactFrame random_frame(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> pos(-60.0, 60.0), ang(-std::numbers::pi, std::numbers::pi);
  return ContactFrame::from_angle({pos(rng), pos(rng)}, ang(rng));
}

PlanarPose random_pose(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> pos(-50.0, 50.0), ang(-3.0, 3.0);
  return {pos(rng), pos(rng), ang(rng)};
}

void check_pose(const PlanarPose& a, const PlanarPose& b, double tol) {
  CHECK(std::abs(a.x - b.x) <= tol);
  CHECK(std::abs(a.z - b.z) <= tol);
  CHECK(std::abs(wrap_angle(a.theta - b.theta)) <= tol);
}

}  // namespace

TEST_CASE("wrap_angle maps into (-pi, pi]") {
  const double pi = std::numbers::pi;
  CHECK(wrap_angle(pi) == pi);
  CHECK(wrap_angle(-pi) == doctest::Approx(pi));
  CHECK(wrap_angle(3 * pi) == doctest::Approx(pi));
  CHECK(wrap_angle(0.5) == 0.5);
  CHECK(wrap_angle(2 * pi + 0.25) == doctest::Approx(0.25));
  CHECK(wrap_angle(-2 * pi - 0.25) == doctest::Approx(-0.25));
}

TEST_CASE("rotation about +Y") {
  const auto r = rotation_y(std::numbers::pi / 2);
  const Vec2 x = r * Vec2(1.0, 0.0);
  CHECK(x.x() == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(x.y() == doctest::Approx(-1.0));
}

TEST_CASE("twist_jacobian at the object origin is the identity") {
  const ContactFrame f = ContactFrame::from_normal(Vec2::Zero(), Vec2::UnitY());
  CHECK(f.valid());
  CHECK((twist_jacobian(f) - Mat3::Identity()).norm() == 0.0);
  CHECK((wrench_transform(f) - Mat3::Identity()).norm() == 0.0);
}

TEST_CASE("twist_jacobian lever arm") {
  const double h = 7.0;
  // Rigid-body velocity of the point (0, -h) under a unit +Y rotation is
  // w x r = (wy z, -wy x) = (-h, 0).
  const ContactFrame below{{0.0, -h}, Vec2::UnitX(), Vec2::UnitY()};
  const Vec3 v = twist_jacobian(below) * Vec3(0, 0, 1);
  CHECK(v.x() == doctest::Approx(-h));
  CHECK(v.y() == doctest::Approx(0.0));
  CHECK(v.z() == doctest::Approx(1.0));
  // The (h, 0, 1) image belongs to the mirrored offset under this convention.
  const ContactFrame above{{0.0, h}, Vec2::UnitX(), Vec2::UnitY()};
  const Vec3 w = twist_jacobian(above) * Vec3(0, 0, 1);
  CHECK(w.x() == doctest::Approx(h));
  CHECK(w.y() == doctest::Approx(0.0));
  CHECK(w.z() == doctest::Approx(1.0));
}

TEST_CASE("twist_jacobian matches the rigid-body point velocity") {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> n(0.0, 1.0);
  for (int i = 0; i < 1000; ++i) {
    const ContactFrame f = random_frame(rng);
    const Vec3 t(n(rng), n(rng), n(rng));
    const Vec3 expected = oracle::contact_twist(t, f.origin, f.tangent, f.normal);
    CHECK((twist_jacobian(f) * t - expected).norm() <= 1e-12 * (1 + expected.norm()));
  }
}

TEST_CASE("twist_jacobian is invertible and dual to wrench_transform") {
  std::mt19937_64 rng(12);
  std::normal_distribution<double> n(0.0, 1.0);
  for (int i = 0; i < 1000; ++i) {
    const ContactFrame f = random_frame(rng);
    const Mat3 j = twist_jacobian(f);
    CHECK((j * j.inverse() - Mat3::Identity()).norm() <= 1e-12);
    CHECK((wrench_transform(f) - j.transpose()).norm() == 0.0);
    const Vec3 t(n(rng), n(rng), n(rng));
    CHECK((j.inverse() * (j * t) - t).norm() <= 1e-12 * (1 + t.norm()));
  }
}

TEST_CASE("wrench_transform of a point force") {
  const double d = 4.0;
  const ContactFrame f{{d, 0.0}, Vec2::UnitX(), Vec2::UnitY()};
  const Vec3 w = wrench_transform(f) * Vec3(0, 1, 0);
  CHECK(w.x() == doctest::Approx(0.0));
  CHECK(w.y() == doctest::Approx(1.0));
  CHECK(w.z() == doctest::Approx(-d));
  CHECK(moment_y({d, 0.0}, {0.0, 1.0}) == doctest::Approx(-d));
}

TEST_CASE("power is invariant under the frame change") {
  std::mt19937_64 rng(13);
  std::normal_distribution<double> n(0.0, 1.0);
  for (int i = 0; i < 1000; ++i) {
    const ContactFrame f = random_frame(rng);
    const Vec3 w(n(rng), n(rng), n(rng)), v(n(rng), n(rng), n(rng));
    const double lhs = (wrench_transform(f) * w).dot(v);
    const double rhs = w.dot(twist_jacobian(f) * v);
    CHECK(std::abs(lhs - rhs) <= 1e-12 * (1 + w.norm() * (twist_jacobian(f) * v).norm()));
  }
}

TEST_CASE("apply_twist") {
  const PlanarPose q(3.0, -2.0, 0.4);
  check_pose(apply_twist(q, {1.0, 2.0, 0.3}, 0.0), q, 0.0);
  check_pose(apply_twist({}, {1.0, 0.0, 0.0}, 5.0), {5.0, 0.0, 0.0}, 1e-15);
  const PlanarPose r = apply_twist({}, {0.0, 0.0, 1.0}, 0.7);
  CHECK(r.theta == doctest::Approx(0.7));
  CHECK(r.x == 0.0);
  CHECK(r.z == 0.0);
  CHECK_THROWS_AS(apply_twist(q, {1, 0, 0}, -1.0), std::invalid_argument);
}

TEST_CASE("pose group laws") {
  std::mt19937_64 rng(14);
  for (int i = 0; i < 1000; ++i) {
    const PlanarPose a = random_pose(rng), b = random_pose(rng), c = random_pose(rng);
    check_pose(compose(compose(a, b), c), compose(a, compose(b, c)), 1e-10);
    check_pose(compose(a, inverse(a)), {}, 1e-10);
    check_pose(compose(inverse(a), a), {}, 1e-10);
    // displacement is the body-frame difference
    const Twist d = displacement(a, b);
    check_pose(compose(a, PlanarPose(d.vx, d.vz, d.wy)), b, 1e-10);
  }
}

TEST_CASE("TwistMetric") {
  const TwistMetric m(25.0);
  CHECK(m.norm({3.0, 4.0, 0.0}) == doctest::Approx(5.0));
  CHECK(m.norm({0.0, 0.0, 1.0}) == doctest::Approx(25.0));
  const Twist u = m.normalize({1.0, 2.0, 0.1});
  CHECK(m.norm(u) == doctest::Approx(1.0));
  CHECK(m.angle({1, 0, 0}, {0, 1, 0}) == doctest::Approx(std::numbers::pi / 2));
  CHECK(m.angle({1, 0, 0}, {2, 0, 0}) == doctest::Approx(0.0));
  CHECK(m.distance({}, {0.0, 0.0, std::numbers::pi / 180}) == doctest::Approx(25.0 * std::numbers::pi / 180));
  CHECK_THROWS_AS(TwistMetric(0.0), std::invalid_argument);
  CHECK_THROWS_AS(m.normalize({0, 0, 0}), std::invalid_argument);
}
