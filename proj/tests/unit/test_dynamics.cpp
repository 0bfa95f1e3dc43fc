#include "edgebrane/dynamics.hpp"
#include "edgebrane/errors.hpp"

#include <doctest.h>

#include <cmath>

using namespace edgebrane;

namespace {

double collapse_position(double accel, double x0, double t) {
  return x0 - (std::sqrt(1.0 + accel * accel * t * t) - 1.0) / accel;
}

/// Largest relative endpoint error against the closed form for X^0 <= t_max.
double collapse_error(int grid_points, double t_max) {
  SimulationConfig c;
  c.grid_points = grid_points;
  c.duration = 0.8;
  c.initial_data = "collapsing_string:a=1,x0=1";
  double worst = 0.0;
  evolve(initial_state(c), c, [&](const StringState& s) {
    for (const auto& e : s.endpoints) {
      const double t = e.position(0);
      if (t > t_max) continue;
      const double exact = collapse_position(1.0, 1.0, t);
      worst = std::max(worst, std::abs(std::abs(e.position(1)) - exact) / exact);
    }
  }, false);
  return worst;
}

struct EndpointLawError {
  double magnitude = 0.0;
  double angle = 0.0;
};

EndpointLawError endpoint_law(const SimulationConfig& c, double ratio) {
  EndpointLawError err;
  bool first = true;
  evolve(initial_state(c), c, [&](const StringState& s) {
    if (first) {
      first = false;
      return;
    }
    const auto d = diagnostics(s);
    for (int side = 0; side < 2; ++side) {
      err.magnitude = std::max(err.magnitude, std::abs(d.acceleration[side] - ratio));
      err.angle = std::max(err.angle, d.acceleration_angle[side]);
    }
  }, false);
  return err;
}

}  // namespace

TEST_SUITE("dynamics") {
  TEST_CASE("configuration validation") {
    SimulationConfig c;
    CHECK_NOTHROW(validate(c));
    auto bad = c;
    bad.grid_points = 8;
    CHECK_THROWS_AS(validate(bad), InvalidParameters);
    bad = c;
    bad.courant = 1.5;
    CHECK_THROWS_AS(validate(bad), InvalidParameters);
    bad = c;
    bad.duration = -1;
    CHECK_THROWS_AS(validate(bad), InvalidParameters);
    bad = c;
    bad.output_stride = 0;
    CHECK_THROWS_AS(validate(bad), InvalidParameters);
    bad = c;
    bad.initial_data = "sphere";
    CHECK_THROWS(initial_state(bad));
  }

  TEST_CASE("initial data satisfy the constraints") {
    const auto s = straight_string_state(1.0, 200, {1.0, 1.0, 1.0});
    CHECK(constraint_norms(s).max() < 1e-4);
    const auto r = rotating_string_state(0.5, 1.0, 200, 3.0);
    CHECK(constraint_norms(r).max() < 1e-4);
    CHECK(minkowski(r.endpoints[1].four_velocity, r.endpoints[1].four_velocity) == doctest::Approx(-1.0));
    CHECK(r.tensions.mu0 / r.tensions.mub_right == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  }

  TEST_CASE("orbit relation") {
    const double w = rotating_orbit_omega(1.0, 3.0, 1.0);
    CHECK(w * w / (1 - w * w) == doctest::Approx(1.0 / 3.0).epsilon(1e-13));
    CHECK(w == doctest::Approx(0.5).epsilon(1e-13));
    for (double q : {1e-3, 0.1, 1.0, 10.0, 1e3, 1e6})
      for (double R : {0.1, 1.0, 7.0}) CHECK(rotating_orbit_omega(q, 1.0, R) * R < 1.0);
    CHECK(1.0 - rotating_orbit_omega(1e6, 1.0, 1.0) < 1e-6);
  }

  TEST_CASE("zero duration returns the initial state") {
    SimulationConfig c;
    c.duration = 0.0;
    const auto t = evolve(c);
    CHECK(t.steps == 0);
    CHECK(t.event == TerminalEvent::none);
    REQUIRE(t.snapshots.size() == 1);
    CHECK((t.snapshots[0].positions - initial_state(c).positions).norm() == 0.0);
  }

  TEST_CASE("tensionless string with massive ends stays at rest") {
    SimulationConfig c;
    c.duration = 1.0;
    const auto s0 = straight_string_state(1.0, 64, {0.0, 1.0, 1.0});
    const auto s = evolve(s0, c).snapshots.back();
    CHECK((s.positions.bottomRows(2) - s0.positions.bottomRows(2)).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(diagnostics(s).energy == doctest::Approx(2.0).epsilon(1e-14));
  }

  TEST_CASE("collapsing string follows the hyperbolic closed form") {
    const double e200 = collapse_error(200, 0.5);
    const double e400 = collapse_error(400, 0.5);
    CHECK(e200 < 1e-3);
    CHECK(e200 / e400 >= 3.0);
  }

  TEST_CASE("end acceleration equals mu0/mub along -eta") {
    SimulationConfig c;
    c.duration = 0.8;
    c.initial_data = "collapsing_string:a=1,x0=1";
    const auto collapse = endpoint_law(c, 1.0);
    CHECK(collapse.magnitude < 1e-3);
    CHECK(collapse.angle < 1e-3);

    c.initial_data = "helicoid:omega=0.5,R=1";
    c.mub = 3.0;
    c.duration = 2.0;
    const auto orbit = endpoint_law(c, 1.0 / 3.0);
    CHECK(orbit.magnitude < 1e-3);
    CHECK(orbit.angle < 1e-3);
  }

  TEST_CASE("rotating orbit keeps its radius and energy") {
    SimulationConfig c;
    c.initial_data = "helicoid:omega=0.5,R=1";
    c.mub = 3.0;
    c.duration = 3 * 2 * M_PI / 0.5;
    const auto s0 = initial_state(c);
    const double e0 = diagnostics(s0).energy;
    const double l0 = diagnostics(s0).angular_momentum;
    double radius = 0.0, energy = 0.0, momentum = 0.0;
    const auto t = evolve(s0, c, [&](const StringState& s) {
      const auto d = diagnostics(s);
      energy = std::max(energy, std::abs(d.energy - e0) / e0);
      momentum = std::max(momentum, std::abs(d.angular_momentum - l0) / std::abs(l0));
      for (const auto& e : s.endpoints) radius = std::max(radius, std::abs(e.position.tail(2).norm() - 1.0));
    }, false);
    CHECK(t.event == TerminalEvent::none);
    CHECK(radius < 1e-2 / 3);
    CHECK(energy < 1e-3);
    CHECK(momentum < 1e-3);
  }

  TEST_CASE("time reversal retraces the trajectory") {
    SimulationConfig c;
    c.duration = 0.4;
    c.initial_data = "collapsing_string:a=1,x0=1";
    const auto s0 = initial_state(c);
    auto s = evolve(s0, c).snapshots.back();
    s.velocities *= -1;
    for (auto& e : s.endpoints) {
      e.four_velocity *= -1;
      e.previous_four_velocity *= -1;
    }
    const auto back = evolve(s, c).snapshots.back();
    CHECK((back.positions - s0.positions).cwiseAbs().maxCoeff() < 1e-8);
  }

  TEST_CASE("collapse ends in an endpoint collision near the closed-form time") {
    // Ends meet when x(t) = 0: t = sqrt(3) for a = x0 = 1.
    SimulationConfig c;
    c.duration = 10.0;
    c.initial_data = "collapsing_string:a=1,x0=1";
    double t_end = 0.0;
    const auto t = evolve(initial_state(c), c, [&](const StringState& s) { t_end = s.endpoints[0].position(0); }, false);
    CHECK(t.event == TerminalEvent::endpoint_collision);
    CHECK(t_end == doctest::Approx(std::sqrt(3.0)).epsilon(0.05));
  }
}
