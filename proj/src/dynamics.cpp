#include "edgebrane/dynamics.hpp"

#include "edgebrane/catalog.hpp"
#include "edgebrane/errors.hpp"

#include <cmath>

namespace edgebrane {

double minkowski(const Vec& a, const Vec& b) {
  return -a(0) * b(0) + a.tail(a.size() - 1).dot(b.tail(b.size() - 1));
}

namespace {

/// Outward raw vector at an end, from the second-order one-sided stencil.
Vec outward_derivative(const Vec& end, const Vec& next, const Vec& next2, double ds) {
  return (3.0 * end - 4.0 * next + next2) / (2.0 * ds);
}

struct EndFrame {
  Vec eta;
  double tau_rate;  ///< d tau / dt = |X'| in conformal gauge
};

EndFrame end_frame(const Vec& outward, const Vec& u) {
  const double uu = minkowski(u, u);
  Vec perp = outward - (minkowski(outward, u) / uu) * u;
  const double norm2 = minkowski(perp, perp);
  if (!(norm2 > 0.0)) throw ConstraintBlowup("edge tangent is not spacelike");
  const double norm = std::sqrt(norm2);
  return {perp / norm, norm};
}

Vec renormalized(const Vec& u) {
  const double uu = minkowski(u, u);
  if (!(uu < 0.0)) throw ConstraintBlowup("endpoint four-velocity is not timelike");
  return u / std::sqrt(-uu);
}

Mat interior_acceleration(const Mat& x, double ds) {
  const int m = static_cast<int>(x.cols());
  Mat acc = Mat::Zero(x.rows(), m);
  const double inv = 1.0 / (ds * ds);
  for (int k = 1; k + 1 < m; ++k) acc.col(k) = (x.col(k + 1) - 2.0 * x.col(k) + x.col(k - 1)) * inv;
  return acc;
}

/// Neighbour columns of end `side` (0 left, 1 right): nearest, next.
std::pair<int, int> neighbours(int side, int m) {
  return side == 0 ? std::pair{1, 2} : std::pair{m - 2, m - 3};
}

int end_column(int side, int m) { return side == 0 ? 0 : m - 1; }

/// Fills eta and the endpoint velocity column from the current positions.
void refresh_end(StringState& s, int side) {
  const int m = s.grid_points();
  const auto [n1, n2] = neighbours(side, m);
  EndpointState& e = s.endpoints[side];
  const EndFrame f = end_frame(
      outward_derivative(e.position, s.positions.col(n1), s.positions.col(n2), s.spacing),
      e.four_velocity);
  e.normal = f.eta;
  s.velocities.col(end_column(side, m)) = f.tau_rate * e.four_velocity;
}

void finish_initial(StringState& s) {
  const int m = s.grid_points();
  double scale = 0.0;
  for (int side = 0; side < 2; ++side) {
    EndpointState& e = s.endpoints[side];
    e.position = s.positions.col(end_column(side, m));
    refresh_end(s, side);
    e.previous_four_velocity = e.four_velocity;
    e.previous_proper_time = e.proper_time;
    e.previous_normal = e.normal;
    const auto [n1, n2] = neighbours(side, m);
    const Vec d = outward_derivative(e.position, s.positions.col(n1), s.positions.col(n2), s.spacing);
    scale += 0.5 * std::sqrt(std::max(0.0, minkowski(d, d)));
  }
  s.initial_scale = scale;
}

double spatial_distance(const Vec& a, const Vec& b) {
  return (a.tail(a.size() - 1) - b.tail(b.size() - 1)).norm();
}

}  // namespace

void validate(const SimulationConfig& c) {
  if (c.grid_points < 16) throw InvalidParameters("grid_points must be at least 16");
  if (!(c.courant > 0.0 && c.courant <= 1.0)) throw InvalidParameters("courant must lie in (0, 1]");
  if (!(c.duration >= 0.0)) throw InvalidParameters("duration must be non-negative");
  if (!(c.constraint_tol > 0.0)) throw InvalidParameters("constraint_tol must be positive");
  if (c.output_stride < 1) throw InvalidParameters("output_stride must be at least 1");
  if (c.mub && !(*c.mub > 0.0)) throw InvalidParameters("mub must be positive");
}

StringState straight_string_state(double half_length, int grid_points, const Tensions& tensions,
                                  int dim) {
  if (grid_points < 16) throw InvalidParameters("grid_points must be at least 16");
  if (!(half_length > 0.0)) throw InvalidParameters("half_length must be positive");
  if (!(tensions.mub_left > 0.0 && tensions.mub_right > 0.0))
    throw InvalidParameters("end masses must be positive");
  // x(sigma) bends over a width w next to each end so that X_ss there equals the
  // endpoint acceleration -a (dtau/dt)^2 eta at t = 0. Without this the corner
  // data are incompatible and the discrete constraints start at O(d sigma).
  const double accel[2] = {tensions.mu0 / tensions.mub_left, tensions.mu0 / tensions.mub_right};
  const double amax = std::max(accel[0], accel[1]);
  const double w = amax * half_length > 1.0 ? 1.0 / amax : half_length;
  double bend[2];
  for (int side = 0; side < 2; ++side) {
    // Solves b = a (1 - b w / 2)^2 for the smaller root.
    const double z = accel[side] * w;
    bend[side] = z > 1e-12 ? accel[side] * 2.0 * ((z + 1.0) - std::sqrt(2.0 * z + 1.0)) / (z * z)
                           : accel[side];
  }
  const double edge = half_length + (bend[0] + bend[1]) * w * w / 12.0;
  auto ramp = [w](double t) { return t <= 0.0 ? 0.0 : t * t * t / (6.0 * w); };
  auto ramp1 = [w](double t) { return t <= 0.0 ? 0.0 : t * t / (2.0 * w); };
  auto x_of = [&](double sg) {
    return sg - bend[1] * ramp(sg - edge + w) + bend[0] * ramp(w - edge - sg);
  };
  auto dx_of = [&](double sg) {
    return 1.0 - bend[1] * ramp1(sg - edge + w) - bend[0] * ramp1(w - edge - sg);
  };
  const double shift = -half_length - x_of(-edge);

  StringState s;
  s.tensions = tensions;
  s.spacing = 2.0 * edge / (grid_points - 1);
  s.positions = Mat::Zero(dim, grid_points);
  s.velocities = Mat::Zero(dim, grid_points);
  for (int k = 0; k < grid_points; ++k) {
    const double sg = -edge + k * s.spacing;
    s.positions(1, k) = x_of(sg) + shift;
    s.velocities(0, k) = dx_of(sg);
  }
  for (auto& e : s.endpoints) {
    e.four_velocity = Vec::Unit(dim, 0);
  }
  finish_initial(s);
  return s;
}

StringState rotating_string_state(double omega, double radius, int grid_points, double mub,
                                  int dim) {
  if (grid_points < 16) throw InvalidParameters("grid_points must be at least 16");
  if (!(omega > 0.0 && radius > 0.0 && omega * radius < 1.0))
    throw InvalidParameters("rotating string needs 0 < omega R < 1");
  if (!(mub > 0.0)) throw InvalidParameters("end mass must be positive");
  if (dim < 3) throw InvalidParameters("rotating string needs at least 3 dimensions");
  const double v = omega * radius;
  const double edge = std::asin(v) / omega;  // sigma of the right end
  StringState s;
  s.tensions = {mub * omega * omega * radius / (1.0 - v * v), mub, mub};
  s.spacing = 2.0 * edge / (grid_points - 1);
  s.positions = Mat::Zero(dim, grid_points);
  s.velocities = Mat::Zero(dim, grid_points);
  for (int k = 0; k < grid_points; ++k) {
    const double sigma = -edge + k * s.spacing;
    s.positions(1, k) = std::sin(omega * sigma) / omega;
    s.velocities(0, k) = 1.0;
    s.velocities(2, k) = std::sin(omega * sigma);
  }
  const double gamma = 1.0 / std::sqrt(1.0 - v * v);
  for (int side = 0; side < 2; ++side) {
    Vec u = Vec::Zero(dim);
    u(0) = gamma;
    u(2) = (side == 0 ? -v : v) * gamma;
    s.endpoints[side].four_velocity = u;
  }
  finish_initial(s);
  return s;
}

StringState initial_state(const SimulationConfig& config) {
  validate(config);
  const CatalogEntry entry = entry_from_id(config.initial_data);
  const std::string name = config.initial_data.substr(0, config.initial_data.find(':'));
  const double mub = config.mub.value_or(entry.parameter("mub", 1.0));
  const double ratio = entry.parameter("mu0", 1.0) / entry.parameter("mub", 1.0);
  if (name == "collapsing_string") {
    return straight_string_state(entry.parameter("x0", 1.0), config.grid_points,
                                 {ratio * mub, mub, mub});
  }
  if (name == "helicoid") {
    return rotating_string_state(entry.parameter("omega", 0.5), entry.parameter("R", 1.0),
                                 config.grid_points, mub);
  }
  throw InvalidParameters("no initial data for catalog entry '" + name + "'");
}

double time_step(const StringState& state, const SimulationConfig& config) {
  const double dt = config.courant * state.spacing;
  if (config.duration <= 0.0) return dt;
  const double steps = std::ceil(config.duration / dt - 1e-9);
  return config.duration / steps;
}

StringState step(const StringState& state, const SimulationConfig& config, double dt) {
  const int m = state.grid_points();
  const double ds = state.spacing;
  StringState next = state;
  next.time = state.time + dt;

  // Interior positions from the current accelerations (ends enter as neighbours).
  const Mat acc = interior_acceleration(state.positions, ds);
  for (int k = 1; k + 1 < m; ++k)
    next.positions.col(k) =
        state.positions.col(k) + dt * state.velocities.col(k) + 0.5 * dt * dt * acc.col(k);

  // Ends: RK4 on (X, u, tau). The two neighbour nodes follow a path in time:
  // first their Taylor step, then (once their new velocities are known) the
  // cubic Hermite interpolant, which keeps the coupling nearly time-symmetric.
  const double masses[2] = {state.tensions.mub_left, state.tensions.mub_right};
  const int dim = static_cast<int>(state.positions.rows());
  using Path = std::function<Vec(int, double)>;
  auto advance_ends = [&](const Path& path) {
    for (int side = 0; side < 2; ++side) {
      const auto [n1, n2] = neighbours(side, m);
      const double ratio = state.tensions.mu0 / masses[side];
      auto rhs = [&](double frac, const Vec& x, const Vec& u, Vec& dx, Vec& du) {
        const EndFrame f = end_frame(outward_derivative(x, path(n1, frac), path(n2, frac), ds), u);
        dx = f.tau_rate * u;
        du = -ratio * f.tau_rate * f.eta;
        return f.tau_rate;
      };
      const EndpointState& e = state.endpoints[side];
      Vec kx[4], ku[4];
      double kt[4];
      for (int i = 0; i < 4; ++i) {
        kx[i].resize(dim);
        ku[i].resize(dim);
      }
      kt[0] = rhs(0.0, e.position, e.four_velocity, kx[0], ku[0]);
      kt[1] = rhs(0.5, e.position + 0.5 * dt * kx[0], e.four_velocity + 0.5 * dt * ku[0], kx[1], ku[1]);
      kt[2] = rhs(0.5, e.position + 0.5 * dt * kx[1], e.four_velocity + 0.5 * dt * ku[1], kx[2], ku[2]);
      kt[3] = rhs(1.0, e.position + dt * kx[2], e.four_velocity + dt * ku[2], kx[3], ku[3]);
      EndpointState& out = next.endpoints[side];
      out.previous_four_velocity = e.four_velocity;
      out.previous_proper_time = e.proper_time;
      out.previous_normal = e.normal;
      out.position = e.position + dt / 6.0 * (kx[0] + 2.0 * kx[1] + 2.0 * kx[2] + kx[3]);
      out.four_velocity =
          renormalized(e.four_velocity + dt / 6.0 * (ku[0] + 2.0 * ku[1] + 2.0 * ku[2] + ku[3]));
      out.proper_time = e.proper_time + dt / 6.0 * (kt[0] + 2.0 * kt[1] + 2.0 * kt[2] + kt[3]);
      next.positions.col(end_column(side, m)) = out.position;
    }
  };
  auto update_velocities = [&]() {
    const Mat acc_next = interior_acceleration(next.positions, ds);
    for (int k = 1; k + 1 < m; ++k)
      next.velocities.col(k) = state.velocities.col(k) + 0.5 * dt * (acc.col(k) + acc_next.col(k));
  };

  advance_ends([&](int k, double frac) -> Vec {
    const double h = frac * dt;
    return state.positions.col(k) + h * state.velocities.col(k) + 0.5 * h * h * acc.col(k);
  });
  update_velocities();
  const Mat v_pred = next.velocities;
  advance_ends([&](int k, double frac) -> Vec {
    const double f2 = frac * frac, f3 = f2 * frac;
    return (2.0 * f3 - 3.0 * f2 + 1.0) * state.positions.col(k) +
           (f3 - 2.0 * f2 + frac) * dt * state.velocities.col(k) +
           (3.0 * f2 - 2.0 * f3) * next.positions.col(k) + (f3 - f2) * dt * v_pred.col(k);
  });
  update_velocities();
  for (int side = 0; side < 2; ++side) refresh_end(next, side);

  const ConstraintNorms c = constraint_norms(next);
  if (!(c.max() <= 100.0 * config.constraint_tol))
    throw ConstraintBlowup("constraint norm " + std::to_string(c.max()) + " at t = " +
                           std::to_string(next.time));
  if (spatial_distance(next.endpoints[0].position, next.endpoints[1].position) <
      2.0 * ds * next.initial_scale)
    throw EndpointCollision("endpoints met at t = " + std::to_string(next.time));
  return next;
}

const char* to_string(TerminalEvent e) {
  switch (e) {
    case TerminalEvent::none:
      return "none";
    case TerminalEvent::endpoint_collision:
      return "endpoint_collision";
    case TerminalEvent::constraint_blowup:
      return "constraint_blowup";
  }
  return "unknown";
}

Trajectory evolve(const StringState& initial, const SimulationConfig& config,
                  const std::function<void(const StringState&)>& on_step, bool keep_snapshots) {
  validate(config);
  Trajectory out;
  const double dt = time_step(initial, config);
  const int total = config.duration > 0.0
                        ? static_cast<int>(std::llround(config.duration / dt))
                        : 0;
  StringState s = initial;
  if (on_step) on_step(s);
  if (keep_snapshots) out.snapshots.push_back(s);
  for (int n = 1; n <= total; ++n) {
    try {
      s = step(s, config, dt);
    } catch (const EndpointCollision& ex) {
      out.event = TerminalEvent::endpoint_collision;
      out.message = ex.what();
      break;
    } catch (const ConstraintBlowup& ex) {
      out.event = TerminalEvent::constraint_blowup;
      out.message = ex.what();
      break;
    }
    out.steps = n;
    if (on_step) on_step(s);
    if (keep_snapshots && (n % config.output_stride == 0 || n == total)) out.snapshots.push_back(s);
  }
  if (keep_snapshots && out.event != TerminalEvent::none &&
      out.snapshots.back().time != s.time)
    out.snapshots.push_back(s);
  return out;
}

Trajectory evolve(const SimulationConfig& config) {
  return evolve(initial_state(config), config);
}

ConstraintNorms constraint_norms(const StringState& s) {
  ConstraintNorms c;
  const int m = s.grid_points();
  for (int k = 1; k + 1 < m; ++k) {
    const Vec d = (s.positions.col(k + 1) - s.positions.col(k - 1)) / (2.0 * s.spacing);
    const Vec v = s.velocities.col(k);
    c.orthogonality = std::max(c.orthogonality, std::abs(minkowski(v, d)));
    c.null_sum = std::max(c.null_sum, std::abs(minkowski(v, v) + minkowski(d, d)));
  }
  return c;
}

Diagnostics diagnostics(const StringState& s) {
  Diagnostics out;
  out.constraints = constraint_norms(s);
  const int m = s.grid_points();
  const int dim = static_cast<int>(s.positions.rows());
  // Trapezoid rule over the sigma grid.
  double energy = 0.0, angular = 0.0;
  for (int k = 0; k < m; ++k) {
    const double w = (k == 0 || k == m - 1) ? 0.5 * s.spacing : s.spacing;
    energy += w * s.velocities(0, k);
    if (dim >= 3)
      angular += w * (s.positions(1, k) * s.velocities(2, k) - s.positions(2, k) * s.velocities(1, k));
  }
  energy *= s.tensions.mu0;
  angular *= s.tensions.mu0;
  const double masses[2] = {s.tensions.mub_left, s.tensions.mub_right};
  for (int side = 0; side < 2; ++side) {
    const EndpointState& e = s.endpoints[side];
    energy += masses[side] * e.four_velocity(0);
    if (dim >= 3)
      angular += masses[side] * (e.position(1) * e.four_velocity(2) - e.position(2) * e.four_velocity(1));
    const double dtau = e.proper_time - e.previous_proper_time;
    if (dtau <= 0.0) continue;
    const Vec a = (e.four_velocity - e.previous_four_velocity) / dtau;
    const double mag = std::sqrt(std::max(0.0, minkowski(a, a)));
    out.acceleration[side] = mag;
    // Compare with eta at the midpoint, projected orthogonal to the midpoint velocity.
    const Vec u_mid = renormalized(e.four_velocity + e.previous_four_velocity);
    const EndFrame f = end_frame(e.normal + e.previous_normal, u_mid);
    if (mag > 0.0) {
      const double c = std::clamp(-minkowski(a, f.eta) / mag, -1.0, 1.0);
      out.acceleration_angle[side] = std::acos(c);
    }
  }
  out.energy = energy;
  out.angular_momentum = angular;
  return out;
}

double rotating_orbit_omega(double mu0, double mub, double radius) {
  if (!(mu0 >= 0.0 && mub > 0.0 && radius > 0.0))
    throw InvalidParameters("orbit relation needs mu0 >= 0, mub > 0, R > 0");
  const double q = mu0 / mub;
  return std::sqrt(q / (radius * (1.0 + q * radius)));
}

}  // namespace edgebrane
