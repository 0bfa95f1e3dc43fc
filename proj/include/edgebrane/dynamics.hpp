#pragma once

#include "edgebrane/tensor.hpp"

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace edgebrane {

/// Massive end of a string, moving as a relativistic particle.
struct EndpointState {
  Vec position;       ///< X^mu, equal to the first/last grid node
  Vec four_velocity;  ///< u^mu with g(u, u) = -1
  double proper_time = 0.0;
  Vec normal;  ///< outward unit worldsheet vector eta at this time
  /// Values one step earlier, kept for the finite-difference acceleration.
  Vec previous_four_velocity;
  double previous_proper_time = 0.0;
  Vec previous_normal;
};

struct Tensions {
  double mu0 = 1.0;
  double mub_left = 1.0;
  double mub_right = 1.0;
};

/// String in conformal gauge on a uniform sigma grid. Column k of `positions`
/// and `velocities` is X^mu(sigma_k) and dX^mu/dt there; flat Minkowski
/// metric with signature (-, +, ..., +).
struct StringState {
  double time = 0.0;
  double spacing = 0.0;  ///< d sigma
  Mat positions;
  Mat velocities;
  std::array<EndpointState, 2> endpoints;  ///< left (sigma = 0), right
  Tensions tensions;
  double initial_scale = 1.0;  ///< mean |X'| at the ends at t = 0

  int grid_points() const { return static_cast<int>(positions.cols()); }
};

struct SimulationConfig {
  int grid_points = 200;
  double courant = 0.5;  ///< dt / d sigma
  double duration = 1.0;
  double constraint_tol = 1e-4;
  int output_stride = 1;
  /// Catalog id: "collapsing_string:a=..,x0=.." or "helicoid:omega=..,R=..".
  std::string initial_data = "collapsing_string:a=1,x0=1";
  /// Overrides the end mass; mu0 is rescaled to keep the catalog ratio.
  std::optional<double> mub;
};

/// Throws InvalidParameters unless M >= 16, 0 < courant <= 1, duration >= 0,
/// constraint_tol > 0 and output_stride >= 1.
void validate(const SimulationConfig& config);

/// Straight string at rest along x^1 in [-half_length, half_length] in
/// dim-dimensional Minkowski space. The parametrization is uniform except near
/// the ends, where it is bent so the initial data are compatible with the
/// endpoint acceleration.
StringState straight_string_state(double half_length, int grid_points, const Tensions& tensions,
                                  int dim = 3);
/// Rigidly rotating string of end radius R in the conformal parametrization
/// X = (t, sin(omega s) cos(omega t) / omega, sin(omega s) sin(omega t) / omega).
/// mu0 follows from the orbit relation for the given end mass.
StringState rotating_string_state(double omega, double radius, int grid_points, double mub,
                                  int dim = 3);
/// Initial state for config.initial_data.
StringState initial_state(const SimulationConfig& config);

/// Time step used for the state's grid (courant * d sigma, shortened so that
/// an integer number of steps reaches `duration`).
double time_step(const StringState& state, const SimulationConfig& config);

/// One step of length dt: velocity Verlet on X_tt = X_ss at interior nodes,
/// RK4 on du/dt = -(mu0/mub) (d tau/dt) eta at the ends with u renormalized.
/// Throws ConstraintBlowup or EndpointCollision.
StringState step(const StringState& state, const SimulationConfig& config, double dt);

enum class TerminalEvent { none, endpoint_collision, constraint_blowup };
const char* to_string(TerminalEvent e);

struct Trajectory {
  std::vector<StringState> snapshots;  ///< every output_stride steps, plus the last
  TerminalEvent event = TerminalEvent::none;
  std::string message;
  int steps = 0;
};

/// Runs from `initial` for config.duration. `on_step` (optional) sees every
/// state, including the initial one. Terminal events end the run and are
/// reported in the result, not thrown.
Trajectory evolve(const StringState& initial, const SimulationConfig& config,
                  const std::function<void(const StringState&)>& on_step = {},
                  bool keep_snapshots = true);
Trajectory evolve(const SimulationConfig& config);

struct ConstraintNorms {
  double orthogonality = 0.0;  ///< max |Xdot . X'| at interior nodes
  double null_sum = 0.0;       ///< max |Xdot^2 + X'^2|
  double max() const { return std::max(orthogonality, null_sum); }
};

struct Diagnostics {
  ConstraintNorms constraints;
  double energy = 0.0;            ///< mu0 int Xdot^0 + sum mub u^0
  double angular_momentum = 0.0;  ///< 12-plane component
  /// Proper acceleration of each end from the last step, (u - u_prev)/(tau - tau_prev).
  std::array<double, 2> acceleration{};
  /// Angle between that acceleration and -eta (radians).
  std::array<double, 2> acceleration_angle{};
};

ConstraintNorms constraint_norms(const StringState& state);
Diagnostics diagnostics(const StringState& state);

/// Positive root of omega^2 R / (1 - omega^2 R^2) = mu0 / mub.
double rotating_orbit_omega(double mu0, double mub, double radius);

/// Minkowski product with signature (-, +, ..., +).
double minkowski(const Vec& a, const Vec& b);

}  // namespace edgebrane
