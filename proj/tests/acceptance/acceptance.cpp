// Runs the eleven acceptance criteria and prints one PASS/FAIL line each.
// Exit status is the number of failed criteria.

#include "edgebrane/catalog.hpp"
#include "edgebrane/dynamics.hpp"
#include "edgebrane/integrability.hpp"
#include "edgebrane/variation.hpp"
#include "deformations.hpp"
#include "fixtures.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

using namespace edgebrane;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

std::string fmt(const char* f, double a) {
  char buf[96];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

void require(Outcome& out, bool ok, const std::string& what) {
  out.pass = out.pass && ok;
  if (!out.detail.empty()) out.detail += "; ";
  out.detail += what + (ok ? "" : " [fail]");
}

double edge_tension_residual(const CatalogEntry& e) {
  double worst = 0.0;
  const double mu0 = e.parameter("mu0", 1.0), mub = e.parameter("mub", 1.0);
  for (std::size_t b = 0; b < e.boundaries.size(); ++b)
    for (const auto& u : boundary_samples(e, b, 10))
      worst = std::max(worst, std::abs(edge_equation_residual(boundary_data(e.boundaries[b], u), mu0, mub)));
  return worst;
}

std::vector<CatalogEntry> catalog_with_boundaries() {
  return {helicoid(0.5, 1.0), helicoid(0.9, 1.05), collapsing_string(1.0, 1.0),
          planar_hole(2.0, false, 1.0, 2.0), planar_hole(2.0, true, 1.0, 2.0)};
}

Outcome extremality() {
  Outcome out;
  for (const auto& e : {helicoid(0.5, 1.0), collapsing_string(1.0, 1.0)}) {
    double worst = 0.0;
    const auto samples = worldsheet_samples(e, 10);
    for (const auto& p : samples)
      worst = std::max(worst, extrinsic_curvature(e.embedding, p).traces.cwiseAbs().maxCoeff());
    require(out, worst < 1e-9 && samples.size() == 100,
            e.id + " max|K^i| " + fmt("%.1e", worst));
  }
  return out;
}

Outcome edge_law() {
  Outcome out;
  const auto orbit = helicoid(0.5, 1.0);
  require(out, std::abs(orbit.parameter("mu0", 0) / orbit.parameter("mub", 0) - 1.0 / 3.0) < 1e-15,
          "orbit ratio 1/3");
  for (const auto& e : {orbit, planar_hole(2.0, false, 1.0, 2.0), planar_hole(2.0, true, 1.0, 2.0)}) {
    const double r = edge_tension_residual(e);
    require(out, r < 1e-9, e.id + " " + fmt("%.1e", r));
  }
  return out;
}

Outcome boundary_conditions() {
  Outcome out;
  double helix = 0.0;
  const auto h = helicoid(0.5, 1.0);
  for (std::size_t b = 0; b < h.boundaries.size(); ++b)
    for (const auto& u : boundary_samples(h, b, 10))
      helix = std::max(helix, boundary_condition_residual(h.boundaries[b], u).norm());
  require(out, helix < 1e-9, "helicoid " + fmt("%.1e", helix));

  double flat = 0.0;
  std::vector<CatalogEntry> flats = {collapsing_string(1.0, 1.0), planar_hole(2.0),
                                     planar_hole(1.3, true, 1.0, 2.0)};
  for (const auto& e : flats)
    for (std::size_t b = 0; b < e.boundaries.size(); ++b)
      for (const auto& u : boundary_samples(e, b, 10))
        flat = std::max(flat, boundary_condition_residual(e.boundaries[b], u).norm());
  const auto edge = BoundaryEmbedding::coordinate_face(plane().embedding, 1, 0.0, -1);
  for (int i = 0; i < 10; ++i) flat = std::max(flat, boundary_condition_residual(edge, Vec::Constant(1, 0.1 * i)).norm());
  require(out, flat == 0.0, "flat worldsheets " + fmt("%.1e", flat));
  return out;
}

Outcome form_equivalence() {
  Outcome out;
  double worst = 0.0;
  for (const auto& e : catalog_with_boundaries()) {
    const double mu0 = e.parameter("mu0", 1.0), mub = e.parameter("mub", 1.0);
    for (std::size_t b = 0; b < e.boundaries.size(); ++b)
      for (const auto& u : boundary_samples(e, b, 5)) {
        const auto& bnd = e.boundaries[b];
        const auto lap = boundary_laplacian_residuals(bnd, u, mu0, mub);
        worst = std::max(worst, (lap.normal + boundary_condition_residual(bnd, u)).norm());
      }
  }
  require(out, worst < 1e-8, "normal parts " + fmt("%.1e", worst));
  return out;
}

struct Levels {
  IntegrabilityResiduals worldsheet, boundary;
  DirectEmbeddingResiduals direct;
};

Levels residuals_at(const Embedding* emb, const Vec* xi, const BoundaryEmbedding* bnd, const Vec* u,
                    double h) {
  IntegrabilityOptions o;
  o.step = h;
  Levels l;
  if (emb) l.worldsheet = worldsheet_integrability_residuals(*emb, *xi, o);
  if (bnd) {
    l.boundary = boundary_integrability_residuals(*bnd, *u, o);
    l.direct = direct_embedding_residuals(*bnd, *u, o);
  }
  return l;
}

std::vector<double> components(const Levels& l) {
  const auto& w = l.worldsheet;
  const auto& b = l.boundary;
  const auto& d = l.direct;
  return {w.gauss, w.codazzi, w.ricci.value_or(0), b.gauss, b.codazzi,
          d.embedding.gauss, d.embedding.codazzi, d.embedding.ricci.value_or(0),
          d.twist_normal, d.twist_mixed};
}

Outcome integrability() {
  Outcome out;
  // Residual bound at step 1e-4; order from halving 4e-4 -> 2e-4, where the
  // truncation error of the nested-difference families (Ricci, twist) stays
  // above their ~1e-9 roundoff floor. Residuals below `exact` are identically
  // zero up to roundoff and carry no order.
  const double exact = 1e-11;
  double worst = 0.0, min_order = 99.0;
  int measured = 0;
  auto account = [&](const std::function<Levels(double)>& at) {
    const auto c = components(at(4e-4)), f = components(at(2e-4)), r = components(at(1e-4));
    for (std::size_t i = 0; i < c.size(); ++i) {
      worst = std::max(worst, r[i]);
      if (f[i] < exact) continue;
      min_order = std::min(min_order, std::log2(c[i] / f[i]));
      ++measured;
    }
  };
  auto summary = [&](const std::string& label) {
    require(out, worst < 1e-6, label + " max " + fmt("%.1e", worst));
    require(out, min_order >= 1.8, label + " order " + fmt("%.2f", min_order) + " over " +
                                       std::to_string(measured) + " nonzero residuals");
    worst = 0.0;
    min_order = 99.0;
    measured = 0;
  };
  std::vector<CatalogEntry> entries = {plane(), sphere(2.0), flat_torus(1.0, 1.0), helicoid(0.5, 1.0),
                                       planar_hole(2.0), planar_hole(2.0, true, 1.0, 2.0)};
  for (const auto& e : entries) {
    for (const auto& p : worldsheet_samples(e, 3))
      account([&](double h) { return residuals_at(&e.embedding, &p, nullptr, nullptr, h); });
    for (std::size_t b = 0; b < e.boundaries.size(); ++b)
      for (const auto& u : boundary_samples(e, b, 3))
        account([&](double h) { return residuals_at(nullptr, nullptr, &e.boundaries[b], &u, h); });
  }
  summary("catalog");

  // Generic embeddings exercise every level with nonzero truncation error.
  for (bool lorentzian : {false, true}) {
    const auto emb = fixtures::generic_membrane(lorentzian);
    const auto bnd = fixtures::wavy_face(emb, 0.1);
    for (double s : {0.4, 0.6, 0.8}) {
      const Vec u = Vec::Constant(2, s);
      const Vec xi = bnd.chi(u);
      account([&](double h) { return residuals_at(&emb, &xi, &bnd, &u, h); });
    }
  }
  summary("generic");
  return out;
}

Outcome variational_identities() {
  Outcome out;
  const double eps = 1e-3;
  const double bound = std::max(1e-6, 10 * eps * eps);
  std::mt19937_64 rng(20261016);
  for (const char* id : {"helicoid:omega=0.5,R=1", "hole:rho=1,mub=2", "collapsing_string"}) {
    const auto e = entry_from_id(id);
    const auto cfg = action_config(e, 10);
    double diff = 0.0, analytic = 0.0;
    for (int trial = 0; trial < 5; ++trial) {
      const auto f = fixtures::random_deformation(e, rng);
      const double an = first_variation_analytic(e.embedding, e.boundaries, cfg, f);
      const double fd = first_variation_richardson(e.embedding, e.boundaries, cfg, f, eps);
      diff = std::max(diff, std::abs(fd - an));
      analytic = std::max(analytic, std::abs(an));
    }
    require(out, diff < bound, e.id + " |FD-an| " + fmt("%.1e", diff));
    if (e.id.rfind("helicoid", 0) == 0)
      require(out, analytic < 1e-10, "orbit |dS| " + fmt("%.1e", analytic));
  }
  return out;
}

struct EndpointLaw {
  double magnitude = 0.0;
  double angle = 0.0;
};

void track_endpoint_law(EndpointLaw& law, const StringState& s, double ratio, double t_max) {
  const auto d = diagnostics(s);
  for (int side = 0; side < 2; ++side) {
    if (s.endpoints[side].position(0) > t_max) continue;
    law.magnitude = std::max(law.magnitude, std::abs(d.acceleration[side] - ratio));
    law.angle = std::max(law.angle, d.acceleration_angle[side]);
  }
}

SimulationConfig orbit_config() {
  SimulationConfig c;
  c.grid_points = 200;
  c.initial_data = "helicoid:omega=0.5,R=1";
  c.mub = 3.0;
  c.duration = 3 * 2 * M_PI / 0.5;
  return c;
}

SimulationConfig collapse_config(int grid_points) {
  SimulationConfig c;
  c.grid_points = grid_points;
  c.initial_data = "collapsing_string:a=1,x0=1";
  c.duration = 0.8;  // conformal time; the ends reach X^0 = 0.5 before this
  return c;
}

Outcome endpoint_law() {
  Outcome out;
  EndpointLaw orbit, collapse;
  bool first = true;
  const auto oc = orbit_config();
  evolve(initial_state(oc), oc, [&](const StringState& s) {
    if (!std::exchange(first, false)) track_endpoint_law(orbit, s, 1.0 / 3.0, 1e300);
  }, false);
  first = true;
  double reached = 0.0;
  const auto cc = collapse_config(200);
  evolve(initial_state(cc), cc, [&](const StringState& s) {
    reached = std::max(reached, s.endpoints[0].position(0));
    if (!std::exchange(first, false)) track_endpoint_law(collapse, s, 1.0, 0.5);
  }, false);
  require(out, orbit.magnitude < 1e-3, "orbit ||a|-q| " + fmt("%.1e", orbit.magnitude));
  require(out, orbit.angle < 1e-3, "angle " + fmt("%.1e", orbit.angle));
  require(out, reached >= 0.5, "collapse reaches t=0.5");
  require(out, collapse.magnitude < 1e-3, "collapse ||a|-q| " + fmt("%.1e", collapse.magnitude));
  require(out, collapse.angle < 1e-3, "angle " + fmt("%.1e", collapse.angle));
  return out;
}

double collapse_error(int grid_points) {
  double worst = 0.0;
  const auto c = collapse_config(grid_points);
  evolve(initial_state(c), c, [&](const StringState& s) {
    for (const auto& e : s.endpoints) {
      const double t = e.position(0);
      if (t > 0.5) continue;
      const double exact = 1.0 - (std::sqrt(1.0 + t * t) - 1.0);
      worst = std::max(worst, std::abs(std::abs(e.position(1)) - exact) / exact);
    }
  }, false);
  return worst;
}

Outcome collapse_trajectory() {
  Outcome out;
  const double e200 = collapse_error(200), e400 = collapse_error(400);
  require(out, e200 < 1e-3, "M=200 rel " + fmt("%.1e", e200));
  require(out, e200 / e400 >= 3.0, "M=400 rel " + fmt("%.1e", e400) + " ratio " + fmt("%.1f", e200 / e400));
  return out;
}

Outcome orbit_persistence() {
  Outcome out;
  const auto c = orbit_config();
  const auto s0 = initial_state(c);
  const double e0 = diagnostics(s0).energy;
  double radius = 0.0, energy = 0.0;
  const auto t = evolve(s0, c, [&](const StringState& s) {
    energy = std::max(energy, std::abs(diagnostics(s).energy - e0) / e0);
    for (const auto& e : s.endpoints) radius = std::max(radius, std::abs(e.position.tail(2).norm() - 1.0));
  }, false);
  require(out, t.event == TerminalEvent::none, std::string("event ") + to_string(t.event));
  // Largest radius excursion over the whole run, stricter than a per-revolution rate.
  require(out, radius < 1e-2, "radius drift " + fmt("%.1e", radius));
  require(out, energy < 1e-3, "energy drift " + fmt("%.1e", energy));
  return out;
}

Outcome critical_radius() {
  Outcome out;
  const double mu0 = 1.0, mub = 2.0, lo = 1.0, hi = 4.0;
  const int steps = 31;
  const double cell = (hi - lo) / (steps - 1);
  std::vector<double> rho(steps), residual(steps);
  for (int i = 0; i < steps; ++i) {
    rho[i] = lo + i * cell;
    residual[i] = edge_equation_residual(boundary_data(planar_hole(rho[i], false, mu0, mub).boundary(),
                                                       Vec::Zero(1)),
                                         mu0, mub);
  }
  int changes = 0;
  double left = 0.0, right = 0.0;
  for (int i = 0; i + 1 < steps; ++i)
    if ((residual[i] < 0) != (residual[i + 1] < 0)) {
      ++changes;
      left = rho[i];
      right = rho[i + 1];
    }
  const double critical = mub / mu0;
  require(out, changes == 1, std::to_string(changes) + " sign change");
  require(out, left <= critical && critical <= right && right - left <= cell * (1 + 1e-12),
          "bracket [" + fmt("%.2f", left) + ", " + fmt("%.2f", right) + "]");
  return out;
}

Outcome orbit_limits() {
  Outcome out;
  double max_wr = 0.0;
  for (double q = 1e-6; q <= 1e8; q *= 1.5)
    for (double R : {0.01, 0.5, 1.0, 3.0, 100.0}) max_wr = std::max(max_wr, rotating_orbit_omega(q, 1.0, R) * R);
  require(out, max_wr < 1.0, "max wR " + fmt("%.12f", max_wr));
  const double gap = 1.0 - rotating_orbit_omega(1e6, 1.0, 1.0);
  require(out, gap < 1e-6, "1 - wR at 1e6 " + fmt("%.1e", gap));
  return out;
}

struct Criterion {
  int number;
  const char* name;
  double time_limit;
  std::function<Outcome()> run;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "extremality", 1.0, extremality},
      {2, "edge law", 1.0, edge_law},
      {3, "boundary conditions", 1.0, boundary_conditions},
      {4, "form equivalence", 1.0, form_equivalence},
      {5, "integrability suite", 30.0, integrability},
      {6, "variational identities", 60.0, variational_identities},
      {7, "endpoint law in dynamics", 60.0, endpoint_law},
      {8, "collapsing-string trajectory", 60.0, collapse_trajectory},
      {9, "rotating orbit persistence", 120.0, orbit_persistence},
      {10, "critical radius scan", 10.0, critical_radius},
      {11, "orbit relation limits", 1.0, orbit_limits},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = c.run();
    } catch (const std::exception& e) {
      out = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = secs < c.time_limit;
    const bool pass = out.pass && in_time;
    failed += !pass;
    std::printf("%-4s criterion %2d  %-30s %7.3fs / %gs  %s%s\n", pass ? "PASS" : "FAIL", c.number, c.name,
                secs, c.time_limit, out.detail.c_str(), in_time ? "" : " [over time]");
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed;
}
