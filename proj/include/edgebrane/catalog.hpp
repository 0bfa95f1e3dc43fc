#pragma once

#include "edgebrane/boundary.hpp"

#include <map>
#include <string>
#include <vector>

namespace edgebrane {

/// Where an expected value comes from: a property stated for the solution,
/// a trivial identity, or an independent closed-form derivation.
enum class Basis { stated, trivial, derived };

const char* to_string(Basis p);

/// Expected value of a named quantity (see measure_quantity for the ids).
struct Expectation {
  std::string quantity;
  double value = 0.0;
  double tolerance = 0.0;
  Basis basis = Basis::derived;
};

/// Closed-form embedding with its parameter box, boundaries and expected facts.
/// All derivative callbacks are analytic.
struct CatalogEntry {
  std::string id;
  Embedding embedding;
  std::vector<BoundaryEmbedding> boundaries;
  std::map<std::string, double> parameters;
  std::vector<Expectation> expected;
  Vec lower;  ///< parameter box of the worldsheet
  Vec upper;
  std::vector<int> periodic_axes;  ///< axes on which the box wraps around
  /// Closed-form normal frame, smooth over the whole box (used for deformations).
  NormalField normals;

  bool has_boundary() const { return !boundaries.empty(); }
  const BoundaryEmbedding& boundary() const { return boundaries.front(); }
  double parameter(const std::string& name, double fallback) const;
};

/// Flat plane X = (xi0, xi1, 0) in 3d Minkowski space.
CatalogEntry plane();
/// Round sphere of radius r in Euclidean 3-space, coordinates (theta, phi).
CatalogEntry sphere(double radius = 2.0);
/// Flat torus (r1 cos u, r1 sin u, r2 cos v, r2 sin v) in Euclidean 4-space.
CatalogEntry flat_torus(double r1 = 1.0, double r2 = 1.0);

/// Rigidly rotating string X = (t, s cos wt, s sin wt), s in [-R, R].
/// Boundaries: s = R (first) and s = -R. Tensions default to mub = 1 and
/// mu0 from the orbit relation, so the edge law holds.
CatalogEntry helicoid(double omega, double radius, double duration = 1.0);

/// Flat strip between the hyperbolic worldlines x = +-[x0 - (sqrt(1 + a^2 t^2) - 1)/a].
/// Coordinates (t, s) with s in [-1, 1]; tensions mub = 1, mu0 = a.
CatalogEntry collapsing_string(double accel, double x0, double duration = 0.5);

/// Plane with a circular hole of radius rho, polar coordinates. Euclidean
/// membrane in E^3 (coordinates (r, phi)) or, if lorentzian, the static
/// worldvolume (t, r, phi) in 4d Minkowski space. Defaults mu0 = 1, mub = rho.
CatalogEntry planar_hole(double rho, bool lorentzian = false, double mu0 = 1.0,
                         double mub = -1.0);

/// Plane, sphere r = 2 and flat torus.
std::vector<CatalogEntry> reference_surfaces();

/// Builds an entry from an id such as "helicoid:omega=0.5,R=1" or "plane".
/// Throws std::out_of_range for an unknown name or parameter, InvalidParameters
/// for values outside an entry's domain.
CatalogEntry entry_from_id(const std::string& id);
std::vector<std::string> catalog_names();

/// Deterministic interior sample points of the worldsheet box (n per axis).
std::vector<Vec> worldsheet_samples(const CatalogEntry& entry, int per_axis);
/// Deterministic sample points on a boundary (n per boundary coordinate).
std::vector<Vec> boundary_samples(const CatalogEntry& entry, std::size_t boundary, int per_axis);

/// Evaluates a quantity over the deterministic samples, returning the sampled
/// value farthest from `expected`. Ids:
///   mean_curvature        max_i |K^i|
///   scalar_curvature      gamma^{bd} R^a_{bad}
///   extrinsic_norm        sqrt(|K_ab^i K^ab_i|)
///   orthonormality        larger of the two frame defects
///   gauss_weingarten      larger Gauss/Weingarten residual
///   integrability         worldsheet Gauss/Codazzi/Ricci
///   edge_trace            k on every boundary
///   edge_residual         mub k + mu0
///   edge_acceleration     |h^{AB} K_AB^I| of the edge in spacetime
///   boundary_condition    |H^{ab} K_ab^i|
///   laplacian_form        largest boundary-Laplacian residual
///   form_equivalence      |normal Laplacian residual + H^{ab} K_ab^i|
///   projector             projector identity defects
///   inheritance           adapted-frame inheritance defects
///   boundary_integrability  edge-in-worldsheet residuals
///   direct_integrability    edge-in-spacetime residuals incl. twist consistency
double measure_quantity(const CatalogEntry& entry, const std::string& quantity, double expected);

}  // namespace edgebrane
