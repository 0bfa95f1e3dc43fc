#pragma once

#include "edgebrane/catalog.hpp"

#include <functional>
#include <vector>

namespace edgebrane {

enum class QuadratureRule { midpoint, gauss_legendre };

/// Tensor-product composite rule on a coordinate box: `cells[a]` cells along
/// axis a, one node per cell (midpoint) or `order` Gauss-Legendre nodes.
struct QuadratureGrid {
  Vec lower;
  Vec upper;
  std::vector<int> cells;
  QuadratureRule rule = QuadratureRule::gauss_legendre;
  int order = 6;
};

struct QuadratureNode {
  Vec point;
  double weight;
};

std::vector<QuadratureNode> quadrature_nodes(const QuadratureGrid& grid);
/// Gauss-Legendre nodes and weights on [-1, 1].
std::pair<Vec, Vec> gauss_legendre(int order);
/// Sum with pairwise reduction (order-deterministic).
double pairwise_sum(const std::vector<double>& values);

struct ActionConfig {
  double mu0 = 1.0;
  double mub = 1.0;
  QuadratureGrid worldsheet;
  /// One grid per boundary, in the boundary coordinates u.
  std::vector<QuadratureGrid> boundaries;
};

/// Quadrature over the entry's box (boundary boxes drop the face coordinate).
/// Tensions default to the entry's mu0/mub parameters.
ActionConfig action_config(const CatalogEntry& entry, int cells_per_axis,
                           QuadratureRule rule = QuadratureRule::gauss_legendre, int order = 6);

/// Smooth taper on one coordinate: 1 in the interior, (1 - cos(pi s))/2 over
/// the outer `fraction` of [lower, upper] on the selected sides.
struct Window {
  int axis = 0;
  double lower = 0.0;
  double upper = 1.0;
  double fraction = 0.1;
  bool taper_lower = true;
  bool taper_upper = true;

  double operator()(const Vec& xi) const;
};

/// Deformation delta X = Phi^a e_a + Phi_i n^i of the worldsheet and
/// delta chi = Psi eta + Psi^A eps_A of each boundary. Every component is
/// multiplied by the product of the windows at the worldsheet point.
struct DeformationField {
  std::function<Vec(const Vec&)> tangential;  ///< Phi^a(xi); empty = 0
  std::function<Vec(const Vec&)> normal;      ///< Phi_i(xi); empty = 0
  /// Psi(b, u) and Psi^A(b, u) for boundary b; empty = 0.
  std::function<double(std::size_t, const Vec&)> boundary_normal;
  std::function<Vec(std::size_t, const Vec&)> boundary_tangential;
  /// Normal frame in which Phi_i is expressed (must be smooth on the domain).
  NormalField normals;
  std::vector<Window> windows;

  double window(const Vec& xi) const;
  Vec tangential_at(const Vec& xi, int dim) const;
  Vec normal_at(const Vec& xi, int codim) const;
  double psi(std::size_t b, const Vec& u, const Vec& xi) const;
  Vec psi_tangential(std::size_t b, const Vec& u, const Vec& xi, int dim) const;
  /// delta X^mu at xi.
  Vec displacement(const Embedding& emb, const Vec& xi) const;
};

/// Windows vanishing on every side of the entry's box that is neither an
/// edge with tension nor periodic.
std::vector<Window> default_windows(const CatalogEntry& entry, double fraction = 0.1);

/// -mu0 times the quadrature of sqrt|gamma|.
double dng_action(const Embedding& emb, const QuadratureGrid& grid, double mu0);
/// -mub times the quadrature of sqrt|h|.
double edge_action(const BoundaryEmbedding& bnd, const QuadratureGrid& grid, double mub);
/// Bulk plus all edge actions.
double total_action(const Embedding& emb, const std::vector<BoundaryEmbedding>& bnds,
                    const ActionConfig& config);

/// delta gamma_ab = 2 K_ab^i Phi_i + nabla_a Phi_b + nabla_b Phi_a (derivatives of
/// Phi^a by a fourth-order stencil of step `step`).
Mat metric_variation(const Embedding& emb, const Vec& point, const DeformationField& field,
                     double step = 1e-3);

/// Closed-form first variation: bulk K^i Phi_i term, edge terms and the
/// boundary-displacement term. Pure divergences along the edge are dropped
/// (the deformation vanishes at the temporal caps).
double first_variation_analytic(const Embedding& emb, const std::vector<BoundaryEmbedding>& bnds,
                                const ActionConfig& config, const DeformationField& field);

/// The boundary-displacement part alone, -sum_b int sqrt|h| (mu0 + mub k) Psi.
double displacement_variation(const Embedding& emb, const std::vector<BoundaryEmbedding>& bnds,
                              const ActionConfig& config, const DeformationField& field);

/// Worldsheet map displaced by epsilon: X(xi') + epsilon delta X(xi') with
/// xi' = xi + epsilon V(xi), where V extends Psi eta + Psi^A eps_A off each
/// coordinate-face boundary by a linear ramp. Derivatives by finite differences.
Embedding deformed_embedding(const Embedding& emb, const std::vector<BoundaryEmbedding>& bnds,
                             const DeformationField& field, double epsilon);

/// [S(epsilon) - S(-epsilon)] / (2 epsilon).
double first_variation_fd(const Embedding& emb, const std::vector<BoundaryEmbedding>& bnds,
                          const ActionConfig& config, const DeformationField& field,
                          double epsilon);

/// Richardson combination (4 FD(epsilon/2) - FD(epsilon)) / 3, error O(epsilon^4).
double first_variation_richardson(const Embedding& emb, const std::vector<BoundaryEmbedding>& bnds,
                                  const ActionConfig& config, const DeformationField& field,
                                  double epsilon);

}  // namespace edgebrane
