#pragma once

#include "edgebrane/geometry.hpp"

#include <functional>
#include <optional>

namespace edgebrane {

/// Boundary that is a coordinate face xi^coord = value of the parent domain.
struct Face {
  int coord = 0;
  double value = 0.0;
  int outward_sign = 1;  ///< +1 if the material lies at smaller xi^coord
};

/// Embedding xi^a = chi^a(u^A) of the edge worldsheet in the parent worldsheet.
///
/// The outward direction is never inferred: every boundary carries an
/// orientation hint, a worldsheet vector with positive gamma-product against
/// the outward normal.
class BoundaryEmbedding {
public:
  using ChiFn = std::function<Vec(const Vec&)>;
  using DChiFn = std::function<Mat(const Vec&)>;
  using DDChiFn = std::function<Array3(const Vec&)>;

  BoundaryEmbedding(Embedding parent, ChiFn chi, DChiFn d_chi, DDChiFn dd_chi,
                    Vec orientation_hint, std::optional<Face> face = std::nullopt);

  /// The face xi^coord = value, parametrized by the remaining coordinates in order.
  static BoundaryEmbedding coordinate_face(Embedding parent, int coord, double value,
                                           int outward_sign);

  const Embedding& parent() const { return parent_; }
  int dim() const { return parent_.dim() - 1; }
  const Vec& orientation_hint() const { return hint_; }
  const std::optional<Face>& face() const { return face_; }

  Vec chi(const Vec& u) const { return chi_(u); }
  Mat d_chi(const Vec& u) const { return d_chi_(u); }
  Array3 dd_chi(const Vec& u) const;

  /// Same boundary map attached to another parent with the same coordinates.
  BoundaryEmbedding rebased(Embedding parent) const;

  /// chi as an embedding into the parent worldsheet (induced background).
  Embedding in_worldsheet(double riemann_step = 1e-4) const;
  /// X o chi as an embedding directly into spacetime (chain-rule derivatives).
  Embedding in_spacetime() const;

private:
  Embedding parent_;
  ChiFn chi_;
  DChiFn d_chi_;
  DDChiFn dd_chi_;
  Vec hint_;
  std::optional<Face> face_;
};

struct BoundaryData {
  Mat tangents_in_m;     ///< D x (D-1), epsilon^a_A
  Vec normal_in_m;       ///< eta^a, unit, outward
  Mat boundary_metric;   ///< h_AB
  Mat edge_curvature;    ///< k_AB
  double edge_trace = 0; ///< k
  Mat projector;         ///< H^{ab}
  Vec spacetime_normal;  ///< eta^mu = e^mu_a eta^a
  Mat worldsheet_metric; ///< gamma_ab at chi(u)
};

struct AdaptedEdgeData {
  Mat spacetime_tangents;  ///< N x (D-1)
  Mat adapted_normals;     ///< N x (N-D+1); column 0 is eta, then n^i
  Array3 edge_extrinsic;   ///< K_AB^I stored (A, B, I)
  Array3 edge_twist;       ///< omega_A^{IJ} = g(n^J, D_A n^I) stored (A, I, J)

  /// Max differences of the inherited quantities against the parent data.
  struct Inheritance {
    double normal_curvature = 0;  ///< K^i_AB vs eps eps K^i_ab
    double edge_curvature = 0;    ///< K^0_AB vs k_AB
    double normal_twist = 0;      ///< omega_A ij vs eps omega_a ij
    double mixed_twist = 0;       ///< omega_A i0 vs eta eps K_ab i
    double twist_antisymmetry = 0;
  } inheritance;
};

/// Worldsheet scalar with value, gradient and Hessian callbacks in xi.
struct ScalarField {
  std::function<double(const Vec&)> value;
  std::function<Vec(const Vec&)> gradient;
  std::function<Mat(const Vec&)> hessian;
};

/// With K_ab^i = -g(n^i, D_a e_b) the normal part equals -H^{ab} K_ab^i
/// identically, so it vanishes exactly when boundary_condition_residual does.
struct LaplacianResiduals {
  Vec normal;     ///< n^i_mu [D^A D_A X^mu + Gamma H]
  double eta = 0; ///< eta_mu [...] - mu0/mub
  Vec combined;   ///< [...] - (mu0/mub) eta^mu
};

/// Unit outward normal in m orthogonal to the boundary tangents.
Vec boundary_normal(const Mat& tangents_in_m, const Mat& gamma, const Vec& hint);

BoundaryData boundary_data(const BoundaryEmbedding& bnd, const Vec& u, const Vec& orientation_hint);
BoundaryData boundary_data(const BoundaryEmbedding& bnd, const Vec& u);

/// mu_b k + mu_0; zero iff the edge equation of motion holds.
double edge_equation_residual(const BoundaryData& bd, double mu0, double mub);

/// H^{ab} K_ab^i at chi(u), in the canonical normal gauge at chi(u).
Vec boundary_condition_residual(const BoundaryEmbedding& bnd, const Vec& u);

/// Boundary-Laplacian form of the boundary conditions and edge law.
LaplacianResiduals boundary_laplacian_residuals(const BoundaryEmbedding& bnd, const Vec& u,
                                                double mu0, double mub);

/// Delta psi - [D^A D_A psi + eta^a eta^b nabla_a nabla_b psi + k eta^a nabla_a psi].
double laplacian_decomposition_residual(const BoundaryEmbedding& bnd, const Vec& u,
                                        const ScalarField& psi);

/// Adapted normal field {eta, n^i} of X o chi with the n^i gauge seeded at chi(u0).
NormalField adapted_normal_field(const BoundaryEmbedding& bnd, const Vec& u0);

AdaptedEdgeData adapted_edge_data(const BoundaryEmbedding& bnd, const Vec& u,
                                  GeometryOptions opts = {});

}  // namespace edgebrane
