#pragma once

#include "edgebrane/boundary.hpp"

#include <optional>

namespace edgebrane {

/// Curvature tensors entering the integrability conditions at one point.
///
/// twist_curvature(a, b, i, j) is
///   Omega_ab^{ij} = d_b omega_a^{ij} - d_a omega_b^{ij} + (omega_a omega_b - omega_b omega_a)^{ij}
/// with omega_a read as a matrix in (i, j).
struct CurvatureTensors {
  Array4 ambient_riemann;          ///< R^mu_{nu rho sigma} at X(xi)
  Array4 worldsheet_riemann;       ///< R^a_{bcd} of gamma
  Array4 boundary_riemann;         ///< R^A_{BCD} of h (empty without a boundary)
  Array4 twist_curvature;          ///< Omega_ab^{ij}
  Array4 adapted_twist_curvature;  ///< Omega_AB^{IJ}, index 0 = eta (empty without a boundary)
};

struct IntegrabilityOptions {
  /// Central-difference step for derivatives of K, omega and the connection.
  double step = 1e-4;
  GeometryOptions geometry;
  /// Constant O(N-D) rotation of the normal frame (empty = none).
  Mat normal_rotation;
};

/// Max-norm residuals; norms are taken over normal indices in the Frobenius
/// sense so they do not depend on the normal gauge.
struct IntegrabilityResiduals {
  double gauss = 0.0;
  double codazzi = 0.0;
  /// Empty for co-dimension one, where the Ricci conditions are vacuous.
  std::optional<double> ricci;

  double max() const { return std::max({gauss, codazzi, ricci.value_or(0.0)}); }
};

struct DirectEmbeddingResiduals {
  IntegrabilityResiduals embedding;
  /// Omega_AB ij against eps eps Omega_ab ij (normal-normal block).
  double twist_normal = 0.0;
  /// Omega_AB i0 against the edge/parent curvature combination.
  double twist_mixed = 0.0;

  double max() const { return std::max({embedding.max(), twist_normal, twist_mixed}); }
};

/// Gauss, Codazzi and Ricci residuals of `emb` at `point` with normals taken
/// from a smooth field. Optionally fills the Riemann and twist curvatures.
IntegrabilityResiduals submanifold_residuals(const Embedding& emb, const Vec& point,
                                             const NormalField& normals,
                                             const IntegrabilityOptions& opts = {},
                                             CurvatureTensors* tensors = nullptr);

/// Worldsheet in spacetime, seeded normal gauge at `point` (aligned gauge on GaugeFailure).
IntegrabilityResiduals worldsheet_integrability_residuals(const Embedding& emb, const Vec& point,
                                                          const IntegrabilityOptions& opts = {});

/// Edge in the worldsheet; the worldsheet metric acts as the background.
IntegrabilityResiduals boundary_integrability_residuals(const BoundaryEmbedding& bnd, const Vec& u,
                                                        const IntegrabilityOptions& opts = {});

/// Edge directly in spacetime with adapted normals {eta, n^i}, plus the two
/// twist-consistency relations against the parent worldsheet.
DirectEmbeddingResiduals direct_embedding_residuals(const BoundaryEmbedding& bnd, const Vec& u,
                                                    const IntegrabilityOptions& opts = {});

/// All curvature tensors at the boundary point u.
CurvatureTensors curvature_tensors(const BoundaryEmbedding& bnd, const Vec& u,
                                   const IntegrabilityOptions& opts = {});

}  // namespace edgebrane
