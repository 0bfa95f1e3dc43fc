#pragma once

#include "edgebrane/embedding.hpp"

#include <functional>
#include <vector>

namespace edgebrane {

/// Tangents e^mu_a, normals n^mu_i and induced metric gamma_ab at one point.
struct Frame {
  Mat tangents;                ///< N x D
  Mat normals;                 ///< N x (N-D)
  Mat induced_metric;          ///< D x D
  Mat induced_metric_inverse;  ///< D x D
};

/// Extrinsic data at one point.
///   extrinsic(a, b, i)            K_ab^i = -g(n^i, D_a e_b)
///   traces(i)                     K^i = gamma^{ab} K_ab^i
///   twist(a, i, j)                omega_a^{ij} = g(n^j, D_a n^i)
///   worldsheet_connection(a,b,c)  gamma_ab^c
struct CurvatureData {
  Array3 extrinsic;
  Vec traces;
  Array3 twist;
  Array3 worldsheet_connection;
};

/// How the O(N-D) freedom of the normal frame is fixed near a point.
///
/// canonical: Gram-Schmidt over coordinate axes in ascending order, first
///            non-negligible component of each normal positive.
/// seeded:    Gram-Schmidt over a fixed list of seed axes, signs matched to
///            a reference frame. Smooth wherever the seeds stay transverse.
/// aligned:   canonical frame rotated onto a fixed reference frame by the
///            closest orthogonal matrix (polar/Procrustes alignment).
/// A non-empty `rotation` (k x k, orthogonal) is applied last.
struct NormalGauge {
  enum class Kind { canonical, seeded, aligned };
  Kind kind = Kind::canonical;
  std::vector<int> seed_axes;
  Mat reference;
  Mat rotation;
};

using NormalField = std::function<Mat(const Vec&)>;

/// Seeded gauge using the axes Gram-Schmidt accepts at `point`.
NormalGauge seeded_gauge(const Embedding& emb, const Vec& point);
/// Aligned gauge whose reference is the canonical frame at `point`.
NormalGauge aligned_gauge(const Embedding& emb, const Vec& point);
/// Normal vector field of `emb` in the given gauge.
NormalField normal_field(const Embedding& emb, NormalGauge gauge);

Mat tangent_basis(const Embedding& emb, const Vec& point);
Mat induced_metric(const Embedding& emb, const Vec& point);
Mat normal_frame(const Embedding& emb, const Vec& point);
Mat normal_frame(const Embedding& emb, const Vec& point, const NormalGauge& gauge);
Frame frame_at(const Embedding& emb, const Vec& point);
Frame frame_at(const Embedding& emb, const Vec& point, const NormalGauge& gauge);

/// Covariant second derivative D_a e_b = X_{,ab} + Gamma X_{,a} X_{,b}, stored (mu, a, b).
Array3 covariant_hessian(const Embedding& emb, const Vec& point);
/// gamma_ab^c from the tangential projection of D_a e_b.
Array3 worldsheet_connection(const Embedding& emb, const Vec& point);

struct GeometryOptions {
  /// Step of the fourth-order stencil used to differentiate normals.
  double frame_step = 1e-3;
};

/// Curvature with the twist evaluated in the seeded gauge at `point`.
CurvatureData extrinsic_curvature(const Embedding& emb, const Vec& point,
                                  GeometryOptions opts = {});
/// Curvature with normals and twist taken from a caller-supplied smooth field.
CurvatureData extrinsic_curvature(const Embedding& emb, const Vec& point,
                                  const NormalField& normals, GeometryOptions opts = {});

/// Twist omega(a, i, j) = g(D_a n_i, n_j) of a normal field (4th-order FD).
Array3 twist_of(const Embedding& emb, const Vec& point, const NormalField& normals,
                double step);

struct GaussWeingartenResidual {
  double gauss = 0.0;
  double weingarten = 0.0;
};

/// Max-norm residuals of the Gauss and Weingarten decompositions, with frame
/// derivatives and the connection taken from central differences of step h.
GaussWeingartenResidual gauss_weingarten_residual(const Embedding& emb, const Vec& point,
                                                  double h = 1e-4);

/// Riemann tensor R^a_{bcd} of the induced metric (central FD of the connection).
Array4 worldsheet_riemann(const Embedding& emb, const Vec& point, double h = 1e-4);
/// Ricci scalar gamma^{bd} R^a_{bad}.
double scalar_curvature(const Array4& riemann_up, const Mat& metric_inverse);

/// The worldsheet itself as a background: metric gamma_ab(xi), connection
/// gamma_ab^c and Riemann tensor by central FD with `riemann_step`.
BackgroundMetric induced_background(const Embedding& parent, double riemann_step = 1e-4);

/// Orthonormality defects max|g(e_a, n_i)| and max|g(n_i, n_j) - delta_ij|.
std::pair<double, double> orthonormality_defect(const Embedding& emb, const Frame& frame,
                                                const Vec& point);

/// Relative determinant floor below which the induced metric is declared degenerate.
inline constexpr double kDegenerateDeterminant = 1e-12;

}  // namespace edgebrane
