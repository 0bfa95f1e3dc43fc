#include "edgebrane/integrability.hpp"

#include "edgebrane/errors.hpp"

#include <cmath>

namespace edgebrane {

namespace {

NormalField rotated(NormalField field, const Mat& rotation) {
  if (rotation.size() == 0) return field;
  return [field = std::move(field), rotation](const Vec& p) { return Mat(field(p) * rotation); };
}

// Everything the three residual families need at one point.
struct PointData {
  Mat tangents, normals, gamma, gamma_inv;
  CurvatureData center;
  Array4 riemann_up;       // R^a_bcd
  Array4 riemann_down;     // R_abcd
  Array4 ambient_up;       // R^mu_{nu rho sigma}, empty if flat
  Array4 ambient_down;
  Array4 d_extrinsic;      // (a, b, c, i) = d_a K_bc^i
  Array4 d_twist;          // (a, b, i, j) = d_a omega_b^{ij}
};

PointData evaluate(const Embedding& emb, const Vec& p, const NormalField& nf,
                   const IntegrabilityOptions& opts) {
  const int d = emb.dim();
  const double h = opts.step;
  PointData pd;
  pd.tangents = tangent_basis(emb, p);
  const Vec x = emb.position(p);
  const Mat g = emb.background().metric_at(x);
  pd.gamma = pd.tangents.transpose() * g * pd.tangents;
  pd.gamma_inv = pd.gamma.inverse();
  pd.normals = nf(p);
  const int k = static_cast<int>(pd.normals.cols());
  pd.center = extrinsic_curvature(emb, p, nf, opts.geometry);
  pd.riemann_up = worldsheet_riemann(emb, p, h);
  pd.riemann_down = lower_riemann(pd.gamma, pd.riemann_up);
  if (!emb.background().flat()) {
    pd.ambient_up = emb.background().riemann_at(x);
    pd.ambient_down = lower_riemann(g, pd.ambient_up);
  }

  pd.d_extrinsic = Array4(d, d, d, k);
  pd.d_twist = Array4(d, d, k, k);
  for (int a = 0; a < d; ++a) {
    Vec pp = p, pm = p;
    pp(a) += h;
    pm(a) -= h;
    const CurvatureData plus = extrinsic_curvature(emb, pp, nf, opts.geometry);
    const CurvatureData minus = extrinsic_curvature(emb, pm, nf, opts.geometry);
    for (int b = 0; b < d; ++b) {
      for (int c = 0; c < d; ++c)
        for (int i = 0; i < k; ++i)
          pd.d_extrinsic(a, b, c, i) = (plus.extrinsic(b, c, i) - minus.extrinsic(b, c, i)) / (2 * h);
      for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j)
          pd.d_twist(a, b, i, j) = (plus.twist(b, i, j) - minus.twist(b, i, j)) / (2 * h);
    }
  }
  return pd;
}

// Omega_ab^{ij} restricted to frame indices in [first, k).
Array4 twist_curvature(const PointData& pd, int first) {
  const int d = pd.d_twist.dim(0), k = pd.d_twist.dim(2);
  const Array3& w = pd.center.twist;
  Array4 out(d, d, k, k);
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b)
      for (int i = first; i < k; ++i)
        for (int j = first; j < k; ++j) {
          double s = pd.d_twist(b, a, i, j) - pd.d_twist(a, b, i, j);
          for (int l = first; l < k; ++l) s += w(a, i, l) * w(b, l, j) - w(b, i, l) * w(a, l, j);
          out(a, b, i, j) = s;
        }
  return out;
}

IntegrabilityResiduals residuals_from(const PointData& pd, const Array4& omega_curv) {
  const int d = pd.gamma.rows(), k = static_cast<int>(pd.normals.cols());
  const Array3& K = pd.center.extrinsic;
  const Array3& conn = pd.center.worldsheet_connection;
  const Array3& w = pd.center.twist;
  const Mat& E = pd.tangents;
  const Mat& N = pd.normals;
  const bool curved = pd.ambient_down.dim(0) > 0;

  Array4 R_eeee, R_neee, R_nnee;
  if (curved) {
    R_eeee = contract_riemann(pd.ambient_down, E, E, E, E);
    R_neee = contract_riemann(pd.ambient_down, N, E, E, E);
    R_nnee = contract_riemann(pd.ambient_down, N, N, E, E);
  }

  IntegrabilityResiduals r;

  // R_abcd = R(e_a, e_b, e_c, e_d) + K_ac K_bd - K_ad K_bc
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b)
      for (int c = 0; c < d; ++c)
        for (int e = 0; e < d; ++e) {
          double s = pd.riemann_down(a, b, c, e);
          if (curved) s -= R_eeee(a, b, c, e);
          for (int i = 0; i < k; ++i) s -= K(a, c, i) * K(b, e, i) - K(a, e, i) * K(b, c, i);
          r.gauss = std::max(r.gauss, std::abs(s));
        }

  // twisted derivative tilde-nabla_a K_bc^j
  auto twisted = [&](int a, int b, int c, int j) {
    double s = pd.d_extrinsic(a, b, c, j);
    for (int e = 0; e < d; ++e) s -= conn(a, b, e) * K(e, c, j) + conn(a, c, e) * K(b, e, j);
    for (int i = 0; i < k; ++i) s += w(a, i, j) * K(b, c, i);
    return s;
  };
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b)
      for (int c = 0; c < d; ++c) {
        double norm2 = 0.0;
        for (int j = 0; j < k; ++j) {
          double s = twisted(a, b, c, j) - twisted(b, a, c, j);
          if (curved) s += R_neee(j, c, a, b);
          norm2 += s * s;
        }
        r.codazzi = std::max(r.codazzi, std::sqrt(norm2));
      }

  if (k >= 2) {
    double worst = 0.0;
    for (int a = 0; a < d; ++a)
      for (int b = 0; b < d; ++b) {
        double norm2 = 0.0;
        for (int i = 0; i < k; ++i)
          for (int j = 0; j < k; ++j) {
            double s = omega_curv(a, b, i, j);
            for (int c = 0; c < d; ++c)
              for (int e = 0; e < d; ++e)
                s -= pd.gamma_inv(c, e) * (K(a, e, i) * K(b, c, j) - K(b, e, i) * K(a, c, j));
            if (curved) s += R_nnee(j, i, a, b);
            norm2 += s * s;
          }
        worst = std::max(worst, std::sqrt(norm2));
      }
    r.ricci = worst;
  }
  return r;
}

NormalField worldsheet_normals(const Embedding& emb, const Vec& point, bool aligned) {
  return normal_field(emb, aligned ? aligned_gauge(emb, point) : seeded_gauge(emb, point));
}

NormalField boundary_normals_in_m(const BoundaryEmbedding& bnd) {
  return [bnd](const Vec& u) {
    const BoundaryData bd = boundary_data(bnd, u);
    return Mat(bd.normal_in_m);
  };
}

NormalField adapted_rotated(const BoundaryEmbedding& bnd, const Vec& u, const Mat& rotation) {
  NormalField base = adapted_normal_field(bnd, u);
  if (rotation.size() == 0) return base;
  const int k = static_cast<int>(rotation.rows());
  Mat block = Mat::Identity(k + 1, k + 1);
  block.bottomRightCorner(k, k) = rotation;
  return rotated(std::move(base), block);
}

// Same frame as adapted_normal_field uses for n^i, optionally rotated.
NormalField parent_normals(const BoundaryEmbedding& bnd, const Vec& u, const Mat& rotation) {
  const Embedding& parent = bnd.parent();
  return rotated(normal_field(parent, seeded_gauge(parent, bnd.chi(u))), rotation);
}

}  // namespace

IntegrabilityResiduals submanifold_residuals(const Embedding& emb, const Vec& point,
                                             const NormalField& normals,
                                             const IntegrabilityOptions& opts,
                                             CurvatureTensors* tensors) {
  const PointData pd = evaluate(emb, point, normals, opts);
  const Array4 omega_curv = twist_curvature(pd, 0);
  if (tensors) {
    const int n = emb.ambient_dim();
    tensors->ambient_riemann =
        pd.ambient_up.dim(0) > 0 ? pd.ambient_up : Array4(n, n, n, n);
    tensors->worldsheet_riemann = pd.riemann_up;
    tensors->twist_curvature = omega_curv;
  }
  return residuals_from(pd, omega_curv);
}

IntegrabilityResiduals worldsheet_integrability_residuals(const Embedding& emb, const Vec& point,
                                                          const IntegrabilityOptions& opts) {
  try {
    return submanifold_residuals(
        emb, point, rotated(worldsheet_normals(emb, point, false), opts.normal_rotation), opts);
  } catch (const GaugeFailure&) {
    return submanifold_residuals(
        emb, point, rotated(worldsheet_normals(emb, point, true), opts.normal_rotation), opts);
  }
}

IntegrabilityResiduals boundary_integrability_residuals(const BoundaryEmbedding& bnd, const Vec& u,
                                                        const IntegrabilityOptions& opts) {
  const Embedding edge = bnd.in_worldsheet(opts.step);
  return submanifold_residuals(edge, u, boundary_normals_in_m(bnd), opts);
}

DirectEmbeddingResiduals direct_embedding_residuals(const BoundaryEmbedding& bnd, const Vec& u,
                                                    const IntegrabilityOptions& opts) {
  const Embedding edge = bnd.in_spacetime();
  const Embedding& parent = bnd.parent();
  const Vec xi = bnd.chi(u);

  const PointData edge_pd = evaluate(edge, u, adapted_rotated(bnd, u, opts.normal_rotation), opts);
  DirectEmbeddingResiduals out;
  out.embedding = residuals_from(edge_pd, twist_curvature(edge_pd, 0));

  const PointData parent_pd = evaluate(parent, xi, parent_normals(bnd, u, opts.normal_rotation), opts);
  const Array4 parent_omega = twist_curvature(parent_pd, 0);
  const Array4 edge_block = twist_curvature(edge_pd, 1);  // n^i block only
  const Array4 edge_full = twist_curvature(edge_pd, 0);

  const BoundaryData bd = boundary_data(bnd, u);
  const Mat& eps = bd.tangents_in_m;
  const Mat h_inv = bd.boundary_metric.inverse();
  const Mat k_mixed = bd.edge_curvature * h_inv;  // k_B^C = k_BD h^{DC}
  const Array3& K = parent_pd.center.extrinsic;
  const int m = bnd.dim(), d = parent.dim(), k = parent.codim();

  auto pull = [&](const Array4& T, int A, int B, int i, int j) {
    double s = 0.0;
    for (int a = 0; a < d; ++a)
      for (int b = 0; b < d; ++b) s += eps(a, A) * eps(b, B) * T(a, b, i, j);
    return s;
  };
  // eps^a_A eps^c_C K_ac^i
  auto KeE = [&](int A, int C, int i) {
    double s = 0.0;
    for (int a = 0; a < d; ++a)
      for (int c = 0; c < d; ++c) s += eps(a, A) * eps(c, C) * K(a, c, i);
    return s;
  };

  for (int A = 0; A < m; ++A)
    for (int B = 0; B < m; ++B) {
      double norm2 = 0.0;
      for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) {
          const double s = edge_block(A, B, i + 1, j + 1) - pull(parent_omega, A, B, i, j);
          norm2 += s * s;
        }
      out.twist_normal = std::max(out.twist_normal, std::sqrt(norm2));

      double mixed2 = 0.0;
      for (int i = 0; i < k; ++i) {
        double expected = 0.0;
        for (int C = 0; C < m; ++C)
          expected += KeE(A, C, i) * k_mixed(B, C) - KeE(B, C, i) * k_mixed(A, C);
        const double s = edge_full(A, B, i + 1, 0) - expected;
        mixed2 += s * s;
      }
      out.twist_mixed = std::max(out.twist_mixed, std::sqrt(mixed2));
    }
  return out;
}

CurvatureTensors curvature_tensors(const BoundaryEmbedding& bnd, const Vec& u,
                                   const IntegrabilityOptions& opts) {
  const Embedding& parent = bnd.parent();
  const Vec xi = bnd.chi(u);
  CurvatureTensors t;
  submanifold_residuals(parent, xi, parent_normals(bnd, u, opts.normal_rotation), opts, &t);
  const Embedding edge = bnd.in_spacetime();
  const PointData edge_pd = evaluate(edge, u, adapted_rotated(bnd, u, opts.normal_rotation), opts);
  t.boundary_riemann = edge_pd.riemann_up;
  t.adapted_twist_curvature = twist_curvature(edge_pd, 0);
  return t;
}

}  // namespace edgebrane
