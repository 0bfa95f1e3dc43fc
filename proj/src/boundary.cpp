#include "edgebrane/boundary.hpp"

#include "edgebrane/errors.hpp"

#include <cmath>
#include <utility>

namespace edgebrane {

BoundaryEmbedding::BoundaryEmbedding(Embedding parent, ChiFn chi, DChiFn d_chi, DDChiFn dd_chi,
                                     Vec orientation_hint, std::optional<Face> face)
    : parent_(std::move(parent)),
      chi_(std::move(chi)),
      d_chi_(std::move(d_chi)),
      dd_chi_(std::move(dd_chi)),
      hint_(std::move(orientation_hint)),
      face_(face) {}

BoundaryEmbedding BoundaryEmbedding::coordinate_face(Embedding parent, int coord, double value,
                                                     int outward_sign) {
  const int d = parent.dim();
  auto chi = [d, coord, value](const Vec& u) {
    Vec xi(d);
    for (int a = 0, A = 0; a < d; ++a) xi(a) = (a == coord) ? value : u(A++);
    return xi;
  };
  auto d_chi = [d, coord](const Vec&) {
    Mat m = Mat::Zero(d, d - 1);
    for (int a = 0, A = 0; a < d; ++a)
      if (a != coord) m(a, A++) = 1.0;
    return m;
  };
  auto dd_chi = [d](const Vec&) { return Array3(d, d - 1, d - 1); };
  Vec hint = Vec::Zero(d);
  hint(coord) = outward_sign;
  return BoundaryEmbedding(std::move(parent), chi, d_chi, dd_chi, hint,
                           Face{coord, value, outward_sign});
}

BoundaryEmbedding BoundaryEmbedding::rebased(Embedding parent) const {
  return BoundaryEmbedding(std::move(parent), chi_, d_chi_, dd_chi_, hint_, face_);
}

Array3 BoundaryEmbedding::dd_chi(const Vec& u) const {
  if (dd_chi_) return dd_chi_(u);
  const int d = parent_.dim(), m = d - 1;
  const double h = 1e-5;
  Array3 out(d, m, m);
  for (int A = 0; A < m; ++A) {
    Vec p = u, q = u;
    p(A) += h;
    q(A) -= h;
    const Mat de = (d_chi_(p) - d_chi_(q)) / (2 * h);
    for (int a = 0; a < d; ++a)
      for (int B = 0; B < m; ++B) out(a, A, B) = de(a, B);
  }
  return out;
}

Embedding BoundaryEmbedding::in_worldsheet(double riemann_step) const {
  auto self = *this;
  return Embedding(
      dim(), induced_background(parent_, riemann_step), [self](const Vec& u) { return self.chi(u); },
      [self](const Vec& u) { return self.d_chi(u); },
      [self](const Vec& u) { return self.dd_chi(u); });
}

Embedding BoundaryEmbedding::in_spacetime() const {
  auto self = *this;
  auto pos = [self](const Vec& u) { return self.parent_.position(self.chi(u)); };
  auto first = [self](const Vec& u) {
    return Mat(self.parent_.d_position(self.chi(u)) * self.d_chi(u));
  };
  auto second = [self](const Vec& u) {
    const Vec xi = self.chi(u);
    const Mat E = self.parent_.d_position(xi);
    const Array3 dd = self.parent_.dd_position(xi);
    const Mat dc = self.d_chi(u);
    const Array3 ddc = self.dd_chi(u);
    const int n = static_cast<int>(E.rows()), d = static_cast<int>(E.cols());
    const int m = d - 1;
    Array3 out(n, m, m);
    for (int mu = 0; mu < n; ++mu)
      for (int A = 0; A < m; ++A)
        for (int B = 0; B < m; ++B) {
          double s = 0.0;
          for (int a = 0; a < d; ++a) {
            s += E(mu, a) * ddc(a, A, B);
            for (int b = 0; b < d; ++b) s += dd(mu, a, b) * dc(a, A) * dc(b, B);
          }
          out(mu, A, B) = s;
        }
    return out;
  };
  return Embedding(dim(), parent_.background(), pos, first, second);
}

Vec boundary_normal(const Mat& eps, const Mat& gamma, const Vec& hint) {
  const Mat h = eps.transpose() * gamma * eps;
  Vec v = hint;
  for (int pass = 0; pass < 2; ++pass)
    v -= eps * h.ldlt().solve(eps.transpose() * (gamma * v));
  const double n2 = v.dot(gamma * v);
  if (!(n2 > 1e-12 * hint.squaredNorm()))
    throw NullBoundary("boundary normal cannot be normalized (null or degenerate edge)");
  return v / std::sqrt(n2);
}

namespace {

// nabla_A epsilon_B^c = chi^c_{,AB} + gamma_ab^c chi^a_A chi^b_B, stored (c, A, B).
Array3 boundary_hessian_in_m(const BoundaryEmbedding& bnd, const Vec& u, const Array3& conn) {
  const Mat eps = bnd.d_chi(u);
  Array3 out = bnd.dd_chi(u);
  const int d = static_cast<int>(eps.rows()), m = d - 1;
  for (int c = 0; c < d; ++c)
    for (int A = 0; A < m; ++A)
      for (int B = 0; B < m; ++B) {
        double s = 0.0;
        for (int a = 0; a < d; ++a)
          for (int b = 0; b < d; ++b) s += conn(a, b, c) * eps(a, A) * eps(b, B);
        out(c, A, B) += s;
      }
  return out;
}

}  // namespace

BoundaryData boundary_data(const BoundaryEmbedding& bnd, const Vec& u, const Vec& hint) {
  const Embedding& parent = bnd.parent();
  const Vec xi = bnd.chi(u);
  BoundaryData bd;
  bd.tangents_in_m = bnd.d_chi(u);
  bd.worldsheet_metric = induced_metric(parent, xi);
  const Mat& gamma = bd.worldsheet_metric;
  const Mat& eps = bd.tangents_in_m;
  bd.boundary_metric = eps.transpose() * gamma * eps;
  const int m = bnd.dim(), d = parent.dim();
  {
    double scale = 1.0;
    for (int A = 0; A < m; ++A) scale *= eps.col(A).squaredNorm();
    if (m > 0 && std::abs(bd.boundary_metric.determinant()) < kDegenerateDeterminant * scale)
      throw NullBoundary("boundary metric is degenerate (null edge)");
  }
  bd.normal_in_m = boundary_normal(eps, gamma, hint);
  const Mat h_inv = bd.boundary_metric.inverse();

  const Array3 conn = worldsheet_connection(parent, xi);
  const Array3 nabla_eps = boundary_hessian_in_m(bnd, u, conn);
  const Vec g_eta = gamma * bd.normal_in_m;
  bd.edge_curvature = Mat::Zero(m, m);
  for (int A = 0; A < m; ++A)
    for (int B = 0; B < m; ++B) {
      double s = 0.0;
      for (int c = 0; c < d; ++c) s += g_eta(c) * nabla_eps(c, A, B);
      bd.edge_curvature(A, B) = -s;
    }
  bd.edge_curvature = 0.5 * (bd.edge_curvature + bd.edge_curvature.transpose()).eval();
  bd.edge_trace = (h_inv.cwiseProduct(bd.edge_curvature)).sum();
  bd.projector = eps * h_inv * eps.transpose();
  bd.spacetime_normal = parent.d_position(xi) * bd.normal_in_m;
  return bd;
}

BoundaryData boundary_data(const BoundaryEmbedding& bnd, const Vec& u) {
  return boundary_data(bnd, u, bnd.orientation_hint());
}

double edge_equation_residual(const BoundaryData& bd, double mu0, double mub) {
  if (!(mub > 0.0)) throw InvalidParameters("edge tension must be positive");
  return mub * bd.edge_trace + mu0;
}

Vec boundary_condition_residual(const BoundaryEmbedding& bnd, const Vec& u) {
  const BoundaryData bd = boundary_data(bnd, u);
  const Vec xi = bnd.chi(u);
  const Embedding& parent = bnd.parent();
  const Mat g = parent.background().metric_at(parent.position(xi));
  const Mat N = normal_frame(parent, xi);
  const Array3 De = covariant_hessian(parent, xi);
  const int d = parent.dim(), k = parent.codim(), n = parent.ambient_dim();
  Vec r = Vec::Zero(k);
  const Mat gN = g * N;
  for (int i = 0; i < k; ++i)
    for (int a = 0; a < d; ++a)
      for (int b = 0; b < d; ++b) {
        if (bd.projector(a, b) == 0.0) continue;
        double K = 0.0;
        for (int mu = 0; mu < n; ++mu) K -= gN(mu, i) * De(mu, a, b);
        r(i) += bd.projector(a, b) * K;
      }
  return r;
}

LaplacianResiduals boundary_laplacian_residuals(const BoundaryEmbedding& bnd, const Vec& u,
                                                double mu0, double mub) {
  if (!(mub > 0.0)) throw InvalidParameters("edge tension must be positive");
  const BoundaryData bd = boundary_data(bnd, u);
  const Embedding edge = bnd.in_spacetime();
  const Embedding& parent = bnd.parent();
  const Vec xi = bnd.chi(u);
  const Vec x = parent.position(xi);
  const Mat g = parent.background().metric_at(x);
  const Mat eA = edge.d_position(u);
  const Array3 De = covariant_hessian(edge, u);  // includes Gamma e_A e_B
  const Mat h = eA.transpose() * g * eA;
  const Mat h_inv = h.inverse();
  const int n = edge.ambient_dim(), m = edge.dim();

  // L^mu = h^{AB} (D_A e_B - gamma_AB^C e_C): the boundary Laplacian of X^mu plus
  // the Christoffel term Gamma^mu_{alpha beta} H^{alpha beta}.
  Vec L = Vec::Zero(n);
  for (int A = 0; A < m; ++A)
    for (int B = 0; B < m; ++B) {
      Vec v(n);
      for (int mu = 0; mu < n; ++mu) v(mu) = De(mu, A, B);
      const Vec tang = h_inv * (eA.transpose() * (g * v));
      L += h_inv(A, B) * (v - eA * tang);
    }

  const Mat N = normal_frame(parent, xi);
  LaplacianResiduals r;
  r.normal = N.transpose() * g * L;
  r.eta = bd.spacetime_normal.dot(g * L) - mu0 / mub;
  r.combined = L - (mu0 / mub) * bd.spacetime_normal;
  return r;
}

double laplacian_decomposition_residual(const BoundaryEmbedding& bnd, const Vec& u,
                                        const ScalarField& psi) {
  const BoundaryData bd = boundary_data(bnd, u);
  const Embedding& parent = bnd.parent();
  const Vec xi = bnd.chi(u);
  const Array3 conn = worldsheet_connection(parent, xi);
  const Mat& gamma = bd.worldsheet_metric;
  const Mat gamma_inv = gamma.inverse();
  const int d = parent.dim(), m = bnd.dim();
  const Vec grad = psi.gradient(xi);
  const Mat hess = psi.hessian(xi);

  // nabla_a nabla_b psi
  Mat cov = hess;
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b)
      for (int c = 0; c < d; ++c) cov(a, b) -= conn(a, b, c) * grad(c);
  const double laplacian = gamma_inv.cwiseProduct(cov).sum();

  // Intrinsic boundary Laplacian of psi o chi.
  const Mat& eps = bd.tangents_in_m;
  const Array3 ddc = bnd.dd_chi(u);
  const Array3 nabla_eps = boundary_hessian_in_m(bnd, u, conn);
  const Mat h_inv = bd.boundary_metric.inverse();
  double boundary_laplacian = 0.0;
  for (int A = 0; A < m; ++A)
    for (int B = 0; B < m; ++B) {
      // d_A d_B (psi o chi)
      double second = eps.col(A).dot(hess * eps.col(B));
      for (int a = 0; a < d; ++a) second += grad(a) * ddc(a, A, B);
      // gamma_AB^C d_C(psi o chi) = tangential part of nabla_A eps_B applied to grad
      Vec ne(d);
      for (int c = 0; c < d; ++c) ne(c) = nabla_eps(c, A, B);
      const Vec coeff = h_inv * (eps.transpose() * (gamma * ne));
      const double connection_term = (eps * coeff).dot(grad);
      boundary_laplacian += h_inv(A, B) * (second - connection_term);
    }

  const Vec& eta = bd.normal_in_m;
  const double normal_second = eta.dot(cov * eta);
  const double normal_first = eta.dot(grad);
  return laplacian - (boundary_laplacian + normal_second + bd.edge_trace * normal_first);
}

NormalField adapted_normal_field(const BoundaryEmbedding& bnd, const Vec& u0) {
  const NormalGauge gauge = seeded_gauge(bnd.parent(), bnd.chi(u0));
  return [bnd, gauge](const Vec& u) {
    const Vec xi = bnd.chi(u);
    const BoundaryData bd = boundary_data(bnd, u);
    const Mat N = normal_frame(bnd.parent(), xi, gauge);
    Mat out(N.rows(), N.cols() + 1);
    out.col(0) = bd.spacetime_normal;
    out.rightCols(N.cols()) = N;
    return out;
  };
}

AdaptedEdgeData adapted_edge_data(const BoundaryEmbedding& bnd, const Vec& u, GeometryOptions opts) {
  const Embedding edge = bnd.in_spacetime();
  const Embedding& parent = bnd.parent();
  const Vec xi = bnd.chi(u);
  const NormalField adapted = adapted_normal_field(bnd, u);
  const NormalField parent_normals = normal_field(parent, seeded_gauge(parent, xi));
  const BoundaryData bd = boundary_data(bnd, u);

  AdaptedEdgeData out;
  out.spacetime_tangents = edge.d_position(u);
  out.adapted_normals = adapted(u);
  const CurvatureData direct = extrinsic_curvature(edge, u, adapted, opts);
  out.edge_extrinsic = direct.extrinsic;
  out.edge_twist = direct.twist;

  const CurvatureData pc = extrinsic_curvature(parent, xi, parent_normals, opts);
  const Mat& eps = bd.tangents_in_m;
  const Vec& eta = bd.normal_in_m;
  const int m = bnd.dim(), d = parent.dim(), k = parent.codim();
  auto& inh = out.inheritance;
  for (int A = 0; A < m; ++A)
    for (int B = 0; B < m; ++B) {
      inh.edge_curvature = std::max(
          inh.edge_curvature, std::abs(out.edge_extrinsic(A, B, 0) - bd.edge_curvature(A, B)));
      for (int i = 0; i < k; ++i) {
        double projected = 0.0;
        for (int a = 0; a < d; ++a)
          for (int b = 0; b < d; ++b) projected += eps(a, A) * eps(b, B) * pc.extrinsic(a, b, i);
        inh.normal_curvature =
            std::max(inh.normal_curvature, std::abs(out.edge_extrinsic(A, B, i + 1) - projected));
      }
    }
  for (int A = 0; A < m; ++A) {
    for (int i = 0; i < k; ++i) {
      for (int j = 0; j < k; ++j) {
        double projected = 0.0;
        for (int a = 0; a < d; ++a) projected += eps(a, A) * pc.twist(a, i, j);
        inh.normal_twist =
            std::max(inh.normal_twist, std::abs(out.edge_twist(A, i + 1, j + 1) - projected));
      }
      double mixed = 0.0;
      for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b) mixed += eta(a) * eps(b, A) * pc.extrinsic(a, b, i);
      inh.mixed_twist = std::max(inh.mixed_twist, std::abs(out.edge_twist(A, i + 1, 0) - mixed));
    }
    for (int I = 0; I <= k; ++I)
      for (int J = 0; J <= k; ++J)
        inh.twist_antisymmetry = std::max(
            inh.twist_antisymmetry, std::abs(out.edge_twist(A, I, J) + out.edge_twist(A, J, I)));
  }
  return out;
}

}  // namespace edgebrane
