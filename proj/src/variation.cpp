#include "edgebrane/variation.hpp"

#include "edgebrane/errors.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numbers>

namespace edgebrane {

std::pair<Vec, Vec> gauss_legendre(int order) {
  if (order < 1) throw InvalidParameters("Gauss-Legendre order must be at least 1");
  // Golub-Welsch: nodes are the eigenvalues of the Jacobi matrix.
  Mat J = Mat::Zero(order, order);
  for (int k = 1; k < order; ++k) {
    const double b = k / std::sqrt(4.0 * k * k - 1.0);
    J(k, k - 1) = J(k - 1, k) = b;
  }
  Eigen::SelfAdjointEigenSolver<Mat> es(J);
  Vec nodes = es.eigenvalues();
  Vec weights = 2.0 * es.eigenvectors().row(0).transpose().array().square();
  return {nodes, weights};
}

std::vector<QuadratureNode> quadrature_nodes(const QuadratureGrid& grid) {
  const int d = static_cast<int>(grid.lower.size());
  if (static_cast<int>(grid.cells.size()) != d)
    throw InvalidParameters("quadrature grid needs one cell count per axis");
  Vec ref_x(1), ref_w(1);
  ref_x(0) = 0.0;
  ref_w(0) = 2.0;
  if (grid.rule == QuadratureRule::gauss_legendre) std::tie(ref_x, ref_w) = gauss_legendre(grid.order);
  const int q = static_cast<int>(ref_x.size());

  // 1d node lists per axis
  std::vector<std::vector<std::pair<double, double>>> axis(d);
  for (int a = 0; a < d; ++a) {
    if (grid.cells[a] < 1) throw InvalidParameters("quadrature needs at least one cell per axis");
    const double width = (grid.upper(a) - grid.lower(a)) / grid.cells[a];
    for (int c = 0; c < grid.cells[a]; ++c) {
      const double mid = grid.lower(a) + (c + 0.5) * width;
      for (int j = 0; j < q; ++j)
        axis[a].push_back({mid + 0.5 * width * ref_x(j), 0.5 * width * ref_w(j)});
    }
  }
  std::vector<QuadratureNode> out;
  if (d == 0) {
    out.push_back({Vec(0), 1.0});
    return out;
  }
  std::vector<std::size_t> idx(d, 0);
  while (true) {
    QuadratureNode node{Vec(d), 1.0};
    for (int a = 0; a < d; ++a) {
      node.point(a) = axis[a][idx[a]].first;
      node.weight *= axis[a][idx[a]].second;
    }
    out.push_back(std::move(node));
    int a = 0;
    while (a < d && ++idx[a] == axis[a].size()) idx[a++] = 0;
    if (a == d) break;
  }
  return out;
}

double pairwise_sum(const std::vector<double>& v) {
  std::vector<double> level = v;
  if (level.empty()) return 0.0;
  while (level.size() > 1) {
    std::vector<double> next((level.size() + 1) / 2);
    for (std::size_t i = 0; i < next.size(); ++i)
      next[i] = level[2 * i] + (2 * i + 1 < level.size() ? level[2 * i + 1] : 0.0);
    level.swap(next);
  }
  return level[0];
}

namespace {

std::pair<Vec, Vec> face_box(const CatalogEntry& e, const BoundaryEmbedding& b) {
  const int d = static_cast<int>(e.lower.size());
  const int skip = b.face() ? b.face()->coord : -1;
  Vec lo(d - 1), hi(d - 1);
  for (int a = 0, A = 0; a < d; ++a) {
    if (a == skip) continue;
    lo(A) = e.lower(a);
    hi(A) = e.upper(a);
    ++A;
  }
  return {lo, hi};
}

double sqrt_abs_det(const Mat& m) { return m.size() == 0 ? 1.0 : std::sqrt(std::abs(m.determinant())); }

// K_ab^i = -g(n_i, D_a e_b) for a supplied normal frame.
Array3 extrinsic_with(const Embedding& emb, const Vec& xi, const Mat& normals) {
  const Mat g = emb.background().metric_at(emb.position(xi));
  const Array3 De = covariant_hessian(emb, xi);
  const Mat gN = g * normals;
  const int d = emb.dim(), k = static_cast<int>(normals.cols()), n = emb.ambient_dim();
  Array3 K(d, d, k);
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b)
      for (int i = 0; i < k; ++i) {
        double s = 0.0;
        for (int mu = 0; mu < n; ++mu) s -= gN(mu, i) * De(mu, a, b);
        K(a, b, i) = s;
      }
  return K;
}

Vec face_coordinates(const BoundaryEmbedding& b, const Vec& xi) {
  const int c = b.face()->coord;
  Vec u(xi.size() - 1);
  for (int a = 0, A = 0; a < xi.size(); ++a)
    if (a != c) u(A++) = xi(a);
  return u;
}

}  // namespace

ActionConfig action_config(const CatalogEntry& e, int cells, QuadratureRule rule, int order) {
  ActionConfig cfg;
  cfg.mu0 = e.parameter("mu0", 1.0);
  cfg.mub = e.parameter("mub", 1.0);
  const int d = static_cast<int>(e.lower.size());
  cfg.worldsheet = {e.lower, e.upper, std::vector<int>(d, cells), rule, order};
  for (const auto& b : e.boundaries) {
    auto [lo, hi] = face_box(e, b);
    cfg.boundaries.push_back({lo, hi, std::vector<int>(d - 1, cells), rule, order});
  }
  return cfg;
}

double Window::operator()(const Vec& xi) const {
  const double width = fraction * (upper - lower);
  const double x = xi(axis);
  auto ramp = [](double s) {
    if (s <= 0.0) return 0.0;
    if (s >= 1.0) return 1.0;
    return 0.5 * (1.0 - std::cos(std::numbers::pi * s));
  };
  double w = 1.0;
  if (taper_lower) w *= ramp((x - lower) / width);
  if (taper_upper) w *= ramp((upper - x) / width);
  return w;
}

double DeformationField::window(const Vec& xi) const {
  double w = 1.0;
  for (const auto& win : windows) w *= win(xi);
  return w;
}

Vec DeformationField::tangential_at(const Vec& xi, int dim) const {
  if (!tangential) return Vec::Zero(dim);
  return window(xi) * tangential(xi);
}

Vec DeformationField::normal_at(const Vec& xi, int codim) const {
  if (!normal) return Vec::Zero(codim);
  return window(xi) * normal(xi);
}

double DeformationField::psi(std::size_t b, const Vec& u, const Vec& xi) const {
  if (!boundary_normal) return 0.0;
  return window(xi) * boundary_normal(b, u);
}

Vec DeformationField::psi_tangential(std::size_t b, const Vec& u, const Vec& xi, int dim) const {
  if (!boundary_tangential) return Vec::Zero(dim);
  return window(xi) * boundary_tangential(b, u);
}

Vec DeformationField::displacement(const Embedding& emb, const Vec& xi) const {
  Vec dx = Vec::Zero(emb.ambient_dim());
  if (tangential) dx += emb.d_position(xi) * tangential_at(xi, emb.dim());
  if (normal) dx += normals(xi) * normal_at(xi, emb.codim());
  return dx;
}

std::vector<Window> default_windows(const CatalogEntry& e, double fraction) {
  std::vector<Window> out;
  const int d = static_cast<int>(e.lower.size());
  for (int a = 0; a < d; ++a) {
    if (std::find(e.periodic_axes.begin(), e.periodic_axes.end(), a) != e.periodic_axes.end())
      continue;
    bool lower_edge = false, upper_edge = false;
    for (const auto& b : e.boundaries) {
      if (!b.face() || b.face()->coord != a) continue;
      if (b.face()->value == e.lower(a)) lower_edge = true;
      if (b.face()->value == e.upper(a)) upper_edge = true;
    }
    if (lower_edge && upper_edge) continue;
    out.push_back({a, e.lower(a), e.upper(a), fraction, !lower_edge, !upper_edge});
  }
  return out;
}

double dng_action(const Embedding& emb, const QuadratureGrid& grid, double mu0) {
  std::vector<double> terms;
  for (const auto& node : quadrature_nodes(grid))
    terms.push_back(node.weight * sqrt_abs_det(induced_metric(emb, node.point)));
  return -mu0 * pairwise_sum(terms);
}

double edge_action(const BoundaryEmbedding& bnd, const QuadratureGrid& grid, double mub) {
  const Embedding& parent = bnd.parent();
  std::vector<double> terms;
  for (const auto& node : quadrature_nodes(grid)) {
    const Vec xi = bnd.chi(node.point);
    const Mat eA = parent.d_position(xi) * bnd.d_chi(node.point);
    const Mat g = parent.background().metric_at(parent.position(xi));
    terms.push_back(node.weight * sqrt_abs_det(eA.transpose() * g * eA));
  }
  return -mub * pairwise_sum(terms);
}

double total_action(const Embedding& emb, const std::vector<BoundaryEmbedding>& bnds,
                    const ActionConfig& cfg) {
  if (cfg.boundaries.size() != bnds.size())
    throw InvalidParameters("action config needs one quadrature grid per boundary");
  double s = dng_action(emb, cfg.worldsheet, cfg.mu0);
  for (std::size_t b = 0; b < bnds.size(); ++b) s += edge_action(bnds[b], cfg.boundaries[b], cfg.mub);
  return s;
}

Mat metric_variation(const Embedding& emb, const Vec& p, const DeformationField& f, double step) {
  const int d = emb.dim();
  const Mat gamma = induced_metric(emb, p);
  const Array3 conn = worldsheet_connection(emb, p);
  Mat dphi(d, d);  // dphi(c, a) = d_a Phi^c
  for (int a = 0; a < d; ++a) {
    auto at = [&](double s) {
      Vec q = p;
      q(a) += s;
      return f.tangential_at(q, d);
    };
    dphi.col(a) = (-at(2 * step) + 8.0 * at(step) - 8.0 * at(-step) + at(-2 * step)) / (12.0 * step);
  }
  const Vec phi = f.tangential_at(p, d);
  Mat nabla(d, d);  // nabla(a, c) = nabla_a Phi^c
  for (int a = 0; a < d; ++a)
    for (int c = 0; c < d; ++c) {
      double s = dphi(c, a);
      for (int e = 0; e < d; ++e) s += conn(a, e, c) * phi(e);
      nabla(a, c) = s;
    }
  const Mat lowered = nabla * gamma;  // nabla_a Phi_b
  Mat dg = lowered + lowered.transpose();
  if (f.normal) {
    const Array3 K = extrinsic_with(emb, p, f.normals(p));
    const Vec phin = f.normal_at(p, emb.codim());
    for (int a = 0; a < d; ++a)
      for (int b = 0; b < d; ++b)
        for (int i = 0; i < phin.size(); ++i) dg(a, b) += 2.0 * K(a, b, i) * phin(i);
  }
  return dg;
}

double displacement_variation(const Embedding& emb, const std::vector<BoundaryEmbedding>& bnds,
                              const ActionConfig& cfg, const DeformationField& f) {
  (void)emb;
  std::vector<double> terms;
  for (std::size_t b = 0; b < bnds.size(); ++b)
    for (const auto& node : quadrature_nodes(cfg.boundaries.at(b))) {
      const Vec xi = bnds[b].chi(node.point);
      const double psi = f.psi(b, node.point, xi);
      if (psi == 0.0) continue;
      const BoundaryData bd = boundary_data(bnds[b], node.point);
      terms.push_back(-node.weight * sqrt_abs_det(bd.boundary_metric) *
                      (cfg.mu0 + cfg.mub * bd.edge_trace) * psi);
    }
  return pairwise_sum(terms);
}

double first_variation_analytic(const Embedding& emb, const std::vector<BoundaryEmbedding>& bnds,
                                const ActionConfig& cfg, const DeformationField& f) {
  const int d = emb.dim(), k = emb.codim();
  std::vector<double> bulk;
  if (f.normal) {
    for (const auto& node : quadrature_nodes(cfg.worldsheet)) {
      const Vec phin = f.normal_at(node.point, k);
      if (phin.cwiseAbs().maxCoeff() == 0.0) continue;
      const Mat gamma = induced_metric(emb, node.point);
      const Mat gi = gamma.inverse();
      const Array3 K = extrinsic_with(emb, node.point, f.normals(node.point));
      double trace_phi = 0.0;
      for (int i = 0; i < k; ++i)
        for (int a = 0; a < d; ++a)
          for (int b = 0; b < d; ++b) trace_phi += gi(a, b) * K(a, b, i) * phin(i);
      bulk.push_back(-cfg.mu0 * node.weight * sqrt_abs_det(gamma) * trace_phi);
    }
  }

  std::vector<double> edge;
  for (std::size_t b = 0; b < bnds.size(); ++b)
    for (const auto& node : quadrature_nodes(cfg.boundaries.at(b))) {
      const Vec xi = bnds[b].chi(node.point);
      const Vec phi = f.tangential_at(xi, d);
      const Vec phin = f.normal_at(xi, k);
      if (phi.cwiseAbs().maxCoeff() == 0.0 && phin.cwiseAbs().maxCoeff() == 0.0) continue;
      const BoundaryData bd = boundary_data(bnds[b], node.point);
      const double phi_eta = bd.normal_in_m.dot(bd.worldsheet_metric * phi);
      double hk_phi = 0.0;
      if (f.normal) {
        const Array3 K = extrinsic_with(emb, xi, f.normals(xi));
        for (int i = 0; i < k; ++i)
          for (int a = 0; a < d; ++a)
            for (int c = 0; c < d; ++c) hk_phi += bd.projector(a, c) * K(a, c, i) * phin(i);
      }
      const double integrand =
          -cfg.mu0 * phi_eta - cfg.mub * (hk_phi + bd.edge_trace * phi_eta);
      edge.push_back(node.weight * sqrt_abs_det(bd.boundary_metric) * integrand);
    }
  return pairwise_sum(bulk) + pairwise_sum(edge) + displacement_variation(emb, bnds, cfg, f);
}

Embedding deformed_embedding(const Embedding& emb, const std::vector<BoundaryEmbedding>& bnds,
                             const DeformationField& f, double eps) {
  const bool moves = f.boundary_normal || f.boundary_tangential;
  // Far end of each ramp: the opposite edge, else the far end of a window on
  // the same axis, else one coordinate unit into the material.
  std::vector<double> far(bnds.size(), 0.0);
  if (moves) {
    for (std::size_t b = 0; b < bnds.size(); ++b) {
      if (!bnds[b].face()) throw InvalidParameters("boundary displacement needs coordinate-face boundaries");
      const Face& face = *bnds[b].face();
      far[b] = face.value - face.outward_sign;
      for (const auto& w : f.windows)
        if (w.axis == face.coord) far[b] = face.outward_sign > 0 ? w.lower : w.upper;
      for (const auto& o : bnds)
        if (o.face() && o.face()->coord == face.coord && o.face()->value != face.value)
          far[b] = o.face()->value;
    }
  }
  auto shift = [bnds, f, far, moves](const Vec& xi) {
    Vec v = Vec::Zero(xi.size());
    if (!moves) return v;
    for (std::size_t b = 0; b < bnds.size(); ++b) {
      const Face& face = *bnds[b].face();
      const double beta = (xi(face.coord) - far[b]) / (face.value - far[b]);
      const Vec u = face_coordinates(bnds[b], xi);
      const Vec on_edge = bnds[b].chi(u);
      const double psi = f.psi(b, u, on_edge);
      const Vec psiA = f.psi_tangential(b, u, on_edge, bnds[b].dim());
      if (psi == 0.0 && psiA.cwiseAbs().maxCoeff() == 0.0) continue;
      const Embedding& parent = bnds[b].parent();
      const Mat E = parent.d_position(on_edge);
      const Mat gamma = E.transpose() * parent.background().metric_at(parent.position(on_edge)) * E;
      const Mat eps_u = bnds[b].d_chi(u);
      v += beta * (psi * boundary_normal(eps_u, gamma, bnds[b].orientation_hint()) + eps_u * psiA);
    }
    return v;
  };
  auto pos = [emb, f, eps, shift](const Vec& xi) {
    const Vec moved = xi + eps * shift(xi);
    return Vec(emb.position(moved) + eps * f.displacement(emb, moved));
  };
  return Embedding(emb.dim(), emb.background(), pos, {}, {}, emb.steps());
}

double first_variation_fd(const Embedding& emb, const std::vector<BoundaryEmbedding>& bnds,
                          const ActionConfig& cfg, const DeformationField& f, double eps) {
  auto action_at = [&](double e) {
    const Embedding moved = deformed_embedding(emb, bnds, f, e);
    std::vector<BoundaryEmbedding> moved_bnds;
    for (const auto& b : bnds) moved_bnds.push_back(b.rebased(moved));
    return total_action(moved, moved_bnds, cfg);
  };
  return (action_at(eps) - action_at(-eps)) / (2.0 * eps);
}

double first_variation_richardson(const Embedding& emb, const std::vector<BoundaryEmbedding>& bnds,
                                  const ActionConfig& config, const DeformationField& field,
                                  double epsilon) {
  const double coarse = first_variation_fd(emb, bnds, config, field, epsilon);
  const double fine = first_variation_fd(emb, bnds, config, field, 0.5 * epsilon);
  return (4.0 * fine - coarse) / 3.0;
}

}  // namespace edgebrane
