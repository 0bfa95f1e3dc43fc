#include "edgebrane/geometry.hpp"

#include "edgebrane/errors.hpp"

#include <cmath>
#include <sstream>
#include <utility>

namespace edgebrane {

namespace {

// Two passes of g-orthogonal projection removing the tangent space and the
// normals accepted so far.
Vec project_out(const Vec& v, const Mat& E, const Mat& gamma_inv, const Mat& g, const Mat& normals,
                int accepted) {
  Vec w = v;
  for (int pass = 0; pass < 2; ++pass) {
    w -= E * (gamma_inv * (E.transpose() * (g * w)));
    for (int j = 0; j < accepted; ++j) {
      const Vec nj = normals.col(j);
      w -= nj * nj.dot(g * w);
    }
  }
  return w;
}

struct GramSchmidt {
  Mat normals;
  std::vector<int> seeds;
};

// Canonical Gram-Schmidt: ascending coordinate axes, well-conditioned axes
// first (residual > 0.1), then any non-degenerate axis.
GramSchmidt canonical_gram_schmidt(const Mat& E, const Mat& gamma_inv, const Mat& g) {
  const int n = static_cast<int>(E.rows());
  const int k = n - static_cast<int>(E.cols());
  GramSchmidt out{Mat::Zero(n, k), {}};
  std::vector<bool> used(n, false);
  int accepted = 0;
  for (double threshold : {0.1, 1e-6}) {
    for (int axis = 0; axis < n && accepted < k; ++axis) {
      if (used[axis]) continue;
      Vec v = Vec::Zero(n);
      v(axis) = 1.0;
      const double scale = std::sqrt(std::abs(g(axis, axis)));
      const Vec w = project_out(v, E, gamma_inv, g, out.normals, accepted);
      const double norm2 = w.dot(g * w);
      if (norm2 <= (threshold * scale) * (threshold * scale)) continue;
      out.normals.col(accepted++) = w / std::sqrt(norm2);
      out.seeds.push_back(axis);
      used[axis] = true;
    }
  }
  if (accepted < k) throw GaugeFailure("Gram-Schmidt produced fewer normals than the co-dimension");
  return out;
}

void apply_sign_rule(Mat& normals) {
  for (int i = 0; i < normals.cols(); ++i) {
    const double big = normals.col(i).cwiseAbs().maxCoeff();
    for (int mu = 0; mu < normals.rows(); ++mu) {
      if (std::abs(normals(mu, i)) > 1e-9 * big) {
        if (normals(mu, i) < 0.0) normals.col(i) *= -1.0;
        break;
      }
    }
  }
}

Mat checked_metric(const Mat& E, const Mat& g) {
  const Mat gamma = E.transpose() * g * E;
  double scale = 1.0;
  for (int a = 0; a < E.cols(); ++a) scale *= E.col(a).squaredNorm();
  if (std::abs(gamma.determinant()) < kDegenerateDeterminant * scale) {
    std::ostringstream os;
    os << "induced metric is degenerate (det = " << gamma.determinant() << ")";
    throw DegenerateMetric(os.str());
  }
  return gamma;
}

Mat seeded_normals(const Mat& E, const Mat& gamma_inv, const Mat& g, const NormalGauge& gauge) {
  const int n = static_cast<int>(E.rows());
  const int k = static_cast<int>(gauge.seed_axes.size());
  Mat normals = Mat::Zero(n, k);
  for (int i = 0; i < k; ++i) {
    Vec v = Vec::Zero(n);
    v(gauge.seed_axes[i]) = 1.0;
    const Vec w = project_out(v, E, gamma_inv, g, normals, i);
    const double norm2 = w.dot(g * w);
    if (norm2 <= 1e-20) throw GaugeFailure("seed axis became tangent; re-seed the gauge");
    normals.col(i) = w / std::sqrt(norm2);
    if (gauge.reference.size() != 0 && normals.col(i).dot(g * gauge.reference.col(i)) < 0.0)
      normals.col(i) *= -1.0;
  }
  return normals;
}

Mat align_to(const Mat& normals, const Mat& g, const Mat& reference) {
  const Mat m = normals.transpose() * g * reference;
  Eigen::JacobiSVD<Mat> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  return normals * (svd.matrixU() * svd.matrixV().transpose());
}

}  // namespace

Mat tangent_basis(const Embedding& emb, const Vec& point) {
  Mat E = emb.d_position(point);
  Eigen::JacobiSVD<Mat> svd(E);
  const Vec s = svd.singularValues();
  if (s.size() < emb.dim() || s(s.size() - 1) <= 1e-10 * s(0))
    throw DegenerateImmersion("tangent vectors are linearly dependent");
  return E;
}

Mat induced_metric(const Embedding& emb, const Vec& point) {
  const Mat E = tangent_basis(emb, point);
  return checked_metric(E, emb.background().metric_at(emb.position(point)));
}

Frame frame_at(const Embedding& emb, const Vec& point, const NormalGauge& gauge) {
  Frame f;
  f.tangents = tangent_basis(emb, point);
  const Mat g = emb.background().metric_at(emb.position(point));
  f.induced_metric = checked_metric(f.tangents, g);
  f.induced_metric_inverse = f.induced_metric.inverse();
  switch (gauge.kind) {
    case NormalGauge::Kind::canonical:
      f.normals = canonical_gram_schmidt(f.tangents, f.induced_metric_inverse, g).normals;
      apply_sign_rule(f.normals);
      break;
    case NormalGauge::Kind::seeded:
      f.normals = seeded_normals(f.tangents, f.induced_metric_inverse, g, gauge);
      break;
    case NormalGauge::Kind::aligned:
      f.normals = canonical_gram_schmidt(f.tangents, f.induced_metric_inverse, g).normals;
      f.normals = align_to(f.normals, g, gauge.reference);
      break;
  }
  if (gauge.rotation.size() != 0) f.normals = f.normals * gauge.rotation;
  return f;
}

Frame frame_at(const Embedding& emb, const Vec& point) { return frame_at(emb, point, {}); }

Mat normal_frame(const Embedding& emb, const Vec& point) { return frame_at(emb, point).normals; }

Mat normal_frame(const Embedding& emb, const Vec& point, const NormalGauge& gauge) {
  return frame_at(emb, point, gauge).normals;
}

NormalGauge seeded_gauge(const Embedding& emb, const Vec& point) {
  const Mat E = tangent_basis(emb, point);
  const Mat g = emb.background().metric_at(emb.position(point));
  const Mat gamma_inv = checked_metric(E, g).inverse();
  GramSchmidt gs = canonical_gram_schmidt(E, gamma_inv, g);
  apply_sign_rule(gs.normals);
  NormalGauge gauge;
  gauge.kind = NormalGauge::Kind::seeded;
  gauge.seed_axes = gs.seeds;
  gauge.reference = gs.normals;
  return gauge;
}

NormalGauge aligned_gauge(const Embedding& emb, const Vec& point) {
  NormalGauge gauge;
  gauge.kind = NormalGauge::Kind::aligned;
  gauge.reference = normal_frame(emb, point);
  return gauge;
}

NormalField normal_field(const Embedding& emb, NormalGauge gauge) {
  return [emb, gauge](const Vec& p) { return normal_frame(emb, p, gauge); };
}

Array3 covariant_hessian(const Embedding& emb, const Vec& point) {
  Array3 dd = emb.dd_position(point);
  const auto& bg = emb.background();
  if (bg.cartesian()) return dd;
  const Mat E = emb.d_position(point);
  const Array3 G = bg.christoffels_at(emb.position(point));
  const int n = emb.ambient_dim(), d = emb.dim();
  for (int mu = 0; mu < n; ++mu)
    for (int a = 0; a < d; ++a)
      for (int b = 0; b < d; ++b) {
        double s = 0.0;
        for (int al = 0; al < n; ++al)
          for (int be = 0; be < n; ++be) s += G(mu, al, be) * E(al, a) * E(be, b);
        dd(mu, a, b) += s;
      }
  return dd;
}

namespace {

Array3 connection_from(const Mat& E, const Mat& g, const Mat& gamma_inv, const Array3& De) {
  const int d = static_cast<int>(E.cols()), n = static_cast<int>(E.rows());
  Array3 conn(d, d, d);
  const Mat gE = g * E;  // n x d
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b) {
      Vec proj(d);  // g(e_e, D_a e_b)
      for (int e = 0; e < d; ++e) {
        double s = 0.0;
        for (int mu = 0; mu < n; ++mu) s += gE(mu, e) * De(mu, a, b);
        proj(e) = s;
      }
      const Vec c = gamma_inv * proj;
      for (int cc = 0; cc < d; ++cc) conn(a, b, cc) = c(cc);
    }
  return conn;
}

Array3 extrinsic_from(const Mat& normals, const Mat& g, const Array3& De, int d) {
  const int k = static_cast<int>(normals.cols()), n = static_cast<int>(normals.rows());
  Array3 K(d, d, k);
  const Mat gN = g * normals;
  for (int a = 0; a < d; ++a)
    for (int b = a; b < d; ++b)
      for (int i = 0; i < k; ++i) {
        double s = 0.0;
        for (int mu = 0; mu < n; ++mu) s += gN(mu, i) * De(mu, a, b);
        K(a, b, i) = K(b, a, i) = -s;
      }
  return K;
}

}  // namespace

Array3 worldsheet_connection(const Embedding& emb, const Vec& point) {
  const Mat E = tangent_basis(emb, point);
  const Mat g = emb.background().metric_at(emb.position(point));
  const Mat gamma_inv = checked_metric(E, g).inverse();
  return connection_from(E, g, gamma_inv, covariant_hessian(emb, point));
}

Array3 twist_of(const Embedding& emb, const Vec& point, const NormalField& normals, double step) {
  const int d = emb.dim(), n = emb.ambient_dim();
  const Mat N0 = normals(point);
  const int k = static_cast<int>(N0.cols());
  const Vec x0 = emb.position(point);
  const Mat g = emb.background().metric_at(x0);
  const Mat E = emb.d_position(point);
  const Array3 G = emb.background().christoffels_at(x0);
  Array3 omega(d, k, k);
  for (int a = 0; a < d; ++a) {
    auto at = [&](double s) {
      Vec p = point;
      p(a) += s;
      return normals(p);
    };
    Mat dN = (-at(2 * step) + 8.0 * at(step) - 8.0 * at(-step) + at(-2 * step)) / (12.0 * step);
    for (int i = 0; i < k; ++i)
      for (int mu = 0; mu < n; ++mu) {
        double s = 0.0;
        for (int al = 0; al < n; ++al)
          for (int be = 0; be < n; ++be) s += G(mu, al, be) * E(al, a) * N0(be, i);
        dN(mu, i) += s;
      }
    const Mat w = dN.transpose() * g * N0;  // w(i, j) = g(D_a n_i, n_j)
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < k; ++j) omega(a, i, j) = 0.5 * (w(i, j) - w(j, i));
  }
  return omega;
}

CurvatureData extrinsic_curvature(const Embedding& emb, const Vec& point,
                                  const NormalField& normals, GeometryOptions opts) {
  const Mat E = tangent_basis(emb, point);
  const Mat g = emb.background().metric_at(emb.position(point));
  const Mat gamma_inv = checked_metric(E, g).inverse();
  const Array3 De = covariant_hessian(emb, point);
  const Mat N = normals(point);
  const int d = emb.dim(), k = static_cast<int>(N.cols());
  CurvatureData out;
  out.extrinsic = extrinsic_from(N, g, De, d);
  out.traces = Vec::Zero(k);
  for (int i = 0; i < k; ++i)
    for (int a = 0; a < d; ++a)
      for (int b = 0; b < d; ++b) out.traces(i) += gamma_inv(a, b) * out.extrinsic(a, b, i);
  out.worldsheet_connection = connection_from(E, g, gamma_inv, De);
  out.twist = twist_of(emb, point, normals, opts.frame_step);
  return out;
}

CurvatureData extrinsic_curvature(const Embedding& emb, const Vec& point, GeometryOptions opts) {
  return extrinsic_curvature(emb, point, normal_field(emb, seeded_gauge(emb, point)), opts);
}

GaussWeingartenResidual gauss_weingarten_residual(const Embedding& emb, const Vec& point,
                                                  double h) {
  const int d = emb.dim(), n = emb.ambient_dim();
  const NormalField nf = normal_field(emb, seeded_gauge(emb, point));
  const Frame f = frame_at(emb, point, seeded_gauge(emb, point));
  const Vec x0 = emb.position(point);
  const Mat g = emb.background().metric_at(x0);
  const Array3 G = emb.background().christoffels_at(x0);
  const CurvatureData cd = extrinsic_curvature(emb, point, nf);
  const int k = emb.codim();

  auto christoffel_term = [&](int a, const Vec& v) {
    Vec s = Vec::Zero(n);
    for (int mu = 0; mu < n; ++mu)
      for (int al = 0; al < n; ++al)
        for (int be = 0; be < n; ++be) s(mu) += G(mu, al, be) * f.tangents(al, a) * v(be);
    return s;
  };

  // Connection from central differences of the metric (Levi-Civita formula).
  std::vector<Mat> dgamma(d);
  std::vector<Mat> dE(d), dN(d);
  for (int c = 0; c < d; ++c) {
    Vec p = point, m = point;
    p(c) += h;
    m(c) -= h;
    dgamma[c] = (induced_metric(emb, p) - induced_metric(emb, m)) / (2 * h);
    dE[c] = (emb.d_position(p) - emb.d_position(m)) / (2 * h);
    dN[c] = (nf(p) - nf(m)) / (2 * h);
  }
  Array3 conn(d, d, d);
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b)
      for (int c = 0; c < d; ++c) {
        double s = 0.0;
        for (int e = 0; e < d; ++e)
          s += 0.5 * f.induced_metric_inverse(c, e) *
               (dgamma[a](e, b) + dgamma[b](e, a) - dgamma[e](a, b));
        conn(a, b, c) = s;
      }

  GaussWeingartenResidual r;
  for (int a = 0; a < d; ++a) {
    for (int b = 0; b < d; ++b) {
      Vec De = dE[a].col(b) + christoffel_term(a, f.tangents.col(b));
      for (int c = 0; c < d; ++c) De -= conn(a, b, c) * f.tangents.col(c);
      for (int i = 0; i < k; ++i) De += cd.extrinsic(a, b, i) * f.normals.col(i);
      r.gauss = std::max(r.gauss, De.cwiseAbs().maxCoeff());
    }
    for (int i = 0; i < k; ++i) {
      Vec Dn = dN[a].col(i) + christoffel_term(a, f.normals.col(i));
      for (int b = 0; b < d; ++b)
        for (int c = 0; c < d; ++c)
          Dn -= cd.extrinsic(a, b, i) * f.induced_metric_inverse(b, c) * f.tangents.col(c);
      for (int j = 0; j < k; ++j) Dn -= cd.twist(a, i, j) * f.normals.col(j);
      r.weingarten = std::max(r.weingarten, Dn.cwiseAbs().maxCoeff());
    }
  }
  return r;
}

Array4 worldsheet_riemann(const Embedding& emb, const Vec& point, double h) {
  const int d = emb.dim();
  const Array3 G0 = worldsheet_connection(emb, point);
  std::vector<Array3> dG(d);
  for (int c = 0; c < d; ++c) {
    Vec p = point, m = point;
    p(c) += h;
    m(c) -= h;
    dG[c] = worldsheet_connection(emb, p) - worldsheet_connection(emb, m);
    dG[c] *= 1.0 / (2 * h);
  }
  // conn(x, y, z) = Gamma^z_{xy}
  Array4 R(d, d, d, d);
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b)
      for (int c = 0; c < d; ++c)
        for (int e = 0; e < d; ++e) {
          double s = dG[c](e, b, a) - dG[e](c, b, a);
          for (int f = 0; f < d; ++f) s += G0(c, f, a) * G0(e, b, f) - G0(e, f, a) * G0(c, b, f);
          R(a, b, c, e) = s;
        }
  return R;
}

double scalar_curvature(const Array4& R, const Mat& gamma_inv) {
  const int d = R.dim(0);
  double s = 0.0;
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b)
      for (int e = 0; e < d; ++e) s += gamma_inv(b, e) * R(a, b, a, e);
  return s;
}

BackgroundMetric induced_background(const Embedding& parent, double riemann_step) {
  const int d = parent.dim();
  auto metric = [parent](const Vec& xi) { return induced_metric(parent, xi); };
  auto christoffels = [parent, d](const Vec& xi) {
    const Array3 conn = worldsheet_connection(parent, xi);
    Array3 G(d, d, d);
    for (int a = 0; a < d; ++a)
      for (int b = 0; b < d; ++b)
        for (int c = 0; c < d; ++c) G(c, a, b) = conn(a, b, c);
    return G;
  };
  auto riemann = [parent, riemann_step](const Vec& xi) {
    return worldsheet_riemann(parent, xi, riemann_step);
  };
  return BackgroundMetric(d, parent.background().signature(), metric, christoffels, riemann,
                          false, "induced");
}

std::pair<double, double> orthonormality_defect(const Embedding& emb, const Frame& f,
                                                const Vec& point) {
  const Mat g = emb.background().metric_at(emb.position(point));
  const Mat en = f.tangents.transpose() * g * f.normals;
  const Mat nn = f.normals.transpose() * g * f.normals -
                 Mat::Identity(f.normals.cols(), f.normals.cols());
  return {en.size() ? en.cwiseAbs().maxCoeff() : 0.0, nn.size() ? nn.cwiseAbs().maxCoeff() : 0.0};
}

}  // namespace edgebrane
