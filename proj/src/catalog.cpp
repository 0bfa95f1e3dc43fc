#include "edgebrane/catalog.hpp"

#include "edgebrane/errors.hpp"
#include "edgebrane/integrability.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace edgebrane {

namespace {

constexpr double kPi = std::numbers::pi;

Vec vec(std::initializer_list<double> v) {
  Vec out(static_cast<Eigen::Index>(v.size()));
  int i = 0;
  for (double x : v) out(i++) = x;
  return out;
}

void expect(CatalogEntry& e, const std::string& q, double value, double tol, Basis p) {
  e.expected.push_back({q, value, tol, p});
}

// Expectations shared by every entry with a boundary.
void boundary_expectations(CatalogEntry& e) {
  expect(e, "projector", 0.0, 1e-10, Basis::derived);
  expect(e, "form_equivalence", 0.0, 1e-8, Basis::derived);
  expect(e, "inheritance", 0.0, 1e-8, Basis::derived);
  expect(e, "boundary_integrability", 0.0, 1e-6, Basis::derived);
  expect(e, "direct_integrability", 0.0, 1e-6, Basis::derived);
}

std::string format_id(const std::string& name, const std::map<std::string, double>& params) {
  std::ostringstream os;
  os << name;
  char sep = ':';
  for (const auto& [k, v] : params) {
    os << sep << k << '=' << v;
    sep = ',';
  }
  return os.str();
}

}  // namespace

const char* to_string(Basis p) {
  switch (p) {
    case Basis::stated: return "stated";
    case Basis::trivial: return "trivial";
    case Basis::derived: return "derived";
  }
  return "derived";
}

double CatalogEntry::parameter(const std::string& name, double fallback) const {
  auto it = parameters.find(name);
  return it == parameters.end() ? fallback : it->second;
}

CatalogEntry plane() {
  auto pos = [](const Vec& xi) { return vec({xi(0), xi(1), 0.0}); };
  auto first = [](const Vec&) {
    Mat E = Mat::Zero(3, 2);
    E(0, 0) = E(1, 1) = 1.0;
    return E;
  };
  auto second = [](const Vec&) { return Array3(3, 2, 2); };
  CatalogEntry e{"plane", Embedding(2, BackgroundMetric::minkowski(3), pos, first, second),
                 {}, {}, {}, vec({-1.0, -1.0}), vec({1.0, 1.0}), {}, {}};
  e.normals = [](const Vec&) { return Mat(vec({0.0, 0.0, 1.0})); };
  expect(e, "mean_curvature", 0.0, 1e-12, Basis::trivial);
  expect(e, "extrinsic_norm", 0.0, 1e-12, Basis::trivial);
  expect(e, "scalar_curvature", 0.0, 1e-9, Basis::trivial);
  expect(e, "orthonormality", 0.0, 1e-12, Basis::trivial);
  expect(e, "gauss_weingarten", 0.0, 1e-12, Basis::trivial);
  expect(e, "integrability", 0.0, 1e-12, Basis::trivial);
  return e;
}

CatalogEntry sphere(double r) {
  if (!(r > 0)) throw InvalidParameters("sphere radius must be positive");
  auto pos = [r](const Vec& q) {
    return vec({r * std::sin(q(0)) * std::cos(q(1)), r * std::sin(q(0)) * std::sin(q(1)),
                r * std::cos(q(0))});
  };
  auto first = [r](const Vec& q) {
    const double st = std::sin(q(0)), ct = std::cos(q(0)), sp = std::sin(q(1)), cp = std::cos(q(1));
    Mat E(3, 2);
    E << r * ct * cp, -r * st * sp,
         r * ct * sp, r * st * cp,
         -r * st, 0.0;
    return E;
  };
  auto second = [r](const Vec& q) {
    const double st = std::sin(q(0)), ct = std::cos(q(0)), sp = std::sin(q(1)), cp = std::cos(q(1));
    Array3 X(3, 2, 2);
    const double tt[3] = {-r * st * cp, -r * st * sp, -r * ct};
    const double tp[3] = {-r * ct * sp, r * ct * cp, 0.0};
    const double pp[3] = {-r * st * cp, -r * st * sp, 0.0};
    for (int m = 0; m < 3; ++m) {
      X(m, 0, 0) = tt[m];
      X(m, 0, 1) = X(m, 1, 0) = tp[m];
      X(m, 1, 1) = pp[m];
    }
    return X;
  };
  CatalogEntry e{"", Embedding(2, BackgroundMetric::euclidean(3), pos, first, second),
                 {}, {{"r", r}}, {}, vec({0.3, 0.0}), vec({kPi - 0.3, 2 * kPi}), {}, {}};
  e.id = format_id("sphere", e.parameters);
  e.periodic_axes = {1};
  e.normals = [pos, r](const Vec& q) { return Mat(pos(q) / r); };
  expect(e, "mean_curvature", 2.0 / r, 1e-9, Basis::derived);
  expect(e, "extrinsic_norm", std::sqrt(2.0) / r, 1e-9, Basis::derived);
  expect(e, "scalar_curvature", 2.0 / (r * r), 1e-6, Basis::derived);
  expect(e, "orthonormality", 0.0, 1e-9, Basis::derived);
  expect(e, "gauss_weingarten", 0.0, 1e-6, Basis::derived);
  expect(e, "integrability", 0.0, 1e-6, Basis::derived);
  return e;
}

CatalogEntry flat_torus(double r1, double r2) {
  if (!(r1 > 0 && r2 > 0)) throw InvalidParameters("torus radii must be positive");
  auto pos = [r1, r2](const Vec& q) {
    return vec({r1 * std::cos(q(0)), r1 * std::sin(q(0)), r2 * std::cos(q(1)), r2 * std::sin(q(1))});
  };
  auto first = [r1, r2](const Vec& q) {
    Mat E = Mat::Zero(4, 2);
    E(0, 0) = -r1 * std::sin(q(0));
    E(1, 0) = r1 * std::cos(q(0));
    E(2, 1) = -r2 * std::sin(q(1));
    E(3, 1) = r2 * std::cos(q(1));
    return E;
  };
  auto second = [r1, r2](const Vec& q) {
    Array3 X(4, 2, 2);
    X(0, 0, 0) = -r1 * std::cos(q(0));
    X(1, 0, 0) = -r1 * std::sin(q(0));
    X(2, 1, 1) = -r2 * std::cos(q(1));
    X(3, 1, 1) = -r2 * std::sin(q(1));
    return X;
  };
  CatalogEntry e{"", Embedding(2, BackgroundMetric::euclidean(4), pos, first, second),
                 {}, {{"r1", r1}, {"r2", r2}}, {}, vec({0.0, 0.0}), vec({2 * kPi, 2 * kPi}), {}, {}};
  e.id = format_id("torus", e.parameters);
  e.periodic_axes = {0, 1};
  e.normals = [](const Vec& q) {
    Mat N = Mat::Zero(4, 2);
    N(0, 0) = std::cos(q(0));
    N(1, 0) = std::sin(q(0));
    N(2, 1) = std::cos(q(1));
    N(3, 1) = std::sin(q(1));
    return N;
  };
  expect(e, "extrinsic_norm", std::sqrt(1.0 / (r1 * r1) + 1.0 / (r2 * r2)), 1e-9,
         Basis::derived);
  expect(e, "scalar_curvature", 0.0, 1e-6, Basis::derived);
  expect(e, "orthonormality", 0.0, 1e-9, Basis::derived);
  expect(e, "gauss_weingarten", 0.0, 1e-6, Basis::derived);
  expect(e, "integrability", 0.0, 1e-6, Basis::derived);
  return e;
}

CatalogEntry helicoid(double w, double R, double duration) {
  if (!(R > 0)) throw InvalidParameters("helicoid radius must be positive");
  if (!(w >= 0)) throw InvalidParameters("helicoid angular velocity must be non-negative");
  if (!(w * R < 1.0)) throw InvalidParameters("helicoid requires omega * R < 1");
  auto pos = [w](const Vec& q) {
    const double t = q(0), s = q(1);
    return vec({t, s * std::cos(w * t), s * std::sin(w * t)});
  };
  auto first = [w](const Vec& q) {
    const double t = q(0), s = q(1), c = std::cos(w * t), sn = std::sin(w * t);
    Mat E(3, 2);
    E << 1.0, 0.0,
         -s * w * sn, c,
         s * w * c, sn;
    return E;
  };
  auto second = [w](const Vec& q) {
    const double t = q(0), s = q(1), c = std::cos(w * t), sn = std::sin(w * t);
    Array3 X(3, 2, 2);
    X(1, 0, 0) = -s * w * w * c;
    X(2, 0, 0) = -s * w * w * sn;
    X(1, 0, 1) = X(1, 1, 0) = -w * sn;
    X(2, 0, 1) = X(2, 1, 0) = w * c;
    return X;
  };
  Embedding emb(2, BackgroundMetric::minkowski(3), pos, first, second);
  const double ratio = w * w * R / (1.0 - w * w * R * R);  // mu0 / mub on the orbit
  CatalogEntry e{"", emb,
                 {BoundaryEmbedding::coordinate_face(emb, 1, R, +1),
                  BoundaryEmbedding::coordinate_face(emb, 1, -R, -1)},
                 {{"omega", w}, {"R", R}, {"T", duration}},
                 {},
                 vec({0.0, -R}),
                 vec({duration, R}), {}, {}};
  e.id = format_id("helicoid", e.parameters);
  e.normals = [w](const Vec& q) {
    const double t = q(0), s = q(1);
    return Mat(vec({w * s, -std::sin(w * t), std::cos(w * t)}) / std::sqrt(1.0 - w * w * s * s));
  };
  e.parameters["mub"] = 1.0;
  e.parameters["mu0"] = ratio;
  expect(e, "mean_curvature", 0.0, 1e-9, Basis::stated);
  expect(e, "orthonormality", 0.0, 1e-9, Basis::derived);
  expect(e, "gauss_weingarten", 0.0, 1e-6, Basis::derived);
  expect(e, "integrability", 0.0, 1e-6, Basis::derived);
  expect(e, "edge_trace", -ratio, 1e-9, Basis::derived);
  expect(e, "edge_residual", 0.0, 1e-9, Basis::derived);
  expect(e, "edge_acceleration", ratio, 1e-9, Basis::derived);
  expect(e, "boundary_condition", 0.0, 1e-9, Basis::stated);
  expect(e, "laplacian_form", 0.0, 1e-6, Basis::derived);
  boundary_expectations(e);
  return e;
}

CatalogEntry collapsing_string(double a, double x0, double duration) {
  if (!(a > 0)) throw InvalidParameters("collapsing string needs a positive acceleration");
  if (!(x0 > 0)) throw InvalidParameters("collapsing string needs a positive half-length");
  const double t_hit = std::sqrt((a * x0 + 1) * (a * x0 + 1) - 1) / a;
  if (!(duration > 0 && duration < t_hit))
    throw InvalidParameters("collapsing string duration must end before the collision");
  // x(t) and its derivatives
  auto edge = [a, x0](double t) {
    const double r = std::sqrt(1 + a * a * t * t);
    return std::array<double, 3>{x0 - (r - 1) / a, -a * t / r, -a / (r * r * r)};
  };
  auto pos = [edge](const Vec& q) { return vec({q(0), q(1) * edge(q(0))[0], 0.0}); };
  auto first = [edge](const Vec& q) {
    const auto x = edge(q(0));
    Mat E = Mat::Zero(3, 2);
    E(0, 0) = 1.0;
    E(1, 0) = q(1) * x[1];
    E(1, 1) = x[0];
    return E;
  };
  auto second = [edge](const Vec& q) {
    const auto x = edge(q(0));
    Array3 X(3, 2, 2);
    X(1, 0, 0) = q(1) * x[2];
    X(1, 0, 1) = X(1, 1, 0) = x[1];
    return X;
  };
  Embedding emb(2, BackgroundMetric::minkowski(3), pos, first, second);
  CatalogEntry e{"", emb,
                 {BoundaryEmbedding::coordinate_face(emb, 1, 1.0, +1),
                  BoundaryEmbedding::coordinate_face(emb, 1, -1.0, -1)},
                 {{"a", a}, {"x0", x0}, {"T", duration}},
                 {},
                 vec({0.0, -1.0}),
                 vec({duration, 1.0}), {}, {}};
  e.id = format_id("collapsing_string", e.parameters);
  e.normals = [](const Vec&) { return Mat(vec({0.0, 0.0, 1.0})); };
  e.parameters["mub"] = 1.0;
  e.parameters["mu0"] = a;
  expect(e, "mean_curvature", 0.0, 1e-12, Basis::trivial);
  expect(e, "extrinsic_norm", 0.0, 1e-12, Basis::trivial);
  expect(e, "orthonormality", 0.0, 1e-9, Basis::derived);
  expect(e, "integrability", 0.0, 1e-6, Basis::derived);
  expect(e, "edge_trace", -a, 1e-9, Basis::derived);
  expect(e, "edge_residual", 0.0, 1e-9, Basis::derived);
  expect(e, "edge_acceleration", a, 1e-9, Basis::derived);
  expect(e, "boundary_condition", 0.0, 1e-12, Basis::stated);
  expect(e, "laplacian_form", 0.0, 1e-6, Basis::derived);
  boundary_expectations(e);
  return e;
}

CatalogEntry planar_hole(double rho, bool lorentzian, double mu0, double mub) {
  if (!(rho > 0)) throw InvalidParameters("hole radius must be positive");
  if (mub < 0) mub = rho * mu0;
  if (!(mub > 0) || mu0 < 0) throw InvalidParameters("hole tensions must satisfy mub > 0, mu0 >= 0");
  // Material at r > rho; the outward normal points toward the centre.
  const int off = lorentzian ? 1 : 0;
  const int n = lorentzian ? 4 : 3;
  auto pos = [off, n](const Vec& q) {
    Vec X = Vec::Zero(n);
    if (off) X(0) = q(0);
    X(off) = q(off) * std::cos(q(off + 1));
    X(off + 1) = q(off) * std::sin(q(off + 1));
    return X;
  };
  auto first = [off, n](const Vec& q) {
    const double r = q(off), c = std::cos(q(off + 1)), s = std::sin(q(off + 1));
    Mat E = Mat::Zero(n, off + 2);
    if (off) E(0, 0) = 1.0;
    E(off, off) = c;
    E(off + 1, off) = s;
    E(off, off + 1) = -r * s;
    E(off + 1, off + 1) = r * c;
    return E;
  };
  auto second = [off, n](const Vec& q) {
    const double r = q(off), c = std::cos(q(off + 1)), s = std::sin(q(off + 1));
    Array3 X(n, off + 2, off + 2);
    X(off, off, off + 1) = X(off, off + 1, off) = -s;
    X(off + 1, off, off + 1) = X(off + 1, off + 1, off) = c;
    X(off, off + 1, off + 1) = -r * c;
    X(off + 1, off + 1, off + 1) = -r * s;
    return X;
  };
  const BackgroundMetric bg =
      lorentzian ? BackgroundMetric::minkowski(4) : BackgroundMetric::euclidean(3);
  Embedding emb(off + 2, bg, pos, first, second);
  Vec lower(off + 2), upper(off + 2);
  if (off) {
    lower(0) = 0.0;
    upper(0) = 1.0;
  }
  lower(off) = rho;
  upper(off) = 2 * rho;
  lower(off + 1) = 0.0;
  upper(off + 1) = 2 * kPi;
  CatalogEntry e{"", emb,
                 {BoundaryEmbedding::coordinate_face(emb, off, rho, -1)},
                 {{"rho", rho}, {"mu0", mu0}, {"mub", mub}},
                 {},
                 lower,
                 upper, {}, {}};
  if (lorentzian) e.parameters["lorentzian"] = 1.0;
  e.id = format_id("hole", e.parameters);
  e.periodic_axes = {off + 1};
  e.normals = [n](const Vec&) {
    Mat N = Mat::Zero(n, 1);
    N(n - 1, 0) = 1.0;
    return N;
  };
  expect(e, "mean_curvature", 0.0, 1e-12, Basis::trivial);
  expect(e, "extrinsic_norm", 0.0, 1e-12, Basis::trivial);
  expect(e, "orthonormality", 0.0, 1e-9, Basis::derived);
  expect(e, "integrability", 0.0, 1e-6, Basis::derived);
  expect(e, "edge_trace", -1.0 / rho, 1e-9, Basis::derived);
  expect(e, "edge_residual", mu0 - mub / rho, 1e-9, Basis::derived);
  expect(e, "boundary_condition", 0.0, 1e-12, Basis::stated);
  if (std::abs(mu0 - mub / rho) <= 1e-12 * std::max(1.0, mu0))
    expect(e, "laplacian_form", 0.0, 1e-6, Basis::derived);
  boundary_expectations(e);
  return e;
}

std::vector<CatalogEntry> reference_surfaces() { return {plane(), sphere(2.0), flat_torus(1.0, 1.0)}; }

std::vector<std::string> catalog_names() {
  return {"plane", "sphere", "torus", "helicoid", "collapsing_string", "hole"};
}

CatalogEntry entry_from_id(const std::string& id) {
  const auto colon = id.find(':');
  const std::string name = id.substr(0, colon);
  std::map<std::string, double> p;
  if (colon != std::string::npos) {
    std::stringstream ss(id.substr(colon + 1));
    std::string item;
    while (std::getline(ss, item, ',')) {
      const auto eq = item.find('=');
      if (eq == std::string::npos) throw std::out_of_range("malformed parameter '" + item + "'");
      const std::string value = item.substr(eq + 1);
      std::size_t used = 0;
      double v = 0.0;
      try {
        v = std::stod(value, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != value.size() || value.empty())
        throw std::out_of_range("non-numeric value in '" + item + "'");
      p[item.substr(0, eq)] = v;
    }
  }
  auto take = [&](const char* key, double fallback) {
    auto it = p.find(key);
    if (it == p.end()) return fallback;
    const double v = it->second;
    p.erase(it);
    return v;
  };
  auto finish = [&](CatalogEntry e) {
    if (!p.empty()) throw std::out_of_range("unknown parameter '" + p.begin()->first + "' for " + name);
    return e;
  };
  if (name == "plane") return finish(plane());
  if (name == "sphere") return finish(sphere(take("r", 2.0)));
  if (name == "torus") {
    const double r1 = take("r1", 1.0);
    return finish(flat_torus(r1, take("r2", 1.0)));
  }
  if (name == "helicoid") {
    const double w = take("omega", 0.5), R = take("R", 1.0);
    return finish(helicoid(w, R, take("T", 1.0)));
  }
  if (name == "collapsing_string") {
    const double a = take("a", 1.0), x0 = take("x0", 1.0);
    return finish(collapsing_string(a, x0, take("T", 0.5)));
  }
  if (name == "hole") {
    const double rho = take("rho", 2.0), mu0 = take("mu0", 1.0), mub = take("mub", -1.0);
    return finish(planar_hole(rho, take("lorentzian", 0.0) != 0.0, mu0, mub));
  }
  throw std::out_of_range("unknown catalog entry '" + name + "'");
}

std::vector<Vec> worldsheet_samples(const CatalogEntry& e, int per_axis) {
  const int d = static_cast<int>(e.lower.size());
  std::vector<Vec> out;
  std::vector<int> idx(d, 0);
  while (true) {
    Vec p(d);
    for (int a = 0; a < d; ++a)
      p(a) = e.lower(a) + (idx[a] + 0.5) / per_axis * (e.upper(a) - e.lower(a));
    out.push_back(p);
    int a = 0;
    while (a < d && ++idx[a] == per_axis) idx[a++] = 0;
    if (a == d) break;
  }
  return out;
}

std::vector<Vec> boundary_samples(const CatalogEntry& e, std::size_t which, int per_axis) {
  const BoundaryEmbedding& b = e.boundaries.at(which);
  const int skip = b.face() ? b.face()->coord : -1;
  const int d = static_cast<int>(e.lower.size());
  CatalogEntry box = e;
  box.lower.resize(d - 1);
  box.upper.resize(d - 1);
  for (int a = 0, A = 0; a < d; ++a) {
    if (a == skip) continue;
    box.lower(A) = e.lower(a);
    box.upper(A) = e.upper(a);
    ++A;
  }
  return worldsheet_samples(box, per_axis);
}

double measure_quantity(const CatalogEntry& e, const std::string& q, double expected) {
  double worst = expected;
  double worst_dev = -1.0;
  auto record = [&](double v) {
    const double dev = std::isnan(v) ? INFINITY : std::abs(v - expected);
    if (dev > worst_dev) {
      worst_dev = dev;
      worst = v;
    }
  };
  const Embedding& emb = e.embedding;
  const double mu0 = e.parameter("mu0", 0.0), mub = e.parameter("mub", 1.0);

  auto each_point = [&](int n, auto&& fn) {
    for (const Vec& p : worldsheet_samples(e, n)) fn(p);
  };
  auto each_boundary = [&](int n, auto&& fn) {
    for (std::size_t b = 0; b < e.boundaries.size(); ++b)
      for (const Vec& u : boundary_samples(e, b, n)) fn(e.boundaries[b], u);
  };

  if (q == "mean_curvature") {
    each_point(4, [&](const Vec& p) {
      record(extrinsic_curvature(emb, p).traces.cwiseAbs().maxCoeff());
    });
  } else if (q == "extrinsic_norm") {
    each_point(4, [&](const Vec& p) {
      const CurvatureData cd = extrinsic_curvature(emb, p);
      const Mat gi = induced_metric(emb, p).inverse();
      const int d = emb.dim();
      double s = 0.0;
      for (int i = 0; i < emb.codim(); ++i) {
        Mat K(d, d);
        for (int a = 0; a < d; ++a)
          for (int b = 0; b < d; ++b) K(a, b) = cd.extrinsic(a, b, i);
        s += (gi * K * gi * K).trace();
      }
      record(std::sqrt(std::abs(s)));
    });
  } else if (q == "scalar_curvature") {
    each_point(3, [&](const Vec& p) {
      record(scalar_curvature(worldsheet_riemann(emb, p), induced_metric(emb, p).inverse()));
    });
  } else if (q == "orthonormality") {
    each_point(4, [&](const Vec& p) {
      const auto [t, n] = orthonormality_defect(emb, frame_at(emb, p), p);
      record(std::max(t, n));
    });
  } else if (q == "gauss_weingarten") {
    each_point(3, [&](const Vec& p) {
      const auto r = gauss_weingarten_residual(emb, p);
      record(std::max(r.gauss, r.weingarten));
    });
  } else if (q == "integrability") {
    each_point(2, [&](const Vec& p) { record(worldsheet_integrability_residuals(emb, p).max()); });
  } else if (q == "edge_trace") {
    each_boundary(3, [&](const BoundaryEmbedding& b, const Vec& u) {
      record(boundary_data(b, u).edge_trace);
    });
  } else if (q == "edge_residual") {
    each_boundary(3, [&](const BoundaryEmbedding& b, const Vec& u) {
      record(edge_equation_residual(boundary_data(b, u), mu0, mub));
    });
  } else if (q == "edge_acceleration") {
    each_boundary(3, [&](const BoundaryEmbedding& b, const Vec& u) {
      const AdaptedEdgeData ad = adapted_edge_data(b, u);
      const Mat hi = boundary_data(b, u).boundary_metric.inverse();
      const int m = b.dim();
      double s = 0.0;
      for (int I = 0; I < ad.edge_extrinsic.dim(2); ++I) {
        double tr = 0.0;
        for (int A = 0; A < m; ++A)
          for (int B = 0; B < m; ++B) tr += hi(A, B) * ad.edge_extrinsic(A, B, I);
        s += tr * tr;
      }
      record(std::sqrt(s));
    });
  } else if (q == "boundary_condition") {
    each_boundary(3, [&](const BoundaryEmbedding& b, const Vec& u) {
      record(boundary_condition_residual(b, u).cwiseAbs().maxCoeff());
    });
  } else if (q == "laplacian_form") {
    each_boundary(3, [&](const BoundaryEmbedding& b, const Vec& u) {
      const LaplacianResiduals r = boundary_laplacian_residuals(b, u, mu0, mub);
      record(std::max({r.normal.cwiseAbs().maxCoeff(), std::abs(r.eta),
                       r.combined.cwiseAbs().maxCoeff()}));
    });
  } else if (q == "form_equivalence") {
    each_boundary(3, [&](const BoundaryEmbedding& b, const Vec& u) {
      const LaplacianResiduals r = boundary_laplacian_residuals(b, u, mu0, mub);
      record((r.normal + boundary_condition_residual(b, u)).cwiseAbs().maxCoeff());
    });
  } else if (q == "projector") {
    each_boundary(3, [&](const BoundaryEmbedding& b, const Vec& u) {
      const BoundaryData bd = boundary_data(b, u);
      const Mat& g = bd.worldsheet_metric;
      const Mat& H = bd.projector;
      const Vec& eta = bd.normal_in_m;
      double dev = (H * g * H - H).cwiseAbs().maxCoeff();
      dev = std::max(dev, std::abs((H * g).trace() - b.dim()));
      dev = std::max(dev, (H + eta * eta.transpose() - g.inverse()).cwiseAbs().maxCoeff());
      dev = std::max(dev, (bd.tangents_in_m.transpose() * g * eta).cwiseAbs().maxCoeff());
      dev = std::max(dev, std::abs(eta.dot(g * eta) - 1.0));
      record(dev);
    });
  } else if (q == "inheritance") {
    each_boundary(3, [&](const BoundaryEmbedding& b, const Vec& u) {
      const auto& in = adapted_edge_data(b, u).inheritance;
      record(std::max({in.normal_curvature, in.edge_curvature, in.normal_twist, in.mixed_twist,
                       in.twist_antisymmetry}));
    });
  } else if (q == "boundary_integrability") {
    each_boundary(2, [&](const BoundaryEmbedding& b, const Vec& u) {
      record(boundary_integrability_residuals(b, u).max());
    });
  } else if (q == "direct_integrability") {
    each_boundary(2, [&](const BoundaryEmbedding& b, const Vec& u) {
      record(direct_embedding_residuals(b, u).max());
    });
  } else {
    throw std::out_of_range("unknown quantity '" + q + "'");
  }
  return worst;
}

}  // namespace edgebrane
