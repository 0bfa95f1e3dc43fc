#include "edgebrane/errors.hpp"
#include "edgebrane/variation.hpp"
#include "deformations.hpp"

#include <doctest.h>

#include <cmath>

using namespace edgebrane;

namespace {

Vec vec(std::initializer_list<double> v) {
  Vec out(v.size());
  int i = 0;
  for (double x : v) out(i++) = x;
  return out;
}

QuadratureGrid box(Vec lo, Vec hi, int cells) {
  QuadratureGrid g;
  g.lower = std::move(lo);
  g.upper = std::move(hi);
  g.cells.assign(g.lower.size(), cells);
  return g;
}

}  // namespace

TEST_SUITE("variation") {
  TEST_CASE("Gauss-Legendre rule integrates polynomials exactly") {
    const auto [x, w] = gauss_legendre(5);
    CHECK(w.sum() == doctest::Approx(2.0).epsilon(1e-15));
    double m8 = 0.0;
    for (int i = 0; i < 5; ++i) m8 += w(i) * std::pow(x(i), 8);
    CHECK(m8 == doctest::Approx(2.0 / 9.0).epsilon(1e-14));
    CHECK_THROWS_AS(gauss_legendre(0), InvalidParameters);
    CHECK(pairwise_sum({1.0, 2.0, 3.0, 4.0, 5.0}) == 15.0);
  }

  TEST_CASE("bulk action closed forms") {
    const auto p = plane();
    CHECK(dng_action(p.embedding, box(vec({0, 0}), vec({1, 2}), 4), 1.0) == doctest::Approx(-2.0).epsilon(1e-14));

    const auto h = helicoid(0.5, 1.0);
    const double w = 0.5;
    const double exact = -(0.5 * std::sqrt(1 - w * w) + std::asin(w) / (2 * w));
    CHECK(dng_action(h.embedding, box(vec({0, 0}), vec({1, 1}), 8), 1.0) ==
          doctest::Approx(exact).epsilon(1e-12));
    CHECK(exact == doctest::Approx(-0.9566).epsilon(1e-4));

    const Embedding disk(2, BackgroundMetric::euclidean(3), [](const Vec& x) {
      return vec({x(0) * std::cos(x(1)), x(0) * std::sin(x(1)), 0.0});
    });
    CHECK(dng_action(disk, box(vec({0, 0}), vec({1, 2 * M_PI}), 8), 1.0) == doctest::Approx(-M_PI).epsilon(1e-9));
  }

  TEST_CASE("edge action closed forms") {
    const auto hole = planar_hole(2.0, true);
    CHECK(edge_action(hole.boundary(), box(vec({0, 0}), vec({1, 2 * M_PI}), 8), 1.0) ==
          doctest::Approx(-4.0 * M_PI).epsilon(1e-12));
    const auto straight = BoundaryEmbedding::coordinate_face(plane().embedding, 1, 0.0, -1);
    CHECK(edge_action(straight, box(vec({0}), vec({1}), 2), 1.0) == doctest::Approx(-1.0).epsilon(1e-14));
    const auto h = helicoid(0.5, 1.0);
    CHECK(edge_action(h.boundary(), box(vec({0}), vec({1}), 4), 1.0) ==
          doctest::Approx(-std::sqrt(0.75)).epsilon(1e-13));
  }

  TEST_CASE("midpoint and Gauss-Legendre rules agree on a smooth action") {
    const auto s = sphere(2.0);
    QuadratureGrid g = box(s.lower, s.upper, 64);
    g.rule = QuadratureRule::midpoint;
    const double mid = dng_action(s.embedding, g, 1.0);
    const double gl = dng_action(s.embedding, box(s.lower, s.upper, 8), 1.0);
    CHECK(gl == doctest::Approx(-4.0 * M_PI * 4.0 * std::cos(0.3)).epsilon(1e-12));
    CHECK(mid == doctest::Approx(gl).epsilon(1e-3));
  }

  TEST_CASE("metric variation") {
    const auto p = plane();
    DeformationField bump;
    bump.normal = [](const Vec& x) { return vec({std::exp(-x.squaredNorm())}); };
    bump.normals = p.normals;
    CHECK(metric_variation(p.embedding, vec({0.2, 0.3}), bump).norm() < 1e-12);

    DeformationField shear;
    shear.tangential = [](const Vec& x) { return vec({0.0, x(1)}); };
    const Mat dg = metric_variation(p.embedding, vec({0.2, 0.3}), shear);
    CHECK((dg - Vec(vec({0, 2})).asDiagonal().toDenseMatrix()).norm() < 1e-9);

    // Uniform outward push of the sphere against re-embedding at radius r + eps.
    const auto s = sphere(2.0);
    DeformationField push;
    push.normal = [](const Vec&) { return vec({1.0}); };
    push.normals = s.normals;
    const Vec pt = vec({1.0, 0.4});
    const double eps = 1e-4;
    const Mat fd = (induced_metric(sphere(2.0 + eps).embedding, pt) -
                    induced_metric(sphere(2.0 - eps).embedding, pt)) / (2 * eps);
    CHECK((metric_variation(s.embedding, pt, push) - fd).norm() < 1e-7);
  }

  TEST_CASE("zero deformation gives exactly zero") {
    const auto h = helicoid(0.5, 1.0);
    const auto cfg = action_config(h, 4);
    DeformationField none;
    none.normals = h.normals;
    CHECK(first_variation_fd(h.embedding, h.boundaries, cfg, none, 1e-3) == 0.0);
    CHECK(first_variation_analytic(h.embedding, h.boundaries, cfg, none) == 0.0);
  }

  TEST_CASE("flat strip edge push with a tensionless edge") {
    // Strip xi0 in [0,1], xi1 in [0,2] with one edge at xi1 = 0; Phi.eta = c there.
    const auto p = plane();
    const auto edge = BoundaryEmbedding::coordinate_face(p.embedding, 1, 0.0, -1);
    ActionConfig cfg;
    cfg.mu0 = 1.0;
    cfg.mub = 0.0;
    cfg.worldsheet = box(vec({0, 0}), vec({1, 2}), 10);
    cfg.boundaries = {box(vec({0}), vec({1}), 10)};
    const double c = 0.3;
    DeformationField f;
    f.normals = p.normals;
    f.tangential = [c](const Vec& x) { return vec({0.0, -c * (1.0 - 0.5 * x(1))}); };
    f.windows = {Window{0, 0.0, 1.0, 0.1, true, true}};
    // The cosine caps remove 0.1 of the unit edge length.
    const double expected = -cfg.mu0 * c * 0.9;
    CHECK(first_variation_analytic(p.embedding, {edge}, cfg, f) == doctest::Approx(expected).epsilon(1e-12));
    CHECK(first_variation_richardson(p.embedding, {edge}, cfg, f, 1e-3) ==
          doctest::Approx(expected).epsilon(1e-7));

    DeformationField normal_only;
    normal_only.normals = p.normals;
    normal_only.normal = [](const Vec& x) { return vec({std::sin(x(0)) * x(1)}); };
    normal_only.windows = f.windows;
    CHECK(first_variation_analytic(p.embedding, {edge}, cfg, normal_only) == 0.0);
  }

  TEST_CASE("rotating orbit is stationary under arbitrary deformations") {
    const auto h = helicoid(0.5, 1.0);
    const auto cfg = action_config(h, 10);
    std::mt19937_64 rng(3);
    for (int n = 0; n < 3; ++n) {
      const auto f = fixtures::random_deformation(h, rng);
      CHECK(std::abs(first_variation_analytic(h.embedding, h.boundaries, cfg, f)) < 1e-12);
      CHECK(std::abs(first_variation_richardson(h.embedding, h.boundaries, cfg, f, 1e-3)) < 1e-6);
    }
  }

  TEST_CASE("finite-difference and analytic first variations agree off-shell") {
    std::mt19937_64 rng(5);
    for (const char* id : {"hole:rho=1,mub=2", "sphere"}) {
      const auto e = entry_from_id(id);
      const auto cfg = action_config(e, 10);
      const auto f = fixtures::random_deformation(e, rng);
      const double an = first_variation_analytic(e.embedding, e.boundaries, cfg, f);
      const double fd = first_variation_richardson(e.embedding, e.boundaries, cfg, f, 1e-3);
      INFO(id);
      CHECK(std::abs(an) > 1e-3);
      CHECK(std::abs(fd - an) < 1e-6);
    }
  }

  TEST_CASE("plain central difference error shrinks like epsilon squared") {
    const auto e = entry_from_id("hole:rho=1,mub=2");
    const auto cfg = action_config(e, 10);
    std::mt19937_64 rng(9);
    const auto f = fixtures::random_deformation(e, rng);
    const double an = first_variation_analytic(e.embedding, e.boundaries, cfg, f);
    const double e1 = std::abs(first_variation_fd(e.embedding, e.boundaries, cfg, f, 2e-3) - an);
    const double e2 = std::abs(first_variation_fd(e.embedding, e.boundaries, cfg, f, 1e-3) - an);
    CHECK(e1 / e2 > 3.0);
  }

  TEST_CASE("boundary displacement term") {
    // Pure Psi on the orbit: mu0 + mub k = 0, so the term vanishes.
    const auto h = helicoid(0.5, 1.0);
    DeformationField f;
    f.normals = h.normals;
    f.windows = default_windows(h);
    f.boundary_normal = [](std::size_t, const Vec& u) { return std::cos(u(0)); };
    CHECK(std::abs(displacement_variation(h.embedding, h.boundaries, action_config(h, 8), f)) < 1e-13);
    // Off-equilibrium hole: -(mu0 + mub k) * Psi * circumference.
    const auto hole = entry_from_id("hole:rho=1,mub=2");
    DeformationField g;
    g.normals = hole.normals;
    g.windows = default_windows(hole);
    g.boundary_normal = [](std::size_t, const Vec&) { return 0.01; };
    const double expected = -(1.0 + 2.0 * -1.0) * 0.01 * 2.0 * M_PI;
    CHECK(displacement_variation(hole.embedding, hole.boundaries, action_config(hole, 8), g) ==
          doctest::Approx(expected).epsilon(1e-12));
  }
}
