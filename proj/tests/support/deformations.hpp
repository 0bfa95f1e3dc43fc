#pragma once

// Random smooth deformations of catalog entries for first-variation checks.

#include "edgebrane/variation.hpp"

#include <array>
#include <cmath>
#include <random>

namespace fixtures {

/// Trigonometric deformation with all four components (Phi^a, Phi_i, Psi, Psi^A)
/// nonzero, periodic on periodic axes, windowed by the entry's default windows.
inline edgebrane::DeformationField random_deformation(const edgebrane::CatalogEntry& e,
                                                      std::mt19937_64& rng) {
  using edgebrane::Vec;
  std::uniform_real_distribution<double> coeff(-1.0, 1.0);
  std::array<double, 8> c;
  for (auto& x : c) x = coeff(rng);
  const int d = e.embedding.dim(), k = e.embedding.codim();
  edgebrane::DeformationField f;
  f.normals = e.normals;
  f.windows = edgebrane::default_windows(e);
  f.normal = [=](const Vec& x) {
    Vec v(k);
    for (int i = 0; i < k; ++i) v(i) = c[0] * std::sin(x(0) + c[1]) + c[2] * std::cos(x(d - 1) * c[3] + i);
    return v;
  };
  f.tangential = [=](const Vec& x) {
    Vec v(d);
    for (int a = 0; a < d; ++a) v(a) = c[4] * std::cos(x(a) + c[5]) + 0.3 * c[6] * std::sin(x(d - 1 - a));
    return v;
  };
  f.boundary_normal = [=](std::size_t b, const Vec& u) { return c[7] * std::cos(u(0) + b); };
  f.boundary_tangential = [=](std::size_t, const Vec& u) {
    return Vec(Vec::Constant(u.size(), 0.2 * c[1] * std::sin(u(0))));
  };
  return f;
}

}  // namespace fixtures
