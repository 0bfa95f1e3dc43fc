#pragma once

// Embeddings used only by the tests: generic graphs whose curvature, twist and
// edge geometry are all nonzero, so no residual vanishes for structural reasons.

#include "edgebrane/boundary.hpp"

#include <cmath>

namespace fixtures {

using edgebrane::Array3;
using edgebrane::Mat;
using edgebrane::Vec;

/// Height function with closed-form gradient and Hessian.
struct Height {
  std::function<double(const Vec&)> value;
  std::function<Vec(const Vec&)> gradient;
  std::function<Mat(const Vec&)> hessian;
};

/// c0*x0*x1 + c1*x_last^2 + c2*x0^2*x_last + c3*sin(x1) (x has 2 or 3 entries).
inline Height polynomial_height(double c0, double c1, double c2, double c3) {
  Height h;
  h.value = [=](const Vec& x) {
    const int l = static_cast<int>(x.size()) - 1;
    return c0 * x(0) * x(1) + c1 * x(l) * x(l) + c2 * x(0) * x(0) * x(l) + c3 * std::sin(x(1));
  };
  h.gradient = [=](const Vec& x) {
    const int l = static_cast<int>(x.size()) - 1;
    Vec g = Vec::Zero(x.size());
    g(0) += c0 * x(1) + 2 * c2 * x(0) * x(l);
    g(1) += c0 * x(0) + c3 * std::cos(x(1));
    g(l) += 2 * c1 * x(l) + c2 * x(0) * x(0);
    return g;
  };
  h.hessian = [=](const Vec& x) {
    const int l = static_cast<int>(x.size()) - 1;
    Mat H = Mat::Zero(x.size(), x.size());
    H(0, 1) += c0;
    H(1, 0) += c0;
    H(l, l) += 2 * c1;
    H(0, 0) += 2 * c2 * x(l);
    H(0, l) += 2 * c2 * x(0);
    H(l, 0) += 2 * c2 * x(0);
    H(1, 1) += -c3 * std::sin(x(1));
    return H;
  };
  return h;
}

/// X = (x, h_1(x), ..., h_k(x)) in a flat background of dimension D + k.
inline edgebrane::Embedding graph(const std::vector<Height>& heights, int d, bool lorentzian) {
  const int k = static_cast<int>(heights.size());
  const int n = d + k;
  auto bg = lorentzian ? edgebrane::BackgroundMetric::minkowski(n)
                       : edgebrane::BackgroundMetric::euclidean(n);
  auto pos = [heights, d, n](const Vec& x) {
    Vec X(n);
    X.head(d) = x;
    for (std::size_t i = 0; i < heights.size(); ++i) X(d + i) = heights[i].value(x);
    return X;
  };
  auto first = [heights, d, n](const Vec& x) {
    Mat E = Mat::Zero(n, d);
    E.topRows(d).setIdentity();
    for (std::size_t i = 0; i < heights.size(); ++i) E.row(d + i) = heights[i].gradient(x).transpose();
    return E;
  };
  auto second = [heights, d, n](const Vec& x) {
    Array3 X(n, d, d);
    for (std::size_t i = 0; i < heights.size(); ++i) {
      const Mat H = heights[i].hessian(x);
      for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b) X(d + i, a, b) = H(a, b);
    }
    return X;
  };
  return edgebrane::Embedding(d, bg, pos, first, second);
}

/// Two-normal membrane (D = 3, N = 5) with generic curvature and twist.
inline edgebrane::Embedding generic_membrane(bool lorentzian) {
  return graph({polynomial_height(0.3, 0.2, 0.1, 0.15), polynomial_height(-0.2, 0.25, 0.05, -0.1)},
               3, lorentzian);
}

/// Two-normal surface (D = 2, N = 4).
inline edgebrane::Embedding generic_surface(bool lorentzian) {
  return graph({polynomial_height(0.3, 0.2, 0.1, 0.15), polynomial_height(-0.2, 0.25, 0.05, -0.1)},
               2, lorentzian);
}

/// Curved boundary xi^0 = c + 0.1 sin(u^0) + 0.05 u^1^2 ... of a D-dimensional parent, with
/// the remaining coordinates as u. Outward direction: +xi^last.
inline edgebrane::BoundaryEmbedding wavy_face(const edgebrane::Embedding& parent, double c) {
  const int d = parent.dim();
  const int last = d - 1;
  auto chi = [d, last, c](const Vec& u) {
    Vec xi(d);
    for (int A = 0; A < d - 1; ++A) xi(A) = u(A);
    xi(last) = c + 0.1 * std::sin(u(0)) + 0.05 * u(d - 2) * u(d - 2);
    return xi;
  };
  auto d_chi = [d, last](const Vec& u) {
    Mat m = Mat::Zero(d, d - 1);
    for (int A = 0; A < d - 1; ++A) m(A, A) = 1.0;
    m(last, 0) += 0.1 * std::cos(u(0));
    m(last, d - 2) += 0.1 * u(d - 2);
    return m;
  };
  auto dd_chi = [d, last](const Vec& u) {
    Array3 out(d, d - 1, d - 1);
    out(last, 0, 0) += -0.1 * std::sin(u(0));
    out(last, d - 2, d - 2) += 0.1;
    return out;
  };
  Vec hint = Vec::Zero(d);
  hint(last) = 1.0;
  return edgebrane::BoundaryEmbedding(parent, chi, d_chi, dd_chi, hint);
}

}  // namespace fixtures
