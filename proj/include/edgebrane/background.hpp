#pragma once

#include "edgebrane/tensor.hpp"

#include <functional>
#include <string>

namespace edgebrane {

enum class Signature { lorentzian, euclidean };

/// Metric g_{mu nu}(x) of an N-dimensional background together with its
/// Christoffel symbols Gamma^mu_{alpha beta} and Riemann tensor R^mu_{nu rho sigma}.
///
/// Riemann convention: [D_rho, D_sigma] V^mu = R^mu_{nu rho sigma} V^nu.
/// Christoffels are stored as (mu, alpha, beta).
class BackgroundMetric {
public:
  using MetricFn = std::function<Mat(const Vec&)>;
  using ChristoffelFn = std::function<Array3(const Vec&)>;
  using RiemannFn = std::function<Array4(const Vec&)>;

  BackgroundMetric(int dimension, Signature signature, MetricFn metric,
                   ChristoffelFn christoffels, RiemannFn riemann, bool flat = false,
                   std::string name = "custom", bool cartesian = false);

  /// Flat Minkowski space, signature (-,+,...,+), Cartesian coordinates.
  static BackgroundMetric minkowski(int n);
  /// Flat Euclidean space, Cartesian coordinates.
  static BackgroundMetric euclidean(int n);
  /// Flat Euclidean 3-space in spherical coordinates (r, theta, phi).
  /// Nonzero Christoffels, zero curvature.
  static BackgroundMetric euclidean_spherical();

  int dimension() const { return dimension_; }
  Signature signature() const { return signature_; }
  /// Zero Riemann tensor.
  bool flat() const { return flat_; }
  /// Zero Christoffel symbols everywhere (flat space in Cartesian coordinates).
  bool cartesian() const { return cartesian_; }
  const std::string& name() const { return name_; }

  Mat metric_at(const Vec& x) const { return metric_(x); }
  Array3 christoffels_at(const Vec& x) const { return christoffels_(x); }
  Array4 riemann_at(const Vec& x) const { return riemann_(x); }

  /// g(u, v) at x.
  double inner(const Vec& x, const Vec& u, const Vec& v) const {
    return u.dot(metric_(x) * v);
  }

private:
  int dimension_;
  Signature signature_;
  MetricFn metric_;
  ChristoffelFn christoffels_;
  RiemannFn riemann_;
  bool flat_;
  std::string name_;
  bool cartesian_;
};

/// Lowers the first index: R_{mu nu rho sigma} = g_{mu lambda} R^lambda_{nu rho sigma}.
Array4 lower_riemann(const Mat& g, const Array4& riemann_up);

/// Contracts a lowered Riemann tensor with four sets of vectors (columns).
/// Returns T_{abcd} = R_{mu nu rho sigma} A^mu_a B^nu_b C^rho_c D^sigma_d.
Array4 contract_riemann(const Array4& riemann_down, const Mat& a, const Mat& b, const Mat& c,
                        const Mat& d);

}  // namespace edgebrane
