#include "edgebrane/background.hpp"

#include <cmath>
#include <utility>

namespace edgebrane {

BackgroundMetric::BackgroundMetric(int dimension, Signature signature, MetricFn metric,
                                   ChristoffelFn christoffels, RiemannFn riemann, bool flat,
                                   std::string name, bool cartesian)
    : dimension_(dimension),
      signature_(signature),
      metric_(std::move(metric)),
      christoffels_(std::move(christoffels)),
      riemann_(std::move(riemann)),
      flat_(flat),
      name_(std::move(name)),
      cartesian_(cartesian) {}

namespace {

BackgroundMetric flat_cartesian(int n, Signature sig, const char* name) {
  Mat g = Mat::Identity(n, n);
  if (sig == Signature::lorentzian) g(0, 0) = -1.0;
  return BackgroundMetric(
      n, sig, [g](const Vec&) { return g; }, [n](const Vec&) { return Array3(n, n, n); },
      [n](const Vec&) { return Array4(n, n, n, n); }, true, name, true);
}

}  // namespace

BackgroundMetric BackgroundMetric::minkowski(int n) {
  return flat_cartesian(n, Signature::lorentzian, "minkowski");
}

BackgroundMetric BackgroundMetric::euclidean(int n) {
  return flat_cartesian(n, Signature::euclidean, "euclidean");
}

BackgroundMetric BackgroundMetric::euclidean_spherical() {
  auto metric = [](const Vec& x) {
    const double r = x(0), s = std::sin(x(1));
    Mat g = Mat::Zero(3, 3);
    g(0, 0) = 1.0;
    g(1, 1) = r * r;
    g(2, 2) = r * r * s * s;
    return g;
  };
  auto christoffels = [](const Vec& x) {
    const double r = x(0), s = std::sin(x(1)), c = std::cos(x(1));
    Array3 G(3, 3, 3);
    G(0, 1, 1) = -r;
    G(0, 2, 2) = -r * s * s;
    G(1, 0, 1) = G(1, 1, 0) = 1.0 / r;
    G(1, 2, 2) = -s * c;
    G(2, 0, 2) = G(2, 2, 0) = 1.0 / r;
    G(2, 1, 2) = G(2, 2, 1) = c / s;
    return G;
  };
  return BackgroundMetric(
      3, Signature::euclidean, metric, christoffels,
      [](const Vec&) { return Array4(3, 3, 3, 3); }, true, "euclidean_spherical");
}

Array4 lower_riemann(const Mat& g, const Array4& up) {
  const int n = up.dim(0);
  Array4 down(n, n, n, n);
  for (int m = 0; m < n; ++m)
    for (int l = 0; l < n; ++l) {
      if (g(m, l) == 0.0) continue;
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
          for (int c = 0; c < n; ++c) down(m, a, b, c) += g(m, l) * up(l, a, b, c);
    }
  return down;
}

Array4 contract_riemann(const Array4& R, const Mat& A, const Mat& B, const Mat& C, const Mat& D) {
  const int n = R.dim(0);
  Array4 out(static_cast<int>(A.cols()), static_cast<int>(B.cols()), static_cast<int>(C.cols()),
             static_cast<int>(D.cols()));
  if (R.max_abs() == 0.0) return out;
  for (int a = 0; a < A.cols(); ++a)
    for (int b = 0; b < B.cols(); ++b)
      for (int c = 0; c < C.cols(); ++c)
        for (int d = 0; d < D.cols(); ++d) {
          double s = 0.0;
          for (int m = 0; m < n; ++m)
            for (int v = 0; v < n; ++v)
              for (int r = 0; r < n; ++r)
                for (int q = 0; q < n; ++q)
                  s += R(m, v, r, q) * A(m, a) * B(v, b) * C(r, c) * D(q, d);
          out(a, b, c, d) = s;
        }
  return out;
}

}  // namespace edgebrane
