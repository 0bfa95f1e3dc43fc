#include "edgebrane/embedding.hpp"

#include <utility>

namespace edgebrane {

Embedding::Embedding(int dim, BackgroundMetric background, PositionFn position,
                     FirstFn d_position, SecondFn dd_position, FdSteps steps)
    : dim_(dim),
      background_(std::make_shared<const BackgroundMetric>(std::move(background))),
      position_(std::move(position)),
      d_position_(std::move(d_position)),
      dd_position_(std::move(dd_position)),
      steps_(steps) {}

Mat Embedding::d_position(const Vec& xi) const {
  if (d_position_) return d_position_(xi);
  const int n = ambient_dim();
  const double h = steps_.first;
  Mat e(n, dim_);
  for (int a = 0; a < dim_; ++a) {
    Vec p = xi, m = xi;
    p(a) += h;
    m(a) -= h;
    e.col(a) = (position_(p) - position_(m)) / (2.0 * h);
  }
  return e;
}

Array3 Embedding::dd_position(const Vec& xi) const {
  const int n = ambient_dim();
  Array3 dd(n, dim_, dim_);
  if (dd_position_) return dd_position_(xi);
  if (d_position_) {
    // Differentiate the analytic tangents once.
    const double h = steps_.first;
    for (int a = 0; a < dim_; ++a) {
      Vec p = xi, m = xi;
      p(a) += h;
      m(a) -= h;
      const Mat de = (d_position_(p) - d_position_(m)) / (2.0 * h);
      for (int mu = 0; mu < n; ++mu)
        for (int b = 0; b < dim_; ++b) dd(mu, a, b) = de(mu, b);
    }
    // Symmetrize; the two orderings differ only by truncation error.
    for (int mu = 0; mu < n; ++mu)
      for (int a = 0; a < dim_; ++a)
        for (int b = a + 1; b < dim_; ++b) {
          const double s = 0.5 * (dd(mu, a, b) + dd(mu, b, a));
          dd(mu, a, b) = dd(mu, b, a) = s;
        }
    return dd;
  }
  const double h = steps_.second;
  const Vec x0 = position_(xi);
  for (int a = 0; a < dim_; ++a) {
    for (int b = a; b < dim_; ++b) {
      Vec v(n);
      if (a == b) {
        Vec p = xi, m = xi;
        p(a) += h;
        m(a) -= h;
        v = (position_(p) - 2.0 * x0 + position_(m)) / (h * h);
      } else {
        Vec pp = xi, pm = xi, mp = xi, mm = xi;
        pp(a) += h; pp(b) += h;
        pm(a) += h; pm(b) -= h;
        mp(a) -= h; mp(b) += h;
        mm(a) -= h; mm(b) -= h;
        v = (position_(pp) - position_(pm) - position_(mp) + position_(mm)) / (4.0 * h * h);
      }
      for (int mu = 0; mu < n; ++mu) dd(mu, a, b) = dd(mu, b, a) = v(mu);
    }
  }
  return dd;
}

Embedding Embedding::without_derivatives(FdSteps steps) const {
  return Embedding(dim_, *background_, position_, {}, {}, steps);
}

}  // namespace edgebrane
