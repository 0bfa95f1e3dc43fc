#pragma once

#include "edgebrane/background.hpp"
#include "edgebrane/tensor.hpp"

#include <functional>
#include <memory>

namespace edgebrane {

/// Finite-difference steps used when analytic derivatives are not supplied.
struct FdSteps {
  double first = 1e-5;   // central difference for X^mu_{,a}
  double second = 1e-4;  // second difference for X^mu_{,ab} from positions
};

/// Parametric map X^mu(xi^a) from a D-dimensional parameter space into a background.
///
/// Derivative callbacks are optional; missing ones fall back to central
/// differences. dd_position is stored as (mu, a, b).
class Embedding {
public:
  using PositionFn = std::function<Vec(const Vec&)>;
  using FirstFn = std::function<Mat(const Vec&)>;
  using SecondFn = std::function<Array3(const Vec&)>;

  Embedding(int dim, BackgroundMetric background, PositionFn position, FirstFn d_position = {},
            SecondFn dd_position = {}, FdSteps steps = {});

  int dim() const { return dim_; }
  int ambient_dim() const { return background_->dimension(); }
  int codim() const { return ambient_dim() - dim_; }
  const BackgroundMetric& background() const { return *background_; }
  bool analytic_first() const { return static_cast<bool>(d_position_); }
  bool analytic_second() const { return static_cast<bool>(dd_position_); }
  const FdSteps& steps() const { return steps_; }

  Vec position(const Vec& xi) const { return position_(xi); }
  Mat d_position(const Vec& xi) const;
  Array3 dd_position(const Vec& xi) const;

  /// Same map with the analytic derivative callbacks dropped (FD fallback only).
  Embedding without_derivatives(FdSteps steps = {}) const;

private:
  int dim_;
  std::shared_ptr<const BackgroundMetric> background_;
  PositionFn position_;
  FirstFn d_position_;
  SecondFn dd_position_;
  FdSteps steps_;
};

}  // namespace edgebrane
