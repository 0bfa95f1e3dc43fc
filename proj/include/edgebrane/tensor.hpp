#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <vector>

namespace edgebrane {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// Dense row-major rank-3 array. Index meaning is fixed by each producer
/// (e.g. X^mu_{,ab} is stored as (mu, a, b)).
class Array3 {
public:
  Array3() = default;
  Array3(int n0, int n1, int n2, double fill = 0.0)
      : dims_{n0, n1, n2}, data_(static_cast<std::size_t>(n0) * n1 * n2, fill) {}

  double& operator()(int i, int j, int k) { return data_[index(i, j, k)]; }
  double operator()(int i, int j, int k) const { return data_[index(i, j, k)]; }

  int dim(int axis) const { return dims_[axis]; }
  const std::vector<double>& data() const { return data_; }
  std::vector<double>& data() { return data_; }

  double max_abs() const {
    double m = 0.0;
    for (double v : data_) m = std::max(m, std::abs(v));
    return m;
  }

  Array3& operator+=(const Array3& o) {
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
    return *this;
  }
  Array3& operator-=(const Array3& o) {
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
    return *this;
  }
  Array3& operator*=(double s) {
    for (double& v : data_) v *= s;
    return *this;
  }
  friend Array3 operator-(Array3 a, const Array3& b) { return a -= b; }
  friend Array3 operator+(Array3 a, const Array3& b) { return a += b; }
  friend Array3 operator*(double s, Array3 a) { return a *= s; }

  /// Slice with the first index fixed, as an n1 x n2 matrix.
  Mat slice(int i) const {
    Mat m(dims_[1], dims_[2]);
    for (int j = 0; j < dims_[1]; ++j)
      for (int k = 0; k < dims_[2]; ++k) m(j, k) = (*this)(i, j, k);
    return m;
  }

private:
  std::size_t index(int i, int j, int k) const {
    return (static_cast<std::size_t>(i) * dims_[1] + j) * dims_[2] + k;
  }
  std::array<int, 3> dims_{0, 0, 0};
  std::vector<double> data_;
};

/// Dense row-major rank-4 array.
class Array4 {
public:
  Array4() = default;
  Array4(int n0, int n1, int n2, int n3, double fill = 0.0)
      : dims_{n0, n1, n2, n3},
        data_(static_cast<std::size_t>(n0) * n1 * n2 * n3, fill) {}

  double& operator()(int i, int j, int k, int l) { return data_[index(i, j, k, l)]; }
  double operator()(int i, int j, int k, int l) const { return data_[index(i, j, k, l)]; }

  int dim(int axis) const { return dims_[axis]; }
  const std::vector<double>& data() const { return data_; }

  double max_abs() const {
    double m = 0.0;
    for (double v : data_) m = std::max(m, std::abs(v));
    return m;
  }

private:
  std::size_t index(int i, int j, int k, int l) const {
    return ((static_cast<std::size_t>(i) * dims_[1] + j) * dims_[2] + k) * dims_[3] + l;
  }
  std::array<int, 4> dims_{0, 0, 0, 0};
  std::vector<double> data_;
};

}  // namespace edgebrane
