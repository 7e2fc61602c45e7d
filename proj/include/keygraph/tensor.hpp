#pragma once

#include <cstddef>
#include <vector>

#include "keygraph/rng.hpp"

namespace keygraph {

// Dense row-major matrix of 64-bit reals. Vectors are 1xN or Nx1 as needed.
struct Tensor {
  int rows = 0;
  int cols = 0;
  std::vector<double> v;

  Tensor() = default;
  Tensor(int r, int c) : rows(r), cols(c), v(static_cast<size_t>(r) * c, 0.0) {}

  double& operator()(int r, int c) { return v[static_cast<size_t>(r) * cols + c]; }
  double operator()(int r, int c) const { return v[static_cast<size_t>(r) * cols + c]; }

  size_t size() const { return v.size(); }
  bool same_shape(const Tensor& o) const { return rows == o.rows && cols == o.cols; }
  void fill(double x) { std::fill(v.begin(), v.end(), x); }

  static Tensor zeros(int r, int c) { return Tensor(r, c); }
  static Tensor randn(int r, int c, double stddev, Rng& rng);
};

Tensor matmul(const Tensor& a, const Tensor& b);
Tensor transpose(const Tensor& a);

// c += a * b, shapes must already agree
void matmul_acc(const Tensor& a, const Tensor& b, Tensor& c);

}  // namespace keygraph
