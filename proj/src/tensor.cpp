#include "keygraph/tensor.hpp"

#include <algorithm>
#include <stdexcept>

namespace keygraph {

Tensor Tensor::randn(int r, int c, double stddev, Rng& rng) {
  Tensor t(r, c);
  for (auto& x : t.v) x = rng.gaussian(0.0, stddev);
  return t;
}

void matmul_acc(const Tensor& a, const Tensor& b, Tensor& c) {
  if (a.cols != b.rows || c.rows != a.rows || c.cols != b.cols)
    throw std::invalid_argument("matmul: shape mismatch");
  const int n = a.rows, k = a.cols, m = b.cols;
  for (int i = 0; i < n; ++i) {
    const double* arow = &a.v[static_cast<size_t>(i) * k];
    double* crow = &c.v[static_cast<size_t>(i) * m];
    for (int p = 0; p < k; ++p) {
      const double aip = arow[p];
      if (aip == 0.0) continue;
      const double* brow = &b.v[static_cast<size_t>(p) * m];
      for (int j = 0; j < m; ++j) crow[j] += aip * brow[j];
    }
  }
}

Tensor matmul(const Tensor& a, const Tensor& b) {
  Tensor c(a.rows, b.cols);
  matmul_acc(a, b, c);
  return c;
}

Tensor transpose(const Tensor& a) {
  Tensor t(a.cols, a.rows);
  for (int i = 0; i < a.rows; ++i)
    for (int j = 0; j < a.cols; ++j) t(j, i) = a(i, j);
  return t;
}

}  // namespace keygraph
