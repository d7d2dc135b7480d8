#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace padp {

// Dense row-major matrix of doubles. Small on purpose; the heavy operations
// live in kernels.hpp.
struct Matrix {
  size_t rows = 0;
  size_t cols = 0;
  std::vector<double> data;

  Matrix() = default;
  Matrix(size_t r, size_t c, double fill = 0.0) : rows(r), cols(c), data(r * c, fill) {}

  double& operator()(size_t i, size_t j) { return data[i * cols + j]; }
  double operator()(size_t i, size_t j) const { return data[i * cols + j]; }

  double* row(size_t i) { return data.data() + i * cols; }
  const double* row(size_t i) const { return data.data() + i * cols; }

  bool empty() const { return rows == 0 || cols == 0; }

  void require_shape(size_t r, size_t c, const char* what) const {
    if (rows != r || cols != c) {
      throw std::invalid_argument(std::string(what) + ": shape mismatch");
    }
  }
};

}  // namespace padp
