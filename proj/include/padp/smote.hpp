#pragma once

#include <cstdint>
#include <vector>

#include "padp/matrix.hpp"

namespace padp::smote {

// Provenance for one synthetic sample: interpolation between a base sample
// and one of its k nearest same-class neighbors at position u in [0, 1).
struct SyntheticParent {
  size_t base = 0;      // row index into the original matrix
  size_t neighbor = 0;  // row index into the original matrix
  double u = 0.0;
};

struct SmoteResult {
  Matrix x;                 // originals first, synthetics appended
  std::vector<int> labels;  // parallel to x
  std::vector<SyntheticParent> parents;  // one per synthetic row, in order
};

// Oversamples every minority class up to the majority count using
// x_new = x_base + u * (x_neighbor - x_base) with a uniformly chosen
// neighbor among the k nearest same-class samples (k capped at count-1).
// A class with a single sample cannot be interpolated and is rejected.
// Already-balanced input is returned unchanged.
SmoteResult oversample(const Matrix& x, const std::vector<int>& labels, size_t k = 5,
                       uint64_t seed = 0);

}  // namespace padp::smote
