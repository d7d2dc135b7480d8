#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace padp::metrics {

// Root mean squared error. Throws std::invalid_argument on empty or
// mismatched inputs.
double rmse(const std::vector<double>& predicted, const std::vector<double>& actual);

// Explained variance score: 1 - Var{y - yhat} / Var{y} (population variance).
// When Var{y} == 0 the score is 1 if the residual variance is also 0,
// otherwise the inputs are rejected.
double evs(const std::vector<double>& predicted, const std::vector<double>& actual);

// Fraction of positions where predicted == actual.
double accuracy(const std::vector<int>& predicted, const std::vector<int>& actual);

// Partitions {0..n-1} into k folds after a seeded shuffle. Fold sizes differ
// by at most one; every index appears in exactly one fold. Requires 2 <= k <= n.
std::vector<std::vector<size_t>> kfold_split(size_t n, size_t k, uint64_t seed);

}  // namespace padp::metrics
