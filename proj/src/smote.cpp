#include "padp/smote.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

#include "padp/kernels.hpp"
#include "padp/rng.hpp"

namespace padp::smote {

SmoteResult oversample(const Matrix& x, const std::vector<int>& labels, size_t k, uint64_t seed) {
  if (x.rows == 0 || x.cols == 0) throw std::invalid_argument("smote: empty matrix");
  if (x.rows != labels.size()) throw std::invalid_argument("smote: row/label count mismatch");
  if (k == 0) throw std::invalid_argument("smote: k must be positive");

  const int num_classes = 1 + *std::max_element(labels.begin(), labels.end());
  if (*std::min_element(labels.begin(), labels.end()) < 0) {
    throw std::invalid_argument("smote: labels must be non-negative");
  }

  std::vector<std::vector<size_t>> by_class(static_cast<size_t>(num_classes));
  for (size_t i = 0; i < labels.size(); ++i) {
    by_class[static_cast<size_t>(labels[i])].push_back(i);
  }
  size_t majority = 0;
  for (const auto& members : by_class) majority = std::max(majority, members.size());

  SmoteResult result;
  result.labels = labels;

  // Plan first so the output matrix can be sized once.
  size_t total_new = 0;
  for (const auto& members : by_class) {
    if (members.empty()) continue;
    const size_t deficit = majority - members.size();
    if (deficit > 0 && members.size() < 2) {
      throw std::invalid_argument(
          "smote: a class with a single sample cannot be oversampled (need at least 2)");
    }
    total_new += deficit;
  }

  result.x = Matrix(x.rows + total_new, x.cols);
  std::copy(x.data.begin(), x.data.end(), result.x.data.begin());
  result.parents.reserve(total_new);

  if (total_new == 0) return result;

  Rng rng(seed);
  size_t write_row = x.rows;

  for (size_t c = 0; c < by_class.size(); ++c) {
    const auto& members = by_class[c];
    if (members.empty() || members.size() == majority) continue;

    // Pairwise squared distances within the class.
    const size_t m = members.size();
    Matrix sub(m, x.cols);
    for (size_t i = 0; i < m; ++i) {
      std::copy(x.row(members[i]), x.row(members[i]) + x.cols, sub.row(i));
    }
    std::vector<double> dist(m * m, 0.0);
    kernels::pairwise_sqdist(sub.data.data(), m, x.cols, dist.data());

    // k nearest same-class neighbors for each member (excluding itself).
    const size_t kk = std::min(k, m - 1);
    std::vector<std::vector<size_t>> neighbors(m);
    std::vector<size_t> idx(m);
    for (size_t i = 0; i < m; ++i) {
      idx.clear();
      for (size_t j = 0; j < m; ++j) {
        if (j != i) idx.push_back(j);
      }
      std::sort(idx.begin(), idx.end(), [&](size_t a, size_t b) {
        const double da = dist[i * m + a], db = dist[i * m + b];
        if (da != db) return da < db;
        return a < b;  // stable order for tied distances
      });
      neighbors[i].assign(idx.begin(), idx.begin() + static_cast<long>(kk));
    }

    const size_t deficit = majority - m;
    for (size_t s = 0; s < deficit; ++s) {
      const size_t base_local = s % m;  // cycle through the class
      const size_t nb_local = neighbors[base_local][rng.next_index(kk)];
      const double u = rng.next_double();

      const size_t base = members[base_local];
      const size_t nb = members[nb_local];
      for (size_t j = 0; j < x.cols; ++j) {
        const double a = x(base, j);
        result.x(write_row, j) = a + u * (x(nb, j) - a);
      }
      result.labels.push_back(static_cast<int>(c));
      result.parents.push_back({base, nb, u});
      ++write_row;
    }
  }

  return result;
}

}  // namespace padp::smote
