#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <vector>

#include "padp/matrix.hpp"
#include "padp/rng.hpp"
#include "padp/smote.hpp"

using namespace padp;
using namespace padp::smote;

namespace {

Matrix cluster_data(const std::vector<int>& labels, uint64_t seed) {
  Matrix x(labels.size(), 2);
  Rng rng(seed);
  for (size_t i = 0; i < labels.size(); ++i) {
    x(i, 0) = labels[i] * 10.0 + rng.uniform(-1.0, 1.0);
    x(i, 1) = labels[i] * -5.0 + rng.uniform(-1.0, 1.0);
  }
  return x;
}

std::map<int, size_t> count_labels(const std::vector<int>& labels) {
  std::map<int, size_t> counts;
  for (int l : labels) ++counts[l];
  return counts;
}

}  // namespace

TEST_CASE("oversampling balances every class to the majority count") {
  std::vector<int> labels;
  for (int i = 0; i < 9; ++i) labels.push_back(0);
  for (int i = 0; i < 212; ++i) labels.push_back(1);
  for (int i = 0; i < 29; ++i) labels.push_back(2);
  const auto x = cluster_data(labels, 1);

  const auto result = oversample(x, labels, 5, 7);
  const auto counts = count_labels(result.labels);
  CHECK(counts.at(0) == 212);
  CHECK(counts.at(1) == 212);
  CHECK(counts.at(2) == 212);
  CHECK(result.x.rows == 636);
  CHECK(result.x.cols == 2);
  CHECK(result.parents.size() == 636 - 250);

  // Originals come first, unchanged and in order.
  for (size_t i = 0; i < labels.size(); ++i) {
    CHECK(result.labels[i] == labels[i]);
    CHECK(result.x(i, 0) == x(i, 0));
    CHECK(result.x(i, 1) == x(i, 1));
  }
}

TEST_CASE("balanced input is returned unchanged") {
  const std::vector<int> labels = {0, 0, 1, 1};
  const auto x = cluster_data(labels, 2);
  const auto result = oversample(x, labels, 5, 0);
  CHECK(result.x.rows == 4);
  CHECK(result.labels == labels);
  CHECK(result.parents.empty());
}

TEST_CASE("synthetic rows interpolate between a base and a same-class neighbor") {
  std::vector<int> labels = {0, 0, 0, 1, 1, 1, 1, 1, 1, 1};
  const auto x = cluster_data(labels, 3);
  const auto result = oversample(x, labels, 5, 11);

  for (size_t s = 0; s < result.parents.size(); ++s) {
    const auto& parent = result.parents[s];
    const size_t row = labels.size() + s;
    CHECK(parent.u >= 0.0);
    CHECK(parent.u < 1.0);
    CHECK(parent.base != parent.neighbor);
    CHECK(labels[parent.base] == result.labels[row]);
    CHECK(labels[parent.neighbor] == result.labels[row]);
    for (size_t j = 0; j < x.cols; ++j) {
      const double expected =
          x(parent.base, j) + parent.u * (x(parent.neighbor, j) - x(parent.base, j));
      CHECK(std::fabs(result.x(row, j) - expected) <= 1e-12);
    }
  }
}

TEST_CASE("synthetic points stay on the segment between their parents") {
  std::vector<int> labels = {0, 0, 1, 1, 1, 1, 1, 1};
  const auto x = cluster_data(labels, 4);
  const auto result = oversample(x, labels, 5, 5);
  for (size_t s = 0; s < result.parents.size(); ++s) {
    const size_t row = labels.size() + s;
    for (size_t j = 0; j < x.cols; ++j) {
      const double lo = std::min(x(result.parents[s].base, j), x(result.parents[s].neighbor, j));
      const double hi = std::max(x(result.parents[s].base, j), x(result.parents[s].neighbor, j));
      CHECK(result.x(row, j) >= lo - 1e-12);
      CHECK(result.x(row, j) <= hi + 1e-12);
    }
  }
}

TEST_CASE("interpolating identical points reproduces the point") {
  Matrix x(5, 2);
  std::vector<int> labels = {0, 0, 1, 1, 1};
  for (size_t i = 0; i < 2; ++i) {
    x(i, 0) = 4.0;  // the whole minority class sits on one point
    x(i, 1) = -2.0;
  }
  for (size_t i = 2; i < 5; ++i) {
    x(i, 0) = 0.0;
    x(i, 1) = 0.0;
  }
  const auto result = oversample(x, labels, 5, 1);
  for (size_t row = 5; row < result.x.rows; ++row) {
    CHECK(result.x(row, 0) == 4.0);
    CHECK(result.x(row, 1) == -2.0);
    CHECK(result.labels[row] == 0);
  }
}

TEST_CASE("oversampling is deterministic in the seed") {
  std::vector<int> labels = {0, 0, 0, 1, 1, 1, 1, 1};
  const auto x = cluster_data(labels, 6);
  const auto a = oversample(x, labels, 5, 42);
  const auto b = oversample(x, labels, 5, 42);
  CHECK(a.x.data == b.x.data);
  CHECK(a.labels == b.labels);
  const auto c = oversample(x, labels, 5, 43);
  CHECK(a.x.data != c.x.data);
}

TEST_CASE("k caps at the class size minus one") {
  // Minority class of 3: only 2 neighbors exist, so k=5 must cap at 2.
  std::vector<int> labels = {0, 0, 0, 1, 1, 1, 1, 1, 1, 1, 1, 1};
  const auto x = cluster_data(labels, 7);
  const auto result = oversample(x, labels, 5, 9);
  for (const auto& parent : result.parents) {
    CHECK(parent.base < 3);
    CHECK(parent.neighbor < 3);
  }
}

TEST_CASE("degenerate inputs are rejected") {
  std::vector<int> labels = {0, 1, 1, 1};
  const auto x = cluster_data(labels, 8);
  // Class 0 has one sample and needs synthesis: no segment to draw from.
  CHECK_THROWS_AS(oversample(x, labels, 5, 0), std::invalid_argument);

  Matrix empty(0, 2);
  CHECK_THROWS_AS(oversample(empty, {}, 5, 0), std::invalid_argument);
  CHECK_THROWS_AS(oversample(x, {0, 1}, 5, 0), std::invalid_argument);
  CHECK_THROWS_AS(oversample(x, labels, 0, 0), std::invalid_argument);
}
