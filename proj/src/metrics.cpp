#include "padp/metrics.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

#include "padp/rng.hpp"

namespace padp::metrics {

namespace {

void check_pair(size_t np, size_t na, const char* what) {
  if (np == 0 || na == 0) throw std::invalid_argument(std::string(what) + ": empty input");
  if (np != na) throw std::invalid_argument(std::string(what) + ": length mismatch");
}

double population_variance(const std::vector<double>& xs) {
  const double n = static_cast<double>(xs.size());
  const double mean = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
  double acc = 0.0;
  for (double x : xs) acc += (x - mean) * (x - mean);
  return acc / n;
}

}  // namespace

double rmse(const std::vector<double>& predicted, const std::vector<double>& actual) {
  check_pair(predicted.size(), actual.size(), "rmse");
  double acc = 0.0;
  for (size_t i = 0; i < predicted.size(); ++i) {
    const double d = predicted[i] - actual[i];
    acc += d * d;
  }
  return std::sqrt(acc / static_cast<double>(predicted.size()));
}

double evs(const std::vector<double>& predicted, const std::vector<double>& actual) {
  check_pair(predicted.size(), actual.size(), "evs");
  std::vector<double> residuals(predicted.size());
  for (size_t i = 0; i < predicted.size(); ++i) residuals[i] = actual[i] - predicted[i];
  const double var_y = population_variance(actual);
  const double var_r = population_variance(residuals);
  if (var_y == 0.0) {
    if (var_r == 0.0) return 1.0;
    throw std::invalid_argument("evs: targets are constant but residuals are not");
  }
  return 1.0 - var_r / var_y;
}

double accuracy(const std::vector<int>& predicted, const std::vector<int>& actual) {
  check_pair(predicted.size(), actual.size(), "accuracy");
  size_t hits = 0;
  for (size_t i = 0; i < predicted.size(); ++i) {
    if (predicted[i] == actual[i]) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(predicted.size());
}

std::vector<std::vector<size_t>> kfold_split(size_t n, size_t k, uint64_t seed) {
  if (k < 2) throw std::invalid_argument("kfold_split: need at least 2 folds");
  if (k > n) throw std::invalid_argument("kfold_split: more folds than samples");

  std::vector<size_t> order(n);
  for (size_t i = 0; i < n; ++i) order[i] = i;
  Rng rng(seed);
  rng.shuffle(order);

  // First (n % k) folds receive one extra index.
  std::vector<std::vector<size_t>> folds(k);
  const size_t base = n / k;
  const size_t extra = n % k;
  size_t pos = 0;
  for (size_t f = 0; f < k; ++f) {
    const size_t len = base + (f < extra ? 1 : 0);
    folds[f].assign(order.begin() + pos, order.begin() + pos + len);
    pos += len;
  }
  return folds;
}

}  // namespace padp::metrics
