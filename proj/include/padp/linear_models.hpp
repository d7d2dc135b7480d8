#pragma once

#include <cstdint>
#include <vector>

#include "padp/matrix.hpp"

namespace padp::models {

// Weights plus intercept for a single regression target.
struct LinearModel {
  std::vector<double> w;
  double b = 0.0;

  double predict_one(const std::vector<double>& x) const;
  std::vector<double> predict(const Matrix& x) const;
};

// Ridge regression solved in closed form. With K features and N samples the
// primal normal equations are used when K <= N; otherwise the dual (Gram)
// system is solved so the fit stays exact even when K > N. l2 == 0 is allowed:
// a tiny jitter keeps the factorization stable while leaving interpolation
// error at numerical noise.
LinearModel linreg_fit(const Matrix& x, const std::vector<double>& y, double l2 = 0.0);

struct SvrConfig {
  double l2 = 1e-4;
  double tube = 0.01;    // epsilon-insensitive half-width
  double lr = 1e-3;
  size_t epochs = 400;
  uint64_t seed = 0;
};

// Linear support-vector regression trained with Adam on the subgradient of
// the epsilon-insensitive loss plus an L2 penalty on the weights.
LinearModel svr_fit(const Matrix& x, const std::vector<double>& y, const SvrConfig& cfg = {});

struct SvmConfig {
  double l2 = 1e-4;
  double lr = 1e-2;
  size_t epochs = 200;
  uint64_t seed = 0;
};

// One-vs-rest linear SVM. Row c of `w` scores class c; prediction is the
// argmax, ties broken toward the lowest class index.
struct SvmModel {
  Matrix w;               // classes x features
  std::vector<double> b;  // per class
  int num_classes = 0;

  int predict_one(const std::vector<double>& x) const;
  std::vector<int> predict(const Matrix& x) const;
};

// Labels must be 0..C-1 with C >= 2 and every class present.
SvmModel svm_fit(const Matrix& x, const std::vector<int>& labels, const SvmConfig& cfg = {});

// Gaussian naive Bayes with a variance floor so constant features do not
// produce degenerate likelihoods.
struct NaiveBayesModel {
  Matrix means;      // classes x features
  Matrix variances;  // classes x features
  std::vector<double> log_priors;
  int num_classes = 0;

  int predict_one(const std::vector<double>& x) const;
  std::vector<int> predict(const Matrix& x) const;
};

NaiveBayesModel nb_fit(const Matrix& x, const std::vector<int>& labels,
                       double variance_floor = 1e-9);

}  // namespace padp::models
