#include "padp/linear_models.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "padp/kernels.hpp"
#include "padp/rng.hpp"

namespace padp::models {

namespace {

void check_xy(const Matrix& x, size_t ny, const char* what) {
  if (x.rows == 0 || x.cols == 0) throw std::invalid_argument(std::string(what) + ": empty matrix");
  if (x.rows != ny) throw std::invalid_argument(std::string(what) + ": row/label count mismatch");
}

// In-place Cholesky solve of (A + jitter*I) z = rhs for symmetric positive
// semidefinite A. Escalates the jitter until the factorization succeeds.
std::vector<double> solve_spd(Matrix a, std::vector<double> rhs) {
  const size_t n = a.rows;
  if (a.cols != n || rhs.size() != n) throw std::invalid_argument("solve_spd: shape mismatch");

  double jitter = 0.0;
  for (int attempt = 0; attempt < 12; ++attempt) {
    Matrix l = a;
    if (jitter > 0.0) {
      for (size_t i = 0; i < n; ++i) l(i, i) += jitter;
    }
    bool ok = true;
    for (size_t j = 0; j < n && ok; ++j) {
      double d = l(j, j);
      for (size_t k = 0; k < j; ++k) d -= l(j, k) * l(j, k);
      if (d <= 0.0 || !std::isfinite(d)) {
        ok = false;
        break;
      }
      const double root = std::sqrt(d);
      l(j, j) = root;
      for (size_t i = j + 1; i < n; ++i) {
        double s = l(i, j);
        for (size_t k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
        l(i, j) = s / root;
      }
    }
    if (!ok) {
      jitter = (jitter == 0.0) ? 1e-12 : jitter * 100.0;
      continue;
    }
    // Forward then backward substitution.
    std::vector<double> z(n);
    for (size_t i = 0; i < n; ++i) {
      double s = rhs[i];
      for (size_t k = 0; k < i; ++k) s -= l(i, k) * z[k];
      z[i] = s / l(i, i);
    }
    for (size_t ii = n; ii-- > 0;) {
      double s = z[ii];
      for (size_t k = ii + 1; k < n; ++k) s -= l(k, ii) * z[k];
      z[ii] = s / l(ii, ii);
    }
    return z;
  }
  throw std::runtime_error("solve_spd: matrix is not positive definite even with jitter");
}

struct AdamState {
  std::vector<double> m, v;
  double beta1 = 0.9, beta2 = 0.999, eps = 1e-8;
  size_t t = 0;

  explicit AdamState(size_t n) : m(n, 0.0), v(n, 0.0) {}

  void step(std::vector<double>& params, const std::vector<double>& grad, double lr) {
    ++t;
    const double c1 = 1.0 - std::pow(beta1, static_cast<double>(t));
    const double c2 = 1.0 - std::pow(beta2, static_cast<double>(t));
    for (size_t i = 0; i < params.size(); ++i) {
      m[i] = beta1 * m[i] + (1.0 - beta1) * grad[i];
      v[i] = beta2 * v[i] + (1.0 - beta2) * grad[i] * grad[i];
      params[i] -= lr * (m[i] / c1) / (std::sqrt(v[i] / c2) + eps);
    }
  }
};

}  // namespace

double LinearModel::predict_one(const std::vector<double>& x) const {
  if (x.size() != w.size()) throw std::invalid_argument("LinearModel: feature width mismatch");
  double z = b;
  for (size_t i = 0; i < x.size(); ++i) z += w[i] * x[i];
  return z;
}

std::vector<double> LinearModel::predict(const Matrix& x) const {
  if (x.cols != w.size()) throw std::invalid_argument("LinearModel: feature width mismatch");
  std::vector<double> out(x.rows);
  for (size_t i = 0; i < x.rows; ++i) {
    double z = b;
    const double* row = x.row(i);
    for (size_t j = 0; j < x.cols; ++j) z += w[j] * row[j];
    out[i] = z;
  }
  return out;
}

LinearModel linreg_fit(const Matrix& x, const std::vector<double>& y, double l2) {
  check_xy(x, y.size(), "linreg_fit");
  if (l2 < 0.0) throw std::invalid_argument("linreg_fit: l2 must be non-negative");

  const size_t n = x.rows, k = x.cols;
  // Center features and targets so the intercept comes out exactly and the
  // regularizer never penalizes it.
  std::vector<double> x_mean(k, 0.0);
  for (size_t i = 0; i < n; ++i) {
    const double* row = x.row(i);
    for (size_t j = 0; j < k; ++j) x_mean[j] += row[j];
  }
  for (double& m : x_mean) m /= static_cast<double>(n);
  double y_mean = 0.0;
  for (double v : y) y_mean += v;
  y_mean /= static_cast<double>(n);

  Matrix xc(n, k);
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = 0; j < k; ++j) xc(i, j) = x(i, j) - x_mean[j];
  }
  std::vector<double> yc(n);
  for (size_t i = 0; i < n; ++i) yc[i] = y[i] - y_mean;

  const double lambda = std::max(l2, 1e-10);
  LinearModel model;
  model.w.assign(k, 0.0);

  if (k <= n) {
    // Primal: (Xc'Xc + lambda I) w = Xc' yc
    Matrix gram(k, k);
    kernels::matmul_transa(xc, xc, gram);
    for (size_t j = 0; j < k; ++j) gram(j, j) += lambda;
    std::vector<double> rhs(k, 0.0);
    for (size_t i = 0; i < n; ++i) {
      for (size_t j = 0; j < k; ++j) rhs[j] += xc(i, j) * yc[i];
    }
    model.w = solve_spd(std::move(gram), std::move(rhs));
  } else {
    // Dual: (Xc Xc' + lambda I) alpha = yc, then w = Xc' alpha
    Matrix gram(n, n);
    kernels::matmul_transb(xc, xc, gram);
    for (size_t i = 0; i < n; ++i) gram(i, i) += lambda;
    const auto alpha = solve_spd(std::move(gram), yc);
    for (size_t i = 0; i < n; ++i) {
      for (size_t j = 0; j < k; ++j) model.w[j] += xc(i, j) * alpha[i];
    }
  }

  model.b = y_mean;
  for (size_t j = 0; j < k; ++j) model.b -= model.w[j] * x_mean[j];
  return model;
}

LinearModel svr_fit(const Matrix& x, const std::vector<double>& y, const SvrConfig& cfg) {
  check_xy(x, y.size(), "svr_fit");
  if (cfg.tube < 0.0) throw std::invalid_argument("svr_fit: tube must be non-negative");

  const size_t n = x.rows, k = x.cols;
  // params = [w(0..k-1), b]
  std::vector<double> params(k + 1, 0.0);
  AdamState adam(k + 1);
  Rng rng(cfg.seed);
  std::vector<size_t> order(n);
  for (size_t i = 0; i < n; ++i) order[i] = i;

  std::vector<double> grad(k + 1);
  for (size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
    rng.shuffle(order);
    for (size_t idx : order) {
      const double* row = x.row(idx);
      double pred = params[k];
      for (size_t j = 0; j < k; ++j) pred += params[j] * row[j];
      const double err = pred - y[idx];

      // Subgradient of epsilon-insensitive loss; zero inside the tube.
      double g = 0.0;
      if (err > cfg.tube) g = 1.0;
      else if (err < -cfg.tube) g = -1.0;

      for (size_t j = 0; j < k; ++j) grad[j] = g * row[j] + cfg.l2 * params[j];
      grad[k] = g;
      adam.step(params, grad, cfg.lr);
    }
  }

  LinearModel model;
  model.w.assign(params.begin(), params.begin() + static_cast<long>(k));
  model.b = params[k];
  return model;
}

int SvmModel::predict_one(const std::vector<double>& x) const {
  if (x.size() != w.cols) throw std::invalid_argument("SvmModel: feature width mismatch");
  int best = 0;
  double best_score = -std::numeric_limits<double>::infinity();
  for (int c = 0; c < num_classes; ++c) {
    double score = b[static_cast<size_t>(c)];
    const double* row = w.row(static_cast<size_t>(c));
    for (size_t j = 0; j < x.size(); ++j) score += row[j] * x[j];
    if (score > best_score) {
      best_score = score;
      best = c;
    }
  }
  return best;
}

std::vector<int> SvmModel::predict(const Matrix& x) const {
  std::vector<int> out(x.rows);
  std::vector<double> buf(x.cols);
  for (size_t i = 0; i < x.rows; ++i) {
    const double* row = x.row(i);
    std::copy(row, row + x.cols, buf.begin());
    out[i] = predict_one(buf);
  }
  return out;
}

SvmModel svm_fit(const Matrix& x, const std::vector<int>& labels, const SvmConfig& cfg) {
  check_xy(x, labels.size(), "svm_fit");
  const int num_classes = 1 + *std::max_element(labels.begin(), labels.end());
  if (num_classes < 2) throw std::invalid_argument("svm_fit: need at least 2 classes");
  std::vector<size_t> class_counts(static_cast<size_t>(num_classes), 0);
  for (int label : labels) {
    if (label < 0 || label >= num_classes) throw std::invalid_argument("svm_fit: label out of range");
    ++class_counts[static_cast<size_t>(label)];
  }
  for (int c = 0; c < num_classes; ++c) {
    if (class_counts[static_cast<size_t>(c)] == 0) {
      throw std::invalid_argument("svm_fit: class " + std::to_string(c) + " has no samples");
    }
  }

  const size_t n = x.rows, k = x.cols;
  SvmModel model;
  model.num_classes = num_classes;
  model.w = Matrix(static_cast<size_t>(num_classes), k);
  model.b.assign(static_cast<size_t>(num_classes), 0.0);

  // Independent binary hinge problems, one per class.
  for (int c = 0; c < num_classes; ++c) {
    std::vector<double> params(k + 1, 0.0);
    AdamState adam(k + 1);
    Rng rng(splitmix64(cfg.seed + static_cast<uint64_t>(c)));
    std::vector<size_t> order(n);
    for (size_t i = 0; i < n; ++i) order[i] = i;
    std::vector<double> grad(k + 1);

    for (size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
      rng.shuffle(order);
      for (size_t idx : order) {
        const double target = labels[idx] == c ? 1.0 : -1.0;
        const double* row = x.row(idx);
        double score = params[k];
        for (size_t j = 0; j < k; ++j) score += params[j] * row[j];

        const bool violated = target * score < 1.0;
        for (size_t j = 0; j < k; ++j) {
          grad[j] = (violated ? -target * row[j] : 0.0) + cfg.l2 * params[j];
        }
        grad[k] = violated ? -target : 0.0;
        adam.step(params, grad, cfg.lr);
      }
    }
    for (size_t j = 0; j < k; ++j) model.w(static_cast<size_t>(c), j) = params[j];
    model.b[static_cast<size_t>(c)] = params[k];
  }
  return model;
}

int NaiveBayesModel::predict_one(const std::vector<double>& x) const {
  if (x.size() != means.cols) throw std::invalid_argument("NaiveBayesModel: feature width mismatch");
  int best = 0;
  double best_ll = -std::numeric_limits<double>::infinity();
  for (int c = 0; c < num_classes; ++c) {
    const auto ci = static_cast<size_t>(c);
    double ll = log_priors[ci];
    for (size_t j = 0; j < x.size(); ++j) {
      const double var = variances(ci, j);
      const double d = x[j] - means(ci, j);
      ll += -0.5 * (std::log(2.0 * 3.14159265358979323846 * var) + d * d / var);
    }
    if (ll > best_ll) {
      best_ll = ll;
      best = c;
    }
  }
  return best;
}

std::vector<int> NaiveBayesModel::predict(const Matrix& x) const {
  std::vector<int> out(x.rows);
  std::vector<double> buf(x.cols);
  for (size_t i = 0; i < x.rows; ++i) {
    const double* row = x.row(i);
    std::copy(row, row + x.cols, buf.begin());
    out[i] = predict_one(buf);
  }
  return out;
}

NaiveBayesModel nb_fit(const Matrix& x, const std::vector<int>& labels, double variance_floor) {
  check_xy(x, labels.size(), "nb_fit");
  if (variance_floor <= 0.0) throw std::invalid_argument("nb_fit: variance floor must be positive");
  const int num_classes = 1 + *std::max_element(labels.begin(), labels.end());
  if (num_classes < 2) throw std::invalid_argument("nb_fit: need at least 2 classes");

  const size_t n = x.rows, k = x.cols;
  const auto nc = static_cast<size_t>(num_classes);
  std::vector<size_t> counts(nc, 0);
  for (int label : labels) {
    if (label < 0 || label >= num_classes) throw std::invalid_argument("nb_fit: label out of range");
    ++counts[static_cast<size_t>(label)];
  }
  for (size_t c = 0; c < nc; ++c) {
    if (counts[c] == 0) {
      throw std::invalid_argument("nb_fit: class " + std::to_string(c) + " has no samples");
    }
  }

  NaiveBayesModel model;
  model.num_classes = num_classes;
  model.means = Matrix(nc, k);
  model.variances = Matrix(nc, k);
  model.log_priors.resize(nc);

  for (size_t i = 0; i < n; ++i) {
    const auto c = static_cast<size_t>(labels[i]);
    const double* row = x.row(i);
    for (size_t j = 0; j < k; ++j) model.means(c, j) += row[j];
  }
  for (size_t c = 0; c < nc; ++c) {
    for (size_t j = 0; j < k; ++j) model.means(c, j) /= static_cast<double>(counts[c]);
  }
  for (size_t i = 0; i < n; ++i) {
    const auto c = static_cast<size_t>(labels[i]);
    const double* row = x.row(i);
    for (size_t j = 0; j < k; ++j) {
      const double d = row[j] - model.means(c, j);
      model.variances(c, j) += d * d;
    }
  }
  for (size_t c = 0; c < nc; ++c) {
    for (size_t j = 0; j < k; ++j) {
      model.variances(c, j) =
          std::max(model.variances(c, j) / static_cast<double>(counts[c]), variance_floor);
    }
    model.log_priors[c] =
        std::log(static_cast<double>(counts[c]) / static_cast<double>(n));
  }
  return model;
}

}  // namespace padp::models
