#include "padp/mlp.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "padp/kernels.hpp"
#include "padp/rng.hpp"

namespace padp::mlp {

namespace {

constexpr size_t kOutputs = 5;

double apply_head(HeadKind head, double z) {
  switch (head) {
    case HeadKind::Sigmoid:
      return 1.0 / (1.0 + std::exp(-z));
    case HeadKind::ScaledLinear:
      return z / concern::kGoldNormalizer;
  }
  throw std::logic_error("apply_head: unknown head");
}

// d(score)/d(z) where z = v . o. For ScaledLinear the derivative ignores the
// prediction-time clamp so gradients never vanish at the boundary.
double head_derivative(HeadKind head, double score) {
  switch (head) {
    case HeadKind::Sigmoid:
      return score * (1.0 - score);
    case HeadKind::ScaledLinear:
      return 1.0 / concern::kGoldNormalizer;
  }
  throw std::logic_error("head_derivative: unknown head");
}

void check_params(const MlpParams& p) {
  if (p.w1.rows == 0 || p.w1.cols == 0) throw std::invalid_argument("mlp: empty first layer");
  if (p.b1.size() != p.w1.rows) throw std::invalid_argument("mlp: b1 size mismatch");
  if (p.w2.cols != p.w1.rows) throw std::invalid_argument("mlp: layer width mismatch");
  if (p.w2.rows != kOutputs) throw std::invalid_argument("mlp: output layer must have 5 units");
  if (p.b2.size() != p.w2.rows) throw std::invalid_argument("mlp: b2 size mismatch");
  if (p.head_weights.size() != kOutputs) throw std::invalid_argument("mlp: head needs 5 weights");
}

double sq_norm(const Matrix& m) {
  double acc = 0.0;
  for (double v : m.data) acc += v * v;
  return acc;
}

struct AdamBuffers {
  std::vector<double> m, v;
  explicit AdamBuffers(size_t n) : m(n, 0.0), v(n, 0.0) {}
};

void adam_update(std::vector<double>& params, const std::vector<double>& grad, AdamBuffers& buf,
                 const TrainConfig& cfg, size_t t) {
  const double c1 = 1.0 - std::pow(cfg.adam_beta1, static_cast<double>(t));
  const double c2 = 1.0 - std::pow(cfg.adam_beta2, static_cast<double>(t));
  for (size_t i = 0; i < params.size(); ++i) {
    buf.m[i] = cfg.adam_beta1 * buf.m[i] + (1.0 - cfg.adam_beta1) * grad[i];
    buf.v[i] = cfg.adam_beta2 * buf.v[i] + (1.0 - cfg.adam_beta2) * grad[i] * grad[i];
    params[i] -= cfg.learning_rate * (buf.m[i] / c1) / (std::sqrt(buf.v[i] / c2) + cfg.adam_eps);
  }
}

}  // namespace

MlpParams mlp_init(size_t input_dim, const TrainConfig& cfg) {
  if (input_dim == 0) throw std::invalid_argument("mlp_init: input_dim must be positive");
  if (cfg.hidden_units == 0) throw std::invalid_argument("mlp_init: hidden_units must be positive");

  MlpParams p;
  p.head = cfg.head;
  const concern::WeightVector head_default;
  p.head_weights.assign(head_default.v.begin(), head_default.v.end());
  p.w1 = Matrix(cfg.hidden_units, input_dim);
  p.b1.assign(cfg.hidden_units, 0.0);
  p.w2 = Matrix(kOutputs, cfg.hidden_units);
  p.b2.assign(kOutputs, 0.0);

  Rng rng(cfg.seed);
  const double lim1 = 1.0 / std::sqrt(static_cast<double>(input_dim));
  for (double& v : p.w1.data) v = rng.uniform(-lim1, lim1);
  const double lim2 = 1.0 / std::sqrt(static_cast<double>(cfg.hidden_units));
  for (double& v : p.w2.data) v = rng.uniform(-lim2, lim2);
  return p;
}

ForwardCache mlp_forward(const MlpParams& params, const Matrix& x) {
  check_params(params);
  if (x.cols != params.input_dim()) throw std::invalid_argument("mlp_forward: feature width mismatch");

  const size_t batch = x.rows;
  const size_t hidden = params.hidden_dim();

  ForwardCache cache;
  cache.hidden = Matrix(batch, hidden);
  kernels::matmul_transb(x, params.w1, cache.hidden);
  for (size_t i = 0; i < batch; ++i) {
    for (size_t h = 0; h < hidden; ++h) {
      cache.hidden(i, h) = std::tanh(cache.hidden(i, h) + params.b1[h]);
    }
  }

  cache.outputs = Matrix(batch, kOutputs);
  kernels::matmul_transb(cache.hidden, params.w2, cache.outputs);
  cache.scores.resize(batch);
  for (size_t i = 0; i < batch; ++i) {
    double z = 0.0;
    for (size_t o = 0; o < kOutputs; ++o) {
      cache.outputs(i, o) += params.b2[o];
      z += params.head_weights[o] * cache.outputs(i, o);
    }
    cache.scores[i] = apply_head(params.head, z);
  }
  return cache;
}

double mlp_loss(const MlpParams& params, const ForwardCache& cache, const std::vector<double>& y,
                double l2) {
  if (cache.scores.size() != y.size()) throw std::invalid_argument("mlp_loss: batch size mismatch");
  if (y.empty()) throw std::invalid_argument("mlp_loss: empty batch");
  double acc = 0.0;
  for (size_t i = 0; i < y.size(); ++i) {
    const double d = cache.scores[i] - y[i];
    acc += d * d;
  }
  const double data_term = 0.5 * acc / static_cast<double>(y.size());
  const double reg_term = 0.5 * l2 * (sq_norm(params.w1) + sq_norm(params.w2));
  return data_term + reg_term;
}

Gradients mlp_backward(const MlpParams& params, const Matrix& x, const ForwardCache& cache,
                       const std::vector<double>& y, double l2) {
  check_params(params);
  const size_t batch = x.rows;
  if (cache.scores.size() != batch || y.size() != batch) {
    throw std::invalid_argument("mlp_backward: batch size mismatch");
  }
  const size_t hidden = params.hidden_dim();
  const size_t input = params.input_dim();
  const double inv_batch = 1.0 / static_cast<double>(batch);

  // d(loss)/d(output o) for each sample: (r - y) * head' * v_o / batch
  Matrix delta_out(batch, kOutputs);
  for (size_t i = 0; i < batch; ++i) {
    const double base = (cache.scores[i] - y[i]) * head_derivative(params.head, cache.scores[i]) *
                        inv_batch;
    for (size_t o = 0; o < kOutputs; ++o) {
      delta_out(i, o) = base * params.head_weights[o];
    }
  }

  Gradients g;
  g.w2 = Matrix(kOutputs, hidden);
  kernels::matmul_transa(delta_out, cache.hidden, g.w2);
  for (size_t o = 0; o < kOutputs; ++o) {
    for (size_t h = 0; h < hidden; ++h) g.w2(o, h) += l2 * params.w2(o, h);
  }
  g.b2.assign(kOutputs, 0.0);
  for (size_t i = 0; i < batch; ++i) {
    for (size_t o = 0; o < kOutputs; ++o) g.b2[o] += delta_out(i, o);
  }

  // Back through the tanh layer.
  Matrix delta_hidden(batch, hidden);
  kernels::matmul(delta_out, params.w2, delta_hidden);
  for (size_t i = 0; i < batch; ++i) {
    for (size_t h = 0; h < hidden; ++h) {
      const double a = cache.hidden(i, h);
      delta_hidden(i, h) *= 1.0 - a * a;
    }
  }

  g.w1 = Matrix(hidden, input);
  kernels::matmul_transa(delta_hidden, x, g.w1);
  for (size_t h = 0; h < hidden; ++h) {
    for (size_t j = 0; j < input; ++j) g.w1(h, j) += l2 * params.w1(h, j);
  }
  g.b1.assign(hidden, 0.0);
  for (size_t i = 0; i < batch; ++i) {
    for (size_t h = 0; h < hidden; ++h) g.b1[h] += delta_hidden(i, h);
  }
  return g;
}

MlpParams mlp_train(const Matrix& x, const std::vector<double>& y, const TrainConfig& cfg) {
  if (x.rows == 0 || x.cols == 0) throw std::invalid_argument("mlp_train: empty matrix");
  if (x.rows != y.size()) throw std::invalid_argument("mlp_train: row/label count mismatch");
  if (cfg.batch_size == 0) throw std::invalid_argument("mlp_train: batch_size must be positive");

  MlpParams params = mlp_init(x.cols, cfg);
  const size_t n = x.rows;

  AdamBuffers buf_w1(params.w1.data.size());
  AdamBuffers buf_b1(params.b1.size());
  AdamBuffers buf_w2(params.w2.data.size());
  AdamBuffers buf_b2(params.b2.size());
  size_t step = 0;

  Rng shuffle_rng(splitmix64(cfg.seed ^ 0xa5a5a5a5a5a5a5a5ULL));
  std::vector<size_t> order(n);
  for (size_t i = 0; i < n; ++i) order[i] = i;

  for (size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
    shuffle_rng.shuffle(order);
    for (size_t start = 0; start < n; start += cfg.batch_size) {
      const size_t len = std::min(cfg.batch_size, n - start);
      Matrix xb(len, x.cols);
      std::vector<double> yb(len);
      for (size_t i = 0; i < len; ++i) {
        const size_t src = order[start + i];
        std::copy(x.row(src), x.row(src) + x.cols, xb.row(i));
        yb[i] = y[src];
      }

      const auto cache = mlp_forward(params, xb);
      const double loss = mlp_loss(params, cache, yb, cfg.l2);
      if (!std::isfinite(loss)) {
        throw std::runtime_error("mlp_train: loss diverged at epoch " + std::to_string(epoch) +
                                 " (loss=" + std::to_string(loss) + ")");
      }
      const auto grads = mlp_backward(params, xb, cache, yb, cfg.l2);

      ++step;
      adam_update(params.w1.data, grads.w1.data, buf_w1, cfg, step);
      adam_update(params.b1, grads.b1, buf_b1, cfg, step);
      adam_update(params.w2.data, grads.w2.data, buf_w2, cfg, step);
      adam_update(params.b2, grads.b2, buf_b2, cfg, step);
    }
  }
  return params;
}

std::vector<double> mlp_predict(const MlpParams& params, const Matrix& x) {
  auto cache = mlp_forward(params, x);
  if (params.head == HeadKind::ScaledLinear) {
    for (double& s : cache.scores) s = std::clamp(s, 0.0, 1.0);
  }
  return cache.scores;
}

}  // namespace padp::mlp
