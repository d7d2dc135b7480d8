#pragma once

#include <cstdint>
#include <vector>

#include "padp/concern.hpp"
#include "padp/matrix.hpp"

namespace padp::mlp {

// How the five trait outputs are combined into the scalar concern score.
//  Sigmoid:      r = sigmoid(v . o)          (bounded, trainable from cold start)
//  ScaledLinear: r = (v . o) / 125           (matches the gold linear map;
//                                             clamped to [0,1] at prediction time)
enum class HeadKind { Sigmoid, ScaledLinear };

struct TrainConfig {
  size_t hidden_units = 80;
  size_t epochs = 90;
  double learning_rate = 1e-5;
  double l2 = 1e-5;
  size_t batch_size = 32;
  double adam_beta1 = 0.9;
  double adam_beta2 = 0.999;
  double adam_eps = 1e-8;
  uint64_t seed = 0;
  HeadKind head = HeadKind::Sigmoid;
};

// One hidden layer of tanh units, a linear five-unit output layer, and a
// fixed (non-trained) head that collapses the five outputs to one score.
struct MlpParams {
  Matrix w1;                // hidden x input
  std::vector<double> b1;   // hidden
  Matrix w2;                // output(5) x hidden
  std::vector<double> b2;   // output(5)
  std::vector<double> head_weights;  // length 5
  HeadKind head = HeadKind::Sigmoid;

  size_t input_dim() const { return w1.cols; }
  size_t hidden_dim() const { return w1.rows; }
  size_t output_dim() const { return w2.rows; }
};

// Weights drawn uniformly from (-1/sqrt(fan_in), 1/sqrt(fan_in)); biases zero.
MlpParams mlp_init(size_t input_dim, const TrainConfig& cfg);

// Intermediate activations kept for the backward pass.
struct ForwardCache {
  Matrix hidden;   // batch x hidden, post-tanh
  Matrix outputs;  // batch x 5
  std::vector<double> scores;  // batch, post-head (unclamped for ScaledLinear)
};

ForwardCache mlp_forward(const MlpParams& params, const Matrix& x);

// Batch-mean squared error, 0.5 * mean (r - y)^2, plus (l2/2)(|W1|^2 + |W2|^2).
double mlp_loss(const MlpParams& params, const ForwardCache& cache,
                const std::vector<double>& y, double l2);

struct Gradients {
  Matrix w1;
  std::vector<double> b1;
  Matrix w2;
  std::vector<double> b2;
};

Gradients mlp_backward(const MlpParams& params, const Matrix& x, const ForwardCache& cache,
                       const std::vector<double>& y, double l2);

// Adam with seeded epoch shuffles. Throws std::runtime_error if the loss
// becomes non-finite, reporting the epoch where it happened.
MlpParams mlp_train(const Matrix& x, const std::vector<double>& y, const TrainConfig& cfg);

// Scores for each row. ScaledLinear output is clamped to [0,1] here (training
// differentiates the unclamped value).
std::vector<double> mlp_predict(const MlpParams& params, const Matrix& x);

}  // namespace padp::mlp
