#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "padp/linear_models.hpp"
#include "padp/matrix.hpp"
#include "padp/mlp.hpp"
#include "padp/synth.hpp"
#include "padp/text_features.hpp"

namespace padp::pipeline {

struct FeatureConfig {
  size_t vocab_size = 7111;
  size_t max_n = 5;
  std::string embeddings_path;  // empty → embedding block stays zero
  std::string topics_path;      // empty → topic blocks stay zero
};

// Everything needed to turn users into fixed-width feature rows. Built from
// the training split only, then applied unchanged to any split.
struct FeatureSpace {
  text::NgramVocabulary vocab;
  text::EmbeddingTable embeddings;
  text::TopicTable topics;
  text::FeatureBlocks blocks;
  std::string embeddings_path;
  std::string topics_path;

  Matrix featurize(const std::vector<synth::UserRecord>& users) const;
};

FeatureSpace build_feature_space(const std::vector<synth::UserRecord>& train_users,
                                 const FeatureConfig& cfg);

// Per-column max-abs scaling; columns that are all zero pass through.
struct Scaler {
  std::vector<double> scales;

  void fit(const Matrix& x);
  Matrix apply(const Matrix& x) const;
};

enum class ModelKind { LR, SVR, MLP };
const char* model_kind_name(ModelKind kind);
ModelKind model_kind_from_name(const std::string& name);

// A trained concern-score predictor: features -> r in [0, 1].
// LR/SVR predict the five trait scores and apply the gold linear map;
// MLP maps features to r directly through its five-output head.
struct ScoreModel {
  ModelKind kind = ModelKind::LR;
  FeatureSpace feature;
  Scaler scaler;
  std::vector<models::LinearModel> trait_models;  // 5, for LR/SVR
  mlp::MlpParams net;                             // for MLP

  std::vector<double> predict_r(const Matrix& raw_features) const;
  std::vector<double> predict_r(const std::vector<synth::UserRecord>& users) const;

  nlohmann::json to_json() const;
  static ScoreModel from_json(const nlohmann::json& j);
};

struct TrainOptions {
  mlp::TrainConfig mlp{};
  models::SvrConfig svr{};
  double lr_l2 = 0.0;
  uint64_t seed = 0;
};

// Trains on the given users (feature space built from them too).
ScoreModel train_score_model(ModelKind kind, const std::vector<synth::UserRecord>& users,
                             const FeatureConfig& feature_cfg, const TrainOptions& opts);

void save_model(const ScoreModel& model, const std::string& path);
ScoreModel load_model(const std::string& path);

// Seeded unstratified shuffle split; train_fraction in (0, 1).
struct SplitIndices {
  std::vector<size_t> train;
  std::vector<size_t> test;
};
SplitIndices train_test_split(size_t n, double train_fraction, uint64_t seed);

}  // namespace padp::pipeline
