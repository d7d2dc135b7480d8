#include "padp/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

#include "padp/concern.hpp"
#include "padp/rng.hpp"

namespace padp::pipeline {

namespace {

std::vector<double> matrix_row_vec(const Matrix& x, size_t i) {
  return std::vector<double>(x.row(i), x.row(i) + x.cols);
}

double clamp01(double v) { return std::clamp(v, 0.0, 1.0); }

nlohmann::json matrix_to_json(const Matrix& m) {
  return {{"rows", m.rows}, {"cols", m.cols}, {"data", m.data}};
}

Matrix matrix_from_json(const nlohmann::json& j, const char* what) {
  Matrix m;
  m.rows = j.at("rows").get<size_t>();
  m.cols = j.at("cols").get<size_t>();
  m.data = j.at("data").get<std::vector<double>>();
  if (m.data.size() != m.rows * m.cols) {
    throw std::runtime_error(std::string(what) + ": matrix data does not match declared shape");
  }
  return m;
}

}  // namespace

Matrix FeatureSpace::featurize(const std::vector<synth::UserRecord>& users) const {
  if (users.empty()) throw std::invalid_argument("featurize: no users");
  Matrix out(users.size(), blocks.total());
  for (size_t i = 0; i < users.size(); ++i) {
    const auto assembled = text::assemble(synth::joined_text(users[i]), vocab,
                                          topics.find(users[i].id), embeddings, blocks);
    std::copy(assembled.values.begin(), assembled.values.end(), out.row(i));
  }
  return out;
}

FeatureSpace build_feature_space(const std::vector<synth::UserRecord>& train_users,
                                 const FeatureConfig& cfg) {
  if (train_users.empty()) throw std::invalid_argument("build_feature_space: no users");

  FeatureSpace space;
  std::vector<std::string> corpus;
  corpus.reserve(train_users.size());
  for (const auto& user : train_users) corpus.push_back(synth::joined_text(user));
  space.vocab = text::NgramVocabulary::build(corpus, cfg.vocab_size, cfg.max_n);
  space.blocks.ngram = cfg.vocab_size;

  if (!cfg.embeddings_path.empty()) {
    space.embeddings = text::load_embeddings(cfg.embeddings_path);
    space.blocks.embedding = space.embeddings.dim;
  }
  if (!cfg.topics_path.empty()) {
    space.topics = text::load_topics(cfg.topics_path);
  }
  space.embeddings_path = cfg.embeddings_path;
  space.topics_path = cfg.topics_path;
  return space;
}

void Scaler::fit(const Matrix& x) {
  scales.assign(x.cols, 1.0);
  for (size_t j = 0; j < x.cols; ++j) {
    double peak = 0.0;
    for (size_t i = 0; i < x.rows; ++i) peak = std::max(peak, std::fabs(x(i, j)));
    if (peak > 0.0) scales[j] = peak;
  }
}

Matrix Scaler::apply(const Matrix& x) const {
  if (x.cols != scales.size()) throw std::invalid_argument("Scaler: column count mismatch");
  Matrix out = x;
  for (size_t i = 0; i < x.rows; ++i) {
    for (size_t j = 0; j < x.cols; ++j) out(i, j) /= scales[j];
  }
  return out;
}

const char* model_kind_name(ModelKind kind) {
  switch (kind) {
    case ModelKind::LR: return "lr";
    case ModelKind::SVR: return "svr";
    case ModelKind::MLP: return "mlp";
  }
  throw std::logic_error("model_kind_name: unknown kind");
}

ModelKind model_kind_from_name(const std::string& name) {
  if (name == "lr") return ModelKind::LR;
  if (name == "svr") return ModelKind::SVR;
  if (name == "mlp") return ModelKind::MLP;
  throw std::invalid_argument("unknown model kind '" + name + "'");
}

std::vector<double> ScoreModel::predict_r(const Matrix& raw_features) const {
  const Matrix x = scaler.apply(raw_features);

  if (kind == ModelKind::MLP) return mlp::mlp_predict(net, x);

  if (trait_models.size() != 5) throw std::runtime_error("ScoreModel: expected 5 trait models");
  const auto weights = concern::WeightVector{}.v;
  std::vector<double> out(x.rows, 0.0);
  for (size_t t = 0; t < 5; ++t) {
    const auto pred = trait_models[t].predict(x);
    for (size_t i = 0; i < x.rows; ++i) out[i] += weights[t] * pred[i];
  }
  for (double& r : out) r = clamp01(r / concern::kGoldNormalizer);
  return out;
}

std::vector<double> ScoreModel::predict_r(const std::vector<synth::UserRecord>& users) const {
  return predict_r(feature.featurize(users));
}

nlohmann::json ScoreModel::to_json() const {
  nlohmann::json j;
  j["kind"] = model_kind_name(kind);
  j["feature"] = {{"vocab", feature.vocab.to_json()},
                  {"blocks",
                   {{"ngram", feature.blocks.ngram},
                    {"lsi", feature.blocks.lsi},
                    {"lda", feature.blocks.lda},
                    {"embedding", feature.blocks.embedding}}},
                  {"embeddings_path", feature.embeddings_path},
                  {"topics_path", feature.topics_path}};
  j["scaler"] = {{"scales", scaler.scales}};
  if (kind == ModelKind::MLP) {
    j["params"] = {{"w1", matrix_to_json(net.w1)},
                   {"b1", net.b1},
                   {"w2", matrix_to_json(net.w2)},
                   {"b2", net.b2},
                   {"head", net.head == mlp::HeadKind::Sigmoid ? "sigmoid" : "scaled_linear"},
                   {"head_weights", net.head_weights}};
  } else {
    nlohmann::json traits = nlohmann::json::array();
    for (const auto& m : trait_models) traits.push_back({{"w", m.w}, {"b", m.b}});
    j["params"] = {{"trait_models", traits}};
  }
  return j;
}

ScoreModel ScoreModel::from_json(const nlohmann::json& j) {
  ScoreModel model;
  model.kind = model_kind_from_name(j.at("kind").get<std::string>());

  const auto& jf = j.at("feature");
  model.feature.vocab = text::NgramVocabulary::from_json(jf.at("vocab"));
  const auto& jb = jf.at("blocks");
  model.feature.blocks.ngram = jb.at("ngram").get<size_t>();
  model.feature.blocks.lsi = jb.at("lsi").get<size_t>();
  model.feature.blocks.lda = jb.at("lda").get<size_t>();
  model.feature.blocks.embedding = jb.at("embedding").get<size_t>();
  model.feature.embeddings_path = jf.at("embeddings_path").get<std::string>();
  model.feature.topics_path = jf.at("topics_path").get<std::string>();
  if (model.feature.vocab.capacity() != model.feature.blocks.ngram) {
    throw std::runtime_error("model file: vocabulary capacity disagrees with ngram block width");
  }
  if (!model.feature.embeddings_path.empty()) {
    model.feature.embeddings = text::load_embeddings(model.feature.embeddings_path);
    if (model.feature.embeddings.dim != model.feature.blocks.embedding) {
      throw std::runtime_error("model file: embedding dimension disagrees with block width");
    }
  }
  if (!model.feature.topics_path.empty()) {
    model.feature.topics = text::load_topics(model.feature.topics_path);
  }

  model.scaler.scales = j.at("scaler").at("scales").get<std::vector<double>>();
  const size_t dim = model.feature.blocks.total();
  if (model.scaler.scales.size() != dim) {
    throw std::runtime_error("model file: scaler width disagrees with feature blocks");
  }

  const auto& jp = j.at("params");
  if (model.kind == ModelKind::MLP) {
    model.net.w1 = matrix_from_json(jp.at("w1"), "model file");
    model.net.b1 = jp.at("b1").get<std::vector<double>>();
    model.net.w2 = matrix_from_json(jp.at("w2"), "model file");
    model.net.b2 = jp.at("b2").get<std::vector<double>>();
    model.net.head_weights = jp.at("head_weights").get<std::vector<double>>();
    const auto head = jp.at("head").get<std::string>();
    if (head == "sigmoid") model.net.head = mlp::HeadKind::Sigmoid;
    else if (head == "scaled_linear") model.net.head = mlp::HeadKind::ScaledLinear;
    else throw std::runtime_error("model file: unknown head '" + head + "'");
    if (model.net.w1.cols != dim) {
      throw std::runtime_error("model file: first layer width disagrees with feature blocks");
    }
    if (model.net.b1.size() != model.net.w1.rows || model.net.w2.cols != model.net.w1.rows ||
        model.net.b2.size() != model.net.w2.rows || model.net.w2.rows != 5 ||
        model.net.head_weights.size() != 5) {
      throw std::runtime_error("model file: inconsistent network shapes");
    }
  } else {
    for (const auto& jm : jp.at("trait_models")) {
      models::LinearModel m;
      m.w = jm.at("w").get<std::vector<double>>();
      m.b = jm.at("b").get<double>();
      if (m.w.size() != dim) {
        throw std::runtime_error("model file: trait model width disagrees with feature blocks");
      }
      model.trait_models.push_back(std::move(m));
    }
    if (model.trait_models.size() != 5) {
      throw std::runtime_error("model file: expected 5 trait models, got " +
                               std::to_string(model.trait_models.size()));
    }
  }
  return model;
}

ScoreModel train_score_model(ModelKind kind, const std::vector<synth::UserRecord>& users,
                             const FeatureConfig& feature_cfg, const TrainOptions& opts) {
  if (users.empty()) throw std::invalid_argument("train_score_model: no users");

  ScoreModel model;
  model.kind = kind;
  model.feature = build_feature_space(users, feature_cfg);
  const Matrix raw = model.feature.featurize(users);
  model.scaler.fit(raw);
  const Matrix x = model.scaler.apply(raw);

  if (kind == ModelKind::MLP) {
    std::vector<double> y(users.size());
    for (size_t i = 0; i < users.size(); ++i) y[i] = users[i].gold_r;
    auto cfg = opts.mlp;
    cfg.seed = opts.seed;
    model.net = mlp::mlp_train(x, y, cfg);
    return model;
  }

  // One model per trait, combined later by the gold linear map.
  model.trait_models.reserve(5);
  for (size_t t = 0; t < 5; ++t) {
    std::vector<double> y(users.size());
    for (size_t i = 0; i < users.size(); ++i) y[i] = users[i].traits.ordered()[t];
    if (kind == ModelKind::LR) {
      model.trait_models.push_back(models::linreg_fit(x, y, opts.lr_l2));
    } else {
      auto cfg = opts.svr;
      cfg.seed = splitmix64(opts.seed + t);
      model.trait_models.push_back(models::svr_fit(x, y, cfg));
    }
  }
  return model;
}

void save_model(const ScoreModel& model, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("save_model: cannot open '" + path + "'");
  out << model.to_json().dump(2) << '\n';
  if (!out) throw std::runtime_error("save_model: write failed for '" + path + "'");
}

ScoreModel load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("load_model: cannot open '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw std::runtime_error("load_model: '" + path + "' is not valid JSON: " + e.what());
  }
  return ScoreModel::from_json(j);
}

SplitIndices train_test_split(size_t n, double train_fraction, uint64_t seed) {
  if (n < 2) throw std::invalid_argument("train_test_split: need at least 2 samples");
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
    throw std::invalid_argument("train_test_split: fraction must be in (0, 1)");
  }
  std::vector<size_t> order(n);
  for (size_t i = 0; i < n; ++i) order[i] = i;
  Rng rng(seed);
  rng.shuffle(order);

  size_t n_train = static_cast<size_t>(std::llround(train_fraction * static_cast<double>(n)));
  n_train = std::clamp<size_t>(n_train, 1, n - 1);

  SplitIndices split;
  split.train.assign(order.begin(), order.begin() + static_cast<long>(n_train));
  split.test.assign(order.begin() + static_cast<long>(n_train), order.end());
  return split;
}

}  // namespace padp::pipeline
