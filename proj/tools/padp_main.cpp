// padp: personality-adaptive differential-privacy toolkit.
//
// Subcommands generate the synthetic status corpus, train concern-score
// models, oversample with SMOTE, score records, verify mechanisms against
// the DP ratio bound, and run the budget-controller simulation. Every
// command is deterministic under a fixed --seed and writes one manifest
// beside its outputs.

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "padp/concern.hpp"
#include "padp/dp.hpp"
#include "padp/kernels.hpp"
#include "padp/metrics.hpp"
#include "padp/pipeline.hpp"
#include "padp/rng.hpp"
#include "padp/sim.hpp"
#include "padp/smote.hpp"
#include "padp/synth.hpp"

namespace {

constexpr const char* kVersion = "0.1.0";

std::string iso_timestamp() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void write_json(const nlohmann::json& j, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open '" + path + "'");
  out << j.dump(2) << '\n';
  if (!out) throw std::runtime_error("write failed for '" + path + "'");
}

// One manifest per run: what ran, with which knobs, reading and writing what.
void write_manifest(const std::string& out_dir, const std::string& name,
                    const std::string& command, const nlohmann::json& config, uint64_t seed,
                    const std::vector<std::string>& inputs,
                    const std::vector<std::string>& outputs) {
  nlohmann::json j;
  j["command"] = command;
  j["config"] = config;
  j["seed"] = seed;
  j["inputs"] = inputs;
  j["outputs"] = outputs;
  j["version"] = kVersion;
  j["wall_clock"] = iso_timestamp();
  write_json(j, out_dir + "/" + name + ".manifest.json");
}

std::string prepare_out_dir(const std::string& out_dir) {
  std::filesystem::create_directories(out_dir);
  return out_dir;
}

std::vector<padp::synth::UserRecord> load_users(const std::string& path) {
  auto users = padp::synth::read_dataset(path);
  if (users.empty()) throw std::runtime_error("dataset '" + path + "' has no records");
  return users;
}

std::vector<padp::synth::UserRecord> select_users(const std::vector<padp::synth::UserRecord>& users,
                                                  const std::vector<size_t>& idx) {
  std::vector<padp::synth::UserRecord> out;
  out.reserve(idx.size());
  for (size_t i : idx) out.push_back(users[i]);
  return out;
}

int concern_class(padp::concern::ConcernLabel label) {
  switch (label) {
    case padp::concern::ConcernLabel::LoPC: return 0;
    case padp::concern::ConcernLabel::MePC: return 1;
    case padp::concern::ConcernLabel::HiPC: return 2;
  }
  throw std::logic_error("concern_class: unknown label");
}

// ---- gen-data ----

struct GenDataArgs {
  size_t users = 250;
  size_t statuses = 9917;
  size_t lo = 9;
  size_t me = 212;
  size_t hi = 29;
  uint64_t seed = 0;
  std::string out = ".";
};

void run_gen_data(const GenDataArgs& args) {
  padp::synth::GenSpec spec;
  spec.n_users = args.users;
  spec.total_statuses = args.statuses;
  spec.lo_count = args.lo;
  spec.me_count = args.me;
  spec.hi_count = args.hi;
  spec.seed = args.seed;

  const auto users = padp::synth::gen_users(spec);
  const auto out_dir = prepare_out_dir(args.out);
  const auto dataset_path = out_dir + "/dataset.csv";
  padp::synth::write_dataset(users, dataset_path);

  size_t counts[3] = {0, 0, 0};
  for (const auto& user : users) ++counts[concern_class(user.concern_label)];
  std::printf("gen-data: wrote %zu users (LoPC %zu, MePC %zu, HiPC %zu) to %s\n", users.size(),
              counts[0], counts[1], counts[2], dataset_path.c_str());

  write_manifest(out_dir, "gen-data", "gen-data",
                 {{"users", args.users},
                  {"statuses", args.statuses},
                  {"lo", args.lo},
                  {"me", args.me},
                  {"hi", args.hi}},
                 args.seed, {}, {dataset_path});
}

// ---- train ----

struct TrainArgs {
  std::string model = "lr";
  std::string data;
  double split = 0.8;
  uint64_t seed = 0;
  size_t vocab_size = 7111;
  std::string embeddings;
  std::string topics;
  bool use_smote = false;
  size_t folds = 5;
  // MLP overrides (defaults follow the tuned regression settings).
  size_t hidden = 80;
  size_t epochs = 90;
  double lr = 1e-5;
  double l2 = 1e-5;
  size_t batch = 32;
  std::string out = ".";
};

nlohmann::json train_args_json(const TrainArgs& args) {
  return {{"model", args.model},     {"data", args.data},       {"split", args.split},
          {"vocab_size", args.vocab_size}, {"embeddings", args.embeddings},
          {"topics", args.topics},   {"smote", args.use_smote}, {"folds", args.folds},
          {"hidden", args.hidden},   {"epochs", args.epochs},   {"lr", args.lr},
          {"l2", args.l2},           {"batch", args.batch}};
}

void run_train_regression(const TrainArgs& args) {
  const auto users = load_users(args.data);
  const auto split = padp::pipeline::train_test_split(users.size(), args.split, args.seed);
  const auto train_users = select_users(users, split.train);
  const auto test_users = select_users(users, split.test);

  padp::pipeline::FeatureConfig feature_cfg;
  feature_cfg.vocab_size = args.vocab_size;
  feature_cfg.embeddings_path = args.embeddings;
  feature_cfg.topics_path = args.topics;

  padp::pipeline::TrainOptions opts;
  opts.seed = args.seed;
  opts.mlp.hidden_units = args.hidden;
  opts.mlp.epochs = args.epochs;
  opts.mlp.learning_rate = args.lr;
  opts.mlp.l2 = args.l2;
  opts.mlp.batch_size = args.batch;

  const auto kind = padp::pipeline::model_kind_from_name(args.model);
  const auto model = padp::pipeline::train_score_model(kind, train_users, feature_cfg, opts);

  auto golds = [](const std::vector<padp::synth::UserRecord>& us) {
    std::vector<double> y(us.size());
    for (size_t i = 0; i < us.size(); ++i) y[i] = us[i].gold_r;
    return y;
  };
  const auto train_pred = model.predict_r(train_users);
  const auto test_pred = model.predict_r(test_users);
  const auto train_gold = golds(train_users);
  const auto test_gold = golds(test_users);

  nlohmann::json metrics = {
      {"train",
       {{"rmse", padp::metrics::rmse(train_pred, train_gold)},
        {"evs", padp::metrics::evs(train_pred, train_gold)}}},
      {"test",
       {{"rmse", padp::metrics::rmse(test_pred, test_gold)},
        {"evs", padp::metrics::evs(test_pred, test_gold)}}}};

  const auto out_dir = prepare_out_dir(args.out);
  const auto model_path = out_dir + "/model_" + args.model + ".json";
  const auto metrics_path = out_dir + "/metrics_" + args.model + ".json";
  padp::pipeline::save_model(model, model_path);
  write_json(metrics, metrics_path);

  std::printf("train %s: train rmse %.6f evs %.4f | test rmse %.6f evs %.4f\n", args.model.c_str(),
              metrics["train"]["rmse"].get<double>(), metrics["train"]["evs"].get<double>(),
              metrics["test"]["rmse"].get<double>(), metrics["test"]["evs"].get<double>());

  write_manifest(out_dir, "train_" + args.model, "train", train_args_json(args), args.seed,
                 {args.data}, {model_path, metrics_path});
}

void run_train_classification(const TrainArgs& args) {
  const auto users = load_users(args.data);

  padp::pipeline::FeatureConfig feature_cfg;
  feature_cfg.vocab_size = args.vocab_size;
  feature_cfg.embeddings_path = args.embeddings;
  feature_cfg.topics_path = args.topics;
  const auto space = padp::pipeline::build_feature_space(users, feature_cfg);
  padp::Matrix x = space.featurize(users);

  std::vector<int> labels(users.size());
  for (size_t i = 0; i < users.size(); ++i) labels[i] = concern_class(users[i].concern_label);

  // Majority baseline always refers to the original class balance.
  std::map<int, size_t> class_counts;
  for (int l : labels) ++class_counts[l];
  size_t majority_count = 0;
  for (const auto& [cls, count] : class_counts) majority_count = std::max(majority_count, count);
  const double majority = static_cast<double>(majority_count) / static_cast<double>(users.size());

  nlohmann::json smote_info;
  if (args.use_smote) {
    const auto balanced = padp::smote::oversample(x, labels, 5, args.seed);
    smote_info = {{"before", nlohmann::json::object()}, {"after", nlohmann::json::object()}};
    for (const auto& [cls, count] : class_counts) {
      smote_info["before"][std::to_string(cls)] = count;
    }
    std::map<int, size_t> after_counts;
    for (int l : balanced.labels) ++after_counts[l];
    for (const auto& [cls, count] : after_counts) {
      smote_info["after"][std::to_string(cls)] = count;
    }
    x = balanced.x;
    labels = balanced.labels;
  }

  // Per-column max-abs scaling keeps the subgradient steps comparable
  // across the count-valued and embedding-valued blocks.
  padp::pipeline::Scaler scaler;
  scaler.fit(x);
  x = scaler.apply(x);

  const auto folds = padp::metrics::kfold_split(x.rows, args.folds, args.seed);
  double total_acc = 0.0;
  for (const auto& test_fold : folds) {
    std::vector<char> in_test(x.rows, 0);
    for (size_t i : test_fold) in_test[i] = 1;
    std::vector<size_t> train_rows;
    for (size_t i = 0; i < x.rows; ++i) {
      if (!in_test[i]) train_rows.push_back(i);
    }

    padp::Matrix train_x(train_rows.size(), x.cols);
    std::vector<int> train_y(train_rows.size());
    for (size_t i = 0; i < train_rows.size(); ++i) {
      std::copy(x.row(train_rows[i]), x.row(train_rows[i]) + x.cols, train_x.row(i));
      train_y[i] = labels[train_rows[i]];
    }

    std::vector<int> predicted, actual;
    if (args.model == "nb") {
      const auto nb = padp::models::nb_fit(train_x, train_y);
      std::vector<double> buf(x.cols);
      for (size_t i : test_fold) {
        std::copy(x.row(i), x.row(i) + x.cols, buf.begin());
        predicted.push_back(nb.predict_one(buf));
        actual.push_back(labels[i]);
      }
    } else {
      padp::models::SvmConfig svm_cfg;
      svm_cfg.epochs = 60;
      svm_cfg.seed = args.seed;
      const auto svm = padp::models::svm_fit(train_x, train_y, svm_cfg);
      std::vector<double> buf(x.cols);
      for (size_t i : test_fold) {
        std::copy(x.row(i), x.row(i) + x.cols, buf.begin());
        predicted.push_back(svm.predict_one(buf));
        actual.push_back(labels[i]);
      }
    }
    total_acc += padp::metrics::accuracy(predicted, actual);
  }
  const double cv_accuracy = total_acc / static_cast<double>(args.folds);

  nlohmann::json metrics = {{"cv", {{"accuracy", cv_accuracy}, {"folds", args.folds}}},
                            {"majority", {{"accuracy", majority}}}};
  if (!smote_info.is_null()) metrics["smote"] = smote_info;

  const auto out_dir = prepare_out_dir(args.out);
  const auto metrics_path = out_dir + "/metrics_" + args.model + ".json";
  write_json(metrics, metrics_path);

  std::printf("train %s: %zu-fold accuracy %.4f (majority %.4f)%s\n", args.model.c_str(),
              args.folds, cv_accuracy, majority, args.use_smote ? " [smote]" : "");

  write_manifest(out_dir, "train_" + args.model, "train", train_args_json(args), args.seed,
                 {args.data}, {metrics_path});
}

void run_train(const TrainArgs& args) {
  if (args.model == "lr" || args.model == "svr" || args.model == "mlp") {
    run_train_regression(args);
  } else if (args.model == "nb" || args.model == "svm") {
    run_train_classification(args);
  } else {
    throw CLI::ValidationError("--model", "unknown model '" + args.model + "'");
  }
}

// ---- simulate ----

struct SimulateArgs {
  std::string controllers = "global,gold";
  std::string task = "cls";
  std::string data;
  std::string models_dir = ".";
  size_t iters = 30;
  double eps = 0.15;
  double capacity = 3.0;
  double random_lo = 1.0;
  double random_hi = 5.0;
  double b_min = 1.0;
  double b_max = 5.0;
  size_t folds = 10;
  uint64_t seed = 0;
  std::string out = ".";
};

void run_simulate(const SimulateArgs& args) {
  const auto users = load_users(args.data);

  padp::sim::SimInput input;
  input.records.reserve(users.size());
  // The utility classifier sees the five trait scores; text features are the
  // score models' concern, not the analyst task's.
  input.features = padp::Matrix(users.size(), 5);
  for (size_t i = 0; i < users.size(); ++i) {
    input.records.push_back({users[i].id, users[i].gold_r, users[i].labels.ext ? 1 : 0});
    const auto s = users[i].traits.ordered();
    for (size_t j = 0; j < 5; ++j) input.features(i, j) = s[j];
  }

  std::map<std::string, double> gold_scores;
  for (const auto& user : users) gold_scores[user.id] = user.gold_r;

  std::vector<padp::sim::Controller> controllers;
  std::stringstream ss(args.controllers);
  std::string name;
  while (std::getline(ss, name, ',')) {
    if (name.empty()) continue;
    if (name == "global") {
      controllers.push_back(padp::sim::Controller::global(args.capacity));
    } else if (name == "random") {
      auto c = padp::sim::Controller::random(args.random_lo, args.random_hi,
                                             padp::splitmix64(args.seed ^ 0x72616e646f6dULL));
      controllers.push_back(std::move(c));
    } else if (name == "gold") {
      controllers.push_back(padp::sim::Controller::from_scores(
          padp::sim::ScoreSource::Gold, gold_scores, args.b_min, args.b_max));
    } else if (name == "lr" || name == "svr" || name == "mlp") {
      const auto model_path = args.models_dir + "/model_" + name + ".json";
      if (!std::filesystem::exists(model_path)) {
        throw std::runtime_error("simulate: missing model file '" + model_path +
                                 "' (train it first)");
      }
      const auto model = padp::pipeline::load_model(model_path);
      const auto predicted = model.predict_r(users);
      std::map<std::string, double> scores;
      for (size_t i = 0; i < users.size(); ++i) scores[users[i].id] = predicted[i];
      const auto source = name == "lr"    ? padp::sim::ScoreSource::LR
                          : name == "svr" ? padp::sim::ScoreSource::SVR
                                          : padp::sim::ScoreSource::MLP;
      controllers.push_back(
          padp::sim::Controller::from_scores(source, std::move(scores), args.b_min, args.b_max));
    } else {
      throw CLI::ValidationError("--controllers", "unknown controller '" + name + "'");
    }
  }
  if (controllers.empty()) {
    throw CLI::ValidationError("--controllers", "no controllers selected");
  }

  padp::sim::SimConfig config;
  config.eps_per_query = args.eps;
  config.iterations = args.iters;
  config.task = args.task == "reg" ? padp::sim::Task::Regression : padp::sim::Task::Classification;
  if (args.task != "cls" && args.task != "reg") {
    throw CLI::ValidationError("--task", "must be cls or reg");
  }
  config.folds = args.folds;
  config.seed = args.seed;

  const auto report = padp::sim::compare_controllers(input, controllers, config);

  const auto out_dir = prepare_out_dir(args.out);
  const auto trace_path = out_dir + "/trace.csv";
  const auto report_path = out_dir + "/report.json";
  padp::sim::write_trace_csv(report.traces, trace_path);
  auto jreport = report.to_json();
  jreport["eps_per_query"] = args.eps;
  jreport["iterations"] = args.iters;
  jreport["task"] = args.task;
  write_json(jreport, report_path);

  for (const auto& trace : report.traces) {
    const auto dist = report.distance_to_gold.find(trace.controller);
    std::printf("simulate %s: %zu iterations, final oob ratio %.3f%s\n", trace.controller.c_str(),
                trace.rows.size(), trace.rows.empty() ? 0.0 : trace.rows.back().oob_ratio,
                dist == report.distance_to_gold.end()
                    ? ""
                    : (", distance to gold " + std::to_string(dist->second)).c_str());
  }

  write_manifest(out_dir, "simulate", "simulate",
                 {{"controllers", args.controllers},
                  {"task", args.task},
                  {"iters", args.iters},
                  {"eps", args.eps},
                  {"capacity", args.capacity},
                  {"b_min", args.b_min},
                  {"b_max", args.b_max},
                  {"folds", args.folds},
                  {"models_dir", args.models_dir}},
                 args.seed, {args.data}, {trace_path, report_path});
}

// ---- smote ----

struct SmoteArgs {
  std::string data;
  size_t k = 5;
  uint64_t seed = 0;
  std::string out = ".";
};

void run_smote(const SmoteArgs& args) {
  const auto users = load_users(args.data);

  padp::Matrix x(users.size(), 5);
  std::vector<int> labels(users.size());
  for (size_t i = 0; i < users.size(); ++i) {
    const auto s = users[i].traits.ordered();
    for (size_t j = 0; j < 5; ++j) x(i, j) = s[j];
    labels[i] = concern_class(users[i].concern_label);
  }

  const auto result = padp::smote::oversample(x, labels, args.k, args.seed);

  std::map<int, size_t> before, after;
  for (int l : labels) ++before[l];
  for (int l : result.labels) ++after[l];

  nlohmann::json j;
  static const char* names[3] = {"LoPC", "MePC", "HiPC"};
  for (int c = 0; c < 3; ++c) {
    j["before"][names[c]] = before.count(c) ? before[c] : 0;
    j["after"][names[c]] = after.count(c) ? after[c] : 0;
  }
  j["synthesized"] = result.parents.size();
  j["k"] = args.k;

  const auto out_dir = prepare_out_dir(args.out);
  const auto report_path = out_dir + "/smote.json";
  write_json(j, report_path);

  std::printf("smote: before LoPC %zu MePC %zu HiPC %zu -> after LoPC %zu MePC %zu HiPC %zu\n",
              before[0], before[1], before[2], after[0], after[1], after[2]);

  write_manifest(out_dir, "smote", "smote", {{"k", args.k}, {"data", args.data}}, args.seed,
                 {args.data}, {report_path});
}

// ---- score ----

struct ScoreArgs {
  std::string data;
  std::vector<double> scores;  // sNEU sOPN sCON sAGR sEXT
  std::vector<std::string> labels;  // cNEU cOPN cCON cAGR cEXT as yes/no
  std::string out = ".";
  uint64_t seed = 0;
};

void run_score(const ScoreArgs& args) {
  const auto out_dir = prepare_out_dir(args.out);
  std::vector<std::string> outputs;

  if (!args.data.empty()) {
    const auto users = load_users(args.data);
    const auto scores_path = out_dir + "/scores.csv";
    std::ofstream out(scores_path);
    if (!out) throw std::runtime_error("cannot open '" + scores_path + "'");
    out << "user_id,gold_r,concern_label\n";
    for (const auto& user : users) {
      const double r = padp::concern::gold_score(user.traits);
      const auto label = padp::concern::derive_label(user.labels);
      char buf[64];
      std::snprintf(buf, sizeof(buf), "%.17g", r);
      out << user.id << ',' << buf << ',' << padp::concern::label_name(label) << '\n';
    }
    std::printf("score: wrote %zu rows to %s\n", users.size(), scores_path.c_str());
    outputs.push_back(scores_path);
  }

  if (!args.scores.empty()) {
    if (args.scores.size() != 5) {
      throw CLI::ValidationError("--trait-scores", "need exactly 5 values (NEU OPN CON AGR EXT)");
    }
    const padp::concern::TraitScores traits{args.scores[0], args.scores[1], args.scores[2],
                                            args.scores[3], args.scores[4]};
    std::printf("gold_r %.6f\n", padp::concern::gold_score(traits));
  }

  if (!args.labels.empty()) {
    if (args.labels.size() != 5) {
      throw CLI::ValidationError("--trait-labels", "need exactly 5 values (NEU OPN CON AGR EXT)");
    }
    padp::concern::TraitLabels labels;
    bool* fields[5] = {&labels.neu, &labels.opn, &labels.con, &labels.agr, &labels.ext};
    for (size_t i = 0; i < 5; ++i) {
      if (args.labels[i] == "yes") *fields[i] = true;
      else if (args.labels[i] == "no") *fields[i] = false;
      else throw CLI::ValidationError("--trait-labels", "values must be yes or no");
    }
    std::printf("%s\n", padp::concern::label_name(padp::concern::derive_label(labels)));
  }

  if (args.data.empty() && args.scores.empty() && args.labels.empty()) {
    throw CLI::ValidationError("score", "provide --data, --trait-scores, or --trait-labels");
  }

  write_manifest(out_dir, "score", "score",
                 {{"data", args.data},
                  {"trait_scores", args.scores},
                  {"trait_labels", args.labels}},
                 args.seed, args.data.empty() ? std::vector<std::string>{}
                                              : std::vector<std::string>{args.data},
                 outputs);
}

// ---- verify-dp ----

struct VerifyDpArgs {
  std::string mechanism = "laplace";
  double epsilon = 1.0;
  double delta = 0.0;
  size_t samples = 1000000;
  size_t bins = 50;
  double z = 5.0;
  uint64_t seed = 0;
  std::string out = ".";
};

void run_verify_dp(const VerifyDpArgs& args) {
  if (args.mechanism != "laplace" && args.mechanism != "noiseless") {
    throw CLI::ValidationError("--mechanism", "must be laplace or noiseless");
  }

  // Counting query over ten records; the neighboring database flips one
  // record's value, so the query's sensitivity is 1.
  padp::dp::DatabaseView d1, d2;
  for (int i = 0; i < 10; ++i) {
    const std::string id = "r" + std::to_string(i);
    d1.ids.push_back(id);
    d2.ids.push_back(id);
    d1.values.push_back(1.0);
    d2.values.push_back(i == 9 ? 0.0 : 1.0);
  }

  const double epsilon = args.epsilon;
  const bool noiseless = args.mechanism == "noiseless";
  padp::dp::Mechanism mechanism = [epsilon, noiseless](const padp::dp::DatabaseView& db,
                                                       padp::Rng& rng) {
    double count = 0.0;
    for (double v : db.values) count += v;
    if (noiseless) return count;
    return count + padp::dp::laplace_sample(1.0 / epsilon, rng);
  };

  padp::dp::VerifyConfig cfg;
  cfg.bins = args.bins;
  cfg.samples = args.samples;
  cfg.z = args.z;
  cfg.seed = args.seed;

  const auto verdict = padp::dp::verify_dp_ratio(mechanism, d1, d2, args.epsilon, args.delta, cfg);

  const auto out_dir = prepare_out_dir(args.out);
  const auto verdict_path = out_dir + "/dp_verdict.json";
  write_json(verdict.to_json(), verdict_path);

  std::printf("verify-dp %s eps=%.3g delta=%.3g: %s (max ratio %.4f, threshold %.4f)\n",
              args.mechanism.c_str(), args.epsilon, args.delta, verdict.pass ? "PASS" : "FAIL",
              verdict.max_ratio, verdict.threshold);

  write_manifest(out_dir, "verify-dp", "verify-dp",
                 {{"mechanism", args.mechanism},
                  {"epsilon", args.epsilon},
                  {"delta", args.delta},
                  {"samples", args.samples},
                  {"bins", args.bins},
                  {"z", args.z}},
                 args.seed, {}, {verdict_path});
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"personality-adaptive differential privacy toolkit"};
  app.set_version_flag("--version", kVersion);
  app.set_config("--config", "", "read option defaults from a key=value file");
  app.require_subcommand(1);

  // Applied immediately so it is in force when a subcommand callback runs.
  app.add_option_function<int>(
      "--threads",
      [](int t) {
        if (t > 0) padp::kernels::set_threads(t);
      },
      "worker threads for parallel kernels (0 = auto)");

  const char* env_out = std::getenv("PADP_OUT_DIR");
  const std::string default_out = env_out && *env_out ? env_out : ".";

  GenDataArgs gen_args;
  gen_args.out = default_out;
  auto* gen = app.add_subcommand("gen-data", "generate the synthetic status corpus");
  gen->add_option("--users", gen_args.users, "number of users")->capture_default_str();
  gen->add_option("--statuses", gen_args.statuses, "total status count")->capture_default_str();
  gen->add_option("--lo", gen_args.lo, "LoPC user count")->capture_default_str();
  gen->add_option("--me", gen_args.me, "MePC user count")->capture_default_str();
  gen->add_option("--hi", gen_args.hi, "HiPC user count")->capture_default_str();
  gen->add_option("--seed", gen_args.seed, "RNG seed")->capture_default_str();
  gen->add_option("--out", gen_args.out, "output directory")->capture_default_str();
  gen->callback([&] { run_gen_data(gen_args); });

  TrainArgs train_args;
  train_args.out = default_out;
  auto* train = app.add_subcommand("train", "train a concern model and report metrics");
  train->add_option("--model", train_args.model, "lr|svr|mlp|nb|svm")->capture_default_str();
  train->add_option("--data", train_args.data, "dataset CSV")->required();
  train->add_option("--split", train_args.split, "training fraction")->capture_default_str();
  train->add_option("--seed", train_args.seed, "RNG seed")->capture_default_str();
  train->add_option("--vocab-size", train_args.vocab_size, "ngram vocabulary size")
      ->capture_default_str();
  train->add_option("--embeddings", train_args.embeddings, "word-embedding table path");
  train->add_option("--topics", train_args.topics, "per-user topic feature CSV");
  train->add_flag("--smote", train_args.use_smote, "oversample before cross-validation");
  train->add_option("--folds", train_args.folds, "cross-validation folds (nb/svm)")
      ->capture_default_str();
  train->add_option("--hidden", train_args.hidden, "MLP hidden units")->capture_default_str();
  train->add_option("--epochs", train_args.epochs, "MLP training epochs")->capture_default_str();
  train->add_option("--lr", train_args.lr, "MLP learning rate")->capture_default_str();
  train->add_option("--l2", train_args.l2, "L2 penalty")->capture_default_str();
  train->add_option("--batch", train_args.batch, "MLP minibatch size")->capture_default_str();
  train->add_option("--out", train_args.out, "output directory")->capture_default_str();
  train->callback([&] { run_train(train_args); });

  SimulateArgs sim_args;
  sim_args.out = default_out;
  auto* sim = app.add_subcommand("simulate", "run the budget-controller comparison");
  sim->add_option("--controllers", sim_args.controllers, "comma list: global,random,gold,lr,svr,mlp")
      ->capture_default_str();
  sim->add_option("--task", sim_args.task, "cls|reg")->capture_default_str();
  sim->add_option("--data", sim_args.data, "dataset CSV")->required();
  sim->add_option("--models-dir", sim_args.models_dir, "directory holding model_<kind>.json")
      ->capture_default_str();
  sim->add_option("--iters", sim_args.iters, "iteration cap")->capture_default_str();
  sim->add_option("--eps", sim_args.eps, "epsilon charged per query")->capture_default_str();
  sim->add_option("--capacity", sim_args.capacity, "global controller capacity")
      ->capture_default_str();
  sim->add_option("--random-lo", sim_args.random_lo, "random controller lower bound")
      ->capture_default_str();
  sim->add_option("--random-hi", sim_args.random_hi, "random controller upper bound")
      ->capture_default_str();
  sim->add_option("--b-min", sim_args.b_min, "personalized budget floor")->capture_default_str();
  sim->add_option("--b-max", sim_args.b_max, "personalized budget ceiling")->capture_default_str();
  sim->add_option("--folds", sim_args.folds, "utility classification folds")->capture_default_str();
  sim->add_option("--seed", sim_args.seed, "RNG seed")->capture_default_str();
  sim->add_option("--out", sim_args.out, "output directory")->capture_default_str();
  sim->callback([&] { run_simulate(sim_args); });

  SmoteArgs smote_args;
  smote_args.out = default_out;
  auto* smote = app.add_subcommand("smote", "oversample concern classes to balance");
  smote->add_option("--data", smote_args.data, "dataset CSV")->required();
  smote->add_option("--k", smote_args.k, "neighbor count")->capture_default_str();
  smote->add_option("--seed", smote_args.seed, "RNG seed")->capture_default_str();
  smote->add_option("--out", smote_args.out, "output directory")->capture_default_str();
  smote->callback([&] { run_smote(smote_args); });

  ScoreArgs score_args;
  score_args.out = default_out;
  auto* score = app.add_subcommand("score", "compute gold concern scores and labels");
  score->add_option("--data", score_args.data, "dataset CSV");
  score->add_option("--trait-scores", score_args.scores,
                    "five trait scores (NEU OPN CON AGR EXT)")
      ->expected(0, 5);
  score->add_option("--trait-labels", score_args.labels,
                    "five yes/no trait labels (NEU OPN CON AGR EXT)")
      ->expected(0, 5);
  score->add_option("--seed", score_args.seed, "RNG seed (unused; accepted for uniformity)")
      ->capture_default_str();
  score->add_option("--out", score_args.out, "output directory")->capture_default_str();
  score->callback([&] { run_score(score_args); });

  VerifyDpArgs dp_args;
  dp_args.out = default_out;
  auto* verify = app.add_subcommand("verify-dp", "Monte-Carlo check of the DP ratio bound");
  verify->add_option("--mechanism", dp_args.mechanism, "laplace|noiseless")->capture_default_str();
  verify->add_option("--epsilon", dp_args.epsilon, "privacy parameter")->capture_default_str();
  verify->add_option("--delta", dp_args.delta, "slack parameter")->capture_default_str();
  verify->add_option("--samples", dp_args.samples, "Monte-Carlo samples per database")
      ->capture_default_str();
  verify->add_option("--bins", dp_args.bins, "histogram bins")->capture_default_str();
  verify->add_option("--z", dp_args.z, "sampling-tolerance multiplier")->capture_default_str();
  verify->add_option("--seed", dp_args.seed, "RNG seed")->capture_default_str();
  verify->add_option("--out", dp_args.out, "output directory")->capture_default_str();
  verify->callback([&] { run_verify_dp(dp_args); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
