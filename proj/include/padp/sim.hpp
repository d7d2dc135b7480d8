#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "padp/ledger.hpp"
#include "padp/linear_models.hpp"
#include "padp/matrix.hpp"

namespace padp::sim {

enum class ControllerKind { Global, Random, FromScores };
enum class ScoreSource { Gold, LR, SVR, MLP };

const char* score_source_name(ScoreSource source);

// Budget assignment policy for one simulation run. FromScores controllers
// carry precomputed per-record scores (gold values or model predictions);
// capacities follow capacity = b_min + (b_max - b_min) * (1 - r).
struct Controller {
  ControllerKind kind = ControllerKind::Global;
  std::string name = "global";
  // Global
  double capacity = 3.0;
  // Random
  double lo = 1.0;
  double hi = 5.0;
  uint64_t seed = 0;
  // FromScores
  ScoreSource source = ScoreSource::Gold;
  double b_min = 1.0;
  double b_max = 5.0;
  std::map<std::string, double> scores;

  static Controller global(double capacity);
  static Controller random(double lo, double hi, uint64_t seed);
  static Controller from_scores(ScoreSource source, std::map<std::string, double> scores,
                                double b_min = 1.0, double b_max = 5.0);
};

enum class Task { Classification, Regression };

struct SimConfig {
  double eps_per_query = 0.15;
  size_t iterations = 30;
  Task task = Task::Classification;
  size_t folds = 10;
  uint64_t seed = 0;
  models::SvmConfig utility_svm{1e-3, 1e-2, 30, 0};  // l2, lr, epochs, seed
};

// One simulated record. `features` rows align with `records` by index and
// feed the classification utility; the regression utility compares the
// controller's scores against gold_r.
struct SimRecord {
  std::string id;
  double gold_r = 0.0;
  int cext = 0;  // binary extraversion label
};

struct SimInput {
  std::vector<SimRecord> records;
  Matrix features;  // may be empty for the regression task
};

struct TraceRow {
  size_t iteration = 0;     // 1-based
  size_t oob_count = 0;     // records unable to cover this iteration's charge
  double oob_ratio = 0.0;
  size_t available = 0;     // records granted this iteration
  double utility = 0.0;
  // Sum of ledger.spent over all records after this iteration's charge;
  // not part of the trace CSV, kept for conservation checks.
  double cum_spent = 0.0;
};

struct SimTrace {
  std::string controller;
  std::string utility_metric;  // "accuracy" or "rmse"
  std::vector<TraceRow> rows;
  // Iteration at which each record first went out of budget (absent if never).
  std::map<std::string, size_t> exhaust_iteration;

  std::vector<double> oob_counts() const;
};

// Runs the interactive-analyst loop: each iteration measures which records
// can still cover eps_per_query, charges the ones that can, evaluates task
// utility on the granted set, and stops after `iterations` rounds or the
// first round with nothing granted.
SimTrace run_simulation(const SimInput& input, const Controller& controller,
                        const SimConfig& config);

// RMSE between two per-iteration OOBudget count sequences; the shorter one is
// zero-padded to the longer length.
double curve_distance(const SimTrace& a, const SimTrace& b);

struct ComparisonReport {
  std::vector<SimTrace> traces;
  // Controller name -> distance to the Gold trace; present only when a
  // FromScores(Gold) controller is in the comparison.
  std::map<std::string, double> distance_to_gold;

  nlohmann::json to_json() const;
};

ComparisonReport compare_controllers(const SimInput& input,
                                     const std::vector<Controller>& controllers,
                                     const SimConfig& config);

void write_trace_csv(const std::vector<SimTrace>& traces, const std::string& path);

}  // namespace padp::sim
