#include "padp/sim.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "padp/metrics.hpp"
#include "padp/rng.hpp"

namespace padp::sim {

namespace {

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

budget::BudgetLedger make_ledger(const SimInput& input, const Controller& controller) {
  std::vector<std::string> ids;
  ids.reserve(input.records.size());
  for (const auto& rec : input.records) ids.push_back(rec.id);

  switch (controller.kind) {
    case ControllerKind::Global:
      return budget::BudgetLedger::global(ids, controller.capacity);
    case ControllerKind::Random: {
      if (controller.hi < controller.lo) {
        throw std::invalid_argument("run_simulation: random controller needs lo <= hi");
      }
      Rng rng(controller.seed);
      std::map<std::string, double> capacities;
      for (const auto& id : ids) capacities[id] = rng.uniform(controller.lo, controller.hi);
      return budget::BudgetLedger::per_record(ids, capacities);
    }
    case ControllerKind::FromScores: {
      std::map<std::string, double> scores;
      for (const auto& id : ids) {
        auto it = controller.scores.find(id);
        if (it == controller.scores.end()) {
          throw std::invalid_argument("run_simulation: controller '" + controller.name +
                                      "' has no score for record '" + id + "'");
        }
        scores[id] = it->second;
      }
      return budget::BudgetLedger::per_record(
          ids, budget::assign_personalized(scores, controller.b_min, controller.b_max));
    }
  }
  throw std::logic_error("make_ledger: unknown controller kind");
}

// Mean k-fold SVM accuracy over the granted subset. Folds with a single
// training class fall back to predicting that class.
double classification_utility(const SimInput& input, const std::vector<size_t>& granted,
                              const SimConfig& config, uint64_t fold_seed) {
  if (granted.size() < config.folds) return 0.0;
  if (input.features.rows != input.records.size()) {
    throw std::invalid_argument("run_simulation: classification task needs one feature row per record");
  }

  const auto folds = metrics::kfold_split(granted.size(), config.folds, fold_seed);
  double total_acc = 0.0;
  for (const auto& test_fold : folds) {
    std::vector<char> in_test(granted.size(), 0);
    for (size_t local : test_fold) in_test[local] = 1;

    std::vector<size_t> train_rows;
    train_rows.reserve(granted.size() - test_fold.size());
    for (size_t local = 0; local < granted.size(); ++local) {
      if (!in_test[local]) train_rows.push_back(granted[local]);
    }

    std::vector<int> train_labels;
    train_labels.reserve(train_rows.size());
    for (size_t row : train_rows) train_labels.push_back(input.records[row].cext);

    const bool single_class =
        std::all_of(train_labels.begin(), train_labels.end(),
                    [&](int l) { return l == train_labels.front(); });

    std::vector<int> predicted;
    predicted.reserve(test_fold.size());
    std::vector<int> actual;
    actual.reserve(test_fold.size());

    if (single_class) {
      for (size_t local : test_fold) {
        predicted.push_back(train_labels.front());
        actual.push_back(input.records[granted[local]].cext);
      }
    } else {
      Matrix train_x(train_rows.size(), input.features.cols);
      for (size_t i = 0; i < train_rows.size(); ++i) {
        std::copy(input.features.row(train_rows[i]),
                  input.features.row(train_rows[i]) + input.features.cols, train_x.row(i));
      }
      const auto model = models::svm_fit(train_x, train_labels, config.utility_svm);

      std::vector<double> buf(input.features.cols);
      for (size_t local : test_fold) {
        const size_t row = granted[local];
        std::copy(input.features.row(row), input.features.row(row) + input.features.cols,
                  buf.begin());
        predicted.push_back(model.predict_one(buf));
        actual.push_back(input.records[row].cext);
      }
    }
    total_acc += metrics::accuracy(predicted, actual);
  }
  return total_acc / static_cast<double>(config.folds);
}

// RMSE of the controller's notion of each granted record's concern score
// against the gold value. Controllers without per-record scores predict the
// cohort mean.
double regression_utility(const SimInput& input, const std::vector<size_t>& granted,
                          const Controller& controller) {
  if (granted.empty()) return 0.0;
  std::vector<double> predicted, actual;
  predicted.reserve(granted.size());
  actual.reserve(granted.size());

  double mean_gold = 0.0;
  if (controller.kind != ControllerKind::FromScores) {
    for (const auto& rec : input.records) mean_gold += rec.gold_r;
    mean_gold /= static_cast<double>(input.records.size());
  }

  for (size_t row : granted) {
    const auto& rec = input.records[row];
    if (controller.kind == ControllerKind::FromScores) {
      predicted.push_back(controller.scores.at(rec.id));
    } else {
      predicted.push_back(mean_gold);
    }
    actual.push_back(rec.gold_r);
  }
  return metrics::rmse(predicted, actual);
}

}  // namespace

const char* score_source_name(ScoreSource source) {
  switch (source) {
    case ScoreSource::Gold: return "gold";
    case ScoreSource::LR: return "lr";
    case ScoreSource::SVR: return "svr";
    case ScoreSource::MLP: return "mlp";
  }
  throw std::logic_error("score_source_name: unknown source");
}

Controller Controller::global(double capacity) {
  Controller c;
  c.kind = ControllerKind::Global;
  c.name = "global";
  c.capacity = capacity;
  return c;
}

Controller Controller::random(double lo, double hi, uint64_t seed) {
  Controller c;
  c.kind = ControllerKind::Random;
  c.name = "random";
  c.lo = lo;
  c.hi = hi;
  c.seed = seed;
  return c;
}

Controller Controller::from_scores(ScoreSource source, std::map<std::string, double> scores,
                                   double b_min, double b_max) {
  Controller c;
  c.kind = ControllerKind::FromScores;
  c.source = source;
  c.name = score_source_name(source);
  c.scores = std::move(scores);
  c.b_min = b_min;
  c.b_max = b_max;
  return c;
}

std::vector<double> SimTrace::oob_counts() const {
  std::vector<double> counts;
  counts.reserve(rows.size());
  for (const auto& row : rows) counts.push_back(static_cast<double>(row.oob_count));
  return counts;
}

SimTrace run_simulation(const SimInput& input, const Controller& controller,
                        const SimConfig& config) {
  if (input.records.empty()) throw std::invalid_argument("run_simulation: empty dataset");
  if (config.eps_per_query <= 0.0) {
    throw std::invalid_argument("run_simulation: eps_per_query must be positive");
  }
  if (config.iterations == 0) {
    throw std::invalid_argument("run_simulation: iterations must be at least 1");
  }
  if (config.folds < 2) throw std::invalid_argument("run_simulation: folds must be at least 2");

  auto ledger = make_ledger(input, controller);
  const size_t n = input.records.size();
  const double eps = config.eps_per_query;

  SimTrace trace;
  trace.controller = controller.name;
  trace.utility_metric = config.task == Task::Classification ? "accuracy" : "rmse";

  for (size_t iter = 1; iter <= config.iterations; ++iter) {
    // Out-of-budget status is measured before this iteration's charge: a
    // record counts as OOB when it cannot absorb the coming eps.
    std::vector<size_t> valid_rows;
    std::vector<std::string> valid_ids;
    for (size_t i = 0; i < n; ++i) {
      const auto& id = input.records[i].id;
      if (ledger.spent(id) + eps <= ledger.capacity(id)) {
        valid_rows.push_back(i);
        valid_ids.push_back(id);
      } else if (trace.exhaust_iteration.find(id) == trace.exhaust_iteration.end()) {
        trace.exhaust_iteration[id] = iter;
      }
    }

    TraceRow row;
    row.iteration = iter;
    row.oob_count = n - valid_rows.size();
    row.oob_ratio = static_cast<double>(row.oob_count) / static_cast<double>(n);
    row.available = valid_rows.size();

    if (valid_rows.empty()) {
      row.utility = 0.0;
      row.cum_spent = trace.rows.empty() ? 0.0 : trace.rows.back().cum_spent;
      trace.rows.push_back(row);
      break;
    }

    const auto result = ledger.charge(valid_ids, eps);
    if (result.granted.size() != valid_ids.size()) {
      throw std::logic_error("run_simulation: ledger denied a charge the OOB scan admitted");
    }
    for (const auto& rec : input.records) row.cum_spent += ledger.spent(rec.id);

    if (config.task == Task::Classification) {
      row.utility = classification_utility(input, valid_rows, config,
                                           splitmix64(config.seed + iter));
    } else {
      row.utility = regression_utility(input, valid_rows, controller);
    }
    trace.rows.push_back(row);
  }
  return trace;
}

double curve_distance(const SimTrace& a, const SimTrace& b) {
  auto ca = a.oob_counts();
  auto cb = b.oob_counts();
  if (ca.empty() || cb.empty()) throw std::invalid_argument("curve_distance: empty trace");
  const size_t len = std::max(ca.size(), cb.size());
  ca.resize(len, 0.0);
  cb.resize(len, 0.0);
  return metrics::rmse(ca, cb);
}

ComparisonReport compare_controllers(const SimInput& input,
                                     const std::vector<Controller>& controllers,
                                     const SimConfig& config) {
  if (controllers.empty()) throw std::invalid_argument("compare_controllers: no controllers");

  ComparisonReport report;
  report.traces.reserve(controllers.size());
  const SimTrace* gold = nullptr;
  for (const auto& controller : controllers) {
    report.traces.push_back(run_simulation(input, controller, config));
    const auto& trace = report.traces.back();
    if (!gold && controller.kind == ControllerKind::FromScores &&
        controller.source == ScoreSource::Gold) {
      gold = &trace;
    }
  }
  if (gold) {
    for (const auto& trace : report.traces) {
      report.distance_to_gold[trace.controller] = curve_distance(trace, *gold);
    }
  }
  return report;
}

nlohmann::json ComparisonReport::to_json() const {
  nlohmann::json out;
  out["controllers"] = nlohmann::json::array();
  for (const auto& trace : traces) {
    nlohmann::json jt;
    jt["name"] = trace.controller;
    jt["utility_metric"] = trace.utility_metric;
    jt["iterations"] = trace.rows.size();

    // Distance table in the style of the controller-comparison summary:
    // the last eight iterations' OOB counts plus the distance to gold.
    const auto counts = trace.oob_counts();
    const size_t tail = std::min<size_t>(8, counts.size());
    nlohmann::json jtail = nlohmann::json::array();
    for (size_t i = counts.size() - tail; i < counts.size(); ++i) {
      jtail.push_back({{"iteration", trace.rows[i].iteration},
                       {"oobudget_count", trace.rows[i].oob_count}});
    }
    jt["oob_tail"] = jtail;

    auto it = distance_to_gold.find(trace.controller);
    if (it != distance_to_gold.end()) jt["distance_to_gold"] = it->second;
    out["controllers"].push_back(jt);
  }
  return out;
}

void write_trace_csv(const std::vector<SimTrace>& traces, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_trace_csv: cannot open '" + path + "'");
  out << "controller,iteration,oobudget_count,oobudget_ratio,available,utility_metric,"
         "utility_value\n";
  for (const auto& trace : traces) {
    for (const auto& row : trace.rows) {
      out << trace.controller << ',' << row.iteration << ',' << row.oob_count << ','
          << format_double(row.oob_ratio) << ',' << row.available << ',' << trace.utility_metric
          << ',' << format_double(row.utility) << '\n';
    }
  }
  if (!out) throw std::runtime_error("write_trace_csv: write failed for '" + path + "'");
}

}  // namespace padp::sim
