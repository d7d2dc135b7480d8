#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "padp/rng.hpp"
#include "padp/sim.hpp"

using namespace padp;
using namespace padp::sim;

namespace {

struct TempPath {
  std::string path;
  explicit TempPath(const std::string& name) : path(name) {}
  ~TempPath() { std::remove(path.c_str()); }
};

// Records with well-spread gold scores and a separable binary label.
SimInput make_input(size_t n, uint64_t seed = 1) {
  SimInput input;
  input.features = Matrix(n, 2);
  Rng rng(seed);
  for (size_t i = 0; i < n; ++i) {
    SimRecord rec;
    rec.id = "r" + std::to_string(i);
    rec.gold_r = double(i) / double(n - 1);
    rec.cext = int(i % 2);
    input.records.push_back(rec);
    input.features(i, 0) = (rec.cext == 0 ? -5.0 : 5.0) + rng.uniform(-0.5, 0.5);
    input.features(i, 1) = (rec.cext == 0 ? 2.0 : -2.0) + rng.uniform(-0.5, 0.5);
  }
  return input;
}

std::map<std::string, double> gold_map(const SimInput& input) {
  std::map<std::string, double> scores;
  for (const auto& rec : input.records) scores[rec.id] = rec.gold_r;
  return scores;
}

SimConfig regression_config(double eps, size_t iterations) {
  SimConfig cfg;
  cfg.eps_per_query = eps;
  cfg.iterations = iterations;
  cfg.task = Task::Regression;
  return cfg;
}

}  // namespace

TEST_CASE("a global budget collapses in a single step") {
  const auto input = make_input(6);
  const auto cfg = regression_config(0.3, 30);
  const auto trace = run_simulation(input, Controller::global(1.0), cfg);

  // Three affordable rounds, then everyone is out at once.
  REQUIRE(trace.rows.size() == 4);
  for (size_t i = 0; i < 3; ++i) {
    CHECK(trace.rows[i].oob_count == 0);
    CHECK(trace.rows[i].available == 6);
    CHECK(trace.rows[i].utility > 0.0);
  }
  const auto& last = trace.rows[3];
  CHECK(last.iteration == 4);
  CHECK(last.oob_count == 6);
  CHECK(last.oob_ratio == 1.0);
  CHECK(last.available == 0);
  CHECK(last.utility == 0.0);

  // Exhaustion is recorded for every record at the collapse iteration.
  for (const auto& rec : input.records) {
    REQUIRE(trace.exhaust_iteration.count(rec.id) == 1);
    CHECK(trace.exhaust_iteration.at(rec.id) == 4);
  }
}

TEST_CASE("uniform per-record budgets reproduce the global trajectory") {
  const auto input = make_input(6);
  const auto cfg = regression_config(0.3, 30);
  const auto global = run_simulation(input, Controller::global(1.0), cfg);
  // A random controller with a degenerate range assigns the same capacity
  // to every record.
  const auto uniform = run_simulation(input, Controller::random(1.0, 1.0, 5), cfg);
  CHECK(global.oob_counts() == uniform.oob_counts());
  CHECK(curve_distance(global, uniform) == 0.0);
}

TEST_CASE("personalized budgets exhaust higher-concern records first") {
  const auto input = make_input(9);
  const auto cfg = regression_config(0.5, 40);
  const auto controller = Controller::from_scores(ScoreSource::Gold, gold_map(input));
  const auto trace = run_simulation(input, controller, cfg);

  // Several distinct capacities mean the OOB curve climbs in stages.
  size_t increases = 0;
  for (size_t i = 1; i < trace.rows.size(); ++i) {
    CHECK(trace.rows[i].oob_count >= trace.rows[i - 1].oob_count);  // monotone
    if (trace.rows[i].oob_count > trace.rows[i - 1].oob_count) ++increases;
  }
  CHECK(increases >= 2);

  // Higher gold score -> smaller capacity -> earlier exhaustion.
  for (const auto& a : input.records) {
    for (const auto& b : input.records) {
      if (a.gold_r > b.gold_r && trace.exhaust_iteration.count(a.id) &&
          trace.exhaust_iteration.count(b.id)) {
        CHECK(trace.exhaust_iteration.at(a.id) <= trace.exhaust_iteration.at(b.id));
      }
    }
  }
}

TEST_CASE("spent budget equals eps times the grants issued") {
  const auto input = make_input(9);
  const auto cfg = regression_config(0.5, 40);
  for (const auto& controller :
       {Controller::global(2.0), Controller::random(1.0, 3.0, 7),
        Controller::from_scores(ScoreSource::Gold, gold_map(input))}) {
    const auto trace = run_simulation(input, controller, cfg);
    size_t grants = 0;
    for (const auto& row : trace.rows) {
      grants += row.available;
      // In Global mode every record reports the shared spent amount, so the
      // identity holds for both accounting granularities.
      CHECK(std::fabs(row.cum_spent - cfg.eps_per_query * double(grants)) <= 1e-9);
    }
  }
}

TEST_CASE("the loop runs to the iteration cap when budget remains") {
  const auto input = make_input(4);
  const auto cfg = regression_config(0.1, 12);
  const auto trace = run_simulation(input, Controller::global(100.0), cfg);
  REQUIRE(trace.rows.size() == 12);
  for (const auto& row : trace.rows) CHECK(row.available == 4);
  CHECK(trace.exhaust_iteration.empty());
}

TEST_CASE("gold-score regression utility is zero and baselines are worse") {
  const auto input = make_input(10);
  const auto cfg = regression_config(0.15, 5);

  const auto gold =
      run_simulation(input, Controller::from_scores(ScoreSource::Gold, gold_map(input)), cfg);
  CHECK(gold.utility_metric == "rmse");
  for (const auto& row : gold.rows) {
    if (row.available > 0) CHECK(row.utility == 0.0);
  }

  // A global controller predicts the cohort mean; spread-out gold scores
  // leave a strictly positive error.
  const auto global = run_simulation(input, Controller::global(3.0), cfg);
  for (const auto& row : global.rows) {
    if (row.available > 0) CHECK(row.utility > 0.05);
  }
}

TEST_CASE("classification utility is high on separable labels") {
  const auto input = make_input(24);
  SimConfig cfg;
  cfg.eps_per_query = 0.15;
  cfg.iterations = 2;
  cfg.task = Task::Classification;
  cfg.folds = 4;
  cfg.seed = 3;
  const auto trace = run_simulation(input, Controller::global(3.0), cfg);
  CHECK(trace.utility_metric == "accuracy");
  for (const auto& row : trace.rows) {
    CHECK(row.available == 24);
    CHECK(row.utility > 0.7);
  }
}

TEST_CASE("classification utility degrades to zero when too few records remain") {
  auto input = make_input(4);
  SimConfig cfg;
  cfg.eps_per_query = 0.15;
  cfg.iterations = 1;
  cfg.task = Task::Classification;
  cfg.folds = 10;  // more folds than granted records
  const auto trace = run_simulation(input, Controller::global(3.0), cfg);
  REQUIRE(!trace.rows.empty());
  CHECK(trace.rows[0].available == 4);
  CHECK(trace.rows[0].utility == 0.0);
}

TEST_CASE("single-class granted sets fall back to majority prediction") {
  auto input = make_input(12);
  for (auto& rec : input.records) rec.cext = 1;
  SimConfig cfg;
  cfg.eps_per_query = 0.15;
  cfg.iterations = 1;
  cfg.task = Task::Classification;
  cfg.folds = 4;
  const auto trace = run_simulation(input, Controller::global(3.0), cfg);
  CHECK(trace.rows[0].utility == 1.0);
}

TEST_CASE("curve distance compares padded out-of-budget sequences") {
  SimTrace a, b;
  a.rows = {{1, 0, 0, 5, 0, 0}, {2, 0, 0, 5, 0, 0}};
  b.rows = {{1, 3, 0, 2, 0, 0}, {2, 4, 0, 1, 0, 0}};
  CHECK(curve_distance(a, a) == 0.0);
  CHECK(curve_distance(a, b) == doctest::Approx(std::sqrt(12.5)).epsilon(1e-12));
  CHECK(curve_distance(b, a) == curve_distance(a, b));

  // Shorter traces are zero-padded: {3} vs {3, 4} -> residuals {0, 4}.
  SimTrace c, d;
  c.rows = {{1, 3, 0, 2, 0, 0}};
  d.rows = {{1, 3, 0, 2, 0, 0}, {2, 4, 0, 1, 0, 0}};
  CHECK(curve_distance(c, d) == doctest::Approx(std::sqrt(8.0)).epsilon(1e-12));

  SimTrace empty;
  CHECK_THROWS_AS(curve_distance(empty, a), std::invalid_argument);
}

TEST_CASE("controller comparisons report distances against the gold run") {
  const auto input = make_input(8);
  const auto cfg = regression_config(0.4, 15);
  const std::vector<Controller> controllers = {
      Controller::global(3.0),
      Controller::from_scores(ScoreSource::Gold, gold_map(input)),
  };
  const auto report = compare_controllers(input, controllers, cfg);
  REQUIRE(report.traces.size() == 2);
  CHECK(report.traces[0].controller == "global");
  CHECK(report.traces[1].controller == "gold");
  REQUIRE(report.distance_to_gold.size() == 2);
  CHECK(report.distance_to_gold.at("gold") == 0.0);
  CHECK(report.distance_to_gold.at("global") == curve_distance(report.traces[0], report.traces[1]));

  // Deterministic: the same comparison yields the same curves and utilities.
  const auto again = compare_controllers(input, controllers, cfg);
  for (size_t t = 0; t < 2; ++t) {
    REQUIRE(report.traces[t].rows.size() == again.traces[t].rows.size());
    for (size_t i = 0; i < report.traces[t].rows.size(); ++i) {
      CHECK(report.traces[t].rows[i].oob_count == again.traces[t].rows[i].oob_count);
      CHECK(report.traces[t].rows[i].utility == again.traces[t].rows[i].utility);
    }
  }

  // Without a gold controller there is no distance table.
  const auto no_gold = compare_controllers(input, {Controller::global(3.0)}, cfg);
  CHECK(no_gold.distance_to_gold.empty());
  CHECK_THROWS_AS(compare_controllers(input, {}, cfg), std::invalid_argument);
}

TEST_CASE("comparison reports serialize controller summaries") {
  const auto input = make_input(8);
  const auto cfg = regression_config(0.4, 15);
  const auto report = compare_controllers(
      input,
      {Controller::global(3.0), Controller::from_scores(ScoreSource::Gold, gold_map(input))},
      cfg);
  const auto j = report.to_json();
  REQUIRE(j["controllers"].is_array());
  REQUIRE(j["controllers"].size() == 2);
  for (const auto& jc : j["controllers"]) {
    CHECK(jc.contains("name"));
    CHECK(jc.contains("utility_metric"));
    CHECK(jc.contains("iterations"));
    CHECK(jc["oob_tail"].is_array());
    CHECK(jc["oob_tail"].size() <= 8);
    CHECK(jc.contains("distance_to_gold"));
    for (const auto& jrow : jc["oob_tail"]) {
      CHECK(jrow.contains("iteration"));
      CHECK(jrow.contains("oobudget_count"));
    }
  }
}

TEST_CASE("missing controller scores are rejected up front") {
  const auto input = make_input(4);
  auto scores = gold_map(input);
  scores.erase("r2");
  const auto cfg = regression_config(0.15, 3);
  CHECK_THROWS_AS(
      run_simulation(input, Controller::from_scores(ScoreSource::Gold, scores), cfg),
      std::invalid_argument);
}

TEST_CASE("simulation validates its configuration") {
  const auto input = make_input(4);
  SimConfig cfg = regression_config(0.15, 3);
  SimConfig bad_eps = cfg;
  bad_eps.eps_per_query = 0.0;
  CHECK_THROWS_AS(run_simulation(input, Controller::global(1.0), bad_eps), std::invalid_argument);
  SimConfig no_iters = cfg;
  no_iters.iterations = 0;
  CHECK_THROWS_AS(run_simulation(input, Controller::global(1.0), no_iters), std::invalid_argument);
  CHECK_THROWS_AS(run_simulation(SimInput{}, Controller::global(1.0), cfg), std::invalid_argument);
  CHECK_THROWS_AS(run_simulation(input, Controller::random(5.0, 1.0, 0), cfg),
                  std::invalid_argument);
}

TEST_CASE("trace csv lists one row per controller iteration") {
  const auto input = make_input(6);
  const auto cfg = regression_config(0.3, 4);
  const auto report = compare_controllers(
      input,
      {Controller::global(1.0), Controller::from_scores(ScoreSource::Gold, gold_map(input))},
      cfg);

  TempPath file("padp_test_trace.csv");
  write_trace_csv(report.traces, file.path);

  std::ifstream in(file.path);
  std::string line;
  REQUIRE(std::getline(in, line));
  CHECK(line ==
        "controller,iteration,oobudget_count,oobudget_ratio,available,utility_metric,"
        "utility_value");

  size_t expected = 0;
  for (const auto& trace : report.traces) expected += trace.rows.size();
  size_t got = 0;
  bool saw_global = false, saw_gold = false;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    ++got;
    if (line.rfind("global,", 0) == 0) saw_global = true;
    if (line.rfind("gold,", 0) == 0) saw_gold = true;
  }
  CHECK(got == expected);
  CHECK(saw_global);
  CHECK(saw_gold);
}
