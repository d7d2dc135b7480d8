#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "padp/dp.hpp"
#include "padp/rng.hpp"

using namespace padp;
using namespace padp::dp;

namespace {

DatabaseView make_view(const std::vector<double>& values) {
  DatabaseView v;
  for (size_t i = 0; i < values.size(); ++i) v.ids.push_back("r" + std::to_string(i));
  v.values = values;
  return v;
}

}  // namespace

TEST_CASE("db_distance counts differing row positions") {
  const auto a = make_view({1.0, 2.0, 3.0});
  CHECK(db_distance(a, a) == 0);

  auto b = a;
  b.values[1] = 9.0;
  CHECK(db_distance(a, b) == 1);

  const auto c = make_view({7.0, 8.0, 9.0});
  CHECK(db_distance(a, c) == 3);

  CHECK_THROWS_AS(db_distance(a, make_view({1.0})), std::invalid_argument);
}

TEST_CASE("db_distance satisfies the metric axioms") {
  // Brute force over small integer-valued views of a fixed length.
  std::vector<DatabaseView> views;
  for (int x = 0; x < 3; ++x)
    for (int y = 0; y < 3; ++y) views.push_back(make_view({double(x), double(y)}));

  for (const auto& a : views)
    for (const auto& b : views) {
      const int dab = db_distance(a, b);
      CHECK(dab >= 0);
      CHECK(dab == db_distance(b, a));
      CHECK((dab == 0) == (a.values == b.values));
      for (const auto& c : views) {
        CHECK(db_distance(a, c) <= dab + db_distance(b, c));
      }
    }
}

TEST_CASE("database views validate id alignment and uniqueness") {
  DatabaseView v;
  v.ids = {"a", "a"};
  v.values = {1.0, 2.0};
  CHECK_THROWS_AS(v.validate(), std::invalid_argument);
  v.ids = {"a"};
  CHECK_THROWS_AS(v.validate(), std::invalid_argument);
  v.values = {1.0};
  CHECK_NOTHROW(v.validate());
}

TEST_CASE("probability simplex membership") {
  CHECK(is_probability_simplex({0.5, 0.5}, 1e-9));
  CHECK(is_probability_simplex({1.0}, 1e-9));
  CHECK_FALSE(is_probability_simplex({0.7, 0.4}, 1e-9));
  CHECK_FALSE(is_probability_simplex({-0.1, 1.1}, 1e-9));
  CHECK(is_probability_simplex({0.25, 0.25, 0.25, 0.25}, 0.0));
  CHECK_THROWS_AS(is_probability_simplex({}, 1e-9), std::invalid_argument);
}

TEST_CASE("laplace inverse cdf") {
  CHECK(laplace_inverse_cdf(2.0, 0.5) == 0.0);
  // Quantile symmetry around the median.
  CHECK(laplace_inverse_cdf(1.0, 0.25) == doctest::Approx(-laplace_inverse_cdf(1.0, 0.75)));
  // F(x) = 1 - 0.5 exp(-x/b) for x >= 0; check a round-trip point.
  const double x = laplace_inverse_cdf(3.0, 0.9);
  CHECK(1.0 - 0.5 * std::exp(-x / 3.0) == doctest::Approx(0.9).epsilon(1e-12));

  CHECK_THROWS_AS(laplace_inverse_cdf(0.0, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(laplace_inverse_cdf(-1.0, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(laplace_inverse_cdf(1.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(laplace_inverse_cdf(1.0, 1.0), std::invalid_argument);
}

TEST_CASE("laplace sampling is deterministic and has the right moments") {
  Rng a(42), b(42);
  for (int i = 0; i < 100; ++i) CHECK(laplace_sample(1.5, a) == laplace_sample(1.5, b));

  const size_t n = 1000000;
  const double scale = 2.0;
  Rng rng(7);
  double sum = 0.0, sumsq = 0.0;
  for (size_t i = 0; i < n; ++i) {
    const double x = laplace_sample(scale, rng);
    sum += x;
    sumsq += x * x;
  }
  const double mean = sum / double(n);
  const double var = sumsq / double(n) - mean * mean;
  CHECK(std::fabs(mean) < 0.02);
  // Var = 2 b^2 = 8; allow 5% sampling slack.
  CHECK(var == doctest::Approx(2.0 * scale * scale).epsilon(0.05));
}

TEST_CASE("laplace mechanism centers on the true value") {
  NoiseSpec tight{1e6, 1.0, 0};
  Rng rng(3);
  CHECK(laplace_mechanism(42.0, tight, rng) == doctest::Approx(42.0).epsilon(1e-3));

  NoiseSpec unit{1.0, 1.0, 0};
  Rng rng2(11);
  double sum = 0.0;
  const size_t n = 1000000;
  for (size_t i = 0; i < n; ++i) sum += laplace_mechanism(5.0, unit, rng2);
  CHECK(sum / double(n) == doctest::Approx(5.0).epsilon(0.002));

  Rng c(9), d(9);
  CHECK(laplace_mechanism(1.0, unit, c) == laplace_mechanism(1.0, unit, d));

  CHECK_THROWS_AS(laplace_mechanism(0.0, NoiseSpec{0.0, 1.0, 0}, rng), std::invalid_argument);
  CHECK_THROWS_AS(laplace_mechanism(0.0, NoiseSpec{1.0, -1.0, 0}, rng), std::invalid_argument);
}

namespace {

// Counting query with sensitivity 1: how many values are above 0.5.
double count_above_half(const DatabaseView& v) {
  double count = 0.0;
  for (double x : v.values) count += x > 0.5 ? 1.0 : 0.0;
  return count;
}

Mechanism laplace_counting(double epsilon) {
  return [epsilon](const DatabaseView& v, Rng& rng) {
    return laplace_mechanism(count_above_half(v), NoiseSpec{epsilon, 1.0, 0}, rng);
  };
}

}  // namespace

TEST_CASE("verifier passes a correctly calibrated laplace mechanism") {
  auto d1 = make_view({1.0, 1.0, 1.0, 1.0, 0.0, 0.0, 0.0, 0.0});
  auto d2 = d1;
  d2.values[0] = 0.0;  // adjacent: one row changed

  VerifyConfig cfg;
  cfg.samples = 200000;
  cfg.seed = 99;
  for (double eps : {0.1, 1.0}) {
    const auto verdict = verify_dp_ratio(laplace_counting(eps), d1, d2, eps, 0.0, cfg);
    CHECK(verdict.pass);
    CHECK(verdict.threshold == doctest::Approx(std::exp(eps)));
    CHECK(verdict.bins.size() == cfg.bins);
  }
}

TEST_CASE("verifier rejects a noiseless mechanism") {
  auto d1 = make_view({1.0, 1.0, 1.0, 0.0});
  auto d2 = d1;
  d2.values[0] = 0.0;

  Mechanism noiseless = [](const DatabaseView& v, Rng&) { return count_above_half(v); };
  VerifyConfig cfg;
  cfg.samples = 100000;
  const auto verdict = verify_dp_ratio(noiseless, d1, d2, 1.0, 0.0, cfg);
  CHECK_FALSE(verdict.pass);
}

TEST_CASE("verifier is trivially satisfied on identical views") {
  const auto d = make_view({1.0, 0.0, 1.0});
  VerifyConfig cfg;
  cfg.samples = 100000;
  const auto verdict = verify_dp_ratio(laplace_counting(0.5), d, d, 0.0, 0.0, cfg);
  CHECK(verdict.pass);
}

TEST_CASE("verifier validates its inputs") {
  auto d1 = make_view({1.0, 1.0, 0.0});
  auto far = make_view({0.0, 0.0, 1.0});  // distance 3
  VerifyConfig cfg;
  cfg.samples = 100000;
  CHECK_THROWS_AS(verify_dp_ratio(laplace_counting(1.0), d1, far, 1.0, 0.0, cfg),
                  std::invalid_argument);

  auto d2 = d1;
  d2.values[0] = 0.0;
  VerifyConfig small = cfg;
  small.samples = 99999;
  CHECK_THROWS_AS(verify_dp_ratio(laplace_counting(1.0), d1, d2, 1.0, 0.0, small),
                  std::invalid_argument);
  VerifyConfig nobins = cfg;
  nobins.bins = 0;
  CHECK_THROWS_AS(verify_dp_ratio(laplace_counting(1.0), d1, d2, 1.0, 0.0, nobins),
                  std::invalid_argument);
  CHECK_THROWS_AS(verify_dp_ratio(laplace_counting(1.0), d1, d2, -1.0, 0.0, cfg),
                  std::invalid_argument);
}

TEST_CASE("verdict serialization carries the decision fields") {
  auto d1 = make_view({1.0, 1.0});
  auto d2 = d1;
  d2.values[1] = 0.0;
  VerifyConfig cfg;
  cfg.samples = 100000;
  cfg.bins = 10;
  const auto verdict = verify_dp_ratio(laplace_counting(1.0), d1, d2, 1.0, 0.0, cfg);
  const auto j = verdict.to_json();
  CHECK(j.contains("epsilon"));
  CHECK(j.contains("delta"));
  CHECK(j.contains("max_ratio"));
  CHECK(j.contains("threshold"));
  CHECK(j.contains("pass"));
  CHECK(j["bins"].is_array());
  CHECK(j["bins"].size() == 10);
  CHECK(j["epsilon"].get<double>() == 1.0);
  CHECK(j["pass"].get<bool>() == verdict.pass);
}
