#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "json.hpp"
#include "padp/rng.hpp"

namespace padp::dp {

// A snapshot of record rows handed to a randomized query. Two views are
// comparable only when they hold the same number of rows.
struct DatabaseView {
  std::vector<std::string> ids;
  std::vector<double> values;

  size_t size() const { return ids.size(); }
  void validate() const;  // unique ids, ids/values aligned
};

struct NoiseSpec {
  double epsilon = 1.0;      // privacy parameter, > 0
  double sensitivity = 1.0;  // max query change under one-record change, > 0
  uint64_t seed = 0;
  void validate() const;
};

// Number of row positions in which the two views differ.
int db_distance(const DatabaseView& a, const DatabaseView& b);

// True iff all components are >= -tol and the sum is within tol of 1.
bool is_probability_simplex(const std::vector<double>& v, double tol);

// Laplace(0, scale) quantile at u in (0, 1):
//   x = -scale * sgn(u - 1/2) * ln(1 - 2|u - 1/2|)
double laplace_inverse_cdf(double scale, double u);

// One Laplace(0, scale) draw from the caller's stream.
double laplace_sample(double scale, Rng& rng);

// true_value + Laplace(0, sensitivity / epsilon).
double laplace_mechanism(double true_value, const NoiseSpec& spec, Rng& rng);

using Mechanism = std::function<double(const DatabaseView&, Rng&)>;

struct VerifyConfig {
  size_t bins = 50;
  size_t samples = 1000000;  // per database, at least 1e5
  double z = 5.0;            // per-bin sampling slack in standard errors
  uint64_t seed = 0;
};

struct BinReport {
  double lo = 0.0;
  double hi = 0.0;
  uint64_t count1 = 0;
  uint64_t count2 = 0;
  double ratio = 0.0;   // (p1 - delta) / smoothed p2
  double slack = 0.0;   // z * standard error of (p1 - e^eps * p2)
  bool ok = true;
};

struct DpVerdict {
  double epsilon = 0.0;
  double delta = 0.0;
  double max_ratio = 0.0;
  double threshold = 0.0;  // e^epsilon
  bool pass = false;
  std::vector<BinReport> bins;

  nlohmann::json to_json() const;
};

// Empirical check of the privacy ratio bound on a pair of adjacent views.
// Outputs from both views are pooled into shared equal-width bins; a bin
// passes when p1 - delta <= e^eps * p2_smoothed + slack, where p2 is
// smoothed with one pseudo-count per bin and slack absorbs sampling noise
// (cfg.z standard errors). Both directions of the pair are tested;
// max_ratio reports the d1-over-d2 direction.
DpVerdict verify_dp_ratio(const Mechanism& mechanism, const DatabaseView& d1,
                          const DatabaseView& d2, double epsilon, double delta,
                          const VerifyConfig& cfg);

}  // namespace padp::dp
