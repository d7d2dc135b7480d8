#include "padp/dp.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_set>

#include "padp/kernels.hpp"

namespace padp::dp {

void DatabaseView::validate() const {
  if (ids.size() != values.size()) {
    throw std::invalid_argument("DatabaseView: ids and values differ in length");
  }
  std::unordered_set<std::string> seen;
  for (const auto& id : ids) {
    if (!seen.insert(id).second) {
      throw std::invalid_argument("DatabaseView: duplicate row id '" + id + "'");
    }
  }
}

void NoiseSpec::validate() const {
  if (!(epsilon > 0.0)) throw std::invalid_argument("NoiseSpec: epsilon must be positive");
  if (!(sensitivity > 0.0)) throw std::invalid_argument("NoiseSpec: sensitivity must be positive");
}

int db_distance(const DatabaseView& a, const DatabaseView& b) {
  if (a.size() != b.size()) {
    throw std::invalid_argument("db_distance: views have different lengths");
  }
  int count = 0;
  for (size_t i = 0; i < a.size(); ++i) {
    if (a.ids[i] != b.ids[i] || a.values[i] != b.values[i]) ++count;
  }
  return count;
}

bool is_probability_simplex(const std::vector<double>& v, double tol) {
  if (v.empty()) throw std::invalid_argument("is_probability_simplex: empty vector");
  double sum = 0.0;
  for (double x : v) {
    if (x < -tol) return false;
    sum += x;
  }
  return std::fabs(sum - 1.0) <= tol;
}

double laplace_inverse_cdf(double scale, double u) {
  if (!(scale > 0.0)) throw std::invalid_argument("laplace_inverse_cdf: scale must be positive");
  if (!(u > 0.0 && u < 1.0)) throw std::invalid_argument("laplace_inverse_cdf: u must lie in (0, 1)");
  const double centered = u - 0.5;
  const double sign = centered > 0.0 ? 1.0 : (centered < 0.0 ? -1.0 : 0.0);
  return -scale * sign * std::log(1.0 - 2.0 * std::fabs(centered));
}

double laplace_sample(double scale, Rng& rng) {
  return laplace_inverse_cdf(scale, rng.next_double());
}

double laplace_mechanism(double true_value, const NoiseSpec& spec, Rng& rng) {
  spec.validate();
  return true_value + laplace_sample(spec.sensitivity / spec.epsilon, rng);
}

namespace {

// One-sided check that p1 - delta <= e^eps * p2 within sampling noise.
bool bin_ok(double p1, double p2_raw, double p2_smooth, double eps_factor, double delta,
            double z, size_t n) {
  const double se1 = std::sqrt(std::max(p1 * (1.0 - p1), 0.0) / static_cast<double>(n));
  const double se2 = std::sqrt(std::max(p2_raw * (1.0 - p2_raw), 0.0) / static_cast<double>(n));
  const double slack = z * (se1 + eps_factor * se2);
  return p1 - delta <= eps_factor * p2_smooth + slack;
}

}  // namespace

DpVerdict verify_dp_ratio(const Mechanism& mechanism, const DatabaseView& d1,
                          const DatabaseView& d2, double epsilon, double delta,
                          const VerifyConfig& cfg) {
  d1.validate();
  d2.validate();
  if (db_distance(d1, d2) > 1) {
    throw std::invalid_argument("verify_dp_ratio: views are not adjacent");
  }
  if (cfg.samples < 100000) {
    throw std::invalid_argument("verify_dp_ratio: at least 1e5 samples required");
  }
  if (cfg.bins == 0) throw std::invalid_argument("verify_dp_ratio: bins must be positive");
  if (epsilon < 0.0 || delta < 0.0) {
    throw std::invalid_argument("verify_dp_ratio: epsilon and delta must be nonnegative");
  }

  const auto s1 = kernels::mc_samples(cfg.samples, splitmix64(cfg.seed ^ 0x51ed270b0f1d3c1dULL),
                                      [&](Rng& rng) { return mechanism(d1, rng); });
  const auto s2 = kernels::mc_samples(cfg.samples, splitmix64(cfg.seed ^ 0x2c90aa5e1d6b08f7ULL),
                                      [&](Rng& rng) { return mechanism(d2, rng); });

  double lo = s1[0], hi = s1[0];
  for (double v : s1) { lo = std::min(lo, v); hi = std::max(hi, v); }
  for (double v : s2) { lo = std::min(lo, v); hi = std::max(hi, v); }
  if (hi == lo) hi = lo + 1.0;  // all mass in one point; one shared bin suffices

  const auto h1 = kernels::histogram(s1, lo, hi, cfg.bins);
  const auto h2 = kernels::histogram(s2, lo, hi, cfg.bins);

  DpVerdict verdict;
  verdict.epsilon = epsilon;
  verdict.delta = delta;
  verdict.threshold = std::exp(epsilon);

  const double n = static_cast<double>(cfg.samples);
  const double smooth_n = n + static_cast<double>(cfg.bins);
  const double width = (hi - lo) / static_cast<double>(cfg.bins);
  bool all_ok = true;
  double max_ratio = 0.0;

  for (size_t b = 0; b < cfg.bins; ++b) {
    BinReport report;
    report.lo = lo + width * static_cast<double>(b);
    report.hi = report.lo + width;
    report.count1 = h1[b];
    report.count2 = h2[b];

    const double p1 = static_cast<double>(h1[b]) / n;
    const double p2 = static_cast<double>(h2[b]) / n;
    const double p1_smooth = (static_cast<double>(h1[b]) + 1.0) / smooth_n;
    const double p2_smooth = (static_cast<double>(h2[b]) + 1.0) / smooth_n;

    report.ratio = std::max(p1 - delta, 0.0) / p2_smooth;
    const double se1 = std::sqrt(std::max(p1 * (1.0 - p1), 0.0) / n);
    const double se2 = std::sqrt(std::max(p2 * (1.0 - p2), 0.0) / n);
    report.slack = cfg.z * (se1 + verdict.threshold * se2);
    report.ok = bin_ok(p1, p2, p2_smooth, verdict.threshold, delta, cfg.z, cfg.samples) &&
                bin_ok(p2, p1, p1_smooth, verdict.threshold, delta, cfg.z, cfg.samples);

    all_ok = all_ok && report.ok;
    max_ratio = std::max(max_ratio, report.ratio);
    verdict.bins.push_back(report);
  }

  verdict.max_ratio = max_ratio;
  verdict.pass = all_ok;
  return verdict;
}

nlohmann::json DpVerdict::to_json() const {
  nlohmann::json out;
  out["epsilon"] = epsilon;
  out["delta"] = delta;
  out["max_ratio"] = max_ratio;
  out["threshold"] = threshold;
  out["pass"] = pass;
  auto arr = nlohmann::json::array();
  for (const auto& b : bins) {
    arr.push_back({{"lo", b.lo},
                   {"hi", b.hi},
                   {"count1", b.count1},
                   {"count2", b.count2},
                   {"ratio", b.ratio},
                   {"slack", b.slack},
                   {"ok", b.ok}});
  }
  out["bins"] = arr;
  return out;
}

}  // namespace padp::dp
