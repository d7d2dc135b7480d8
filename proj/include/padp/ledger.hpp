#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <unordered_map>
#include <vector>

#include "json.hpp"

namespace padp::budget {

enum class Mode { Global, PerRecord };

struct PrivacyBudget {
  double capacity = 0.0;
  double spent = 0.0;
  double remaining() const { return capacity - spent; }
};

struct ChargeRecord {
  uint64_t query_id = 0;
  std::vector<std::string> record_ids;
  double eps = 0.0;
  std::vector<std::string> granted;
};

struct ChargeResult {
  std::vector<std::string> granted;
  std::vector<std::string> denied;
};

// Additive privacy-budget accounting. A record is granted a charge only when
// its governing budget can absorb the full amount; denied charges spend
// nothing. In Global mode every record shares one budget entry and a charge
// is granted or denied for the request as a whole, spending eps once.
// Charges must be externally serialized; reads may run concurrently with
// each other but not with a charge.
class BudgetLedger {
 public:
  static BudgetLedger global(const std::vector<std::string>& record_ids, double capacity);
  static BudgetLedger per_record(const std::vector<std::string>& record_ids,
                                 const std::map<std::string, double>& capacities);
  static BudgetLedger per_record_uniform(const std::vector<std::string>& record_ids,
                                         double capacity);

  ChargeResult charge(const std::vector<std::string>& record_ids, double eps);

  double remaining(const std::string& record_id) const;
  double capacity(const std::string& record_id) const;
  double spent(const std::string& record_id) const;

  // Fraction of records whose remaining budget cannot cover eps_next.
  double oobudget_ratio(double eps_next) const;
  size_t oobudget_count(double eps_next) const;

  Mode mode() const { return mode_; }
  size_t size() const { return ids_.size(); }
  const std::vector<std::string>& record_ids() const { return ids_; }
  const std::vector<ChargeRecord>& charge_log() const { return log_; }
  double total_spent() const;

  nlohmann::json to_json() const;

 private:
  BudgetLedger() = default;
  const PrivacyBudget& budget_for(size_t record_index) const;
  size_t index_of(const std::string& record_id) const;

  Mode mode_ = Mode::Global;
  std::vector<std::string> ids_;
  std::unordered_map<std::string, size_t> index_;
  std::vector<PrivacyBudget> budgets_;  // one entry in Global mode
  std::vector<ChargeRecord> log_;
  uint64_t next_query_id_ = 1;
};

// capacity_i = b_min + (b_max - b_min) * (1 - r_i); order-reversing in r.
std::map<std::string, double> assign_personalized(const std::map<std::string, double>& scores,
                                                  double b_min, double b_max);

}  // namespace padp::budget
