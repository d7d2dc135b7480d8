#include "padp/ledger.hpp"

#include <stdexcept>

namespace padp::budget {

namespace {
void check_capacity(double capacity) {
  if (capacity < 0.0) throw std::invalid_argument("BudgetLedger: negative capacity");
}

std::unordered_map<std::string, size_t> build_index(const std::vector<std::string>& ids) {
  std::unordered_map<std::string, size_t> index;
  index.reserve(ids.size());
  for (size_t i = 0; i < ids.size(); ++i) {
    if (!index.emplace(ids[i], i).second) {
      throw std::invalid_argument("BudgetLedger: duplicate record id '" + ids[i] + "'");
    }
  }
  return index;
}
}  // namespace

BudgetLedger BudgetLedger::global(const std::vector<std::string>& record_ids, double capacity) {
  check_capacity(capacity);
  BudgetLedger ledger;
  ledger.mode_ = Mode::Global;
  ledger.ids_ = record_ids;
  ledger.index_ = build_index(record_ids);
  ledger.budgets_.push_back({capacity, 0.0});
  return ledger;
}

BudgetLedger BudgetLedger::per_record(const std::vector<std::string>& record_ids,
                                      const std::map<std::string, double>& capacities) {
  BudgetLedger ledger;
  ledger.mode_ = Mode::PerRecord;
  ledger.ids_ = record_ids;
  ledger.index_ = build_index(record_ids);
  ledger.budgets_.resize(record_ids.size());
  for (size_t i = 0; i < record_ids.size(); ++i) {
    auto it = capacities.find(record_ids[i]);
    if (it == capacities.end()) {
      throw std::invalid_argument("BudgetLedger: missing capacity for record '" + record_ids[i] + "'");
    }
    check_capacity(it->second);
    ledger.budgets_[i] = {it->second, 0.0};
  }
  return ledger;
}

BudgetLedger BudgetLedger::per_record_uniform(const std::vector<std::string>& record_ids,
                                              double capacity) {
  check_capacity(capacity);
  std::map<std::string, double> capacities;
  for (const auto& id : record_ids) capacities[id] = capacity;
  return per_record(record_ids, capacities);
}

size_t BudgetLedger::index_of(const std::string& record_id) const {
  auto it = index_.find(record_id);
  if (it == index_.end()) {
    throw std::invalid_argument("BudgetLedger: unknown record id '" + record_id + "'");
  }
  return it->second;
}

const PrivacyBudget& BudgetLedger::budget_for(size_t record_index) const {
  return mode_ == Mode::Global ? budgets_[0] : budgets_[record_index];
}

ChargeResult BudgetLedger::charge(const std::vector<std::string>& record_ids, double eps) {
  if (!(eps > 0.0)) throw std::invalid_argument("BudgetLedger::charge: eps must be positive");

  std::vector<size_t> indices;
  indices.reserve(record_ids.size());
  for (const auto& id : record_ids) indices.push_back(index_of(id));

  ChargeRecord entry;
  entry.query_id = next_query_id_++;
  entry.record_ids = record_ids;
  entry.eps = eps;

  ChargeResult result;
  if (mode_ == Mode::Global) {
    PrivacyBudget& budget = budgets_[0];
    if (!record_ids.empty() && budget.spent + eps <= budget.capacity) {
      budget.spent += eps;
      result.granted = record_ids;
    } else {
      result.denied = record_ids;
    }
  } else {
    for (size_t i = 0; i < indices.size(); ++i) {
      PrivacyBudget& budget = budgets_[indices[i]];
      if (budget.spent + eps <= budget.capacity) {
        budget.spent += eps;
        result.granted.push_back(record_ids[i]);
      } else {
        result.denied.push_back(record_ids[i]);
      }
    }
  }
  entry.granted = result.granted;
  log_.push_back(std::move(entry));
  return result;
}

double BudgetLedger::remaining(const std::string& record_id) const {
  return budget_for(index_of(record_id)).remaining();
}

double BudgetLedger::capacity(const std::string& record_id) const {
  return budget_for(index_of(record_id)).capacity;
}

double BudgetLedger::spent(const std::string& record_id) const {
  return budget_for(index_of(record_id)).spent;
}

size_t BudgetLedger::oobudget_count(double eps_next) const {
  if (!(eps_next > 0.0)) throw std::invalid_argument("oobudget: eps_next must be positive");
  size_t count = 0;
  for (size_t i = 0; i < ids_.size(); ++i) {
    const PrivacyBudget& budget = budget_for(i);
    if (budget.spent + eps_next > budget.capacity) ++count;
  }
  return count;
}

double BudgetLedger::oobudget_ratio(double eps_next) const {
  if (ids_.empty()) return 0.0;
  return static_cast<double>(oobudget_count(eps_next)) / static_cast<double>(ids_.size());
}

double BudgetLedger::total_spent() const {
  if (mode_ == Mode::Global) return budgets_[0].spent;
  double total = 0.0;
  for (const auto& budget : budgets_) total += budget.spent;
  return total;
}

nlohmann::json BudgetLedger::to_json() const {
  nlohmann::json out;
  out["mode"] = mode_ == Mode::Global ? "global" : "per_record";
  auto records = nlohmann::json::array();
  for (size_t i = 0; i < ids_.size(); ++i) {
    const PrivacyBudget& budget = budget_for(i);
    records.push_back({{"id", ids_[i]}, {"capacity", budget.capacity}, {"spent", budget.spent}});
  }
  out["records"] = records;
  auto charges = nlohmann::json::array();
  for (const auto& entry : log_) {
    charges.push_back({{"query", entry.query_id}, {"eps", entry.eps}, {"granted", entry.granted}});
  }
  out["charges"] = charges;
  return out;
}

std::map<std::string, double> assign_personalized(const std::map<std::string, double>& scores,
                                                  double b_min, double b_max) {
  if (b_min < 0.0 || b_min > b_max) {
    throw std::invalid_argument("assign_personalized: need 0 <= b_min <= b_max");
  }
  std::map<std::string, double> capacities;
  for (const auto& [id, r] : scores) {
    if (r < 0.0 || r > 1.0) {
      throw std::invalid_argument("assign_personalized: score outside [0,1] for '" + id + "'");
    }
    capacities[id] = b_min + (b_max - b_min) * (1.0 - r);
  }
  return capacities;
}

}  // namespace padp::budget
