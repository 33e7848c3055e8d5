#include "bilateral/validity.hpp"

#include <set>

#include "bilateral/errors.hpp"

namespace bilateral {

namespace {

/// Non-owning table view, so the enumeration loop can mutate one map in
/// place instead of rebuilding an interpretation per assignment.
class TableView final : public Interpretation {
 public:
  TableView(const Signature& sig, const std::map<std::string, Gtv>& table)
      : sig_(sig), table_(table) {}

  const Signature& signature() const override { return sig_; }

  Gtv atom_value(const Formula& atom) override {
    auto it = table_.find(format_formula(atom));
    if (it == table_.end()) {
      throw MissingAtomError("no value for atom: " + format_formula(atom));
    }
    return it->second;
  }

 private:
  const Signature& sig_;
  const std::map<std::string, Gtv>& table_;
};

}  // namespace

ValidityResult check_validity(const std::vector<FormulaPtr>& premises, const FormulaPtr& conclusion,
                              const Signature& sig, const SearchBudget& budget,
                              const EvalOptions& options) {
  std::set<std::string> keys;
  for (const auto& premise : premises) {
    auto sub = collect_ground_atom_keys(*premise, sig);
    keys.insert(sub.begin(), sub.end());
  }
  {
    auto sub = collect_ground_atom_keys(*conclusion, sig);
    keys.insert(sub.begin(), sub.end());
  }

  const std::size_t k = keys.size();
  std::uint64_t total = 1;
  for (std::size_t i = 0; i < k; ++i) {
    if (total > budget.max_assignments / 9) {
      throw BudgetExceededError("validity search over " + std::to_string(k) +
                                    " ground atoms exceeds the assignment budget of " +
                                    std::to_string(budget.max_assignments),
                                k);
    }
    total *= 9;
  }

  std::map<std::string, Gtv> assignment;
  std::vector<std::map<std::string, Gtv>::iterator> slots;
  for (const auto& key : keys) {
    slots.push_back(assignment.emplace(key, Gtv{}).first);
  }

  const auto& values = all_gtvs();
  std::vector<std::size_t> digits(k, 0);
  TableView candidate(sig, assignment);

  ValidityResult result;
  result.atom_count = k;

  for (std::uint64_t n = 0; n < total; ++n) {
    for (std::size_t i = 0; i < k; ++i) {
      slots[i]->second = values[digits[i]];
    }
    ++result.assignments_checked;

    bool premises_true = true;
    for (const auto& premise : premises) {
      if (evaluate(candidate, *premise, options).verification != Truth::True) {
        premises_true = false;
        break;
      }
    }
    if (premises_true && evaluate(candidate, *conclusion, options).verification != Truth::True) {
      result.valid = false;
      result.countermodel = assignment;
      return result;
    }

    // Odometer: last atom varies fastest.
    for (std::size_t i = k; i-- > 0;) {
      if (++digits[i] < values.size()) {
        break;
      }
      digits[i] = 0;
    }
  }

  result.valid = true;
  return result;
}

}  // namespace bilateral
