#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "bilateral/evaluate.hpp"
#include "bilateral/formula.hpp"
#include "bilateral/truth.hpp"

namespace bilateral {

struct SearchBudget {
  /// Reject inferences whose ground-atom count k gives 9^k assignments above
  /// this bound (default 10^7, i.e. k <= 7).
  std::uint64_t max_assignments = 10'000'000;
};

struct ValidityResult {
  bool valid = false;
  /// First countermodel found in canonical enumeration order (atom keys
  /// sorted, values cycling t,e,f per coordinate, last atom fastest). Empty
  /// when valid.
  std::map<std::string, Gtv> countermodel;
  std::size_t atom_count = 0;
  std::uint64_t assignments_checked = 0;
};

/// Truth-preservation validity by finite brute force: enumerates every
/// assignment of generalized truth values to the ground atoms reachable from
/// the premises and conclusion over sig's domain. VALID iff every assignment
/// making the first coordinate of all premises true also makes the
/// conclusion's first coordinate true.
ValidityResult check_validity(const std::vector<FormulaPtr>& premises, const FormulaPtr& conclusion,
                              const Signature& sig, const SearchBudget& budget = {},
                              const EvalOptions& options = {});

}  // namespace bilateral
