#pragma once

#include <string>
#include <vector>

#include "bilateral/formula.hpp"
#include "bilateral/interpretation.hpp"
#include "bilateral/truth.hpp"

namespace bilateral {

struct EvalOptions {
  QuantifierMode mode = QuantifierMode::Errata;
};

/// Structural evaluation of a closed formula to a generalized truth value:
/// atoms through the interpretation; negation swaps the coordinates;
/// conjunction is ⟨u∧u', v∨v'⟩, disjunction ⟨u∨u', v∧v'⟩; restricted
/// quantifiers collect, per domain constant, the pair of first coordinates
/// (restrictor, matrix) for the verification side and the restrictor's first
/// with the matrix's second for the refutation side, then apply the
/// quantifier functions.
Gtv evaluate(Interpretation& interp, const Formula& f, const EvalOptions& options = {});

/// Per-subformula valuation tree. Quantifier nodes list, per constant, the
/// instantiated restrictor and matrix subtrees.
struct TraceNode {
  std::string formula_text;
  Gtv value;
  std::vector<TraceNode> children;
};

TraceNode evaluate_traced(Interpretation& interp, const Formula& f,
                          const EvalOptions& options = {});

std::string render_trace(const TraceNode& node);

}  // namespace bilateral
