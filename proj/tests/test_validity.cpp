#include <doctest.h>

#include "bilateral/errors.hpp"
#include "bilateral/parser.hpp"
#include "bilateral/validity.hpp"

using namespace bilateral;

namespace {

Signature pq_signature() {
  Signature sig;
  sig.constants = {"a"};
  sig.relations = {{"p", 1}, {"q", 1}};
  return sig;
}

/// Replays a countermodel to confirm it actually breaks the inference.
bool countermodel_verifies(const ValidityResult& result, const std::vector<FormulaPtr>& premises,
                           const FormulaPtr& conclusion, const Signature& sig) {
  StandardInterpretation interp(sig, result.countermodel);
  for (const auto& premise : premises) {
    if (evaluate(interp, *premise).verification != Truth::True) {
      return false;
    }
  }
  return evaluate(interp, *conclusion).verification != Truth::True;
}

}  // namespace

TEST_CASE("identity inference is valid") {
  const Signature sig = pq_signature();
  auto p = parse_formula("p(a)", sig);
  auto result = check_validity({p}, p, sig);
  CHECK(result.valid);
  CHECK(result.atom_count == 1);
}

TEST_CASE("conjunction elimination is valid") {
  const Signature sig = pq_signature();
  auto both = parse_formula("p(a) & q(a)", sig);
  auto p = parse_formula("p(a)", sig);
  auto result = check_validity({both}, p, sig);
  CHECK(result.valid);
  CHECK(result.atom_count == 2);
  CHECK(result.assignments_checked == 81);
}

TEST_CASE("no explosion: a contradiction does not entail an unrelated atom") {
  const Signature sig = pq_signature();
  auto p = parse_formula("p(a)", sig);
  auto not_p = parse_formula("~p(a)", sig);
  auto q = parse_formula("q(a)", sig);

  auto result = check_validity({p, not_p}, q, sig);
  REQUIRE_FALSE(result.valid);
  REQUIRE(result.countermodel.size() == 2);
  // Both premises force p(a) to be verified and refuted at once.
  CHECK(result.countermodel.at("p(a)") == gtv_from_code("tt"));
  CHECK(result.countermodel.at("q(a)").verification != Truth::True);
  CHECK(countermodel_verifies(result, {p, not_p}, q, sig));
}

TEST_CASE("excluded middle is not valid") {
  const Signature sig = pq_signature();
  auto lem = parse_formula("p(a) | ~p(a)", sig);
  auto result = check_validity({}, lem, sig);
  REQUIRE_FALSE(result.valid);
  CHECK(countermodel_verifies(result, {}, lem, sig));
  // The witness leaves the disjunction unverified: or3(u, v) != t.
  const Gtv witness = result.countermodel.at("p(a)");
  CHECK(or3(witness.verification, witness.refutation) != Truth::True);
}

TEST_CASE("quantified inferences ground over the domain") {
  Signature sig;
  sig.constants = {"a", "b"};
  sig.relations = {{"p", 1}, {"q", 1}};
  auto all = parse_formula("[all x p(x)] q(x)", sig);
  auto result = check_validity({}, all, sig);
  CHECK_FALSE(result.valid);
  CHECK(result.atom_count == 4);
}

TEST_CASE("budget rejects oversized searches, reporting the atom count") {
  Signature sig;
  sig.constants = {"a", "b", "c", "d"};
  sig.relations = {{"p", 1}, {"q", 1}};
  auto all = parse_formula("[all x p(x)] q(x)", sig);  // 8 ground atoms
  try {
    check_validity({}, all, sig);
    FAIL("expected budget rejection");
  } catch (const BudgetExceededError& e) {
    CHECK(e.atom_count() == 8);
  }
  // A raised budget admits the same search.
  SearchBudget budget;
  budget.max_assignments = 9ULL * 9 * 9 * 9 * 9 * 9 * 9 * 9;
  CHECK_NOTHROW(check_validity({}, all, sig, budget));
}
