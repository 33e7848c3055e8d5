#include <doctest.h>

#include <random>

#include "bilateral/errors.hpp"
#include "bilateral/evaluate.hpp"
#include "bilateral/parser.hpp"
#include "support/generators.hpp"

using namespace bilateral;

namespace {

Gtv g(const char* code) { return gtv_from_code(code); }

StandardInterpretation penguin_interpretation() {
  Signature sig;
  sig.constants = {"penguin"};
  sig.relations = {{"bird", 1}, {"flies", 1}};
  return StandardInterpretation(sig, {{"bird(penguin)", g("tf")}, {"flies(penguin)", g("ft")}});
}

}  // namespace

TEST_CASE("the flightless-bird model: universal fails, negation holds") {
  auto interp = penguin_interpretation();
  const Signature& sig = interp.signature();

  auto all_birds_fly = parse_formula("[all x bird(x)] flies(x)", sig);
  auto penguin_does_not_fly = parse_formula("~flies(penguin)", sig);

  SUBCASE("errata mode reproduces the worked values") {
    EvalOptions opts{QuantifierMode::Errata};
    CHECK(evaluate(interp, *all_birds_fly, opts) == g("ft"));
    CHECK(evaluate(interp, *penguin_does_not_fly, opts) == g("tf"));
  }

  SUBCASE("paper-literal mode reaches the fallback on the universal") {
    EvalOptions opts{QuantifierMode::PaperLiteral};
    CHECK(evaluate(interp, *all_birds_fly, opts) == g("et"));
    CHECK(evaluate(interp, *penguin_does_not_fly, opts) == g("tf"));
  }
}

TEST_CASE("negation swaps coordinates") {
  Signature sig;
  sig.constants = {"a"};
  sig.relations = {{"p", 1}};
  for (const Gtv& value : all_gtvs()) {
    StandardInterpretation interp(sig, {{"p(a)", value}});
    auto f = parse_formula("~p(a)", sig);
    CHECK(evaluate(interp, *f) == Gtv{value.refutation, value.verification});
  }
}

TEST_CASE("conjunction is idempotent on defined values") {
  Signature sig;
  sig.constants = {"a"};
  sig.relations = {{"p", 1}};
  StandardInterpretation interp(sig, {{"p(a)", g("tf")}});
  auto f = parse_formula("p(a) & p(a)", sig);
  CHECK(evaluate(interp, *f) == g("tf"));
}

TEST_CASE("double negation is the identity at the pair level") {
  const Signature sig = testgen::small_signature();
  std::mt19937_64 rng(7);
  for (int i = 0; i < 200; ++i) {
    auto f = testgen::random_closed_formula(rng, sig, 3);
    StandardInterpretation interp(sig, testgen::random_table(rng, sig));
    auto doubled = Formula::negation(Formula::negation(f));
    for (QuantifierMode mode : {QuantifierMode::Errata, QuantifierMode::PaperLiteral}) {
      EvalOptions opts{mode};
      CHECK(evaluate(interp, *doubled, opts) == evaluate(interp, *f, opts));
    }
  }
}

TEST_CASE("De Morgan holds exactly, exhaustively over two atoms") {
  Signature sig;
  sig.constants = {"a"};
  sig.relations = {{"p", 1}, {"q", 1}};
  auto p = Formula::atom("p", {"a"});
  auto q = Formula::atom("q", {"a"});
  auto lhs = Formula::negation(Formula::conjunction(p, q));
  auto rhs = Formula::disjunction(Formula::negation(p), Formula::negation(q));
  for (const Gtv& pv : all_gtvs()) {
    for (const Gtv& qv : all_gtvs()) {
      StandardInterpretation interp(sig, {{"p(a)", pv}, {"q(a)", qv}});
      CHECK(evaluate(interp, *lhs) == evaluate(interp, *rhs));
    }
  }
}

TEST_CASE("quantifiers over a singleton domain agree with the pair functions") {
  Signature sig;
  sig.constants = {"a"};
  sig.relations = {{"p", 1}, {"q", 1}};
  auto universal = parse_formula("[all x p(x)] q(x)", sig);
  auto existential = parse_formula("[some x p(x)] q(x)", sig);
  for (const Gtv& pv : all_gtvs()) {
    for (const Gtv& qv : all_gtvs()) {
      StandardInterpretation interp(sig, {{"p(a)", pv}, {"q(a)", qv}});
      const std::vector<Gtv> verification{Gtv{pv.verification, qv.verification}};
      const std::vector<Gtv> refutation{Gtv{pv.verification, qv.refutation}};
      for (QuantifierMode mode : {QuantifierMode::Errata, QuantifierMode::PaperLiteral}) {
        EvalOptions opts{mode};
        CHECK(evaluate(interp, *universal, opts) ==
              Gtv{forall_q(verification, mode), exists_q(refutation)});
        CHECK(evaluate(interp, *existential, opts) ==
              Gtv{exists_q(verification), forall_q(refutation, mode)});
      }
    }
  }
}

TEST_CASE("empty domain makes quantifiers undefined") {
  Signature sig;
  sig.relations = {{"p", 1}, {"q", 1}};
  StandardInterpretation interp(sig, {});
  Signature parse_sig = sig;
  parse_sig.constants = {"a"};  // only to let the text parse; evaluation uses interp's domain
  auto f = Formula::forall("x", Formula::atom("p", {Term::variable("x")}),
                           Formula::atom("q", {Term::variable("x")}));
  CHECK(evaluate(interp, *f) == g("ee"));
}

TEST_CASE("unknown atoms and free variables are reported") {
  Signature sig;
  sig.constants = {"a"};
  sig.relations = {{"p", 1}};
  StandardInterpretation interp(sig, {});
  auto atom = Formula::atom("p", {"a"});
  CHECK_THROWS_AS(evaluate(interp, *atom), MissingAtomError);
  auto open = Formula::atom("p", {Term::variable("x")});
  CHECK_THROWS_AS(evaluate(interp, *open), FreeVariableError);
}

TEST_CASE("trace records every subformula valuation") {
  auto interp = penguin_interpretation();
  auto f = parse_formula("~flies(penguin)", interp.signature());
  auto trace = evaluate_traced(interp, *f);
  CHECK(trace.formula_text == "~flies(penguin)");
  CHECK(trace.value == g("tf"));
  REQUIRE(trace.children.size() == 1);
  CHECK(trace.children[0].formula_text == "flies(penguin)");
  CHECK(trace.children[0].value == g("ft"));
  CHECK(render_trace(trace) == "~flies(penguin) = tf\n  flies(penguin) = ft\n");
}
