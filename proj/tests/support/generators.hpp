#pragma once

// Test-only pseudo-random generators for formulas and interpretations over
// small signatures. Deterministic for a given seed.

#include <map>
#include <random>
#include <string>
#include <vector>

#include "bilateral/formula.hpp"
#include "bilateral/truth.hpp"

namespace testgen {

inline bilateral::Signature small_signature(std::size_t num_constants = 3) {
  bilateral::Signature sig;
  const std::vector<std::string> names{"a", "b", "c"};
  for (std::size_t i = 0; i < num_constants && i < names.size(); ++i) {
    sig.constants.push_back(names[i]);
  }
  sig.relations = {{"p", 1}, {"q", 1}};
  return sig;
}

inline bilateral::Gtv random_gtv(std::mt19937_64& rng) {
  return bilateral::all_gtvs()[rng() % 9];
}

inline bilateral::FormulaPtr random_formula(std::mt19937_64& rng, const bilateral::Signature& sig,
                                            int depth, std::vector<std::string>& scope) {
  using bilateral::Formula;
  using bilateral::Term;

  auto random_atom = [&]() {
    std::vector<std::string> relations;
    for (const auto& [name, arity] : sig.relations) {
      relations.push_back(name);
    }
    const std::string& relation = relations[rng() % relations.size()];
    const std::size_t arity = sig.relations.at(relation);
    std::vector<Term> args;
    for (std::size_t i = 0; i < arity; ++i) {
      if (!scope.empty() && rng() % 2 == 0) {
        args.push_back(Term::variable(scope[rng() % scope.size()]));
      } else {
        args.push_back(Term::constant(sig.constants[rng() % sig.constants.size()]));
      }
    }
    return Formula::atom(relation, std::move(args));
  };

  if (depth <= 0) {
    return random_atom();
  }
  switch (rng() % 6) {
    case 0:
      return random_atom();
    case 1:
      return Formula::negation(random_formula(rng, sig, depth - 1, scope));
    case 2:
      return Formula::conjunction(random_formula(rng, sig, depth - 1, scope),
                                  random_formula(rng, sig, depth - 1, scope));
    case 3:
      return Formula::disjunction(random_formula(rng, sig, depth - 1, scope),
                                  random_formula(rng, sig, depth - 1, scope));
    default: {
      const std::string var = "x" + std::to_string(scope.size());
      scope.push_back(var);
      auto restrictor = random_formula(rng, sig, depth - 1, scope);
      auto matrix = random_formula(rng, sig, depth - 1, scope);
      scope.pop_back();
      if (rng() % 2 == 0) {
        return Formula::forall(var, std::move(restrictor), std::move(matrix));
      }
      return Formula::exists(var, std::move(restrictor), std::move(matrix));
    }
  }
}

inline bilateral::FormulaPtr random_closed_formula(std::mt19937_64& rng,
                                                   const bilateral::Signature& sig, int depth) {
  std::vector<std::string> scope;
  return random_formula(rng, sig, depth, scope);
}

/// A total table over every ground atom of the signature.
inline std::map<std::string, bilateral::Gtv> random_table(std::mt19937_64& rng,
                                                          const bilateral::Signature& sig) {
  std::map<std::string, bilateral::Gtv> table;
  const std::size_t n = sig.constants.size();
  for (const auto& [relation, arity] : sig.relations) {
    std::size_t tuples = 1;
    for (std::size_t i = 0; i < arity; ++i) {
      tuples *= n;
    }
    for (std::size_t t = 0; t < tuples; ++t) {
      std::vector<std::string> args;
      std::size_t rest = t;
      for (std::size_t i = 0; i < arity; ++i) {
        args.push_back(sig.constants[rest % n]);
        rest /= n;
      }
      table.emplace(bilateral::format_formula(*bilateral::Formula::atom(relation, args)),
                    random_gtv(rng));
    }
  }
  return table;
}

}  // namespace testgen
