#pragma once

#include <string_view>

#include "bilateral/formula.hpp"

namespace bilateral {

// Formula text grammar (whitespace-insensitive):
//
//   formula    := or
//   or         := and ( "|" and )*                 left-associative
//   and        := unary ( "&" unary )*             left-associative
//   unary      := "~" unary | quantified | primary
//   quantified := "[" ("all" | "some") IDENT formula "]" unary
//   primary    := "(" formula ")" | atom
//   atom       := IDENT "(" IDENT ( "," IDENT )* ")"
//   IDENT      := [A-Za-z0-9_]+        (canonically lowercase)
//
// Precedence: ~ binds tighter than &, which binds tighter than |. Inside an
// atom, an identifier is the quantifier-bound variable when one of that name
// is in scope, otherwise it must be a constant of the signature. Relation
// symbols and arities are checked against the signature.
FormulaPtr parse_formula(std::string_view text, const Signature& sig);

/// Parse while growing the signature: unknown relations are adopted with the
/// arity of their first use (later mismatches still error) and unknown
/// argument identifiers become constants. Returns the formula and the
/// extended signature. Used by the CLI, where formulas arrive before any
/// table that could declare their symbols.
std::pair<FormulaPtr, Signature> parse_formula_inferring(std::string_view text,
                                                         const Signature& base = {});

}  // namespace bilateral
