#pragma once

#include <map>
#include <memory>
#include <set>
#include <string>
#include <variant>
#include <vector>

namespace bilateral {

/// An atom argument: either a constant of the signature or a variable bound
/// by an enclosing restricted quantifier.
struct Term {
  enum class Kind { Constant, Variable };

  Kind kind = Kind::Constant;
  std::string name;

  bool operator==(const Term&) const = default;

  static Term constant(std::string name) { return Term{Kind::Constant, std::move(name)}; }
  static Term variable(std::string name) { return Term{Kind::Variable, std::move(name)}; }
};

class Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

struct Atom {
  std::string relation;
  std::vector<Term> args;
};

struct Neg {
  FormulaPtr body;
};

struct And {
  FormulaPtr left;
  FormulaPtr right;
};

struct Or {
  FormulaPtr left;
  FormulaPtr right;
};

/// [all x restrictor(x)] matrix(x)
struct ForAll {
  std::string variable;
  FormulaPtr restrictor;
  FormulaPtr matrix;
};

/// [some x restrictor(x)] matrix(x)
struct Exists {
  std::string variable;
  FormulaPtr restrictor;
  FormulaPtr matrix;
};

/// Immutable object-language formula. Children are shared, so substitution
/// and instantiation are cheap structural copies.
class Formula {
 public:
  using Node = std::variant<Atom, Neg, And, Or, ForAll, Exists>;

  explicit Formula(Node node) : node_(std::move(node)) {}

  const Node& node() const { return node_; }

  bool is_atom() const { return std::holds_alternative<Atom>(node_); }

  static FormulaPtr atom(std::string relation, std::vector<Term> args);
  /// Ground atom over constants only.
  static FormulaPtr atom(std::string relation, const std::vector<std::string>& constants);
  static FormulaPtr negation(FormulaPtr body);
  static FormulaPtr conjunction(FormulaPtr left, FormulaPtr right);
  static FormulaPtr disjunction(FormulaPtr left, FormulaPtr right);
  static FormulaPtr forall(std::string variable, FormulaPtr restrictor, FormulaPtr matrix);
  static FormulaPtr exists(std::string variable, FormulaPtr restrictor, FormulaPtr matrix);

 private:
  Node node_;
};

bool operator==(const Formula& a, const Formula& b);
inline bool operator!=(const Formula& a, const Formula& b) { return !(a == b); }

/// Canonical text form; parse_formula(format_formula(f)) == f. Binary
/// connectives are always parenthesized, quantifiers print as
/// "[all x r(x)] m(x)".
std::string format_formula(const Formula& f);

/// Replaces free occurrences of `variable` with the constant `constant`.
/// Inner quantifiers binding the same name shadow it.
FormulaPtr substitute(const FormulaPtr& f, const std::string& variable,
                      const std::string& constant);

/// Variable names occurring free in f, sorted.
std::vector<std::string> free_variables(const Formula& f);

bool is_ground(const Formula& f);

/// Finite signature: the ordered constant domain and the relation arities.
struct Signature {
  std::vector<std::string> constants;
  std::map<std::string, std::size_t> relations;

  bool has_constant(const std::string& name) const;
  std::size_t arity(const std::string& relation) const;  // throws UnknownSymbolError

  /// Enforces arity >= 1. An empty constant domain is permitted; restricted
  /// quantifiers evaluated over it yield Undefined.
  void validate() const;
};

/// Canonical keys of every ground atom `evaluate` can touch for this closed
/// formula: atoms as written, plus all domain instantiations under
/// quantifiers. Sorted, deduplicated.
std::set<std::string> collect_ground_atom_keys(const Formula& f, const Signature& sig);

/// Splits a canonical ground-atom key "rel(c1,c2)" into relation and
/// argument names without needing a signature.
std::pair<std::string, std::vector<std::string>> parse_atom_key(const std::string& key);

}  // namespace bilateral
