#include "bilateral/formula.hpp"

#include <algorithm>

#include "bilateral/errors.hpp"

namespace bilateral {

FormulaPtr Formula::atom(std::string relation, std::vector<Term> args) {
  return std::make_shared<Formula>(Atom{std::move(relation), std::move(args)});
}

FormulaPtr Formula::atom(std::string relation, const std::vector<std::string>& constants) {
  std::vector<Term> args;
  args.reserve(constants.size());
  for (const auto& c : constants) {
    args.push_back(Term::constant(c));
  }
  return atom(std::move(relation), std::move(args));
}

FormulaPtr Formula::negation(FormulaPtr body) {
  return std::make_shared<Formula>(Neg{std::move(body)});
}

FormulaPtr Formula::conjunction(FormulaPtr left, FormulaPtr right) {
  return std::make_shared<Formula>(And{std::move(left), std::move(right)});
}

FormulaPtr Formula::disjunction(FormulaPtr left, FormulaPtr right) {
  return std::make_shared<Formula>(Or{std::move(left), std::move(right)});
}

FormulaPtr Formula::forall(std::string variable, FormulaPtr restrictor, FormulaPtr matrix) {
  return std::make_shared<Formula>(ForAll{std::move(variable), std::move(restrictor), std::move(matrix)});
}

FormulaPtr Formula::exists(std::string variable, FormulaPtr restrictor, FormulaPtr matrix) {
  return std::make_shared<Formula>(Exists{std::move(variable), std::move(restrictor), std::move(matrix)});
}

bool operator==(const Formula& a, const Formula& b) {
  const auto& na = a.node();
  const auto& nb = b.node();
  if (na.index() != nb.index()) {
    return false;
  }
  return std::visit(
      [&nb](const auto& lhs) -> bool {
        using T = std::decay_t<decltype(lhs)>;
        const auto& rhs = std::get<T>(nb);
        if constexpr (std::is_same_v<T, Atom>) {
          return lhs.relation == rhs.relation && lhs.args == rhs.args;
        } else if constexpr (std::is_same_v<T, Neg>) {
          return *lhs.body == *rhs.body;
        } else if constexpr (std::is_same_v<T, And> || std::is_same_v<T, Or>) {
          return *lhs.left == *rhs.left && *lhs.right == *rhs.right;
        } else {
          return lhs.variable == rhs.variable && *lhs.restrictor == *rhs.restrictor &&
                 *lhs.matrix == *rhs.matrix;
        }
      },
      na);
}

namespace {

void format_into(const Formula& f, std::string& out) {
  std::visit(
      [&out](const auto& node) {
        using T = std::decay_t<decltype(node)>;
        if constexpr (std::is_same_v<T, Atom>) {
          out += node.relation;
          out += '(';
          for (std::size_t i = 0; i < node.args.size(); ++i) {
            if (i > 0) {
              out += ',';
            }
            out += node.args[i].name;
          }
          out += ')';
        } else if constexpr (std::is_same_v<T, Neg>) {
          out += '~';
          format_into(*node.body, out);
        } else if constexpr (std::is_same_v<T, And>) {
          out += '(';
          format_into(*node.left, out);
          out += " & ";
          format_into(*node.right, out);
          out += ')';
        } else if constexpr (std::is_same_v<T, Or>) {
          out += '(';
          format_into(*node.left, out);
          out += " | ";
          format_into(*node.right, out);
          out += ')';
        } else if constexpr (std::is_same_v<T, ForAll>) {
          out += "[all ";
          out += node.variable;
          out += ' ';
          format_into(*node.restrictor, out);
          out += "] ";
          format_into(*node.matrix, out);
        } else {
          out += "[some ";
          out += node.variable;
          out += ' ';
          format_into(*node.restrictor, out);
          out += "] ";
          format_into(*node.matrix, out);
        }
      },
      f.node());
}

}  // namespace

std::string format_formula(const Formula& f) {
  std::string out;
  format_into(f, out);
  return out;
}

FormulaPtr substitute(const FormulaPtr& f, const std::string& variable,
                      const std::string& constant) {
  return std::visit(
      [&](const auto& node) -> FormulaPtr {
        using T = std::decay_t<decltype(node)>;
        if constexpr (std::is_same_v<T, Atom>) {
          bool touched = false;
          std::vector<Term> args = node.args;
          for (auto& term : args) {
            if (term.kind == Term::Kind::Variable && term.name == variable) {
              term = Term::constant(constant);
              touched = true;
            }
          }
          return touched ? Formula::atom(node.relation, std::move(args)) : f;
        } else if constexpr (std::is_same_v<T, Neg>) {
          auto body = substitute(node.body, variable, constant);
          return body == node.body ? f : Formula::negation(std::move(body));
        } else if constexpr (std::is_same_v<T, And>) {
          auto left = substitute(node.left, variable, constant);
          auto right = substitute(node.right, variable, constant);
          return (left == node.left && right == node.right)
                     ? f
                     : Formula::conjunction(std::move(left), std::move(right));
        } else if constexpr (std::is_same_v<T, Or>) {
          auto left = substitute(node.left, variable, constant);
          auto right = substitute(node.right, variable, constant);
          return (left == node.left && right == node.right)
                     ? f
                     : Formula::disjunction(std::move(left), std::move(right));
        } else {
          if (node.variable == variable) {
            return f;  // shadowed
          }
          auto restrictor = substitute(node.restrictor, variable, constant);
          auto matrix = substitute(node.matrix, variable, constant);
          if (restrictor == node.restrictor && matrix == node.matrix) {
            return f;
          }
          if constexpr (std::is_same_v<T, ForAll>) {
            return Formula::forall(node.variable, std::move(restrictor), std::move(matrix));
          } else {
            return Formula::exists(node.variable, std::move(restrictor), std::move(matrix));
          }
        }
      },
      f->node());
}

namespace {

void collect_free_variables(const Formula& f, std::vector<std::string>& bound,
                            std::set<std::string>& out) {
  std::visit(
      [&](const auto& node) {
        using T = std::decay_t<decltype(node)>;
        if constexpr (std::is_same_v<T, Atom>) {
          for (const auto& term : node.args) {
            if (term.kind == Term::Kind::Variable &&
                std::find(bound.begin(), bound.end(), term.name) == bound.end()) {
              out.insert(term.name);
            }
          }
        } else if constexpr (std::is_same_v<T, Neg>) {
          collect_free_variables(*node.body, bound, out);
        } else if constexpr (std::is_same_v<T, And> || std::is_same_v<T, Or>) {
          collect_free_variables(*node.left, bound, out);
          collect_free_variables(*node.right, bound, out);
        } else {
          bound.push_back(node.variable);
          collect_free_variables(*node.restrictor, bound, out);
          collect_free_variables(*node.matrix, bound, out);
          bound.pop_back();
        }
      },
      f.node());
}

}  // namespace

std::vector<std::string> free_variables(const Formula& f) {
  std::vector<std::string> bound;
  std::set<std::string> out;
  collect_free_variables(f, bound, out);
  return {out.begin(), out.end()};
}

bool is_ground(const Formula& f) { return free_variables(f).empty(); }

bool Signature::has_constant(const std::string& name) const {
  return std::find(constants.begin(), constants.end(), name) != constants.end();
}

std::size_t Signature::arity(const std::string& relation) const {
  auto it = relations.find(relation);
  if (it == relations.end()) {
    throw UnknownSymbolError("unknown relation symbol: " + relation, 0);
  }
  return it->second;
}

void Signature::validate() const {
  for (const auto& [name, arity] : relations) {
    if (arity == 0) {
      throw ConfigError("relation \"" + name + "\" has arity 0; arities must be >= 1");
    }
  }
}

namespace {

void collect_keys(const FormulaPtr& f, const Signature& sig, std::set<std::string>& out) {
  std::visit(
      [&](const auto& node) {
        using T = std::decay_t<decltype(node)>;
        if constexpr (std::is_same_v<T, Atom>) {
          for (const auto& term : node.args) {
            if (term.kind == Term::Kind::Variable) {
              throw FreeVariableError("formula has a free variable: " + term.name);
            }
          }
          out.insert(format_formula(*f));
        } else if constexpr (std::is_same_v<T, Neg>) {
          collect_keys(node.body, sig, out);
        } else if constexpr (std::is_same_v<T, And> || std::is_same_v<T, Or>) {
          collect_keys(node.left, sig, out);
          collect_keys(node.right, sig, out);
        } else {
          for (const auto& c : sig.constants) {
            collect_keys(substitute(node.restrictor, node.variable, c), sig, out);
            collect_keys(substitute(node.matrix, node.variable, c), sig, out);
          }
        }
      },
      f->node());
}

}  // namespace

std::set<std::string> collect_ground_atom_keys(const Formula& f, const Signature& sig) {
  std::set<std::string> out;
  auto holder = std::make_shared<Formula>(f.node());
  collect_keys(holder, sig, out);
  return out;
}

std::pair<std::string, std::vector<std::string>> parse_atom_key(const std::string& key) {
  auto open = key.find('(');
  if (open == std::string::npos || key.empty() || key.back() != ')') {
    throw SerializationError("not a ground atom key: \"" + key + "\"");
  }
  std::string relation = key.substr(0, open);
  std::vector<std::string> args;
  std::string current;
  for (std::size_t i = open + 1; i + 1 < key.size(); ++i) {
    if (key[i] == ',') {
      args.push_back(current);
      current.clear();
    } else {
      current += key[i];
    }
  }
  args.push_back(current);
  if (relation.empty() || std::any_of(args.begin(), args.end(),
                                      [](const std::string& a) { return a.empty(); })) {
    throw SerializationError("malformed ground atom key: \"" + key + "\"");
  }
  return {std::move(relation), std::move(args)};
}

}  // namespace bilateral
