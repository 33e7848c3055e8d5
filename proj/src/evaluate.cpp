#include "bilateral/evaluate.hpp"

#include <sstream>

#include "bilateral/errors.hpp"

namespace bilateral {

namespace {

Gtv evaluate_node(Interpretation& interp, const FormulaPtr& f, const EvalOptions& options) {
  return std::visit(
      [&](const auto& node) -> Gtv {
        using T = std::decay_t<decltype(node)>;
        if constexpr (std::is_same_v<T, Atom>) {
          for (const auto& term : node.args) {
            if (term.kind == Term::Kind::Variable) {
              throw FreeVariableError("cannot evaluate open formula; free variable: " + term.name);
            }
          }
          return interp.atom_value(*f);
        } else if constexpr (std::is_same_v<T, Neg>) {
          const Gtv inner = evaluate_node(interp, node.body, options);
          return Gtv{inner.refutation, inner.verification};
        } else if constexpr (std::is_same_v<T, And>) {
          const Gtv a = evaluate_node(interp, node.left, options);
          const Gtv b = evaluate_node(interp, node.right, options);
          return Gtv{and3(a.verification, b.verification), or3(a.refutation, b.refutation)};
        } else if constexpr (std::is_same_v<T, Or>) {
          const Gtv a = evaluate_node(interp, node.left, options);
          const Gtv b = evaluate_node(interp, node.right, options);
          return Gtv{or3(a.verification, b.verification), and3(a.refutation, b.refutation)};
        } else {
          std::vector<Gtv> verification_pairs;
          std::vector<Gtv> refutation_pairs;
          for (const auto& c : interp.signature().constants) {
            const Gtv restrictor =
                evaluate_node(interp, substitute(node.restrictor, node.variable, c), options);
            const Gtv matrix =
                evaluate_node(interp, substitute(node.matrix, node.variable, c), options);
            verification_pairs.push_back(Gtv{restrictor.verification, matrix.verification});
            refutation_pairs.push_back(Gtv{restrictor.verification, matrix.refutation});
          }
          if constexpr (std::is_same_v<T, ForAll>) {
            return Gtv{forall_q(verification_pairs, options.mode), exists_q(refutation_pairs)};
          } else {
            return Gtv{exists_q(verification_pairs), forall_q(refutation_pairs, options.mode)};
          }
        }
      },
      f->node());
}

TraceNode trace_node(Interpretation& interp, const FormulaPtr& f, const EvalOptions& options) {
  return std::visit(
      [&](const auto& node) -> TraceNode {
        using T = std::decay_t<decltype(node)>;
        TraceNode out;
        out.formula_text = format_formula(*f);
        if constexpr (std::is_same_v<T, Atom>) {
          out.value = evaluate_node(interp, f, options);
        } else if constexpr (std::is_same_v<T, Neg>) {
          out.children.push_back(trace_node(interp, node.body, options));
          const Gtv inner = out.children[0].value;
          out.value = Gtv{inner.refutation, inner.verification};
        } else if constexpr (std::is_same_v<T, And>) {
          out.children.push_back(trace_node(interp, node.left, options));
          out.children.push_back(trace_node(interp, node.right, options));
          const Gtv a = out.children[0].value;
          const Gtv b = out.children[1].value;
          out.value = Gtv{and3(a.verification, b.verification), or3(a.refutation, b.refutation)};
        } else if constexpr (std::is_same_v<T, Or>) {
          out.children.push_back(trace_node(interp, node.left, options));
          out.children.push_back(trace_node(interp, node.right, options));
          const Gtv a = out.children[0].value;
          const Gtv b = out.children[1].value;
          out.value = Gtv{or3(a.verification, b.verification), and3(a.refutation, b.refutation)};
        } else {
          std::vector<Gtv> verification_pairs;
          std::vector<Gtv> refutation_pairs;
          for (const auto& c : interp.signature().constants) {
            auto restrictor = trace_node(interp, substitute(node.restrictor, node.variable, c), options);
            auto matrix = trace_node(interp, substitute(node.matrix, node.variable, c), options);
            verification_pairs.push_back(Gtv{restrictor.value.verification, matrix.value.verification});
            refutation_pairs.push_back(Gtv{restrictor.value.verification, matrix.value.refutation});
            out.children.push_back(std::move(restrictor));
            out.children.push_back(std::move(matrix));
          }
          if constexpr (std::is_same_v<T, ForAll>) {
            out.value = Gtv{forall_q(verification_pairs, options.mode), exists_q(refutation_pairs)};
          } else {
            out.value = Gtv{exists_q(verification_pairs), forall_q(refutation_pairs, options.mode)};
          }
        }
        return out;
      },
      f->node());
}

void render_trace_into(const TraceNode& node, std::ostringstream& out, int depth) {
  for (int i = 0; i < depth; ++i) {
    out << "  ";
  }
  out << node.formula_text << " = " << gtv_code(node.value) << '\n';
  for (const auto& child : node.children) {
    render_trace_into(child, out, depth + 1);
  }
}

}  // namespace

Gtv evaluate(Interpretation& interp, const Formula& f, const EvalOptions& options) {
  auto holder = std::make_shared<Formula>(f.node());
  return evaluate_node(interp, holder, options);
}

TraceNode evaluate_traced(Interpretation& interp, const Formula& f, const EvalOptions& options) {
  auto holder = std::make_shared<Formula>(f.node());
  return trace_node(interp, holder, options);
}

std::string render_trace(const TraceNode& node) {
  std::ostringstream out;
  render_trace_into(node, out, 0);
  return out.str();
}

}  // namespace bilateral
