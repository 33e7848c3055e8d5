#include "bilateral/truth.hpp"

#include <algorithm>

#include "bilateral/errors.hpp"

namespace bilateral {

char truth_code(Truth v) {
  switch (v) {
    case Truth::True:
      return 't';
    case Truth::Undefined:
      return 'e';
    case Truth::False:
      return 'f';
  }
  return 'e';
}

Truth truth_from_code(char c) {
  switch (c) {
    case 't':
      return Truth::True;
    case 'e':
      return Truth::Undefined;
    case 'f':
      return Truth::False;
    default:
      throw SerializationError(std::string("invalid truth value code: '") + c + "'");
  }
}

std::string gtv_code(const Gtv& g) {
  return std::string{truth_code(g.verification), truth_code(g.refutation)};
}

Gtv gtv_from_code(std::string_view code) {
  if (code.size() != 2) {
    throw SerializationError("invalid generalized truth value code: \"" + std::string(code) +
                             "\" (expected two letters from {t,e,f})");
  }
  return Gtv{truth_from_code(code[0]), truth_from_code(code[1])};
}

const std::array<Gtv, 9>& all_gtvs() {
  static const std::array<Gtv, 9> values = [] {
    std::array<Gtv, 9> out{};
    std::size_t i = 0;
    for (Truth u : kTruthValues) {
      for (Truth v : kTruthValues) {
        out[i++] = Gtv{u, v};
      }
    }
    return out;
  }();
  return values;
}

Truth neg3(Truth x) {
  switch (x) {
    case Truth::True:
      return Truth::False;
    case Truth::Undefined:
      return Truth::Undefined;
    case Truth::False:
      return Truth::True;
  }
  return Truth::Undefined;
}

Truth and3(Truth x, Truth y) {
  if (x == Truth::Undefined || y == Truth::Undefined) {
    return Truth::Undefined;
  }
  return (x == Truth::True && y == Truth::True) ? Truth::True : Truth::False;
}

Truth or3(Truth x, Truth y) {
  if (x == Truth::Undefined || y == Truth::Undefined) {
    return Truth::Undefined;
  }
  return (x == Truth::True || y == Truth::True) ? Truth::True : Truth::False;
}

std::string to_string(QuantifierMode mode) {
  return mode == QuantifierMode::Errata ? "errata" : "paper-literal";
}

QuantifierMode quantifier_mode_from_string(std::string_view s) {
  if (s == "errata") {
    return QuantifierMode::Errata;
  }
  if (s == "paper-literal" || s == "literal") {
    return QuantifierMode::PaperLiteral;
  }
  throw SerializationError("unknown quantifier mode: \"" + std::string(s) +
                           "\" (expected \"errata\" or \"paper-literal\")");
}

namespace {

bool contains(std::span<const Gtv> pairs, const Gtv& g) {
  return std::find(pairs.begin(), pairs.end(), g) != pairs.end();
}

bool is_defined(const Gtv& g) {
  return g.verification != Truth::Undefined && g.refutation != Truth::Undefined;
}

bool has_defined_pair(std::span<const Gtv> pairs) {
  return std::any_of(pairs.begin(), pairs.end(), is_defined);
}

bool all_pairs_undefined(std::span<const Gtv> pairs) {
  return std::none_of(pairs.begin(), pairs.end(), is_defined);
}

}  // namespace

Truth exists_q(std::span<const Gtv> pairs) {
  const Gtv true_true{Truth::True, Truth::True};
  if (contains(pairs, true_true)) {
    return Truth::True;
  }
  if (all_pairs_undefined(pairs)) {
    return Truth::Undefined;
  }
  return Truth::False;
}

Truth forall_q(std::span<const Gtv> pairs, QuantifierMode mode) {
  const Gtv true_true{Truth::True, Truth::True};
  const Gtv true_undef{Truth::True, Truth::Undefined};
  const Gtv true_false{Truth::True, Truth::False};

  if (mode == QuantifierMode::Errata) {
    if (all_pairs_undefined(pairs)) {
      return Truth::Undefined;
    }
    // Some pair is fully defined from here on.
    if (!contains(pairs, true_false) && !contains(pairs, true_undef)) {
      return Truth::True;
    }
    return Truth::False;
  }

  // Paper-literal reading, cases tried in printed order.
  if (!contains(pairs, true_false) && !contains(pairs, true_undef) && has_defined_pair(pairs)) {
    return Truth::True;
  }
  if (all_pairs_undefined(pairs)) {
    return Truth::Undefined;
  }
  const bool f_trigger = contains(pairs, true_true) || contains(pairs, true_undef);
  const bool some_undefined_coordinate = !std::all_of(pairs.begin(), pairs.end(), is_defined);
  if (f_trigger && some_undefined_coordinate) {
    return Truth::False;
  }
  // The printed cases are not exhaustive; uncovered inputs read as an
  // absence of information.
  return Truth::Undefined;
}

Truth project(const Gtv& g) {
  if (g == Gtv{Truth::True, Truth::False}) {
    return Truth::True;
  }
  if (g == Gtv{Truth::False, Truth::True}) {
    return Truth::False;
  }
  return Truth::Undefined;
}

}  // namespace bilateral
