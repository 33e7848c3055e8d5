#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>

namespace bilateral {

/// Weak Kleene truth value. The declaration order True < Undefined < False
/// fixes canonical serialization ("t" < "e" < "f"); it carries no logical
/// meaning.
enum class Truth : std::uint8_t {
  True = 0,
  Undefined = 1,
  False = 2,
};

inline constexpr std::array<Truth, 3> kTruthValues{Truth::True, Truth::Undefined, Truth::False};

char truth_code(Truth v);
Truth truth_from_code(char c);  // throws SerializationError on anything but 't'/'e'/'f'

/// Ordered pair of weak Kleene values: the verification coordinate tracks
/// whether a formula could be verified, the refutation coordinate whether it
/// could be refuted.
struct GeneralizedTruthValue {
  Truth verification = Truth::Undefined;
  Truth refutation = Truth::Undefined;

  auto operator<=>(const GeneralizedTruthValue&) const = default;
};

using Gtv = GeneralizedTruthValue;

constexpr Gtv make_gtv(Truth u, Truth v) { return Gtv{u, v}; }

/// Two-letter code, e.g. ⟨t,f⟩ -> "tf".
std::string gtv_code(const Gtv& g);
Gtv gtv_from_code(std::string_view code);

/// All 9 generalized truth values in canonical (serialization) order.
const std::array<Gtv, 9>& all_gtvs();

// Weak Kleene connective functions. Undefined is contagious: any Undefined
// argument makes the result Undefined; otherwise the classical tables apply.
Truth neg3(Truth x);
Truth and3(Truth x, Truth y);
Truth or3(Truth x, Truth y);

/// Selects between the two published readings of the restricted universal
/// quantifier function. PaperLiteral keeps the three cases exactly as
/// printed (their F-case mentions ⟨t,t⟩ and demands an undefined coordinate,
/// which overlaps the E-case and leaves gaps that fall back to Undefined).
/// Errata replaces ⟨t,t⟩ with ⟨t,f⟩ and requires a fully defined pair,
/// which makes the three cases total and disjoint. Errata is the default.
enum class QuantifierMode {
  Errata,
  PaperLiteral,
};

std::string to_string(QuantifierMode mode);
QuantifierMode quantifier_mode_from_string(std::string_view s);

/// Restricted Kleene existential quantifier function over a set of pairs.
/// Duplicates are irrelevant (all conditions are membership tests). Empty
/// input yields Undefined (the "all pairs undefined" case holds vacuously).
Truth exists_q(std::span<const Gtv> pairs);

/// Restricted Kleene universal quantifier function. See QuantifierMode for
/// the two readings; in PaperLiteral mode cases are tried in printed order
/// (t, e, f) and unmatched inputs yield Undefined.
Truth forall_q(std::span<const Gtv> pairs, QuantifierMode mode = QuantifierMode::Errata);

/// Collapses a pair to a single value: ⟨t,f⟩ -> t, ⟨f,t⟩ -> f, anything
/// else -> e (abstention).
Truth project(const Gtv& g);

}  // namespace bilateral
