#pragma once

#include <string>
#include <string_view>

namespace bilateral {

enum class PromptStyle { Direct, ZeroShot, FewShot };
enum class Side { Verification, Refutation };

std::string to_string(PromptStyle style);
PromptStyle prompt_style_from_string(std::string_view s);
std::string to_string(Side side);

/// Canonical prompt templates, embedded verbatim; the files under
/// assets/prompts/ hold the same bytes and are the golden copies the tests
/// compare against. Each bilateral/unilateral template contains exactly one
/// {question} and one {answer} slot.
const std::string& prompt_template(PromptStyle style, Side side);
const std::string& unilateral_template(PromptStyle style);
const std::string& negative_generation_template();

/// Conclusion markers a side's responses are parsed against
/// (positive first): verification VERIFIED / CANNOT VERIFY, refutation
/// REFUTED / CANNOT REFUTE.
std::pair<std::string_view, std::string_view> side_markers(Side side);
std::pair<std::string_view, std::string_view> unilateral_markers();

/// Substitutes the {question} and {answer} slots in a single pass; no other
/// transformation is applied, so the rendered text is byte-identical to the
/// template outside the two substitutions.
std::string render_prompt(std::string_view tmpl, std::string_view question,
                          std::string_view answer);

}  // namespace bilateral
