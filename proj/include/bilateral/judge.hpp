#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "bilateral/backend.hpp"
#include "bilateral/formula.hpp"
#include "bilateral/interpretation.hpp"
#include "bilateral/prompts.hpp"
#include "bilateral/truth.hpp"

namespace bilateral {

struct JudgeConfig {
  std::string base_url;
  std::string model;
  std::string api_key;
  PromptStyle prompt_style = PromptStyle::Direct;
  int samples_per_side = 3;
  double temperature = 0.1;
  int timeout_ms = 60000;
  int max_retries = 2;
  /// Markers are matched case-sensitively (uppercase, as the prompts demand);
  /// the lenient flag enables a case-insensitive fallback.
  bool lenient_markers = false;

  void validate() const;  // ConfigError on samples_per_side < 1, temperature < 0
};

/// Hex digest identifying the judge configuration; stored with every cache
/// entry and recorded in run manifests.
std::string config_fingerprint(const JudgeConfig& cfg);

/// Reads a JSON config file ({"base_url", "model", "api_key" or
/// "api_key_env", "prompt_style", "samples_per_side", "temperature",
/// "timeout_ms", "max_retries", "lenient_markers"}), then applies the
/// BILATERAL_BASE_URL / BILATERAL_MODEL / BILATERAL_API_KEY environment
/// overrides.
JudgeConfig load_judge_config(const std::filesystem::path& file);
void apply_env_overrides(JudgeConfig& cfg);

/// One benchmark question/answer pair; gold_label records whether the answer
/// is correct.
struct QAItem {
  std::string id;
  std::string question;
  std::string answer;
  bool gold_label = false;
  std::string source;
};

/// Cache key for a question/answer subject (no formula to key on):
/// "qa:" + stable hash of the question and answer.
std::string qa_cache_key(const QAItem& item);

/// One model call: the prompt sent, the raw completion, the parsed
/// conclusion, and accounting. `error` is non-empty when the call failed
/// after retries (the sample then counts as Undefined).
struct Transcript {
  std::string prompt_text;
  std::string raw_output;
  Truth parsed_value = Truth::Undefined;
  double latency_seconds = 0.0;
  long token_count = 0;
  bool tokens_estimated = false;
  int sample_index = 0;
  std::string error;
};

std::string transcripts_to_text(const std::vector<Transcript>& transcripts);
/// Inverse of transcripts_to_text; returns an empty list for text that is not
/// a serialized transcript set (e.g. hand-seeded caches).
std::vector<Transcript> transcripts_from_text(const std::string& text);

/// Maps a raw completion to a truth value against a marker pair. The last
/// non-empty line is checked first for an exact (trimmed) marker match,
/// because the prompts demand a final line containing only the marker; when
/// that fails, a whole-text substring search applies with the negative
/// marker taking precedence over the positive. Neither marker present means
/// an absence of information.
Truth parse_conclusion(std::string_view raw, std::string_view positive_marker,
                       std::string_view negative_marker, bool lenient = false);

/// Strict majority of the parsed samples; Undefined when no value reaches
/// one (failed samples count as Undefined votes).
Truth majority_value(const std::vector<Truth>& samples);

struct SideResult {
  Truth value = Truth::Undefined;
  std::vector<Transcript> transcripts;
};

/// Renders the side's prompt for the configured style and collects
/// samples_per_side completions, each parsed against the side's markers.
/// Backend failures after retries degrade the sample to Undefined.
SideResult sample_side(const JudgeConfig& cfg, ChatBackend& backend, Side side,
                       const std::string& question, const std::string& answer);

struct BilateralOutcome {
  Gtv value;
  std::vector<Transcript> verification;
  std::vector<Transcript> refutation;

  double elapsed_seconds() const;  // sum over every sample of both sides
  long total_tokens() const;
};

/// The bilateral factuality evaluation: verification and refutation always
/// both run (concurrently), and their majority values form the pair
/// ⟨u, v⟩. Sampling failures degrade to Undefined coordinates; only
/// configuration errors propagate.
BilateralOutcome zeta(const JudgeConfig& cfg, ChatBackend& backend, const QAItem& item);

/// Per-relation verbalization templates for ground atoms: positional slots
/// {1}..{n} take the argument names and the first character is uppercased,
/// e.g. "{1}s are birds" + bird(penguin) -> "Penguins are birds".
class VerbalizationRegistry {
 public:
  void register_template(std::string relation, std::string text);
  bool has_template(const std::string& relation) const;
  std::string verbalize(const Formula& ground_atom) const;  // MissingTemplateError
  static VerbalizationRegistry load(const std::filesystem::path& file);  // JSON map

 private:
  std::map<std::string, std::string> templates_;
};

/// Canonical subject text for a question/answer pair.
std::string verbalize(const QAItem& item);

/// Bilateral evaluation of a ground atom: the registry's verbalization is
/// judged as the proposed answer to a fixed statement-check question.
BilateralOutcome zeta(const JudgeConfig& cfg, ChatBackend& backend, const Formula& ground_atom,
                      const VerbalizationRegistry& registry);

struct UnilateralOutcome {
  Truth value = Truth::Undefined;
  std::vector<Transcript> transcripts;

  double elapsed_seconds() const;
  long total_tokens() const;
};

/// Baseline single-sided evaluation: one prompt per sample asking for
/// TRUE/FALSE, majority over samples_per_side.
UnilateralOutcome unilateral(const JudgeConfig& cfg, ChatBackend& backend, const QAItem& item);

/// Adapts zeta to the interpretation module's evaluator interface, making a
/// GroundedInterpretation's atom lookups LLM-backed.
class ZetaAtomEvaluator final : public AtomEvaluator {
 public:
  ZetaAtomEvaluator(JudgeConfig cfg, std::shared_ptr<ChatBackend> backend,
                    VerbalizationRegistry registry);
  EvaluatedAtom evaluate_atom(const Formula& atom) override;
  std::string fingerprint() const override;

 private:
  JudgeConfig cfg_;
  std::shared_ptr<ChatBackend> backend_;
  VerbalizationRegistry registry_;
  std::string fingerprint_;
};

}  // namespace bilateral
