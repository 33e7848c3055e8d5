#include "bilateral/judge.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <future>
#include <sstream>

#include <nlohmann/json.hpp>

#include "bilateral/errors.hpp"
#include "bilateral/util.hpp"

namespace bilateral {

using json = nlohmann::json;

void JudgeConfig::validate() const {
  if (samples_per_side < 1) {
    throw ConfigError("samples_per_side must be >= 1");
  }
  if (temperature < 0.0) {
    throw ConfigError("temperature must be >= 0");
  }
}

std::string config_fingerprint(const JudgeConfig& cfg) {
  std::ostringstream canon;
  canon << cfg.base_url << '|' << cfg.model << '|' << to_string(cfg.prompt_style) << '|'
        << cfg.samples_per_side << '|' << cfg.temperature << '|' << cfg.timeout_ms << '|'
        << cfg.max_retries << '|' << (cfg.lenient_markers ? 1 : 0);
  return fnv1a_hex(canon.str());
}

JudgeConfig load_judge_config(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) {
    throw ConfigError("cannot open judge config: " + file.string());
  }
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    throw ConfigError("invalid judge config " + file.string() + ": " + e.what());
  }
  JudgeConfig cfg;
  cfg.base_url = doc.value("base_url", "");
  cfg.model = doc.value("model", "");
  cfg.api_key = doc.value("api_key", "");
  if (cfg.api_key.empty() && doc.contains("api_key_env")) {
    if (const char* key = std::getenv(doc["api_key_env"].get<std::string>().c_str())) {
      cfg.api_key = key;
    }
  }
  if (doc.contains("prompt_style")) {
    cfg.prompt_style = prompt_style_from_string(doc["prompt_style"].get<std::string>());
  }
  cfg.samples_per_side = doc.value("samples_per_side", 3);
  cfg.temperature = doc.value("temperature", 0.1);
  cfg.timeout_ms = doc.value("timeout_ms", 60000);
  cfg.max_retries = doc.value("max_retries", 2);
  cfg.lenient_markers = doc.value("lenient_markers", false);
  apply_env_overrides(cfg);
  cfg.validate();
  return cfg;
}

void apply_env_overrides(JudgeConfig& cfg) {
  if (const char* url = std::getenv("BILATERAL_BASE_URL")) {
    cfg.base_url = url;
  }
  if (const char* model = std::getenv("BILATERAL_MODEL")) {
    cfg.model = model;
  }
  if (const char* key = std::getenv("BILATERAL_API_KEY")) {
    cfg.api_key = key;
  }
}

std::string qa_cache_key(const QAItem& item) {
  return "qa:" + fnv1a_hex(item.question + '\x1f' + item.answer);
}

std::string transcripts_to_text(const std::vector<Transcript>& transcripts) {
  json arr = json::array();
  for (const auto& t : transcripts) {
    arr.push_back(json{{"prompt", t.prompt_text},
                       {"raw", t.raw_output},
                       {"parsed", std::string(1, truth_code(t.parsed_value))},
                       {"latency", t.latency_seconds},
                       {"tokens", t.token_count},
                       {"tokens_estimated", t.tokens_estimated},
                       {"sample", t.sample_index},
                       {"error", t.error}});
  }
  return arr.dump();
}

std::vector<Transcript> transcripts_from_text(const std::string& text) {
  json arr = json::parse(text, nullptr, false);
  if (arr.is_discarded() || !arr.is_array()) {
    return {};
  }
  std::vector<Transcript> out;
  for (const auto& j : arr) {
    if (!j.is_object()) {
      return {};
    }
    Transcript t;
    t.prompt_text = j.value("prompt", "");
    t.raw_output = j.value("raw", "");
    const std::string parsed = j.value("parsed", "e");
    t.parsed_value = parsed.empty() ? Truth::Undefined : truth_from_code(parsed[0]);
    t.latency_seconds = j.value("latency", 0.0);
    t.token_count = j.value("tokens", 0L);
    t.tokens_estimated = j.value("tokens_estimated", false);
    t.sample_index = j.value("sample", 0);
    t.error = j.value("error", "");
    out.push_back(std::move(t));
  }
  return out;
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())) != 0) {
    s.remove_prefix(1);
  }
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())) != 0) {
    s.remove_suffix(1);
  }
  return s;
}

std::string upper(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
  return out;
}

std::string_view last_nonempty_line(std::string_view raw) {
  std::size_t end = raw.size();
  while (true) {
    while (end > 0 && (raw[end - 1] == '\n' || raw[end - 1] == '\r')) {
      --end;
    }
    std::size_t start = raw.rfind('\n', end == 0 ? 0 : end - 1);
    start = (start == std::string_view::npos) ? 0 : start + 1;
    std::string_view line = trim(raw.substr(start, end - start));
    if (!line.empty() || start == 0) {
      return line;
    }
    end = start;
  }
}

}  // namespace

Truth parse_conclusion(std::string_view raw, std::string_view positive_marker,
                       std::string_view negative_marker, bool lenient) {
  std::string haystack(raw);
  std::string positive(positive_marker);
  std::string negative(negative_marker);
  std::string final_line(last_nonempty_line(raw));
  if (lenient) {
    haystack = upper(haystack);
    positive = upper(positive);
    negative = upper(negative);
    final_line = upper(final_line);
  }

  // The prompts demand a final line containing only the marker, so an exact
  // final-line match dominates.
  if (final_line == negative) {
    return Truth::False;
  }
  if (final_line == positive) {
    return Truth::True;
  }
  // Fallback substring scan; the negative marker wins so that e.g.
  // "CANNOT VERIFY" coexisting with "VERIFIED" elsewhere never reads as
  // verified.
  if (haystack.find(negative) != std::string::npos) {
    return Truth::False;
  }
  if (haystack.find(positive) != std::string::npos) {
    return Truth::True;
  }
  return Truth::Undefined;
}

Truth majority_value(const std::vector<Truth>& samples) {
  const std::size_t n = samples.size();
  for (Truth candidate : kTruthValues) {
    const std::size_t count = static_cast<std::size_t>(
        std::count(samples.begin(), samples.end(), candidate));
    if (count * 2 > n) {
      return candidate;
    }
  }
  return Truth::Undefined;
}

namespace {

long estimate_tokens(std::size_t prompt_chars, std::size_t output_chars) {
  return static_cast<long>((prompt_chars + output_chars + 3) / 4);
}

SideResult run_samples(const JudgeConfig& cfg, ChatBackend& backend, const std::string& prompt,
                       std::string_view positive, std::string_view negative) {
  SideResult result;
  std::vector<Truth> votes;
  for (int i = 0; i < cfg.samples_per_side; ++i) {
    Transcript t;
    t.prompt_text = prompt;
    t.sample_index = i;
    const auto start = std::chrono::steady_clock::now();
    try {
      ChatResult completion = complete_with_retries(backend, prompt, cfg.temperature,
                                                    cfg.max_retries);
      t.raw_output = completion.text;
      t.parsed_value = parse_conclusion(completion.text, positive, negative,
                                        cfg.lenient_markers);
      if (completion.total_tokens) {
        t.token_count = *completion.total_tokens;
      } else {
        t.token_count = estimate_tokens(prompt.size(), completion.text.size());
        t.tokens_estimated = true;
      }
    } catch (const BackendError& e) {
      t.parsed_value = Truth::Undefined;
      t.error = e.what();
    }
    t.latency_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    votes.push_back(t.parsed_value);
    result.transcripts.push_back(std::move(t));
  }
  result.value = majority_value(votes);
  return result;
}

double sum_latency(const std::vector<Transcript>& transcripts) {
  double total = 0.0;
  for (const auto& t : transcripts) {
    total += t.latency_seconds;
  }
  return total;
}

long sum_tokens(const std::vector<Transcript>& transcripts) {
  long total = 0;
  for (const auto& t : transcripts) {
    total += t.token_count;
  }
  return total;
}

BilateralOutcome run_zeta(const JudgeConfig& cfg, ChatBackend& backend,
                          const std::string& question, const std::string& answer) {
  cfg.validate();
  const auto [pos_v, neg_v] = side_markers(Side::Verification);
  const auto [pos_r, neg_r] = side_markers(Side::Refutation);
  const std::string verification_prompt =
      render_prompt(prompt_template(cfg.prompt_style, Side::Verification), question, answer);
  const std::string refutation_prompt =
      render_prompt(prompt_template(cfg.prompt_style, Side::Refutation), question, answer);

  // Both sides always run; they are independent, so overlap them.
  auto refutation_future = std::async(std::launch::async, [&] {
    return run_samples(cfg, backend, refutation_prompt, pos_r, neg_r);
  });
  SideResult verification = run_samples(cfg, backend, verification_prompt, pos_v, neg_v);
  SideResult refutation = refutation_future.get();

  BilateralOutcome outcome;
  outcome.value = Gtv{verification.value, refutation.value};
  outcome.verification = std::move(verification.transcripts);
  outcome.refutation = std::move(refutation.transcripts);
  return outcome;
}

}  // namespace

SideResult sample_side(const JudgeConfig& cfg, ChatBackend& backend, Side side,
                       const std::string& question, const std::string& answer) {
  cfg.validate();
  const auto [positive, negative] = side_markers(side);
  const std::string prompt =
      render_prompt(prompt_template(cfg.prompt_style, side), question, answer);
  return run_samples(cfg, backend, prompt, positive, negative);
}

double BilateralOutcome::elapsed_seconds() const {
  return sum_latency(verification) + sum_latency(refutation);
}

long BilateralOutcome::total_tokens() const {
  return sum_tokens(verification) + sum_tokens(refutation);
}

BilateralOutcome zeta(const JudgeConfig& cfg, ChatBackend& backend, const QAItem& item) {
  return run_zeta(cfg, backend, item.question, item.answer);
}

void VerbalizationRegistry::register_template(std::string relation, std::string text) {
  templates_[std::move(relation)] = std::move(text);
}

bool VerbalizationRegistry::has_template(const std::string& relation) const {
  return templates_.count(relation) > 0;
}

std::string VerbalizationRegistry::verbalize(const Formula& ground_atom) const {
  const auto* atom = std::get_if<Atom>(&ground_atom.node());
  if (atom == nullptr) {
    throw MissingTemplateError("verbalization requires an atomic formula, got: " +
                               format_formula(ground_atom));
  }
  auto it = templates_.find(atom->relation);
  if (it == templates_.end()) {
    throw MissingTemplateError("no verbalization template registered for relation: " +
                               atom->relation);
  }
  std::string out;
  const std::string& tmpl = it->second;
  for (std::size_t pos = 0; pos < tmpl.size();) {
    if (tmpl[pos] == '{') {
      auto close = tmpl.find('}', pos);
      if (close != std::string::npos) {
        const std::string slot = tmpl.substr(pos + 1, close - pos - 1);
        char* end = nullptr;
        const long index = std::strtol(slot.c_str(), &end, 10);
        if (end != nullptr && *end == '\0' && index >= 1 &&
            static_cast<std::size_t>(index) <= atom->args.size()) {
          out += atom->args[static_cast<std::size_t>(index - 1)].name;
          pos = close + 1;
          continue;
        }
      }
    }
    out += tmpl[pos];
    ++pos;
  }
  if (!out.empty()) {
    out[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(out[0])));
  }
  return out;
}

VerbalizationRegistry VerbalizationRegistry::load(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) {
    throw ConfigError("cannot open verbalization templates: " + file.string());
  }
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    throw ConfigError("invalid verbalization templates " + file.string() + ": " + e.what());
  }
  VerbalizationRegistry registry;
  for (const auto& [relation, text] : doc.items()) {
    registry.register_template(relation, text.get<std::string>());
  }
  return registry;
}

std::string verbalize(const QAItem& item) {
  return "Question: " + item.question + "\nProposed answer: " + item.answer;
}

namespace {

// Ground atoms ride through the QA-shaped templates as a statement check.
const char* kAtomQuestion = "Is the following statement true?";

}  // namespace

BilateralOutcome zeta(const JudgeConfig& cfg, ChatBackend& backend, const Formula& ground_atom,
                      const VerbalizationRegistry& registry) {
  const std::string statement = registry.verbalize(ground_atom);
  return run_zeta(cfg, backend, kAtomQuestion, statement);
}

double UnilateralOutcome::elapsed_seconds() const { return sum_latency(transcripts); }

long UnilateralOutcome::total_tokens() const { return sum_tokens(transcripts); }

UnilateralOutcome unilateral(const JudgeConfig& cfg, ChatBackend& backend, const QAItem& item) {
  cfg.validate();
  const auto [positive, negative] = unilateral_markers();
  const std::string prompt =
      render_prompt(unilateral_template(cfg.prompt_style), item.question, item.answer);
  SideResult side = run_samples(cfg, backend, prompt, positive, negative);
  UnilateralOutcome outcome;
  outcome.value = side.value;
  outcome.transcripts = std::move(side.transcripts);
  return outcome;
}

ZetaAtomEvaluator::ZetaAtomEvaluator(JudgeConfig cfg, std::shared_ptr<ChatBackend> backend,
                                     VerbalizationRegistry registry)
    : cfg_(std::move(cfg)), backend_(std::move(backend)), registry_(std::move(registry)) {
  cfg_.validate();
  if (!backend_) {
    throw ConfigError("ZetaAtomEvaluator requires a backend");
  }
  fingerprint_ = config_fingerprint(cfg_);
}

EvaluatedAtom ZetaAtomEvaluator::evaluate_atom(const Formula& atom) {
  BilateralOutcome outcome = zeta(cfg_, *backend_, atom, registry_);
  return EvaluatedAtom{outcome.value, transcripts_to_text(outcome.verification),
                       transcripts_to_text(outcome.refutation), fingerprint_};
}

std::string ZetaAtomEvaluator::fingerprint() const { return fingerprint_; }

}  // namespace bilateral
