#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <memory>
#include <vector>

#include "bilateral/backend.hpp"
#include "bilateral/bench.hpp"
#include "bilateral/errors.hpp"
#include "bilateral/evaluate.hpp"
#include "bilateral/judge.hpp"
#include "bilateral/parser.hpp"
#include "bilateral/report.hpp"
#include "bilateral/validity.hpp"

namespace py = pybind11;
using namespace bilateral;

namespace {

/// Lets Python classes implement the chat backend.
class PyChatBackend : public ChatBackend {
 public:
  using ChatBackend::ChatBackend;
  ChatResult complete(const std::string& prompt, double temperature) override {
    PYBIND11_OVERRIDE_PURE(ChatResult, ChatBackend, complete, prompt, temperature);
  }
  std::string describe() const override {
    PYBIND11_OVERRIDE(std::string, ChatBackend, describe, );
  }
};

/// Lets Python classes implement atom evaluators for grounded
/// interpretations.
class PyAtomEvaluator : public AtomEvaluator {
 public:
  using AtomEvaluator::AtomEvaluator;
  EvaluatedAtom evaluate_atom(const Formula& atom) override {
    PYBIND11_OVERRIDE_PURE(EvaluatedAtom, AtomEvaluator, evaluate_atom, atom);
  }
  std::string fingerprint() const override {
    PYBIND11_OVERRIDE(std::string, AtomEvaluator, fingerprint, );
  }
};

Truth truth_from_str(const std::string& s) {
  if (s.size() != 1) {
    throw SerializationError("truth value code must be one of 't', 'e', 'f'");
  }
  return truth_from_code(s[0]);
}

std::string truth_to_str(Truth v) { return std::string(1, truth_code(v)); }

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Paraconsistent reasoning with LLM-grounded valuations";
#ifdef BILATERAL_VERSION
  m.attr("__version__") = BILATERAL_VERSION;
#endif

  py::register_exception<Error>(m, "BilateralError");

  py::enum_<Truth>(m, "Truth")
      .value("TRUE", Truth::True)
      .value("UNDEFINED", Truth::Undefined)
      .value("FALSE", Truth::False);
  m.def("truth_code", &truth_to_str, py::arg("value"));
  m.def("truth_from_code", &truth_from_str, py::arg("code"));

  py::class_<Gtv>(m, "Gtv")
      .def(py::init([](const std::string& code) { return gtv_from_code(code); }), py::arg("code"))
      .def(py::init([](Truth u, Truth v) { return Gtv{u, v}; }), py::arg("verification"),
           py::arg("refutation"))
      .def_readonly("verification", &Gtv::verification)
      .def_readonly("refutation", &Gtv::refutation)
      .def("code", [](const Gtv& g) { return gtv_code(g); })
      .def("__eq__", [](const Gtv& a, const Gtv& b) { return a == b; })
      .def("__hash__", [](const Gtv& g) { return std::hash<std::string>()(gtv_code(g)); })
      .def("__repr__", [](const Gtv& g) { return "Gtv('" + gtv_code(g) + "')"; });
  m.def("all_gtvs", [] { return std::vector<Gtv>(all_gtvs().begin(), all_gtvs().end()); });

  m.def("neg3", &neg3, py::arg("x"));
  m.def("and3", &and3, py::arg("x"), py::arg("y"));
  m.def("or3", &or3, py::arg("x"), py::arg("y"));
  m.def("project", &project, py::arg("pair"));

  py::enum_<QuantifierMode>(m, "QuantifierMode")
      .value("ERRATA", QuantifierMode::Errata)
      .value("PAPER_LITERAL", QuantifierMode::PaperLiteral);
  m.def(
      "exists_q", [](const std::vector<Gtv>& pairs) { return exists_q(pairs); },
      py::arg("pairs"));
  m.def(
      "forall_q",
      [](const std::vector<Gtv>& pairs, QuantifierMode mode) { return forall_q(pairs, mode); },
      py::arg("pairs"), py::arg("mode") = QuantifierMode::Errata);

  py::class_<Signature>(m, "Signature")
      .def(py::init<>())
      .def_readwrite("constants", &Signature::constants)
      .def_readwrite("relations", &Signature::relations);

  py::class_<Formula, FormulaPtr>(m, "Formula")
      .def_static(
          "atom",
          [](const std::string& relation, const std::vector<std::string>& constants) {
            return Formula::atom(relation, constants);
          },
          py::arg("relation"), py::arg("constants"))
      .def_static("negation", &Formula::negation, py::arg("body"))
      .def_static("conjunction", &Formula::conjunction, py::arg("left"), py::arg("right"))
      .def_static("disjunction", &Formula::disjunction, py::arg("left"), py::arg("right"))
      .def("__str__", [](const Formula& f) { return format_formula(f); })
      .def("__repr__", [](const Formula& f) { return "Formula('" + format_formula(f) + "')"; })
      .def("__eq__", [](const Formula& a, const Formula& b) { return a == b; });

  m.def(
      "parse_formula",
      [](const std::string& text, const Signature& sig) { return parse_formula(text, sig); },
      py::arg("text"), py::arg("signature"));
  m.def(
      "format_formula", [](const Formula& f) { return format_formula(f); }, py::arg("formula"));

  py::class_<CacheEntry>(m, "CacheEntry")
      .def(py::init<>())
      .def_readwrite("value", &CacheEntry::value)
      .def_readwrite("verification_transcript", &CacheEntry::verification_transcript)
      .def_readwrite("refutation_transcript", &CacheEntry::refutation_transcript)
      .def_readwrite("created_at", &CacheEntry::created_at)
      .def_readwrite("fingerprint", &CacheEntry::fingerprint);

  py::class_<ValuationCache, std::shared_ptr<ValuationCache>>(m, "ValuationCache")
      .def(py::init<>())
      .def(py::init<const std::filesystem::path&>(), py::arg("path"))
      .def("put", &ValuationCache::put, py::arg("key"), py::arg("entry"))
      .def("find", &ValuationCache::find, py::arg("key"))
      .def("__len__", &ValuationCache::size)
      .def("entries", &ValuationCache::entries);

  py::class_<PutOutcome>(m, "PutOutcome")
      .def_readonly("stored", &PutOutcome::stored)
      .def_readonly("collided", &PutOutcome::collided);

  py::class_<EvaluatedAtom>(m, "EvaluatedAtom")
      .def(py::init<>())
      .def_readwrite("value", &EvaluatedAtom::value)
      .def_readwrite("verification_transcript", &EvaluatedAtom::verification_transcript)
      .def_readwrite("refutation_transcript", &EvaluatedAtom::refutation_transcript)
      .def_readwrite("fingerprint", &EvaluatedAtom::fingerprint);

  py::class_<AtomEvaluator, PyAtomEvaluator, std::shared_ptr<AtomEvaluator>>(m, "AtomEvaluator")
      .def(py::init<>())
      .def("evaluate_atom", &AtomEvaluator::evaluate_atom)
      .def("fingerprint", &AtomEvaluator::fingerprint);

  py::class_<Interpretation, std::shared_ptr<Interpretation>>(m, "Interpretation")
      .def("atom_value", &Interpretation::atom_value, py::arg("atom"))
      .def_property_readonly("signature", &Interpretation::signature);

  py::class_<StandardInterpretation, Interpretation, std::shared_ptr<StandardInterpretation>>(
      m, "StandardInterpretation")
      .def(py::init<Signature, std::map<std::string, Gtv>>(), py::arg("signature"),
           py::arg("table"))
      .def_static("load", &StandardInterpretation::load, py::arg("path"))
      .def_property_readonly("table", &StandardInterpretation::table);

  py::class_<GroundedInterpretation, Interpretation, std::shared_ptr<GroundedInterpretation>>(
      m, "GroundedInterpretation")
      .def(py::init<Signature, std::shared_ptr<AtomEvaluator>, std::shared_ptr<ValuationCache>,
                    bool>(),
           py::arg("signature"), py::arg("evaluator"), py::arg("cache"),
           py::arg("strict_keys") = false)
      .def_property_readonly("cache", &GroundedInterpretation::cache);

  m.def(
      "seed_cache_from_standard",
      [](const StandardInterpretation& interp) { return seed_cache_from_standard(interp); },
      py::arg("interpretation"));
  m.def("snapshot_to_standard", &snapshot_to_standard, py::arg("grounded"));

  m.def(
      "evaluate",
      [](Interpretation& interp, const Formula& f, QuantifierMode mode) {
        return evaluate(interp, f, {mode});
      },
      py::arg("interpretation"), py::arg("formula"), py::arg("mode") = QuantifierMode::Errata);

  py::class_<ValidityResult>(m, "ValidityResult")
      .def_readonly("valid", &ValidityResult::valid)
      .def_readonly("countermodel", &ValidityResult::countermodel)
      .def_readonly("atom_count", &ValidityResult::atom_count)
      .def_readonly("assignments_checked", &ValidityResult::assignments_checked);

  m.def(
      "check_validity",
      [](const std::vector<FormulaPtr>& premises, const FormulaPtr& conclusion,
         const Signature& sig, std::uint64_t budget, QuantifierMode mode) {
        SearchBudget limits;
        limits.max_assignments = budget;
        return check_validity(premises, conclusion, sig, limits, {mode});
      },
      py::arg("premises"), py::arg("conclusion"), py::arg("signature"),
      py::arg("budget") = SearchBudget{}.max_assignments,
      py::arg("mode") = QuantifierMode::Errata);

  py::class_<ChatResult>(m, "ChatResult")
      .def(py::init<>())
      .def(py::init([](const std::string& text, std::optional<long> tokens) {
             return ChatResult{text, tokens};
           }),
           py::arg("text"), py::arg("total_tokens") = std::nullopt)
      .def_readwrite("text", &ChatResult::text)
      .def_readwrite("total_tokens", &ChatResult::total_tokens);

  py::class_<ChatBackend, PyChatBackend, std::shared_ptr<ChatBackend>>(m, "ChatBackend")
      .def(py::init<>())
      .def("complete", &ChatBackend::complete, py::arg("prompt"), py::arg("temperature"))
      .def("describe", &ChatBackend::describe);

  py::class_<MockBackend, ChatBackend, std::shared_ptr<MockBackend>>(m, "MockBackend")
      .def(py::init<>())
      .def_static("from_file", &MockBackend::from_file, py::arg("path"))
      .def("call_count", &MockBackend::call_count);

  py::enum_<PromptStyle>(m, "PromptStyle")
      .value("DIRECT", PromptStyle::Direct)
      .value("ZERO_SHOT", PromptStyle::ZeroShot)
      .value("FEW_SHOT", PromptStyle::FewShot);
  py::enum_<Side>(m, "Side")
      .value("VERIFICATION", Side::Verification)
      .value("REFUTATION", Side::Refutation);

  m.def("prompt_template", &prompt_template, py::arg("style"), py::arg("side"),
        py::return_value_policy::reference);
  m.def("unilateral_template", &unilateral_template, py::arg("style"),
        py::return_value_policy::reference);
  m.def("negative_generation_template", &negative_generation_template,
        py::return_value_policy::reference);
  m.def(
      "render_prompt",
      [](const std::string& tmpl, const std::string& question, const std::string& answer) {
        return render_prompt(tmpl, question, answer);
      },
      py::arg("template"), py::arg("question"), py::arg("answer"));
  m.def(
      "parse_conclusion",
      [](const std::string& raw, const std::string& positive, const std::string& negative,
         bool lenient) { return parse_conclusion(raw, positive, negative, lenient); },
      py::arg("raw"), py::arg("positive_marker"), py::arg("negative_marker"),
      py::arg("lenient") = false);

  py::class_<JudgeConfig>(m, "JudgeConfig")
      .def(py::init<>())
      .def_readwrite("base_url", &JudgeConfig::base_url)
      .def_readwrite("model", &JudgeConfig::model)
      .def_readwrite("api_key", &JudgeConfig::api_key)
      .def_readwrite("prompt_style", &JudgeConfig::prompt_style)
      .def_readwrite("samples_per_side", &JudgeConfig::samples_per_side)
      .def_readwrite("temperature", &JudgeConfig::temperature)
      .def_readwrite("timeout_ms", &JudgeConfig::timeout_ms)
      .def_readwrite("max_retries", &JudgeConfig::max_retries)
      .def_readwrite("lenient_markers", &JudgeConfig::lenient_markers);
  m.def("config_fingerprint", &config_fingerprint, py::arg("config"));

  py::class_<QAItem>(m, "QAItem")
      .def(py::init<>())
      .def(py::init([](const std::string& id, const std::string& question,
                       const std::string& answer, bool gold_label, const std::string& source) {
             return QAItem{id, question, answer, gold_label, source};
           }),
           py::arg("id"), py::arg("question"), py::arg("answer"), py::arg("gold_label"),
           py::arg("source") = "")
      .def_readwrite("id", &QAItem::id)
      .def_readwrite("question", &QAItem::question)
      .def_readwrite("answer", &QAItem::answer)
      .def_readwrite("gold_label", &QAItem::gold_label)
      .def_readwrite("source", &QAItem::source);
  m.def("qa_cache_key", &qa_cache_key, py::arg("item"));

  py::class_<Transcript>(m, "Transcript")
      .def_readonly("prompt_text", &Transcript::prompt_text)
      .def_readonly("raw_output", &Transcript::raw_output)
      .def_readonly("parsed_value", &Transcript::parsed_value)
      .def_readonly("latency_seconds", &Transcript::latency_seconds)
      .def_readonly("token_count", &Transcript::token_count)
      .def_readonly("tokens_estimated", &Transcript::tokens_estimated)
      .def_readonly("sample_index", &Transcript::sample_index)
      .def_readonly("error", &Transcript::error);

  py::class_<BilateralOutcome>(m, "BilateralOutcome")
      .def_readonly("value", &BilateralOutcome::value)
      .def_readonly("verification", &BilateralOutcome::verification)
      .def_readonly("refutation", &BilateralOutcome::refutation)
      .def("elapsed_seconds", &BilateralOutcome::elapsed_seconds)
      .def("total_tokens", &BilateralOutcome::total_tokens);

  py::class_<UnilateralOutcome>(m, "UnilateralOutcome")
      .def_readonly("value", &UnilateralOutcome::value)
      .def_readonly("transcripts", &UnilateralOutcome::transcripts)
      .def("elapsed_seconds", &UnilateralOutcome::elapsed_seconds)
      .def("total_tokens", &UnilateralOutcome::total_tokens);

  m.def(
      "zeta",
      [](const JudgeConfig& cfg, ChatBackend& backend, const QAItem& item) {
        return zeta(cfg, backend, item);
      },
      py::arg("config"), py::arg("backend"), py::arg("item"));
  m.def(
      "unilateral",
      [](const JudgeConfig& cfg, ChatBackend& backend, const QAItem& item) {
        return unilateral(cfg, backend, item);
      },
      py::arg("config"), py::arg("backend"), py::arg("item"));

  py::class_<VerbalizationRegistry>(m, "VerbalizationRegistry")
      .def(py::init<>())
      .def("register_template", &VerbalizationRegistry::register_template, py::arg("relation"),
           py::arg("template"))
      .def("verbalize", &VerbalizationRegistry::verbalize, py::arg("atom"))
      .def_static("load", &VerbalizationRegistry::load, py::arg("path"));

  py::class_<ZetaAtomEvaluator, AtomEvaluator, std::shared_ptr<ZetaAtomEvaluator>>(
      m, "ZetaAtomEvaluator")
      .def(py::init<JudgeConfig, std::shared_ptr<ChatBackend>, VerbalizationRegistry>(),
           py::arg("config"), py::arg("backend"), py::arg("registry"));

  py::enum_<EvalMode>(m, "EvalMode")
      .value("BILATERAL", EvalMode::Bilateral)
      .value("UNILATERAL", EvalMode::Unilateral);

  py::class_<EvaluationRecord>(m, "EvaluationRecord")
      .def(py::init<>())
      .def_readwrite("item_id", &EvaluationRecord::item_id)
      .def_readwrite("mode", &EvaluationRecord::mode)
      .def_readwrite("gtv", &EvaluationRecord::gtv)
      .def_readwrite("projected", &EvaluationRecord::projected)
      .def_readwrite("gold_label", &EvaluationRecord::gold_label)
      .def_readwrite("elapsed_seconds", &EvaluationRecord::elapsed_seconds)
      .def_readwrite("tokens", &EvaluationRecord::tokens)
      .def_readwrite("transcript_ref", &EvaluationRecord::transcript_ref);

  m.def("load_dataset", &load_dataset, py::arg("path"));
  m.def("save_records", &save_records, py::arg("records"), py::arg("path"));
  m.def("load_records", &load_records, py::arg("path"));

  m.def(
      "run_evaluation",
      [](const std::vector<QAItem>& items, const JudgeConfig& cfg, ChatBackend& backend,
         std::shared_ptr<ValuationCache> cache, EvalMode mode, int concurrency,
         bool strict_cache_keys) {
        RunOptions options;
        options.mode = mode;
        options.concurrency = concurrency;
        options.strict_cache_keys = strict_cache_keys;
        return run_evaluation(items, cfg, backend, cache.get(), options);
      },
      py::arg("items"), py::arg("config"), py::arg("backend"), py::arg("cache") = nullptr,
      py::arg("mode") = EvalMode::Bilateral, py::arg("concurrency") = 1,
      py::arg("strict_cache_keys") = false);

  m.def(
      "macro_f1_given_abstention",
      [](const std::vector<EvaluationRecord>& records) {
        return macro_f1_given_abstention(records);
      },
      py::arg("records"));
  m.def(
      "coverage", [](const std::vector<EvaluationRecord>& r) { return coverage(r); },
      py::arg("records"));
  m.def(
      "truth_value_distribution",
      [](const std::vector<EvaluationRecord>& r) { return truth_value_distribution(r); },
      py::arg("records"));
  m.def("collapse_distribution", &collapse_distribution, py::arg("distribution"));

  py::class_<BootstrapResult>(m, "BootstrapResult")
      .def_readonly("mean", &BootstrapResult::mean)
      .def_readonly("se", &BootstrapResult::se)
      .def_readonly("skipped", &BootstrapResult::skipped);

  m.def(
      "bootstrap_se",
      [](const std::vector<EvaluationRecord>& records, const std::string& metric, int n_resamples,
         int subsample_size, std::uint64_t seed) {
        MetricFn fn;
        if (metric == "macro_f1") {
          fn = [](std::span<const EvaluationRecord> r) { return macro_f1_given_abstention(r); };
        } else if (metric == "coverage") {
          fn = [](std::span<const EvaluationRecord> r) { return coverage(r); };
        } else if (metric == "mean_time") {
          fn = [](std::span<const EvaluationRecord> r) { return mean_elapsed(r); };
        } else if (metric == "mean_tokens") {
          fn = [](std::span<const EvaluationRecord> r) { return mean_tokens(r); };
        } else {
          throw ConfigError("unknown metric: " + metric +
                            " (expected macro_f1, coverage, mean_time, or mean_tokens)");
        }
        return bootstrap_se(records, fn, n_resamples, subsample_size, seed);
      },
      py::arg("records"), py::arg("metric"), py::arg("n_resamples") = 1000,
      py::arg("subsample_size") = 100, py::arg("seed") = 0);

  m.def("generate_negatives", &generate_negatives, py::arg("items"), py::arg("config"),
        py::arg("backend"));
  m.def("extract_negative_answers", &extract_negative_answers, py::arg("raw"));

  m.def(
      "report_json",
      [](const std::vector<EvaluationRecord>& records, int n_resamples, int subsample_size,
         std::uint64_t seed) {
        return report_to_json(build_report(records, n_resamples, subsample_size, seed)).dump();
      },
      py::arg("records"), py::arg("n_resamples") = 1000, py::arg("subsample_size") = 100,
      py::arg("seed") = 0);
  m.def(
      "report_text",
      [](const std::vector<EvaluationRecord>& records, int n_resamples, int subsample_size,
         std::uint64_t seed) {
        return render_report_text(build_report(records, n_resamples, subsample_size, seed));
      },
      py::arg("records"), py::arg("n_resamples") = 1000, py::arg("subsample_size") = 100,
      py::arg("seed") = 0);
}
