#include "bilateral/cli.hpp"

#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "bilateral/backend.hpp"
#include "bilateral/bench.hpp"
#include "bilateral/errors.hpp"
#include "bilateral/evaluate.hpp"
#include "bilateral/judge.hpp"
#include "bilateral/parser.hpp"
#include "bilateral/report.hpp"
#include "bilateral/util.hpp"
#include "bilateral/validity.hpp"

namespace bilateral {

namespace {

using json = nlohmann::json;

json trace_to_json(const TraceNode& node) {
  json j{{"formula", node.formula_text}, {"value", gtv_code(node.value)}};
  if (!node.children.empty()) {
    json children = json::array();
    for (const auto& child : node.children) {
      children.push_back(trace_to_json(child));
    }
    j["children"] = children;
  }
  return j;
}

std::vector<std::string> split_formulas(const std::string& text) {
  std::vector<std::string> out;
  std::string current;
  for (char c : text) {
    if (c == ';' || c == '\n') {
      out.push_back(current);
      current.clear();
    } else {
      current += c;
    }
  }
  out.push_back(current);
  std::vector<std::string> trimmed;
  for (auto& piece : out) {
    const auto begin = piece.find_first_not_of(" \t\r");
    if (begin == std::string::npos) {
      continue;
    }
    const auto end = piece.find_last_not_of(" \t\r");
    trimmed.push_back(piece.substr(begin, end - begin + 1));
  }
  return trimmed;
}

struct EvalFormulaArgs {
  std::string formula;
  std::string interp_file;
  std::string grounded_config;
  std::string templates_file;
  std::string cache_file;
  std::string mock_fixture;
  std::vector<std::string> domain;
  std::string mode = "errata";
  std::string format = "text";
  bool trace = false;
  bool strict_keys = false;
};

struct CheckValidityArgs {
  std::string conclusion;
  std::vector<std::string> premises;
  std::string premises_file;
  std::vector<std::string> domain;
  std::uint64_t budget = SearchBudget{}.max_assignments;
  std::string mode = "errata";
  std::string format = "text";
};

struct JudgeArgs {
  std::string dataset;
  std::string config_file;
  std::string mock_fixture;
  std::string cache_file;
  std::string out = "records.jsonl";
  std::string mode = "bilateral";
  std::string style;
  int samples = 0;
  int concurrency = 1;
  bool strict_keys = false;
};

struct ReportArgs {
  std::string records;
  std::string out;
  std::string format = "text";
  std::uint64_t seed = 0;
  int resamples = 1000;
  int subsample = 100;
};

struct CacheArgs {
  std::string cache_file;
  std::string key;
  std::string out;
};

std::shared_ptr<ChatBackend> make_backend(const JudgeConfig& cfg, const std::string& mock_fixture) {
  if (!mock_fixture.empty()) {
    return MockBackend::from_file(mock_fixture);
  }
  if (cfg.base_url.empty() || cfg.model.empty()) {
    throw ConfigError(
        "a live backend needs base_url and model (config file or BILATERAL_BASE_URL / "
        "BILATERAL_MODEL); pass --mock FIXTURE for an offline run");
  }
  HttpBackendOptions options;
  options.base_url = cfg.base_url;
  options.model = cfg.model;
  options.api_key = cfg.api_key;
  options.timeout_ms = cfg.timeout_ms;
  return std::make_shared<HttpBackend>(options);
}

int cmd_eval_formula(const EvalFormulaArgs& args) {
  const EvalOptions options{quantifier_mode_from_string(args.mode)};

  std::unique_ptr<Interpretation> interp;
  FormulaPtr formula;  // parsed against the interpretation source's symbols

  if (!args.interp_file.empty()) {
    StandardInterpretation loaded = StandardInterpretation::load(args.interp_file);
    Signature base = loaded.signature();
    for (const auto& c : args.domain) {
      if (!base.has_constant(c)) {
        base.constants.push_back(c);
      }
    }
    auto [parsed, sig] = parse_formula_inferring(args.formula, base);
    formula = parsed;
    interp = std::make_unique<StandardInterpretation>(sig, loaded.table());
  } else {
    JudgeConfig cfg;
    if (!args.grounded_config.empty()) {
      cfg = load_judge_config(args.grounded_config);
    } else {
      apply_env_overrides(cfg);
    }
    Signature base;
    base.constants = args.domain;
    auto [parsed, sig] = parse_formula_inferring(args.formula, base);
    formula = parsed;

    VerbalizationRegistry registry;
    if (!args.templates_file.empty()) {
      registry = VerbalizationRegistry::load(args.templates_file);
    }
    auto backend = make_backend(cfg, args.mock_fixture);
    auto evaluator = std::make_shared<ZetaAtomEvaluator>(cfg, backend, std::move(registry));
    auto cache = args.cache_file.empty()
                     ? std::make_shared<ValuationCache>()
                     : std::make_shared<ValuationCache>(std::filesystem::path(args.cache_file));
    interp = std::make_unique<GroundedInterpretation>(sig, evaluator, cache, args.strict_keys);
  }

  if (args.format == "json") {
    TraceNode trace = evaluate_traced(*interp, *formula, options);
    json j{{"formula", format_formula(*formula)},
           {"value", gtv_code(trace.value)},
           {"quantifier_mode", to_string(options.mode)}};
    if (args.trace) {
      j["trace"] = trace_to_json(trace);
    }
    std::cout << j.dump(2) << '\n';
  } else if (args.trace) {
    TraceNode trace = evaluate_traced(*interp, *formula, options);
    std::cout << gtv_code(trace.value) << '\n' << render_trace(trace);
  } else {
    std::cout << gtv_code(evaluate(*interp, *formula, options)) << '\n';
  }
  return 0;
}

int cmd_check_validity(const CheckValidityArgs& args) {
  const EvalOptions options{quantifier_mode_from_string(args.mode)};

  std::vector<std::string> premise_texts = args.premises;
  if (!args.premises_file.empty()) {
    std::ifstream in(args.premises_file);
    if (!in) {
      throw ConfigError("cannot open premises file: " + args.premises_file);
    }
    std::stringstream buffer;
    buffer << in.rdbuf();
    for (auto& piece : split_formulas(buffer.str())) {
      premise_texts.push_back(piece);
    }
  }

  Signature sig;
  sig.constants = args.domain;
  std::vector<FormulaPtr> premises;
  for (const auto& text : premise_texts) {
    auto [formula, extended] = parse_formula_inferring(text, sig);
    premises.push_back(formula);
    sig = extended;
  }
  auto [conclusion, final_sig] = parse_formula_inferring(args.conclusion, sig);
  sig = final_sig;

  SearchBudget budget;
  budget.max_assignments = args.budget;
  ValidityResult result = check_validity(premises, conclusion, sig, budget, options);

  if (args.format == "json") {
    json countermodel = json::object();
    for (const auto& [atom, value] : result.countermodel) {
      countermodel[atom] = gtv_code(value);
    }
    json j{{"verdict", result.valid ? "VALID" : "INVALID"},
           {"countermodel", countermodel},
           {"atom_count", result.atom_count},
           {"assignments_checked", result.assignments_checked},
           {"quantifier_mode", to_string(options.mode)}};
    std::cout << j.dump(2) << '\n';
  } else if (result.valid) {
    std::cout << "VALID\n";
  } else {
    std::cout << "INVALID\ncountermodel:\n";
    for (const auto& [atom, value] : result.countermodel) {
      std::cout << "  " << atom << " = " << gtv_code(value) << '\n';
    }
  }
  return 0;
}

int cmd_judge(const JudgeArgs& args) {
  RunManifest manifest;
  manifest.command = "judge";
  manifest.started_at = iso8601_utc_now();

  JudgeConfig cfg;
  if (!args.config_file.empty()) {
    cfg = load_judge_config(args.config_file);
  } else {
    apply_env_overrides(cfg);
  }
  if (!args.style.empty()) {
    cfg.prompt_style = prompt_style_from_string(args.style);
  }
  if (args.samples > 0) {
    cfg.samples_per_side = args.samples;
  }
  cfg.validate();

  auto items = load_dataset(args.dataset);
  auto backend = make_backend(cfg, args.mock_fixture);

  std::unique_ptr<ValuationCache> cache;
  if (!args.cache_file.empty()) {
    cache = std::make_unique<ValuationCache>(std::filesystem::path(args.cache_file));
  }

  RunOptions options;
  options.mode = eval_mode_from_string(args.mode);
  options.concurrency = args.concurrency;
  options.strict_cache_keys = args.strict_keys;

  auto records = run_evaluation(items, cfg, *backend, cache.get(), options);
  save_records(records, args.out);

  manifest.config_fingerprint = config_fingerprint(cfg);
  manifest.inputs.push_back(args.dataset);
  if (!args.cache_file.empty()) {
    manifest.inputs.push_back(args.cache_file);
  }
  if (!args.config_file.empty()) {
    manifest.inputs.push_back(args.config_file);
  }
  manifest.outputs.push_back(args.out);
  manifest.settings["mode"] = args.mode;
  manifest.settings["prompt_style"] = to_string(cfg.prompt_style);
  manifest.settings["samples_per_side"] = std::to_string(cfg.samples_per_side);
  manifest.settings["backend"] = backend->describe();
  manifest.settings["strict_cache_keys"] = args.strict_keys ? "true" : "false";
  manifest.finished_at = iso8601_utc_now();
  write_manifest(manifest, args.out + ".manifest.json");

  std::cout << "evaluated " << records.size() << " item(s) in " << args.mode << " mode -> "
            << args.out << '\n';
  return 0;
}

int cmd_report(const ReportArgs& args) {
  auto records = load_records(args.records);
  MetricsReport report = build_report(records, args.resamples, args.subsample, args.seed);

  if (args.format == "json") {
    std::cout << report_to_json(report).dump(2) << '\n';
  } else {
    std::cout << render_report_text(report);
  }

  if (!args.out.empty()) {
    std::ofstream out(args.out);
    if (!out) {
      throw CacheIoError("cannot write report file: " + args.out);
    }
    out << report_to_json(report).dump(2) << '\n';

    RunManifest manifest;
    manifest.command = "report";
    manifest.started_at = manifest.finished_at = iso8601_utc_now();
    manifest.seed = args.seed;
    manifest.inputs.push_back(args.records);
    manifest.outputs.push_back(args.out);
    manifest.settings["resamples"] = std::to_string(args.resamples);
    manifest.settings["subsample_size"] = std::to_string(args.subsample);
    write_manifest(manifest, args.out + ".manifest.json");
  }
  return 0;
}

ValuationCache open_existing_cache(const std::string& path) {
  if (!std::filesystem::exists(path)) {
    throw ConfigError("cache file not found: " + path);
  }
  return ValuationCache(std::filesystem::path(path));
}

int cmd_cache_inspect(const CacheArgs& args) {
  ValuationCache cache = open_existing_cache(args.cache_file);
  const auto entries = cache.entries();
  if (!args.key.empty()) {
    auto it = entries.find(args.key);
    if (it == entries.end()) {
      throw MissingAtomError("cache has no entry for key: " + args.key);
    }
    json j{{"key", it->first},
           {"gtv", gtv_code(it->second.value)},
           {"verification", it->second.verification_transcript},
           {"refutation", it->second.refutation_transcript},
           {"timestamp", it->second.created_at},
           {"fingerprint", it->second.fingerprint}};
    std::cout << j.dump(2) << '\n';
    return 0;
  }
  std::cout << entries.size() << " entrie(s) in " << args.cache_file << '\n';
  for (const auto& [key, entry] : entries) {
    std::cout << gtv_code(entry.value) << "  " << entry.created_at << "  " << key << '\n';
  }
  return 0;
}

int cmd_cache_export(const CacheArgs& args) {
  ValuationCache cache = open_existing_cache(args.cache_file);
  json j = json::object();
  for (const auto& [key, entry] : cache.entries()) {
    j[key] = json{{"gtv", gtv_code(entry.value)},
                  {"verification", entry.verification_transcript},
                  {"refutation", entry.refutation_transcript},
                  {"timestamp", entry.created_at},
                  {"fingerprint", entry.fingerprint}};
  }
  std::ofstream out(args.out);
  if (!out) {
    throw CacheIoError("cannot write export file: " + args.out);
  }
  out << j.dump(2) << '\n';

  RunManifest manifest;
  manifest.command = "cache export";
  manifest.started_at = manifest.finished_at = iso8601_utc_now();
  manifest.inputs.push_back(args.cache_file);
  manifest.outputs.push_back(args.out);
  write_manifest(manifest, args.out + ".manifest.json");

  std::cout << "exported " << cache.size() << " entrie(s) -> " << args.out << '\n';
  return 0;
}

int exit_code_for(const Error& e) {
  if (dynamic_cast<const BudgetExceededError*>(&e) != nullptr) return 5;
  if (dynamic_cast<const ParseError*>(&e) != nullptr) return 2;
  if (dynamic_cast<const MissingAtomError*>(&e) != nullptr) return 3;
  if (dynamic_cast<const EvaluatorError*>(&e) != nullptr) return 3;
  if (dynamic_cast<const MissingTemplateError*>(&e) != nullptr) return 6;
  if (dynamic_cast<const BackendError*>(&e) != nullptr) return 4;
  if (dynamic_cast<const ConfigError*>(&e) != nullptr) return 6;
  if (dynamic_cast<const UndefinedMetricError*>(&e) != nullptr) return 7;
  if (dynamic_cast<const EmptyRecordsError*>(&e) != nullptr) return 7;
  if (dynamic_cast<const DatasetError*>(&e) != nullptr) return 8;
  if (dynamic_cast<const CacheIoError*>(&e) != nullptr) return 9;
  if (dynamic_cast<const SerializationError*>(&e) != nullptr) return 9;
  return 1;
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
  CLI::App app{"Paraconsistent reasoning with LLM-grounded valuations"};
  app.set_version_flag("--version", std::string(kToolVersion));
  app.require_subcommand(1);

  EvalFormulaArgs eval_args;
  auto* eval_cmd = app.add_subcommand(
      "eval-formula", "Evaluate a formula to a generalized truth value (two-letter code)");
  eval_cmd->add_option("formula", eval_args.formula, "Formula text")->required();
  auto* interp_opt =
      eval_cmd->add_option("--interp", eval_args.interp_file, "Table-backed interpretation file");
  eval_cmd->add_option("--grounded-config", eval_args.grounded_config,
                       "Judge config for an LLM-grounded interpretation")
      ->excludes(interp_opt);
  eval_cmd->add_option("--templates", eval_args.templates_file,
                       "Verbalization templates (JSON map relation -> template)");
  eval_cmd->add_option("--cache", eval_args.cache_file, "Valuation cache path (grounded runs)");
  eval_cmd->add_option("--mock", eval_args.mock_fixture, "Mock backend fixture (grounded runs)");
  eval_cmd->add_option("--domain", eval_args.domain, "Extra domain constants")->delimiter(',');
  eval_cmd->add_option("--mode", eval_args.mode, "Quantifier mode: errata | paper-literal")
      ->check(CLI::IsMember({"errata", "paper-literal"}));
  eval_cmd->add_option("--format", eval_args.format, "Output format: text | json")
      ->check(CLI::IsMember({"text", "json"}));
  eval_cmd->add_flag("--trace", eval_args.trace, "Print the per-subformula valuation tree");
  eval_cmd->add_flag("--strict-keys", eval_args.strict_keys,
                     "Append the judge fingerprint to cache keys");

  CheckValidityArgs validity_args;
  auto* validity_cmd =
      app.add_subcommand("check-validity", "Brute-force truth-preservation check");
  validity_cmd->add_option("conclusion", validity_args.conclusion, "Conclusion formula")
      ->required();
  validity_cmd->add_option("--premise", validity_args.premises, "Premise formula (repeatable)");
  validity_cmd->add_option("--premises-file", validity_args.premises_file,
                           "File of premises separated by ';' or newlines");
  validity_cmd->add_option("--domain", validity_args.domain, "Extra domain constants")
      ->delimiter(',');
  validity_cmd->add_option("--budget", validity_args.budget,
                           "Maximum number of atom assignments to enumerate");
  validity_cmd->add_option("--mode", validity_args.mode, "Quantifier mode")
      ->check(CLI::IsMember({"errata", "paper-literal"}));
  validity_cmd->add_option("--format", validity_args.format, "Output format: text | json")
      ->check(CLI::IsMember({"text", "json"}));

  JudgeArgs judge_args;
  auto* judge_cmd = app.add_subcommand("judge", "Run the judge over a dataset");
  judge_cmd->add_option("--dataset", judge_args.dataset, "Dataset (JSONL)")->required();
  auto* config_opt =
      judge_cmd->add_option("--config", judge_args.config_file, "Judge config (JSON)");
  judge_cmd->add_option("--mock", judge_args.mock_fixture, "Mock backend fixture (offline run)")
      ->excludes(config_opt);
  judge_cmd->add_option("--cache", judge_args.cache_file, "Valuation cache path");
  judge_cmd->add_option("--out", judge_args.out, "Records output path (JSONL)");
  judge_cmd->add_option("--mode", judge_args.mode, "bilateral | unilateral")
      ->check(CLI::IsMember({"bilateral", "unilateral"}));
  judge_cmd->add_option("--style", judge_args.style, "Prompt style: direct | zero_shot | few_shot");
  judge_cmd->add_option("--samples", judge_args.samples, "Samples per side (majority vote)");
  judge_cmd->add_option("--concurrency", judge_args.concurrency, "Concurrent items");
  judge_cmd->add_flag("--strict-keys", judge_args.strict_keys,
                      "Append the judge fingerprint to cache keys");

  ReportArgs report_args;
  auto* report_cmd = app.add_subcommand("report", "Metrics tables for an evaluation run");
  report_cmd->add_option("--records", report_args.records, "Records file (JSONL)")->required();
  report_cmd->add_option("--seed", report_args.seed, "Bootstrap RNG seed");
  report_cmd->add_option("--resamples", report_args.resamples, "Bootstrap resamples");
  report_cmd->add_option("--subsample", report_args.subsample, "Bootstrap subsample size");
  report_cmd->add_option("--format", report_args.format, "Output format: text | json")
      ->check(CLI::IsMember({"text", "json"}));
  report_cmd->add_option("--out", report_args.out, "Also write the JSON report here");

  CacheArgs cache_args;
  auto* cache_cmd = app.add_subcommand("cache", "Inspect or export a valuation cache");
  cache_cmd->require_subcommand(1);
  auto* inspect_cmd = cache_cmd->add_subcommand("inspect", "List entries (or one full entry)");
  inspect_cmd->add_option("--cache", cache_args.cache_file, "Cache path")->required();
  inspect_cmd->add_option("--key", cache_args.key, "Print the full entry for this key");
  auto* export_cmd = cache_cmd->add_subcommand("export", "Export all entries as one JSON object");
  export_cmd->add_option("--cache", cache_args.cache_file, "Cache path")->required();
  export_cmd->add_option("--out", cache_args.out, "Export path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 6;
  }

  try {
    if (eval_cmd->parsed()) {
      return cmd_eval_formula(eval_args);
    }
    if (validity_cmd->parsed()) {
      return cmd_check_validity(validity_args);
    }
    if (judge_cmd->parsed()) {
      return cmd_judge(judge_args);
    }
    if (report_cmd->parsed()) {
      return cmd_report(report_args);
    }
    if (cache_cmd->parsed()) {
      if (inspect_cmd->parsed()) {
        return cmd_cache_inspect(cache_args);
      }
      return cmd_cache_export(cache_args);
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code_for(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

}  // namespace bilateral
