#include "bilateral/bench.hpp"

#include <atomic>
#include <cmath>
#include <fstream>
#include <iostream>
#include <random>
#include <set>
#include <thread>

#include <nlohmann/json.hpp>

#include "bilateral/errors.hpp"
#include "bilateral/util.hpp"

namespace bilateral {

using json = nlohmann::json;

std::string to_string(EvalMode mode) {
  return mode == EvalMode::Bilateral ? "bilateral" : "unilateral";
}

EvalMode eval_mode_from_string(std::string_view s) {
  if (s == "bilateral") {
    return EvalMode::Bilateral;
  }
  if (s == "unilateral") {
    return EvalMode::Unilateral;
  }
  throw ConfigError("unknown mode: \"" + std::string(s) +
                    "\" (expected bilateral or unilateral)");
}

std::vector<QAItem> load_dataset(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) {
    throw DatasetError("cannot open dataset: " + file.string());
  }
  std::vector<QAItem> items;
  std::set<std::string> seen;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) {
      continue;
    }
    json j = json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.is_object()) {
      throw DatasetError("dataset " + file.string() + " line " + std::to_string(lineno) +
                             ": not a JSON object",
                         lineno);
    }
    QAItem item;
    try {
      item.id = j.at("id").get<std::string>();
      item.question = j.at("question").get<std::string>();
      item.answer = j.at("answer").get<std::string>();
      item.gold_label = j.at("gold_label").get<bool>();
      item.source = j.value("source", "");
    } catch (const json::exception& e) {
      throw DatasetError("dataset " + file.string() + " line " + std::to_string(lineno) + ": " +
                             e.what(),
                         lineno);
    }
    if (item.question.empty() || item.answer.empty()) {
      throw DatasetError("dataset " + file.string() + " line " + std::to_string(lineno) +
                             ": question and answer must be non-empty",
                         lineno);
    }
    if (!seen.insert(item.id).second) {
      throw DatasetError("dataset " + file.string() + " line " + std::to_string(lineno) +
                             ": duplicate id \"" + item.id + "\"",
                         lineno);
    }
    items.push_back(std::move(item));
  }
  return items;
}

namespace {

json record_to_json(const EvaluationRecord& r) {
  json j{{"item_id", r.item_id},
         {"mode", to_string(r.mode)},
         {"projected", std::string(1, truth_code(r.projected))},
         {"gold_label", r.gold_label},
         {"elapsed", r.elapsed_seconds},
         {"tokens", r.tokens},
         {"transcripts", r.transcript_ref}};
  if (r.gtv) {
    j["gtv"] = gtv_code(*r.gtv);
  }
  return j;
}

EvaluationRecord record_from_json(const json& j) {
  EvaluationRecord r;
  r.item_id = j.at("item_id").get<std::string>();
  r.mode = eval_mode_from_string(j.at("mode").get<std::string>());
  if (j.contains("gtv")) {
    r.gtv = gtv_from_code(j.at("gtv").get<std::string>());
  }
  const std::string projected = j.at("projected").get<std::string>();
  r.projected = truth_from_code(projected.at(0));
  r.gold_label = j.at("gold_label").get<bool>();
  r.elapsed_seconds = j.value("elapsed", 0.0);
  r.tokens = j.value("tokens", 0L);
  r.transcript_ref = j.value("transcripts", "");
  return r;
}

}  // namespace

void save_records(const std::vector<EvaluationRecord>& records,
                  const std::filesystem::path& file) {
  std::ofstream out(file);
  if (!out) {
    throw CacheIoError("cannot write records file: " + file.string());
  }
  for (const auto& r : records) {
    out << record_to_json(r).dump() << '\n';
  }
  if (!out) {
    throw CacheIoError("failed writing records file: " + file.string());
  }
}

std::vector<EvaluationRecord> load_records(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) {
    throw DatasetError("cannot open records file: " + file.string());
  }
  std::vector<EvaluationRecord> records;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) {
      continue;
    }
    json j = json::parse(line, nullptr, false);
    if (j.is_discarded()) {
      throw DatasetError("records " + file.string() + " line " + std::to_string(lineno) +
                             ": invalid JSON",
                         lineno);
    }
    try {
      records.push_back(record_from_json(j));
    } catch (const json::exception& e) {
      throw DatasetError("records " + file.string() + " line " + std::to_string(lineno) + ": " +
                             e.what(),
                         lineno);
    }
  }
  return records;
}

namespace {

EvaluationRecord evaluate_bilateral_item(const QAItem& item, const JudgeConfig& cfg,
                                         ChatBackend& backend, ValuationCache* cache,
                                         bool strict_keys) {
  EvaluationRecord record;
  record.item_id = item.id;
  record.mode = EvalMode::Bilateral;
  record.gold_label = item.gold_label;

  std::string key = qa_cache_key(item);
  if (strict_keys) {
    key += "#" + config_fingerprint(cfg);
  }
  record.transcript_ref = cache ? key : "";

  if (cache) {
    if (auto hit = cache->find(key)) {
      record.gtv = hit->value;
      record.projected = project(hit->value);
      for (const auto& t : transcripts_from_text(hit->verification_transcript)) {
        record.elapsed_seconds += t.latency_seconds;
        record.tokens += t.token_count;
      }
      for (const auto& t : transcripts_from_text(hit->refutation_transcript)) {
        record.elapsed_seconds += t.latency_seconds;
        record.tokens += t.token_count;
      }
      return record;
    }
  }

  BilateralOutcome outcome = zeta(cfg, backend, item);
  Gtv value = outcome.value;
  if (cache) {
    CacheEntry entry{outcome.value, transcripts_to_text(outcome.verification),
                     transcripts_to_text(outcome.refutation), iso8601_utc_now(),
                     config_fingerprint(cfg)};
    value = cache->put(key, std::move(entry)).stored.value;
  }
  record.gtv = value;
  record.projected = project(value);
  record.elapsed_seconds = outcome.elapsed_seconds();
  record.tokens = outcome.total_tokens();
  return record;
}

EvaluationRecord evaluate_unilateral_item(const QAItem& item, const JudgeConfig& cfg,
                                          ChatBackend& backend) {
  EvaluationRecord record;
  record.item_id = item.id;
  record.mode = EvalMode::Unilateral;
  record.gold_label = item.gold_label;
  UnilateralOutcome outcome = unilateral(cfg, backend, item);
  record.projected = outcome.value;
  record.elapsed_seconds = outcome.elapsed_seconds();
  record.tokens = outcome.total_tokens();
  return record;
}

}  // namespace

std::vector<EvaluationRecord> run_evaluation(const std::vector<QAItem>& items,
                                             const JudgeConfig& cfg, ChatBackend& backend,
                                             ValuationCache* cache, const RunOptions& options) {
  cfg.validate();
  std::vector<EvaluationRecord> records(items.size());

  auto evaluate_one = [&](std::size_t index) {
    try {
      if (options.mode == EvalMode::Bilateral) {
        records[index] = evaluate_bilateral_item(items[index], cfg, backend, cache,
                                                 options.strict_cache_keys);
      } else {
        records[index] = evaluate_unilateral_item(items[index], cfg, backend);
      }
    } catch (const ConfigError&) {
      throw;  // configuration problems abort the run
    } catch (const Error& e) {
      // Anything else degrades this item to an abstention and the run
      // continues.
      std::cerr << "warning: item " << items[index].id << " failed: " << e.what() << '\n';
      EvaluationRecord& record = records[index];
      record.item_id = items[index].id;
      record.mode = options.mode;
      record.gold_label = items[index].gold_label;
      record.projected = Truth::Undefined;
      if (options.mode == EvalMode::Bilateral) {
        record.gtv = Gtv{Truth::Undefined, Truth::Undefined};
      }
    }
  };

  const int workers = std::max(1, options.concurrency);
  if (workers == 1) {
    for (std::size_t i = 0; i < items.size(); ++i) {
      evaluate_one(i);
    }
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        while (true) {
          const std::size_t i = next.fetch_add(1);
          if (i >= items.size()) {
            return;
          }
          evaluate_one(i);
        }
      });
    }
    for (auto& thread : pool) {
      thread.join();
    }
  }
  return records;
}

namespace {

struct ClassCounts {
  long tp = 0;
  long fp = 0;
  long fn = 0;
  long gold = 0;
};

double f1_from_counts(const ClassCounts& c) {
  const double precision = (c.tp + c.fp) > 0 ? static_cast<double>(c.tp) / (c.tp + c.fp) : 0.0;
  const double recall = (c.tp + c.fn) > 0 ? static_cast<double>(c.tp) / (c.tp + c.fn) : 0.0;
  if (precision + recall == 0.0) {
    return 0.0;
  }
  return 2.0 * precision * recall / (precision + recall);
}

}  // namespace

double macro_f1_given_abstention(std::span<const EvaluationRecord> records) {
  ClassCounts pos;  // gold-true class, predicted by projected == t
  ClassCounts neg;  // gold-false class, predicted by projected == f
  for (const auto& r : records) {
    if (r.projected == Truth::Undefined) {
      continue;
    }
    const bool predicted_true = r.projected == Truth::True;
    if (r.gold_label) {
      ++pos.gold;
      predicted_true ? ++pos.tp : ++pos.fn;
      if (!predicted_true) {
        ++neg.fp;
      }
    } else {
      ++neg.gold;
      predicted_true ? ++neg.fn : ++neg.tp;
      if (predicted_true) {
        ++pos.fp;
      }
    }
  }
  if (pos.gold == 0 || neg.gold == 0) {
    throw UndefinedMetricError(
        "macro F1 undefined: a class has no gold instances among non-abstained records "
        "(gold-true: " +
        std::to_string(pos.gold) + ", gold-false: " + std::to_string(neg.gold) + ")");
  }
  return (f1_from_counts(pos) + f1_from_counts(neg)) / 2.0;
}

double coverage(std::span<const EvaluationRecord> records) {
  if (records.empty()) {
    throw EmptyRecordsError("coverage is undefined on an empty record set");
  }
  std::size_t answered = 0;
  for (const auto& r : records) {
    if (r.projected != Truth::Undefined) {
      ++answered;
    }
  }
  return static_cast<double>(answered) / static_cast<double>(records.size());
}

std::map<std::string, double> truth_value_distribution(
    std::span<const EvaluationRecord> records) {
  if (records.empty()) {
    throw EmptyRecordsError("truth value distribution is undefined on an empty record set");
  }
  std::map<std::string, double> dist;
  for (const Gtv& value : all_gtvs()) {
    dist[gtv_code(value)] = 0.0;
  }
  for (const auto& r : records) {
    if (!r.gtv) {
      throw EmptyRecordsError("truth value distribution requires bilateral records; record " +
                              r.item_id + " has no pair");
    }
    dist[gtv_code(*r.gtv)] += 1.0;
  }
  for (auto& [code, count] : dist) {
    count /= static_cast<double>(records.size());
  }
  return dist;
}

std::map<std::string, double> collapse_distribution(const std::map<std::string, double>& dist) {
  std::map<std::string, double> out{{"tt", 0.0}, {"tf", 0.0}, {"ft", 0.0}, {"ff", 0.0},
                                    {"other", 0.0}};
  for (const auto& [code, fraction] : dist) {
    if (out.count(code) > 0 && code != "other") {
      out[code] += fraction;
    } else {
      out["other"] += fraction;
    }
  }
  return out;
}

double mean_elapsed(std::span<const EvaluationRecord> records) {
  if (records.empty()) {
    throw EmptyRecordsError("mean time is undefined on an empty record set");
  }
  double total = 0.0;
  for (const auto& r : records) {
    total += r.elapsed_seconds;
  }
  return total / static_cast<double>(records.size());
}

double mean_tokens(std::span<const EvaluationRecord> records) {
  if (records.empty()) {
    throw EmptyRecordsError("mean tokens is undefined on an empty record set");
  }
  double total = 0.0;
  for (const auto& r : records) {
    total += static_cast<double>(r.tokens);
  }
  return total / static_cast<double>(records.size());
}

BootstrapResult bootstrap_se(std::span<const EvaluationRecord> records, const MetricFn& metric,
                             int n_resamples, int subsample_size, std::uint64_t seed) {
  if (records.empty()) {
    throw EmptyRecordsError("bootstrap is undefined on an empty record set");
  }
  if (n_resamples < 1 || subsample_size < 1) {
    throw ConfigError("bootstrap requires n_resamples >= 1 and subsample_size >= 1");
  }
  std::mt19937_64 rng(seed);
  std::vector<double> values;
  values.reserve(static_cast<std::size_t>(n_resamples));
  std::vector<EvaluationRecord> draw(static_cast<std::size_t>(subsample_size));
  std::size_t skipped = 0;
  for (int i = 0; i < n_resamples; ++i) {
    for (int j = 0; j < subsample_size; ++j) {
      draw[static_cast<std::size_t>(j)] = records[rng() % records.size()];
    }
    try {
      values.push_back(metric(draw));
    } catch (const UndefinedMetricError&) {
      ++skipped;
    }
  }
  if (values.empty()) {
    throw UndefinedMetricError("metric undefined on every bootstrap draw (" +
                               std::to_string(skipped) + " skipped)");
  }
  double mean = 0.0;
  for (double v : values) {
    mean += v;
  }
  mean /= static_cast<double>(values.size());
  double variance = 0.0;
  for (double v : values) {
    variance += (v - mean) * (v - mean);
  }
  const double se =
      values.size() > 1 ? std::sqrt(variance / static_cast<double>(values.size() - 1)) : 0.0;
  return BootstrapResult{mean, se, skipped};
}

std::optional<std::vector<std::string>> extract_negative_answers(const std::string& raw) {
  // Find the first balanced JSON object and parse it; models often wrap the
  // structure in prose.
  for (std::size_t start = raw.find('{'); start != std::string::npos;
       start = raw.find('{', start + 1)) {
    int depth = 0;
    bool in_string = false;
    bool escaped = false;
    for (std::size_t i = start; i < raw.size(); ++i) {
      const char c = raw[i];
      if (in_string) {
        if (escaped) {
          escaped = false;
        } else if (c == '\\') {
          escaped = true;
        } else if (c == '"') {
          in_string = false;
        }
        continue;
      }
      if (c == '"') {
        in_string = true;
      } else if (c == '{') {
        ++depth;
      } else if (c == '}') {
        --depth;
        if (depth == 0) {
          json j = json::parse(raw.substr(start, i - start + 1), nullptr, false);
          if (j.is_object() && j.contains("negative_answers") && j["negative_answers"].is_array()) {
            std::vector<std::string> answers;
            for (const auto& a : j["negative_answers"]) {
              if (!a.is_string()) {
                return std::nullopt;
              }
              answers.push_back(a.get<std::string>());
            }
            if (answers.size() == 3) {
              return answers;
            }
          }
          break;  // first balanced object decides; move to next '{' otherwise
        }
      }
    }
  }
  return std::nullopt;
}

std::vector<QAItem> generate_negatives(const std::vector<QAItem>& items, const JudgeConfig& cfg,
                                       ChatBackend& backend) {
  cfg.validate();
  std::vector<QAItem> negatives;
  for (const auto& item : items) {
    const std::string prompt = negative_generation_template() + "\n\nQuestion: " + item.question +
                               "\nAnswer: " + item.answer + "\n";
    std::string raw;
    try {
      raw = complete_with_retries(backend, prompt, cfg.temperature, cfg.max_retries).text;
    } catch (const BackendError& e) {
      std::cerr << "warning: negative generation for item " << item.id << " failed: " << e.what()
                << "; skipping\n";
      continue;
    }
    auto answers = extract_negative_answers(raw);
    if (!answers) {
      std::cerr << "warning: negative generation for item " << item.id
                << " returned a malformed response; skipping\n";
      continue;
    }
    for (std::size_t i = 0; i < answers->size(); ++i) {
      QAItem negative;
      negative.id = item.id + "-neg" + std::to_string(i + 1);
      negative.question = item.question;
      negative.answer = (*answers)[i];
      negative.gold_label = false;
      negative.source = item.source;
      negatives.push_back(std::move(negative));
    }
  }
  return negatives;
}

}  // namespace bilateral
