#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "bilateral/interpretation.hpp"
#include "bilateral/judge.hpp"
#include "bilateral/truth.hpp"

namespace bilateral {

enum class EvalMode { Bilateral, Unilateral };

std::string to_string(EvalMode mode);
EvalMode eval_mode_from_string(std::string_view s);

/// One benchmark item's outcome. Bilateral records carry the full pair and
/// projected = project(gtv); unilateral records carry the direct verdict.
struct EvaluationRecord {
  std::string item_id;
  EvalMode mode = EvalMode::Bilateral;
  std::optional<Gtv> gtv;
  Truth projected = Truth::Undefined;
  bool gold_label = false;
  double elapsed_seconds = 0.0;
  long tokens = 0;
  std::string transcript_ref;  // cache key holding the transcripts, if any

  bool operator==(const EvaluationRecord&) const = default;
};

/// Line-delimited JSON dataset with fields id, question, answer, gold_label,
/// source. Duplicate ids and malformed lines are rejected with the line
/// number.
std::vector<QAItem> load_dataset(const std::filesystem::path& file);

void save_records(const std::vector<EvaluationRecord>& records,
                  const std::filesystem::path& file);
std::vector<EvaluationRecord> load_records(const std::filesystem::path& file);

struct RunOptions {
  EvalMode mode = EvalMode::Bilateral;
  /// Items evaluated concurrently; record order stays the dataset order.
  int concurrency = 1;
  /// Append the judge fingerprint to cache keys (multi-model experiments).
  bool strict_cache_keys = false;
};

/// Evaluates every item, one record each. Bilateral mode is cache-mediated:
/// a hit replays the stored outcome without touching the backend, a miss
/// runs zeta and stores the result first-write-wins, so reruns over the same
/// cache issue no backend calls and reproduce identical records. Per-item
/// failures degrade to Undefined coordinates and the run continues; only
/// configuration errors abort. A null cache runs uncached.
std::vector<EvaluationRecord> run_evaluation(const std::vector<QAItem>& items,
                                             const JudgeConfig& cfg, ChatBackend& backend,
                                             ValuationCache* cache, const RunOptions& options = {});

/// Macro F1 over the non-abstained records (projected ∈ {t,f}): the
/// unweighted mean of the per-class F1 for gold-true and gold-false, with
/// projected t predicting true and projected f predicting false. Empty
/// precision/recall denominators score 0; a class with no gold instances
/// among the non-abstained records makes the metric undefined
/// (UndefinedMetricError).
double macro_f1_given_abstention(std::span<const EvaluationRecord> records);

/// Fraction of records with a defined projection.
double coverage(std::span<const EvaluationRecord> records);

/// Empirical frequency of each of the 9 pairs over bilateral records, keyed
/// by two-letter code; every code is present and the values sum to 1.
std::map<std::string, double> truth_value_distribution(std::span<const EvaluationRecord> records);

/// The reported four-column collapse: ⟨t,t⟩, ⟨t,f⟩, ⟨f,t⟩, ⟨f,f⟩ plus an
/// "other" bucket for any pair with an undefined coordinate.
std::map<std::string, double> collapse_distribution(const std::map<std::string, double>& dist);

double mean_elapsed(std::span<const EvaluationRecord> records);
double mean_tokens(std::span<const EvaluationRecord> records);

struct BootstrapResult {
  double mean = 0.0;
  double se = 0.0;
  std::size_t skipped = 0;  // draws where the metric was undefined
};

using MetricFn = std::function<double(std::span<const EvaluationRecord>)>;

/// Bootstrap standard error: n_resamples subsamples of subsample_size drawn
/// uniformly with replacement (mt19937_64 seeded, indices via modulo), the
/// metric computed on each; returns the mean and sample standard deviation
/// of the resample values. Draws where the metric is undefined are skipped
/// and counted; every draw undefined is an error.
BootstrapResult bootstrap_se(std::span<const EvaluationRecord> records, const MetricFn& metric,
                             int n_resamples = 1000, int subsample_size = 100,
                             std::uint64_t seed = 0);

/// Requests three plausible wrong answers per item (structured
/// "negative_answers" response, exactly 3 strings) and emits one gold-false
/// item per wrong answer (ids suffixed -neg1..3). Items whose response is
/// malformed are skipped with a warning; prose around the JSON object is
/// tolerated by extracting the first balanced object.
std::vector<QAItem> generate_negatives(const std::vector<QAItem>& items, const JudgeConfig& cfg,
                                       ChatBackend& backend);

/// Lenient extraction used by generate_negatives; empty optional when no
/// parsable object with the required shape exists.
std::optional<std::vector<std::string>> extract_negative_answers(const std::string& raw);

}  // namespace bilateral
