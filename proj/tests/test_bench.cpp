#include <doctest.h>

#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>

#include "bilateral/bench.hpp"
#include "bilateral/errors.hpp"
#include "bilateral/report.hpp"

using namespace bilateral;

namespace {

Gtv g(const char* code) { return gtv_from_code(code); }

std::filesystem::path temp_file(const char* stem, const char* ext = ".jsonl") {
  static std::atomic<int> counter{0};
  return std::filesystem::temp_directory_path() /
         (std::string(stem) + std::to_string(counter.fetch_add(1)) + ext);
}

EvaluationRecord bilateral_record(const std::string& id, const char* gtv_code_str, bool gold) {
  EvaluationRecord r;
  r.item_id = id;
  r.mode = EvalMode::Bilateral;
  r.gtv = g(gtv_code_str);
  r.projected = project(*r.gtv);
  r.gold_label = gold;
  return r;
}

/// The spec's 4-record hand fixture: gold [1,1,0,0], projected [t,f,f,e].
std::vector<EvaluationRecord> hand_fixture() {
  return {bilateral_record("r1", "tf", true), bilateral_record("r2", "ft", true),
          bilateral_record("r3", "ft", false), bilateral_record("r4", "tt", false)};
}

/// Brute-force confusion-matrix computation, written independently of the
/// bench implementation (direct counting, explicit formulas).
double oracle_macro_f1(const std::vector<EvaluationRecord>& records) {
  int tp_true = 0, fp_true = 0, fn_true = 0, gold_true = 0;
  int tp_false = 0, fp_false = 0, fn_false = 0, gold_false = 0;
  for (const auto& r : records) {
    if (r.projected == Truth::Undefined) {
      continue;
    }
    if (r.gold_label) {
      ++gold_true;
      if (r.projected == Truth::True) {
        ++tp_true;
      } else {
        ++fn_true;
        ++fp_false;
      }
    } else {
      ++gold_false;
      if (r.projected == Truth::False) {
        ++tp_false;
      } else {
        ++fn_false;
        ++fp_true;
      }
    }
  }
  if (gold_true == 0 || gold_false == 0) {
    throw UndefinedMetricError("oracle: class missing");
  }
  auto f1 = [](int tp, int fp, int fn) {
    const double p = (tp + fp) > 0 ? double(tp) / (tp + fp) : 0.0;
    const double r = (tp + fn) > 0 ? double(tp) / (tp + fn) : 0.0;
    return (p + r) > 0 ? 2.0 * p * r / (p + r) : 0.0;
  };
  return (f1(tp_true, fp_true, fn_true) + f1(tp_false, fp_false, fn_false)) / 2.0;
}

std::shared_ptr<MockBackend> constant_backend(const char* verification, const char* refutation,
                                              const char* uni) {
  MockBackend::Responses fallback;
  fallback.verification = verification;
  fallback.refutation = refutation;
  fallback.unilateral = uni;
  return std::make_shared<MockBackend>(std::vector<MockBackend::Rule>{}, fallback);
}

JudgeConfig quick_config() {
  JudgeConfig cfg;
  cfg.samples_per_side = 1;
  cfg.max_retries = 0;
  return cfg;
}

std::vector<QAItem> tiny_items(int n) {
  std::vector<QAItem> items;
  for (int i = 0; i < n; ++i) {
    QAItem item;
    item.id = "item-" + std::to_string(i);
    item.question = "Question " + std::to_string(i) + "?";
    item.answer = "Answer " + std::to_string(i);
    item.gold_label = i % 2 == 0;
    item.source = "test";
    items.push_back(std::move(item));
  }
  return items;
}

}  // namespace

TEST_CASE("dataset loading validates lines and ids") {
  const auto path = temp_file("dataset");
  {
    std::ofstream out(path);
    for (int i = 0; i < 6; ++i) {
      out << R"({"id":"q)" << i << R"(","question":"Q)" << i << R"(?","answer":"A)" << i
          << R"(","gold_label":)" << (i % 2 == 0 ? "true" : "false") << R"(,"source":"fix"})"
          << '\n';
    }
  }
  auto items = load_dataset(path);
  CHECK(items.size() == 6);
  CHECK(items[0].id == "q0");
  CHECK(items[1].gold_label == false);
  std::filesystem::remove(path);

  const auto missing_field = temp_file("dataset_bad");
  {
    std::ofstream out(missing_field);
    out << R"({"id":"a","question":"Q?","answer":"A","gold_label":true})" << '\n';
    out << R"({"id":"b","question":"Q?","answer":"A"})" << '\n';
  }
  try {
    load_dataset(missing_field);
    FAIL("expected a dataset error");
  } catch (const DatasetError& e) {
    CHECK(e.line() == 2);
  }
  std::filesystem::remove(missing_field);

  const auto duplicate = temp_file("dataset_dup");
  {
    std::ofstream out(duplicate);
    out << R"({"id":"a","question":"Q?","answer":"A","gold_label":true})" << '\n';
    out << R"({"id":"a","question":"Q2?","answer":"A2","gold_label":false})" << '\n';
  }
  CHECK_THROWS_AS(load_dataset(duplicate), DatasetError);
  std::filesystem::remove(duplicate);
}

TEST_CASE("run_evaluation produces one record per item") {
  auto backend = constant_backend("VERIFIED", "CANNOT REFUTE", "TRUE");
  auto items = tiny_items(3);
  auto records = run_evaluation(items, quick_config(), *backend, nullptr, {});
  REQUIRE(records.size() == 3);
  for (std::size_t i = 0; i < records.size(); ++i) {
    CHECK(records[i].item_id == items[i].id);
    CHECK(records[i].gtv == g("tf"));
    CHECK(records[i].projected == Truth::True);
    CHECK(records[i].tokens > 0);
  }
}

TEST_CASE("reruns over the same cache issue no backend calls and match exactly") {
  auto backend = constant_backend("VERIFIED", "CANNOT REFUTE", "TRUE");
  auto items = tiny_items(4);
  ValuationCache cache;

  auto first = run_evaluation(items, quick_config(), *backend, &cache, {});
  const long calls_after_first = backend->call_count();
  CHECK(calls_after_first == 8);  // 2 sides x 1 sample x 4 items

  auto second = run_evaluation(items, quick_config(), *backend, &cache, {});
  CHECK(backend->call_count() == calls_after_first);
  CHECK(second == first);

  auto third = run_evaluation(items, quick_config(), *backend, &cache, {});
  CHECK(third == second);
}

TEST_CASE("failing items degrade to abstention and the run continues") {
  MockBackend::Responses failing;
  failing.fail = true;
  auto backend = std::make_shared<MockBackend>(std::vector<MockBackend::Rule>{}, failing);
  auto items = tiny_items(2);
  auto records = run_evaluation(items, quick_config(), *backend, nullptr, {});
  REQUIRE(records.size() == 2);
  for (const auto& r : records) {
    CHECK(r.gtv == g("ee"));
    CHECK(r.projected == Truth::Undefined);
  }
}

TEST_CASE("unilateral mode records direct verdicts with full coverage") {
  auto backend = constant_backend("", "", "TRUE");
  auto items = tiny_items(5);
  RunOptions options;
  options.mode = EvalMode::Unilateral;
  auto records = run_evaluation(items, quick_config(), *backend, nullptr, options);
  REQUIRE(records.size() == 5);
  for (const auto& r : records) {
    CHECK(r.mode == EvalMode::Unilateral);
    CHECK_FALSE(r.gtv.has_value());
    CHECK(r.projected == Truth::True);
  }
  CHECK(coverage(records) == 1.0);
}

TEST_CASE("concurrent runs keep dataset order and values") {
  auto backend = constant_backend("VERIFIED", "CANNOT REFUTE", "TRUE");
  auto items = tiny_items(16);
  RunOptions options;
  options.concurrency = 4;
  auto records = run_evaluation(items, quick_config(), *backend, nullptr, options);
  auto sequential = run_evaluation(items, quick_config(), *backend, nullptr, {});
  REQUIRE(records.size() == sequential.size());
  for (std::size_t i = 0; i < records.size(); ++i) {
    CHECK(records[i].item_id == sequential[i].item_id);
    CHECK(records[i].gtv == sequential[i].gtv);
  }
}

TEST_CASE("macro F1 on the hand fixture is exactly two thirds") {
  auto records = hand_fixture();
  CHECK(macro_f1_given_abstention(records) == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
  CHECK(coverage(records) == 0.75);
}

TEST_CASE("macro F1 is 1.0 when every non-abstained verdict is right") {
  std::vector<EvaluationRecord> records{
      bilateral_record("a", "tf", true), bilateral_record("b", "ft", false),
      bilateral_record("c", "tf", true), bilateral_record("d", "ft", false)};
  CHECK(macro_f1_given_abstention(records) == 1.0);
}

TEST_CASE("macro F1 is undefined with no support") {
  std::vector<EvaluationRecord> all_abstain{bilateral_record("a", "tt", true),
                                            bilateral_record("b", "ff", false)};
  CHECK_THROWS_AS(macro_f1_given_abstention(all_abstain), UndefinedMetricError);

  std::vector<EvaluationRecord> one_class{bilateral_record("a", "tf", true),
                                          bilateral_record("b", "ft", true)};
  CHECK_THROWS_AS(macro_f1_given_abstention(one_class), UndefinedMetricError);
}

TEST_CASE("macro F1 agrees with the confusion-matrix oracle on random record sets") {
  std::mt19937_64 rng(1234);
  int compared = 0;
  for (int set = 0; set < 50; ++set) {
    std::vector<EvaluationRecord> records;
    const int n = 2 + static_cast<int>(rng() % 49);
    for (int i = 0; i < n; ++i) {
      records.push_back(bilateral_record("r" + std::to_string(i),
                                         gtv_code(all_gtvs()[rng() % 9]).c_str(), rng() % 2 == 0));
    }
    bool lhs_defined = true;
    double lhs = 0.0;
    try {
      lhs = macro_f1_given_abstention(records);
    } catch (const UndefinedMetricError&) {
      lhs_defined = false;
    }
    bool rhs_defined = true;
    double rhs = 0.0;
    try {
      rhs = oracle_macro_f1(records);
    } catch (const UndefinedMetricError&) {
      rhs_defined = false;
    }
    REQUIRE(lhs_defined == rhs_defined);
    if (lhs_defined) {
      ++compared;
      CHECK(std::abs(lhs - rhs) <= 1e-12);
    }
  }
  CHECK(compared > 0);
}

TEST_CASE("coverage") {
  std::vector<EvaluationRecord> records{
      bilateral_record("a", "tf", true), bilateral_record("b", "ft", false),
      bilateral_record("c", "tt", true), bilateral_record("d", "ee", false)};
  CHECK(coverage(records) == 0.5);

  std::vector<EvaluationRecord> abstain{bilateral_record("a", "ee", true)};
  CHECK(coverage(abstain) == 0.0);

  CHECK_THROWS_AS(coverage(std::vector<EvaluationRecord>{}), EmptyRecordsError);
}

TEST_CASE("coverage decreases monotonically as verdicts are relabeled to abstention") {
  std::mt19937_64 rng(55);
  std::vector<EvaluationRecord> records;
  for (int i = 0; i < 30; ++i) {
    records.push_back(bilateral_record("r" + std::to_string(i),
                                       gtv_code(all_gtvs()[rng() % 9]).c_str(), rng() % 2 == 0));
  }
  double previous = coverage(records);
  CHECK(previous >= 0.0);
  CHECK(previous <= 1.0);
  for (auto& r : records) {
    if (r.projected != Truth::Undefined) {
      r.gtv = g("ee");
      r.projected = Truth::Undefined;
      const double now = coverage(records);
      CHECK(now <= previous);
      previous = now;
    }
  }
  CHECK(previous == 0.0);
}

TEST_CASE("truth value distribution sums to one and collapses to the four columns") {
  std::vector<EvaluationRecord> records{
      bilateral_record("a", "tt", true), bilateral_record("b", "tf", false),
      bilateral_record("c", "ft", true), bilateral_record("d", "ff", false)};
  auto dist = truth_value_distribution(records);
  CHECK(dist.size() == 9);
  CHECK(dist.at("tt") == 0.25);
  CHECK(dist.at("tf") == 0.25);
  CHECK(dist.at("ft") == 0.25);
  CHECK(dist.at("ff") == 0.25);
  double total = 0.0;
  for (const auto& [code, fraction] : dist) {
    total += fraction;
  }
  CHECK(std::abs(total - 1.0) <= 1e-9);

  auto collapsed = collapse_distribution(dist);
  CHECK(collapsed.at("other") == 0.0);

  std::vector<EvaluationRecord> all_ff{bilateral_record("a", "ff", false),
                                       bilateral_record("b", "ff", false)};
  CHECK(truth_value_distribution(all_ff).at("ff") == 1.0);

  std::vector<EvaluationRecord> with_e{bilateral_record("a", "te", true),
                                       bilateral_record("b", "tf", false)};
  auto partial = collapse_distribution(truth_value_distribution(with_e));
  CHECK(partial.at("other") == 0.5);
}

TEST_CASE("bootstrap is deterministic per seed and zero-variance on constants") {
  std::vector<EvaluationRecord> records;
  for (int i = 0; i < 20; ++i) {
    records.push_back(bilateral_record("r" + std::to_string(i), i % 2 == 0 ? "tf" : "ft",
                                       i % 2 == 0));
  }
  MetricFn cov = [](std::span<const EvaluationRecord> r) { return coverage(r); };
  auto a = bootstrap_se(records, cov, 200, 50, 7);
  auto b = bootstrap_se(records, cov, 200, 50, 7);
  CHECK(a.mean == b.mean);
  CHECK(a.se == b.se);
  CHECK(a.se == 0.0);  // coverage is 1.0 on every draw of this set

  auto c = bootstrap_se(records, cov, 200, 50, 8);
  CHECK(c.mean == a.mean);  // still constant; the seed only permutes draws

  MetricFn f1 = [](std::span<const EvaluationRecord> r) {
    return macro_f1_given_abstention(r);
  };
  auto d = bootstrap_se(records, f1, 200, 50, 7);
  CHECK(d.mean == 1.0);
  CHECK(d.se == 0.0);
}

TEST_CASE("bootstrap skips draws where the metric is undefined") {
  // One lonely gold-false record: many draws miss it entirely.
  std::vector<EvaluationRecord> records;
  for (int i = 0; i < 19; ++i) {
    records.push_back(bilateral_record("t" + std::to_string(i), "tf", true));
  }
  records.push_back(bilateral_record("f0", "ft", false));
  MetricFn f1 = [](std::span<const EvaluationRecord> r) {
    return macro_f1_given_abstention(r);
  };
  auto result = bootstrap_se(records, f1, 300, 5, 11);
  CHECK(result.skipped > 0);
  CHECK(result.skipped < 300);

  std::vector<EvaluationRecord> hopeless{bilateral_record("a", "tf", true)};
  CHECK_THROWS_AS(bootstrap_se(hopeless, f1, 10, 3, 1), UndefinedMetricError);
}

TEST_CASE("records round-trip through the file format") {
  auto records = hand_fixture();
  records[0].transcript_ref = "qa:deadbeef";
  records[0].elapsed_seconds = 1.5;
  records[0].tokens = 42;
  const auto path = temp_file("records");
  save_records(records, path);
  auto loaded = load_records(path);
  CHECK(loaded == records);
  std::filesystem::remove(path);
}

TEST_CASE("negative answer extraction is lenient about surrounding prose") {
  const char* clean = R"({"negative_answers": ["John Adams", "Thomas Jefferson", "Ben Franklin"]})";
  auto answers = extract_negative_answers(clean);
  REQUIRE(answers.has_value());
  CHECK(answers->size() == 3);
  CHECK((*answers)[0] == "John Adams");

  const std::string noisy = "Sure! Here are the wrong answers you asked for:\n" +
                            std::string(clean) + "\nLet me know if you need more.";
  CHECK(extract_negative_answers(noisy).has_value());

  // The template's escaped-brace example format must also survive.
  const std::string doubled = "{{\n  \"negative_answers\": [\"a\", \"b\", \"c\"]\n}}";
  auto from_doubled = extract_negative_answers(doubled);
  REQUIRE(from_doubled.has_value());
  CHECK((*from_doubled)[2] == "c");

  CHECK_FALSE(extract_negative_answers("no structure here").has_value());
  CHECK_FALSE(
      extract_negative_answers(R"({"negative_answers": ["only", "two"]})").has_value());
  CHECK_FALSE(extract_negative_answers(R"({"negative_answers": "not a list"})").has_value());
}

TEST_CASE("negative generation emits three gold-false items per source item") {
  MockBackend::Responses fallback;
  fallback.negative = R"({"negative_answers": ["W1", "W2", "W3"]})";
  auto backend = std::make_shared<MockBackend>(std::vector<MockBackend::Rule>{}, fallback);
  auto items = tiny_items(2);
  auto negatives = generate_negatives(items, quick_config(), *backend);
  REQUIRE(negatives.size() == 6);
  CHECK(negatives[0].id == "item-0-neg1");
  CHECK(negatives[0].question == items[0].question);
  CHECK(negatives[0].answer == "W1");
  CHECK_FALSE(negatives[0].gold_label);

  MockBackend::Responses short_list;
  short_list.negative = R"({"negative_answers": ["only", "two"]})";
  auto bad_backend = std::make_shared<MockBackend>(std::vector<MockBackend::Rule>{}, short_list);
  CHECK(generate_negatives(items, quick_config(), *bad_backend).empty());
}

TEST_CASE("report assembles the table and survives JSON round trip") {
  auto records = hand_fixture();
  MetricsReport report = build_report(records, 100, 4, 3);
  REQUIRE(report.macro_f1.has_value());
  CHECK(*report.macro_f1 == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
  CHECK(report.coverage_value == 0.75);
  CHECK(report.collapsed.at("tt") == 0.25);

  const std::string text = render_report_text(report);
  CHECK(text.find("Macro F1") != std::string::npos);
  CHECK(text.find("0.6667") != std::string::npos);
  CHECK(text.find("tt") != std::string::npos);

  auto j = report_to_json(report);
  CHECK(j.at("macro_f1").get<double>() == doctest::Approx(2.0 / 3.0));
  CHECK(j.at("records").get<std::size_t>() == 4);
}
