#include <doctest.h>

#include <atomic>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <random>
#include <thread>

#include "bilateral/errors.hpp"
#include "bilateral/evaluate.hpp"
#include "bilateral/parser.hpp"
#include "bilateral/validity.hpp"
#include "support/generators.hpp"

using namespace bilateral;

namespace {

Gtv g(const char* code) { return gtv_from_code(code); }

std::filesystem::path temp_path(const char* stem) {
  static std::atomic<int> counter{0};
  return std::filesystem::temp_directory_path() /
         (std::string(stem) + std::to_string(counter.fetch_add(1)) + ".jsonl");
}

/// Returns a different value on every invocation; the cache must mask it
/// after the first call per atom.
class UnstableEvaluator final : public AtomEvaluator {
 public:
  explicit UnstableEvaluator(std::uint64_t seed) : rng_(seed) {}
  EvaluatedAtom evaluate_atom(const Formula&) override {
    std::lock_guard lock(mutex_);
    ++calls_;
    return EvaluatedAtom{testgen::random_gtv(rng_), "v", "r", "moody"};
  }
  long calls() const {
    std::lock_guard lock(mutex_);
    return calls_;
  }

 private:
  mutable std::mutex mutex_;
  std::mt19937_64 rng_;
  long calls_ = 0;
};

class ThrowingEvaluator final : public AtomEvaluator {
 public:
  EvaluatedAtom evaluate_atom(const Formula& atom) override {
    throw EvaluatorError("evaluator unavailable for " + format_formula(atom));
  }
};

Signature penguin_signature() {
  Signature sig;
  sig.constants = {"penguin"};
  sig.relations = {{"bird", 1}, {"flies", 1}};
  return sig;
}

}  // namespace

TEST_CASE("standard interpretation is a table lookup with a totality contract") {
  StandardInterpretation interp(penguin_signature(), {{"bird(penguin)", g("tf")}});
  CHECK(interp.atom_value(*Formula::atom("bird", {"penguin"})) == g("tf"));
  CHECK_THROWS_AS(interp.atom_value(*Formula::atom("flies", {"penguin"})), MissingAtomError);
}

TEST_CASE("cache put is first-write-wins") {
  ValuationCache cache;
  auto first = cache.put("p(a)", CacheEntry{g("tf"), "", "", "2025-01-01T00:00:00Z", ""});
  CHECK_FALSE(first.collided);
  CHECK(first.stored.value == g("tf"));

  auto second = cache.put("p(a)", CacheEntry{g("ft"), "", "", "2025-01-02T00:00:00Z", ""});
  CHECK(second.collided);
  CHECK(second.stored.value == g("tf"));  // the original is retained
  CHECK(cache.size() == 1);
}

TEST_CASE("persistent cache reloads identical entries and keeps deduplicating") {
  const auto path = temp_path("cache");
  CacheEntry entry{g("tt"), "saw it", "could not refute", "2025-01-01T00:00:00Z", "abcd"};
  {
    ValuationCache cache(path);
    cache.put("p(a)", entry);
    cache.put("q(a)", CacheEntry{g("ff"), "", "", "2025-01-01T00:00:01Z", "abcd"});
  }
  {
    ValuationCache reloaded(path);
    REQUIRE(reloaded.size() == 2);
    auto hit = reloaded.find("p(a)");
    REQUIRE(hit.has_value());
    CHECK(*hit == entry);

    // Dedup survives the round trip.
    auto outcome = reloaded.put("p(a)", CacheEntry{g("ee"), "", "", "", ""});
    CHECK(outcome.collided);
    CHECK(outcome.stored.value == g("tt"));
  }
  std::filesystem::remove(path);
}

TEST_CASE("replay keeps the earliest record when lines conflict") {
  const auto path = temp_path("conflict");
  {
    std::ofstream out(path);
    out << R"({"key":"p(a)","gtv":"tf","verification":"","refutation":"","timestamp":"","fingerprint":""})"
        << '\n';
    out << R"({"key":"p(a)","gtv":"ft","verification":"","refutation":"","timestamp":"","fingerprint":""})"
        << '\n';
    out << "{\"torn\":" << '\n';  // truncated write survivor
  }
  ValuationCache cache(path);
  CHECK(cache.size() == 1);
  CHECK(cache.find("p(a)")->value == g("tf"));
  std::filesystem::remove(path);
}

TEST_CASE("grounded interpretation consults the cache before the evaluator") {
  const Signature sig = penguin_signature();
  auto cache = std::make_shared<ValuationCache>();
  cache->put("flies(penguin)", CacheEntry{g("ft"), "", "", "", ""});

  auto evaluator = std::make_shared<UnstableEvaluator>(1);
  GroundedInterpretation interp(sig, evaluator, cache);

  CHECK(interp.atom_value(*Formula::atom("flies", {"penguin"})) == g("ft"));
  CHECK(evaluator->calls() == 0);

  const Gtv fresh = interp.atom_value(*Formula::atom("bird", {"penguin"}));
  CHECK(evaluator->calls() == 1);
  CHECK(interp.atom_value(*Formula::atom("bird", {"penguin"})) == fresh);
  CHECK(evaluator->calls() == 1);
}

TEST_CASE("evaluator failures propagate and cache nothing") {
  const Signature sig = penguin_signature();
  auto cache = std::make_shared<ValuationCache>();
  GroundedInterpretation interp(sig, std::make_shared<ThrowingEvaluator>(), cache);
  CHECK_THROWS_AS(interp.atom_value(*Formula::atom("bird", {"penguin"})), EvaluatorError);
  CHECK(cache->size() == 0);

  GroundedInterpretation cache_only(sig, nullptr, cache);
  CHECK_THROWS_AS(cache_only.atom_value(*Formula::atom("bird", {"penguin"})), EvaluatorError);
}

TEST_CASE("seeding a cache from a standard interpretation") {
  Signature sig;
  sig.constants = {"a"};
  sig.relations = {{"p", 1}, {"q", 1}};
  StandardInterpretation interp(sig, {{"p(a)", g("tt")}, {"q(a)", g("ff")}});

  auto cache = seed_cache_from_standard(interp, {Formula::atom("p", {"a"})});
  CHECK(cache->size() == 1);
  CHECK(cache->find("p(a)")->value == g("tt"));

  auto empty = seed_cache_from_standard(interp, {});
  CHECK(empty->size() == 0);

  // A grounded interpretation over the seeded cache agrees without ever
  // invoking an evaluator.
  GroundedInterpretation grounded(sig, nullptr, cache);
  CHECK(grounded.atom_value(*Formula::atom("p", {"a"})) == g("tt"));

  StandardInterpretation missing(sig, {{"p(a)", g("tt")}});
  CHECK_THROWS_AS(seed_cache_from_standard(missing, {Formula::atom("q", {"a"})}),
                  MissingAtomError);
}

TEST_CASE("snapshotting a grounded interpretation back to a table") {
  const Signature sig = penguin_signature();
  auto cache = std::make_shared<ValuationCache>();
  cache->put("bird(penguin)", CacheEntry{g("tf"), "", "", "", ""});
  cache->put("flies(penguin)", CacheEntry{g("ft"), "", "", "", ""});
  GroundedInterpretation grounded(sig, nullptr, cache);

  StandardInterpretation snapshot = snapshot_to_standard(grounded);
  CHECK(snapshot.table().size() == 2);

  auto universal = parse_formula("[all x bird(x)] flies(x)", sig);
  CHECK(evaluate(snapshot, *universal) == g("ft"));

  GroundedInterpretation empty(sig, nullptr, std::make_shared<ValuationCache>());
  CHECK(snapshot_to_standard(empty).table().empty());
}

TEST_CASE("stability: repeated lookups return one value per atom despite an unstable evaluator") {
  const auto path = temp_path("stability");
  Signature sig;
  sig.constants = {"a", "b", "c"};
  sig.relations = {{"p", 1}, {"q", 1}};

  std::mt19937_64 rng(99);
  std::map<std::string, Gtv> first_seen;
  auto all_atoms = [&]() {
    std::vector<FormulaPtr> atoms;
    for (const char* rel : {"p", "q"}) {
      for (const auto& c : sig.constants) {
        atoms.push_back(Formula::atom(rel, {c}));
      }
    }
    return atoms;
  }();

  for (int round = 0; round < 3; ++round) {
    auto cache = std::make_shared<ValuationCache>(path);
    GroundedInterpretation interp(sig, std::make_shared<UnstableEvaluator>(round + 1), cache);
    for (int i = 0; i < 100; ++i) {
      const auto& atom = all_atoms[rng() % all_atoms.size()];
      const std::string key = format_formula(*atom);
      const Gtv value = interp.atom_value(*atom);
      auto [it, inserted] = first_seen.emplace(key, value);
      CHECK(it->second == value);
    }
  }
  std::filesystem::remove(path);
}

TEST_CASE("concurrent misses resolve to one stored value") {
  Signature sig;
  sig.constants = {"a"};
  sig.relations = {{"p", 1}};
  auto cache = std::make_shared<ValuationCache>();
  auto evaluator = std::make_shared<UnstableEvaluator>(5);
  GroundedInterpretation interp(sig, evaluator, cache);

  constexpr int kThreads = 8;
  std::vector<Gtv> results(kThreads);
  std::vector<std::thread> threads;
  for (int i = 0; i < kThreads; ++i) {
    threads.emplace_back(
        [&, i] { results[i] = interp.atom_value(*Formula::atom("p", {"a"})); });
  }
  for (auto& t : threads) {
    t.join();
  }
  const Gtv stored = cache->find("p(a)")->value;
  for (const Gtv& value : results) {
    CHECK(value == stored);
  }
  CHECK(cache->size() == 1);
}

TEST_CASE("standard and seeded-grounded evaluation agree on random formulas") {
  const Signature sig = testgen::small_signature();
  std::mt19937_64 rng(42);
  for (int i = 0; i < 200; ++i) {
    StandardInterpretation standard(sig, testgen::random_table(rng, sig));
    auto cache = seed_cache_from_standard(standard);
    GroundedInterpretation grounded(sig, nullptr, cache);
    auto f = testgen::random_closed_formula(rng, sig, 4);
    CAPTURE(format_formula(*f));
    CHECK(evaluate(standard, *f) == evaluate(grounded, *f));
  }
}

TEST_CASE("validity outcomes are unchanged when atoms go through a grounded interpretation") {
  Signature sig;
  sig.constants = {"a"};
  sig.relations = {{"p", 1}, {"q", 1}};
  auto p = parse_formula("p(a)", sig);
  auto not_p = parse_formula("~p(a)", sig);
  auto q = parse_formula("q(a)", sig);

  auto identity = check_validity({p}, p, sig);
  CHECK(identity.valid);

  auto explosion = check_validity({p, not_p}, q, sig);
  REQUIRE_FALSE(explosion.valid);

  // Lemma 2/3 corollary at this scale: replaying the countermodel through a
  // grounded interpretation seeded from it preserves every verdict.
  StandardInterpretation witness(sig, explosion.countermodel);
  GroundedInterpretation grounded(sig, nullptr, seed_cache_from_standard(witness));
  CHECK(evaluate(grounded, *p).verification == Truth::True);
  CHECK(evaluate(grounded, *not_p).verification == Truth::True);
  CHECK(evaluate(grounded, *q).verification != Truth::True);
}

TEST_CASE("interpretation tables load from both file layouts") {
  const auto flat = temp_path("flat_tbl");
  {
    std::ofstream out(flat);
    out << R"({"bird(penguin)": "tf", "flies(penguin)": "ft"})";
  }
  auto interp = StandardInterpretation::load(flat);
  CHECK(interp.signature().constants == std::vector<std::string>{"penguin"});
  CHECK(interp.atom_value(*Formula::atom("bird", {"penguin"})) == g("tf"));
  std::filesystem::remove(flat);

  const auto wrapped = temp_path("wrapped_tbl");
  {
    std::ofstream out(wrapped);
    out << R"({"atoms": {"p(a)": "ee"}, "constants": ["a", "b"]})";
  }
  auto extended = StandardInterpretation::load(wrapped);
  CHECK(extended.signature().constants == std::vector<std::string>{"a", "b"});
  std::filesystem::remove(wrapped);
}
