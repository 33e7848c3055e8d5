#pragma once

#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <optional>
#include <shared_mutex>
#include <string>
#include <vector>

#include "bilateral/formula.hpp"
#include "bilateral/truth.hpp"

namespace bilateral {

/// Anything that can assign a generalized truth value to a ground atom.
class Interpretation {
 public:
  virtual ~Interpretation() = default;
  virtual const Signature& signature() const = 0;
  /// `atom` must be a ground Atom over the signature. Grounded
  /// interpretations may consult their evaluator, hence non-const.
  virtual Gtv atom_value(const Formula& atom) = 0;
};

/// Table-backed interpretation: a total map from ground-atom keys (canonical
/// formula strings) to values. Querying an atom outside the table is an
/// error, not Undefined.
class StandardInterpretation final : public Interpretation {
 public:
  StandardInterpretation(Signature sig, std::map<std::string, Gtv> table);

  const Signature& signature() const override { return sig_; }
  Gtv atom_value(const Formula& atom) override;

  const std::map<std::string, Gtv>& table() const { return table_; }

  /// Loads a JSON table file: either a flat object {"bird(penguin)": "tf"}
  /// or {"atoms": {...}, "constants": [...]}. The signature (relations with
  /// arities, constant domain) is inferred from the atom keys; an explicit
  /// "constants" list extends the domain.
  static StandardInterpretation load(const std::filesystem::path& file);

 private:
  Signature sig_;
  std::map<std::string, Gtv> table_;
};

struct CacheEntry {
  Gtv value;
  std::string verification_transcript;
  std::string refutation_transcript;
  std::string created_at;   // ISO-8601 UTC
  std::string fingerprint;  // judge config fingerprint, hex

  bool operator==(const CacheEntry&) const = default;
};

struct PutOutcome {
  CacheEntry stored;
  bool collided = false;  // key already present; new entry was discarded
};

/// Append-only, first-write-wins store for atomic-formula valuations.
/// Persistent caches write one JSON record per line and flush before a put
/// returns; replay keeps the earliest record per key. Once a key is present
/// its value never changes.
class ValuationCache {
 public:
  ValuationCache() = default;                                // in-memory
  explicit ValuationCache(const std::filesystem::path& file);  // persistent

  ValuationCache(const ValuationCache&) = delete;
  ValuationCache& operator=(const ValuationCache&) = delete;

  /// Stores entry under key unless the key exists; returns the entry that is
  /// actually stored plus a collision flag. Persistent caches append and
  /// flush before returning; on I/O failure nothing is stored.
  PutOutcome put(const std::string& key, CacheEntry entry);

  std::optional<CacheEntry> find(const std::string& key) const;
  std::size_t size() const;
  std::map<std::string, CacheEntry> entries() const;
  const std::optional<std::filesystem::path>& path() const { return path_; }

 private:
  void replay();

  mutable std::shared_mutex mutex_;
  std::map<std::string, CacheEntry> entries_;
  std::optional<std::filesystem::path> path_;
  std::ofstream out_;
};

struct EvaluatedAtom {
  Gtv value;
  std::string verification_transcript;
  std::string refutation_transcript;
  std::string fingerprint;
};

/// Produces a fresh valuation for a ground atom on a cache miss. The judge
/// module provides the LLM-backed implementation; tests provide mocks.
class AtomEvaluator {
 public:
  virtual ~AtomEvaluator() = default;
  virtual EvaluatedAtom evaluate_atom(const Formula& atom) = 0;
  /// Identifies the judge configuration behind this evaluator (hex hash);
  /// strict-keyed interpretations append it to cache keys.
  virtual std::string fingerprint() const { return ""; }
};

/// Evaluator-backed interpretation. Atom lookups are cache-mediated: a hit
/// returns the stored value, a miss invokes the evaluator and stores the
/// result first-write-wins, so repeated queries for the same atom always
/// agree. A null evaluator makes the interpretation cache-only (a miss is an
/// EvaluatorError).
class GroundedInterpretation final : public Interpretation {
 public:
  GroundedInterpretation(Signature sig, std::shared_ptr<AtomEvaluator> evaluator,
                         std::shared_ptr<ValuationCache> cache, bool strict_keys = false);

  const Signature& signature() const override { return sig_; }
  Gtv atom_value(const Formula& atom) override;

  const std::shared_ptr<ValuationCache>& cache() const { return cache_; }

  /// Cache key for an atom: the canonical formula string; in strict mode the
  /// evaluator fingerprint is appended so distinct judge configs do not share
  /// valuations.
  std::string cache_key(const Formula& atom) const;

 private:
  Signature sig_;
  std::shared_ptr<AtomEvaluator> evaluator_;
  std::shared_ptr<ValuationCache> cache_;
  bool strict_keys_ = false;
};

/// Copies the interpretation's values for the given atoms into a fresh
/// in-memory cache. A GroundedInterpretation over the result (with no
/// evaluator) agrees with `interp` on those atoms.
std::shared_ptr<ValuationCache> seed_cache_from_standard(const StandardInterpretation& interp,
                                                         const std::vector<FormulaPtr>& atoms);

/// Seeds from every atom in the table.
std::shared_ptr<ValuationCache> seed_cache_from_standard(const StandardInterpretation& interp);

/// Freezes the grounded interpretation's current cache contents into a
/// table-backed interpretation; the two agree on every formula whose atoms
/// are all cached.
StandardInterpretation snapshot_to_standard(const GroundedInterpretation& grounded);

}  // namespace bilateral
