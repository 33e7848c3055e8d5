#include "bilateral/interpretation.hpp"

#include <iostream>
#include <mutex>
#include <utility>

#include <nlohmann/json.hpp>

#include "bilateral/errors.hpp"
#include "bilateral/util.hpp"

namespace bilateral {

using json = nlohmann::json;

StandardInterpretation::StandardInterpretation(Signature sig, std::map<std::string, Gtv> table)
    : sig_(std::move(sig)), table_(std::move(table)) {
  sig_.validate();
}

Gtv StandardInterpretation::atom_value(const Formula& atom) {
  if (!atom.is_atom()) {
    throw MissingAtomError("atom_value requires an atomic formula, got: " + format_formula(atom));
  }
  const std::string key = format_formula(atom);
  auto it = table_.find(key);
  if (it == table_.end()) {
    throw MissingAtomError("interpretation has no value for atom: " + key);
  }
  return it->second;
}

StandardInterpretation StandardInterpretation::load(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) {
    throw CacheIoError("cannot open interpretation table: " + file.string());
  }
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    throw SerializationError("invalid interpretation table " + file.string() + ": " + e.what());
  }

  json atoms;
  std::vector<std::string> extra_constants;
  if (doc.is_object() && doc.contains("atoms")) {
    atoms = doc.at("atoms");
    if (doc.contains("constants")) {
      extra_constants = doc.at("constants").get<std::vector<std::string>>();
    }
  } else {
    atoms = doc;
  }
  if (!atoms.is_object()) {
    throw SerializationError("interpretation table must map atom strings to gtv codes");
  }

  std::map<std::string, Gtv> table;
  Signature sig;
  std::set<std::string> constants;
  for (const auto& [key, value] : atoms.items()) {
    auto [relation, args] = parse_atom_key(key);
    auto it = sig.relations.find(relation);
    if (it == sig.relations.end()) {
      sig.relations.emplace(relation, args.size());
    } else if (it->second != args.size()) {
      throw SerializationError("relation " + relation + " used with inconsistent arities");
    }
    constants.insert(args.begin(), args.end());
    table.emplace(key, gtv_from_code(value.get<std::string>()));
  }
  constants.insert(extra_constants.begin(), extra_constants.end());
  sig.constants.assign(constants.begin(), constants.end());
  return StandardInterpretation(std::move(sig), std::move(table));
}

namespace {

json entry_to_json(const std::string& key, const CacheEntry& entry) {
  return json{{"key", key},
              {"gtv", gtv_code(entry.value)},
              {"verification", entry.verification_transcript},
              {"refutation", entry.refutation_transcript},
              {"timestamp", entry.created_at},
              {"fingerprint", entry.fingerprint}};
}

CacheEntry entry_from_json(const json& j) {
  CacheEntry entry;
  entry.value = gtv_from_code(j.at("gtv").get<std::string>());
  entry.verification_transcript = j.value("verification", "");
  entry.refutation_transcript = j.value("refutation", "");
  entry.created_at = j.value("timestamp", "");
  entry.fingerprint = j.value("fingerprint", "");
  return entry;
}

}  // namespace

ValuationCache::ValuationCache(const std::filesystem::path& file) : path_(file) {
  if (std::filesystem::exists(file)) {
    replay();
  } else if (file.has_parent_path()) {
    std::filesystem::create_directories(file.parent_path());
  }
  out_.open(file, std::ios::app);
  if (!out_) {
    throw CacheIoError("cannot open cache file for append: " + file.string());
  }
}

void ValuationCache::replay() {
  std::ifstream in(*path_);
  if (!in) {
    throw CacheIoError("cannot read cache file: " + path_->string());
  }
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) {
      continue;
    }
    json j = json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.contains("key") || !j.contains("gtv")) {
      // Tolerate torn writes: a record that never finished is dropped.
      std::cerr << "warning: cache " << path_->string() << " line " << lineno
                << " is malformed; skipping\n";
      continue;
    }
    std::string key = j.at("key").get<std::string>();
    CacheEntry entry = entry_from_json(j);
    auto it = entries_.find(key);
    if (it == entries_.end()) {
      entries_.emplace(std::move(key), std::move(entry));
    } else if (it->second.value != entry.value) {
      std::cerr << "warning: cache " << path_->string() << " line " << lineno
                << " conflicts with an earlier value for key \"" << key
                << "\"; keeping the first\n";
    }
  }
}

PutOutcome ValuationCache::put(const std::string& key, CacheEntry entry) {
  std::unique_lock lock(mutex_);
  auto it = entries_.find(key);
  if (it != entries_.end()) {
    return PutOutcome{it->second, true};
  }
  if (path_) {
    out_ << entry_to_json(key, entry).dump() << '\n';
    out_.flush();
    if (!out_) {
      throw CacheIoError("failed to persist cache entry for key \"" + key + "\" to " +
                         path_->string());
    }
  }
  auto [stored, inserted] = entries_.emplace(key, std::move(entry));
  (void)inserted;
  return PutOutcome{stored->second, false};
}

std::optional<CacheEntry> ValuationCache::find(const std::string& key) const {
  std::shared_lock lock(mutex_);
  auto it = entries_.find(key);
  if (it == entries_.end()) {
    return std::nullopt;
  }
  return it->second;
}

std::size_t ValuationCache::size() const {
  std::shared_lock lock(mutex_);
  return entries_.size();
}

std::map<std::string, CacheEntry> ValuationCache::entries() const {
  std::shared_lock lock(mutex_);
  return entries_;
}

GroundedInterpretation::GroundedInterpretation(Signature sig,
                                               std::shared_ptr<AtomEvaluator> evaluator,
                                               std::shared_ptr<ValuationCache> cache,
                                               bool strict_keys)
    : sig_(std::move(sig)),
      evaluator_(std::move(evaluator)),
      cache_(std::move(cache)),
      strict_keys_(strict_keys) {
  sig_.validate();
  if (!cache_) {
    cache_ = std::make_shared<ValuationCache>();
  }
}

std::string GroundedInterpretation::cache_key(const Formula& atom) const {
  std::string key = format_formula(atom);
  if (strict_keys_ && evaluator_) {
    const std::string fp = evaluator_->fingerprint();
    if (!fp.empty()) {
      key += "#" + fp;
    }
  }
  return key;
}

Gtv GroundedInterpretation::atom_value(const Formula& atom) {
  if (!atom.is_atom()) {
    throw EvaluatorError("atom_value requires an atomic formula, got: " + format_formula(atom));
  }
  const std::string key = cache_key(atom);
  if (auto hit = cache_->find(key)) {
    return hit->value;
  }
  if (!evaluator_) {
    throw EvaluatorError("no evaluator available and atom is not cached: " + key);
  }
  EvaluatedAtom result = evaluator_->evaluate_atom(atom);  // failures propagate, nothing cached
  CacheEntry entry{result.value, result.verification_transcript, result.refutation_transcript,
                   iso8601_utc_now(), result.fingerprint};
  return cache_->put(key, std::move(entry)).stored.value;
}

std::shared_ptr<ValuationCache> seed_cache_from_standard(const StandardInterpretation& interp,
                                                         const std::vector<FormulaPtr>& atoms) {
  auto cache = std::make_shared<ValuationCache>();
  for (const auto& atom : atoms) {
    const std::string key = format_formula(*atom);
    auto it = interp.table().find(key);
    if (it == interp.table().end()) {
      throw MissingAtomError("interpretation has no value for atom: " + key);
    }
    cache->put(key, CacheEntry{it->second, "", "", iso8601_utc_now(), ""});
  }
  return cache;
}

std::shared_ptr<ValuationCache> seed_cache_from_standard(const StandardInterpretation& interp) {
  auto cache = std::make_shared<ValuationCache>();
  for (const auto& [key, value] : interp.table()) {
    cache->put(key, CacheEntry{value, "", "", iso8601_utc_now(), ""});
  }
  return cache;
}

StandardInterpretation snapshot_to_standard(const GroundedInterpretation& grounded) {
  std::map<std::string, Gtv> table;
  for (const auto& [key, entry] : grounded.cache()->entries()) {
    table.emplace(key, entry.value);
  }
  return StandardInterpretation(grounded.signature(), std::move(table));
}

}  // namespace bilateral
