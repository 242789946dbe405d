#pragma once

#include <map>
#include <optional>
#include <shared_mutex>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "lambdag/rational.hpp"

namespace lambdag {

// Persistent memo map from canonical correlator keys to values.
//
// Keys are the on-disk record bodies, e.g. "PSI;1;1", "HODGE;2;2",
// "GW0;p2;2;1:2,0:2,0:2". A stored value never changes once written:
// storing an equal value again is a no-op, storing a different one is a
// ConsistencyError. Safe for concurrent readers and writers.
class IntegralTable {
 public:
  static constexpr const char* kVersionTag = "TAUTCACHE v1";

  std::optional<Rational> find(const std::string& key) const;
  // Write-once insert; returns the value that ended up stored.
  Rational store(const std::string& key, const Rational& value);

  std::size_t size() const;
  bool dirty() const;
  void clear();

  // Entries sorted by key, for deterministic dumps and gc.
  std::vector<std::pair<std::string, Rational>> entries_sorted() const;

  // Line-oriented text file, header kVersionTag. Corrupt input throws
  // CacheParseError carrying the 1-based line number. Loading merges into
  // the table under write-once rules and leaves the dirty flag untouched.
  void load_file(const std::string& path);
  // Atomic: writes a temp file next to `path`, then renames. Clears dirty.
  void save_file(const std::string& path);

 private:
  mutable std::shared_mutex mu_;
  std::unordered_map<std::string, Rational> map_;
  bool dirty_ = false;
};

// Validates record-key grammar and canonical form (kind tag, integer fields,
// exponents sorted descending). Throws CacheParseError with the given line
// number on violation.
void validate_cache_key(const std::string& key, int line_no);

// Splits "KEY;p/q" off a record line and validates both halves.
std::pair<std::string, Rational> parse_cache_record(const std::string& line, int line_no);

// Process-wide table used by the integral engines.
IntegralTable& global_table();

// Canonical key builders.
std::string psi_cache_key(int g, const std::vector<int>& exps_desc);
std::string hodge_cache_key(int g, const std::vector<int>& exps_desc);

}  // namespace lambdag
