#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>

#include "lambdag/cache.hpp"
#include "lambdag/errors.hpp"

namespace lambdag {

std::optional<Rational> IntegralTable::find(const std::string& key) const {
  std::shared_lock lk(mu_);
  auto it = map_.find(key);
  if (it == map_.end()) return std::nullopt;
  return it->second;
}

Rational IntegralTable::store(const std::string& key, const Rational& value) {
  std::unique_lock lk(mu_);
  auto [it, inserted] = map_.emplace(key, value);
  if (!inserted && it->second != value)
    throw ConsistencyError("cache: conflicting values for key '" + key + "': stored " +
                           it->second.str() + ", new " + value.str());
  if (inserted) dirty_ = true;
  return it->second;
}

std::size_t IntegralTable::size() const {
  std::shared_lock lk(mu_);
  return map_.size();
}

bool IntegralTable::dirty() const {
  std::shared_lock lk(mu_);
  return dirty_;
}

void IntegralTable::clear() {
  std::unique_lock lk(mu_);
  map_.clear();
  dirty_ = false;
}

std::vector<std::pair<std::string, Rational>> IntegralTable::entries_sorted() const {
  std::shared_lock lk(mu_);
  std::map<std::string, Rational> sorted(map_.begin(), map_.end());
  return {sorted.begin(), sorted.end()};
}

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

bool parse_int(const std::string& s, long& out) {
  if (s.empty()) return false;
  std::size_t i = (s[0] == '-') ? 1 : 0;
  if (i == s.size()) return false;
  for (std::size_t j = i; j < s.size(); ++j)
    if (s[j] < '0' || s[j] > '9') return false;
  out = std::stol(s);
  return true;
}

// "a1,a2,...,an" with entries non-negative and sorted descending. Empty
// string means the empty list.
std::vector<long> parse_desc_exps(const std::string& field, const std::string& key,
                                  int line_no) {
  std::vector<long> exps;
  if (field.empty()) return exps;
  for (const auto& part : split(field, ',')) {
    long v;
    if (!parse_int(part, v) || v < 0)
      throw CacheParseError("cache: bad exponent '" + part + "' in key '" + key + "'",
                            line_no);
    exps.push_back(v);
  }
  for (std::size_t i = 1; i < exps.size(); ++i)
    if (exps[i - 1] < exps[i])
      throw CacheParseError("cache: exponents not sorted descending in key '" + key + "'",
                            line_no);
  return exps;
}

}  // namespace

void validate_cache_key(const std::string& key, int line_no) {
  auto fields = split(key, ';');
  const std::string& kind = fields[0];
  if (kind == "PSI" || kind == "HODGE") {
    if (fields.size() != 3)
      throw CacheParseError("cache: " + kind + " record needs 3 fields, got key '" + key + "'",
                            line_no);
    long g;
    if (!parse_int(fields[1], g) || g < 0)
      throw CacheParseError("cache: bad genus in key '" + key + "'", line_no);
    auto exps = parse_desc_exps(fields[2], key, line_no);
    if (2 * g - 2 + static_cast<long>(exps.size()) <= 0)
      throw CacheParseError("cache: unstable (g,n) in key '" + key + "'", line_no);
    return;
  }
  if (kind == "GW0") {
    if (fields.size() != 4)
      throw CacheParseError("cache: GW0 record needs 4 fields, got key '" + key + "'",
                            line_no);
    if (fields[1] != "point" && fields[1] != "p1" && fields[1] != "p2")
      throw CacheParseError("cache: unknown target '" + fields[1] + "' in key '" + key + "'",
                            line_no);
    long deg;
    if (!parse_int(fields[2], deg) || deg < 0)
      throw CacheParseError("cache: bad degree in key '" + key + "'", line_no);
    if (fields[3].empty()) return;
    std::vector<std::pair<long, long>> ins;
    for (const auto& part : split(fields[3], ',')) {
      auto kv = split(part, ':');
      long k, a;
      if (kv.size() != 2 || !parse_int(kv[0], k) || !parse_int(kv[1], a) || k < 0 || a < 0)
        throw CacheParseError("cache: bad insertion '" + part + "' in key '" + key + "'",
                              line_no);
      ins.emplace_back(k, a);
    }
    for (std::size_t i = 1; i < ins.size(); ++i)
      if (ins[i - 1] < ins[i])
        throw CacheParseError("cache: insertions not sorted descending in key '" + key + "'",
                              line_no);
    return;
  }
  throw CacheParseError("cache: unknown record kind '" + kind + "'", line_no);
}

std::pair<std::string, Rational> parse_cache_record(const std::string& line, int line_no) {
  auto cut = line.rfind(';');
  if (cut == std::string::npos || cut + 1 >= line.size())
    throw CacheParseError("cache: missing value field in line '" + line + "'", line_no);
  std::string key = line.substr(0, cut);
  std::string val = line.substr(cut + 1);
  validate_cache_key(key, line_no);
  Rational r;
  try {
    r = Rational::parse(val);
  } catch (const std::invalid_argument& e) {
    throw CacheParseError(std::string("cache: bad value: ") + e.what(), line_no);
  }
  return {key, r};
}

void IntegralTable::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw CacheParseError("cache: cannot open '" + path + "'", 0);
  std::string line;
  int line_no = 0;
  bool saw_header = false;
  std::vector<std::pair<std::string, Rational>> records;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line_no == 1) {
      if (line != kVersionTag)
        throw CacheParseError("cache: bad header '" + line + "', expected '" +
                                  std::string(kVersionTag) + "'",
                              line_no);
      saw_header = true;
      continue;
    }
    if (line.empty()) continue;
    records.push_back(parse_cache_record(line, line_no));
  }
  if (!saw_header) throw CacheParseError("cache: empty file, missing header", 1);
  bool was_dirty;
  {
    std::shared_lock lk(mu_);
    was_dirty = dirty_;
  }
  for (auto& [k, v] : records) store(k, v);
  std::unique_lock lk(mu_);
  dirty_ = was_dirty;
}

void IntegralTable::save_file(const std::string& path) {
  auto entries = entries_sorted();
  namespace fs = std::filesystem;
  fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::trunc);
    if (!out) throw std::runtime_error("cache: cannot write '" + tmp.string() + "'");
    out << kVersionTag << "\n";
    for (const auto& [k, v] : entries) out << k << ";" << v.str() << "\n";
  }
  fs::rename(tmp, target);
  std::unique_lock lk(mu_);
  dirty_ = false;
}

IntegralTable& global_table() {
  static IntegralTable table;
  return table;
}

std::string psi_cache_key(int g, const std::vector<int>& exps_desc) {
  std::ostringstream os;
  os << "PSI;" << g << ";";
  for (std::size_t i = 0; i < exps_desc.size(); ++i) {
    if (i) os << ",";
    os << exps_desc[i];
  }
  return os.str();
}

std::string hodge_cache_key(int g, const std::vector<int>& exps_desc) {
  std::string k = psi_cache_key(g, exps_desc);
  return "HODGE" + k.substr(3);
}

}  // namespace lambdag
