#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace cgc {

// Flat "key = value" configuration: one pair per line, '#' starts a comment,
// blank lines ignored. Keys are unique; order is preserved.
class KvMap {
public:
  void set(const std::string& key, const std::string& value);
  bool has(const std::string& key) const;
  std::optional<std::string> find(const std::string& key) const;

  // Typed accessors; throw DataError naming the key on absence or bad syntax.
  std::string get_string(const std::string& key) const;
  double get_double(const std::string& key) const;
  std::uint64_t get_u64(const std::string& key) const;
  bool get_bool(const std::string& key) const;  // true/false, 1/0, yes/no

  const std::vector<std::pair<std::string, std::string>>& entries() const { return entries_; }

  // Keys that were never read through any accessor; lets callers reject typos.
  std::vector<std::string> unread_keys() const;

private:
  std::vector<std::pair<std::string, std::string>> entries_;
  mutable std::vector<bool> read_;
};

KvMap parse_kv(const std::string& text);
KvMap read_kv_file(const std::string& path);

// Splits "a,b,c" into trimmed tokens; empty input gives an empty list.
std::vector<std::string> split_list(const std::string& value);

// Numeric lists: either comma-separated values or a "start:stop:step" grid
// (inclusive endpoints up to rounding).
std::vector<double> parse_double_list(const std::string& value, const std::string& what);
std::vector<std::size_t> parse_size_list(const std::string& value, const std::string& what);

}  // namespace cgc
