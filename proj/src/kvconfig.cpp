#include "cgc/kvconfig.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "cgc/errors.hpp"

namespace cgc {

namespace {

std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

double to_double(const std::string& value, const std::string& what) {
  const char* begin = value.c_str();
  char* end = nullptr;
  const double v = std::strtod(begin, &end);
  if (end == begin || *end != '\0' || !std::isfinite(v))
    throw DataError(what + ": cannot parse \"" + value + "\" as a number");
  return v;
}

std::uint64_t to_u64(const std::string& value, const std::string& what) {
  if (value.empty() || !std::all_of(value.begin(), value.end(), [](unsigned char c) {
        return std::isdigit(c) != 0;
      }))
    throw DataError(what + ": cannot parse \"" + value + "\" as a nonnegative integer");
  errno = 0;
  char* end = nullptr;
  const std::uint64_t v = std::strtoull(value.c_str(), &end, 10);
  if (errno != 0) throw DataError(what + ": value \"" + value + "\" out of range");
  return v;
}

}  // namespace

void KvMap::set(const std::string& key, const std::string& value) {
  for (auto& [k, v] : entries_) {
    if (k == key) {
      v = value;
      return;
    }
  }
  entries_.emplace_back(key, value);
  read_.push_back(false);
}

bool KvMap::has(const std::string& key) const { return find(key).has_value(); }

std::optional<std::string> KvMap::find(const std::string& key) const {
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    if (entries_[i].first == key) {
      read_[i] = true;
      return entries_[i].second;
    }
  }
  return std::nullopt;
}

std::string KvMap::get_string(const std::string& key) const {
  auto v = find(key);
  if (!v) throw DataError("missing required key \"" + key + "\"");
  return *v;
}

double KvMap::get_double(const std::string& key) const {
  return to_double(get_string(key), "key \"" + key + "\"");
}

std::uint64_t KvMap::get_u64(const std::string& key) const {
  return to_u64(get_string(key), "key \"" + key + "\"");
}

bool KvMap::get_bool(const std::string& key) const {
  std::string v = get_string(key);
  std::transform(v.begin(), v.end(), v.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw DataError("key \"" + key + "\": cannot parse \"" + v + "\" as a boolean");
}

std::vector<std::string> KvMap::unread_keys() const {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < entries_.size(); ++i)
    if (!read_[i]) out.push_back(entries_[i].first);
  return out;
}

KvMap parse_kv(const std::string& text) {
  KvMap m;
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw DataError("line " + std::to_string(lineno) + ": expected \"key = value\", got \"" +
                      line + "\"");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw DataError("line " + std::to_string(lineno) + ": empty key");
    if (m.has(key)) throw DataError("duplicate key \"" + key + "\"");
    m.set(key, value);
  }
  return m;
}

KvMap read_kv_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_kv(buf.str());
  } catch (const DataError& e) {
    throw DataError(path + ": " + e.what());
  }
}

std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> out;
  if (trim(value).empty()) return out;
  std::stringstream ss(value);
  std::string token;
  while (std::getline(ss, token, ',')) out.push_back(trim(token));
  return out;
}

std::vector<double> parse_double_list(const std::string& value, const std::string& what) {
  const std::string v = trim(value);
  if (v.empty()) throw DataError(what + ": empty list");
  std::vector<double> out;
  if (std::count(v.begin(), v.end(), ':') == 2) {
    const auto c1 = v.find(':');
    const auto c2 = v.find(':', c1 + 1);
    const double start = to_double(trim(v.substr(0, c1)), what);
    const double stop = to_double(trim(v.substr(c1 + 1, c2 - c1 - 1)), what);
    const double step = to_double(trim(v.substr(c2 + 1)), what);
    if (!(step > 0.0)) throw DataError(what + ": grid step must be positive");
    if (stop < start) throw DataError(what + ": grid stop must be >= start");
    // inclusive endpoints; count derived up front so rounding cannot drop the stop
    const auto count = static_cast<std::size_t>(std::floor((stop - start) / step + 1e-9)) + 1;
    for (std::size_t i = 0; i < count; ++i) out.push_back(start + static_cast<double>(i) * step);
    return out;
  }
  for (const std::string& tok : split_list(v)) out.push_back(to_double(tok, what));
  if (out.empty()) throw DataError(what + ": empty list");
  return out;
}

std::vector<std::size_t> parse_size_list(const std::string& value, const std::string& what) {
  std::vector<std::size_t> out;
  for (const std::string& tok : split_list(trim(value)))
    out.push_back(static_cast<std::size_t>(to_u64(tok, what)));
  if (out.empty()) throw DataError(what + ": empty list");
  return out;
}

}  // namespace cgc
