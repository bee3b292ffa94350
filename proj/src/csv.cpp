#include "cgc/csv.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include "cgc/errors.hpp"

namespace cgc {

namespace {

// Character-level RFC-4180 state machine; returns records of raw fields.
std::vector<std::vector<std::string>> parse_records(const std::string& text,
                                                    const std::string& path) {
  std::vector<std::vector<std::string>> records;
  std::vector<std::string> record;
  std::string field;
  bool quoted = false;
  bool field_started = false;

  auto end_field = [&]() {
    record.push_back(std::move(field));
    field.clear();
    field_started = false;
  };
  auto end_record = [&]() {
    end_field();
    records.push_back(std::move(record));
    record.clear();
  };

  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field.push_back(c);
      }
      continue;
    }
    switch (c) {
      case '"':
        if (field.empty() && !field_started) {
          quoted = true;
          field_started = true;
        } else {
          field.push_back(c);  // stray quote inside an unquoted field: keep it
        }
        break;
      case ',':
        end_field();
        break;
      case '\r':
        if (i + 1 < text.size() && text[i + 1] == '\n') ++i;
        end_record();
        break;
      case '\n':
        end_record();
        break;
      default:
        field.push_back(c);
        field_started = true;
        break;
    }
  }
  if (quoted) throw DataError(path + ": unterminated quoted field");
  if (field_started || !field.empty() || !record.empty()) end_record();
  return records;
}

double parse_double(const std::string& cell, std::size_t row, std::size_t col,
                    const std::string& col_name) {
  const char* begin = cell.c_str();
  char* end = nullptr;
  const double v = std::strtod(begin, &end);
  // the whole cell, minus surrounding whitespace, must be consumed
  while (end != nullptr && std::isspace(static_cast<unsigned char>(*end))) ++end;
  if (end == begin || *end != '\0')
    throw DataError("row " + std::to_string(row) + ", column \"" + col_name +
                    "\" (index " + std::to_string(col) + "): cannot parse \"" + cell +
                    "\" as a number");
  if (!std::isfinite(v))
    throw DataError("row " + std::to_string(row) + ", column \"" + col_name +
                    "\": value \"" + cell + "\" is not finite");
  return v;
}

bool is_integer_token(const std::string& s) {
  if (s.empty()) return false;
  return std::all_of(s.begin(), s.end(),
                     [](unsigned char c) { return std::isdigit(c) != 0; });
}

Matrix extract_features(const CsvTable& t, const std::vector<std::size_t>& cols) {
  Matrix m(t.rows.size(), cols.size());
  for (std::size_t i = 0; i < t.rows.size(); ++i)
    for (std::size_t j = 0; j < cols.size(); ++j)
      m(i, j) = parse_double(t.rows[i][cols[j]], i, cols[j], t.header[cols[j]]);
  return m;
}

std::vector<std::string> extract_labels(const CsvTable& t, std::size_t col) {
  std::vector<std::string> labels(t.rows.size());
  for (std::size_t i = 0; i < t.rows.size(); ++i) labels[i] = t.rows[i][col];
  return labels;
}

std::vector<std::string> names_for(const CsvTable& t, const std::vector<std::size_t>& cols) {
  std::vector<std::string> names(cols.size());
  for (std::size_t j = 0; j < cols.size(); ++j) names[j] = t.header[cols[j]];
  return names;
}

// Quotes a field only when needed (comma, quote, or newline present).
std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += "\"\"";
    else out.push_back(c);
  }
  out += "\"";
  return out;
}

}  // namespace

std::size_t CsvTable::column(const std::string& name_or_index) const {
  const auto it = std::find(header.begin(), header.end(), name_or_index);
  if (it != header.end()) return static_cast<std::size_t>(it - header.begin());
  if (is_integer_token(name_or_index)) {
    const std::size_t idx = std::stoull(name_or_index);
    if (idx < header.size()) return idx;
    throw DataError("column index " + name_or_index + " out of range (file has " +
                    std::to_string(header.size()) + " columns)");
  }
  throw DataError("no column named \"" + name_or_index + "\" in header");
}

CsvTable read_csv_table(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  auto records = parse_records(buf.str(), path);
  if (records.empty()) throw DataError(path + ": file is empty (expected a header row)");

  CsvTable t;
  t.header = std::move(records.front());
  for (std::size_t i = 1; i < records.size(); ++i) {
    if (records[i].size() != t.header.size())
      throw DataError(path + ": row " + std::to_string(i - 1) + " has " +
                      std::to_string(records[i].size()) + " fields, header has " +
                      std::to_string(t.header.size()));
    t.rows.push_back(std::move(records[i]));
  }
  if (t.rows.empty()) throw DataError(path + ": no data rows");
  return t;
}

std::vector<std::size_t> resolve_columns(const CsvTable& table, const std::string& selection) {
  std::vector<std::size_t> cols;
  std::set<std::size_t> seen;
  std::stringstream ss(selection);
  std::string token;
  auto add = [&](std::size_t c) {
    if (!seen.insert(c).second)
      throw DataError("column \"" + table.header[c] + "\" selected more than once");
    cols.push_back(c);
  };
  while (std::getline(ss, token, ',')) {
    if (token.empty()) throw DataError("empty token in column selection \"" + selection + "\"");
    const auto dash = token.find('-');
    // an index range "a-b" (both endpoints numeric); anything else is a name/index
    if (dash != std::string::npos && dash > 0 && is_integer_token(token.substr(0, dash)) &&
        is_integer_token(token.substr(dash + 1))) {
      const std::size_t a = std::stoull(token.substr(0, dash));
      const std::size_t b = std::stoull(token.substr(dash + 1));
      if (a > b) throw DataError("descending column range \"" + token + "\"");
      if (b >= table.header.size())
        throw DataError("column range \"" + token + "\" exceeds the " +
                        std::to_string(table.header.size()) + " columns present");
      for (std::size_t c = a; c <= b; ++c) add(c);
    } else {
      add(table.column(token));
    }
  }
  return cols;
}

LabeledDataset load_csv(const std::string& path, const std::string& label_column,
                        const std::string& feature_columns) {
  const CsvTable t = read_csv_table(path);
  const std::size_t label = t.column(label_column);
  std::vector<std::size_t> cols;
  if (feature_columns.empty()) {
    for (std::size_t c = 0; c < t.header.size(); ++c)
      if (c != label) cols.push_back(c);
  } else {
    cols = resolve_columns(t, feature_columns);
    for (std::size_t c : cols)
      if (c == label)
        throw DataError("label column \"" + t.header[label] + "\" cannot also be a feature");
  }
  if (cols.empty()) throw DataError("no feature columns selected");
  LabeledDataset d(extract_features(t, cols), extract_labels(t, label));
  d.set_names(names_for(t, cols), t.header[label]);
  return d;
}

PairedDataset load_paired_csv(const std::string& path, const std::string& label_column,
                              const std::string& x_columns, const std::string& y_columns) {
  const CsvTable t = read_csv_table(path);
  const std::size_t label = t.column(label_column);
  if (x_columns.empty()) throw DataError("x column selection is empty (p must be >= 1)");
  if (y_columns.empty()) throw DataError("y column selection is empty (q must be >= 1)");
  const auto xc = resolve_columns(t, x_columns);
  const auto yc = resolve_columns(t, y_columns);
  std::set<std::size_t> xset(xc.begin(), xc.end());
  for (std::size_t c : yc)
    if (xset.count(c))
      throw DataError("column \"" + t.header[c] + "\" appears in both the x and y selections");
  for (std::size_t c : xc)
    if (c == label)
      throw DataError("label column \"" + t.header[label] + "\" cannot also be an x feature");
  for (std::size_t c : yc)
    if (c == label)
      throw DataError("label column \"" + t.header[label] + "\" cannot also be a y feature");
  return PairedDataset(extract_features(t, xc), extract_features(t, yc), extract_labels(t, label));
}

void write_csv(const LabeledDataset& d, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot open file for writing: " + path);
  for (std::size_t j = 0; j < d.dim(); ++j) out << csv_escape(d.feature_names()[j]) << ',';
  out << csv_escape(d.label_name()) << '\n';
  char buf[40];
  for (std::size_t i = 0; i < d.n(); ++i) {
    for (std::size_t j = 0; j < d.dim(); ++j) {
      std::snprintf(buf, sizeof buf, "%.17g", d.features()(i, j));
      out << buf << ',';
    }
    out << csv_escape(d.labels()[i]) << '\n';
  }
  if (!out) throw DataError("write failed: " + path);
}

}  // namespace cgc
