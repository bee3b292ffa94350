#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "cgc/dataset.hpp"

namespace cgc {

// A parsed CSV file: header row plus string cells, all rows equally wide.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  // Resolves a single column reference: a header name or a 0-based index.
  std::size_t column(const std::string& name_or_index) const;
};

// RFC-4180 reader: quoted fields, doubled-quote escapes, LF or CRLF line
// endings. The first record is the header.
CsvTable read_csv_table(const std::string& path);

// Expands a comma-separated selection against the header. Each token is a
// column name, a 0-based index, or an inclusive index range "a-b".
// Example: "mass,3,7-9". Duplicates are rejected.
std::vector<std::size_t> resolve_columns(const CsvTable& table, const std::string& selection);

// Loads features + label column. An empty feature selection means all
// columns except the label.
LabeledDataset load_csv(const std::string& path, const std::string& label_column,
                        const std::string& feature_columns = "");

// Loads two disjoint feature groups sharing the label column.
PairedDataset load_paired_csv(const std::string& path, const std::string& label_column,
                              const std::string& x_columns, const std::string& y_columns);

// Writes the dataset (grouped row order) with full round-trip precision.
void write_csv(const LabeledDataset& d, const std::string& path);

}  // namespace cgc
