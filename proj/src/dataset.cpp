#include "cgc/dataset.hpp"

#include <algorithm>
#include <unordered_map>

#include "cgc/errors.hpp"

namespace cgc {

namespace {

struct Grouping {
  std::vector<std::size_t> order;  // grouped row r holds original row order[r]
  std::vector<ClassRange> classes;
  std::vector<std::size_t> class_of;
};

// Stable grouping by label: classes ordered by first appearance, original
// order kept within each class.
Grouping group_by_label(const std::vector<std::string>& labels) {
  const std::size_t n = labels.size();
  std::unordered_map<std::string, std::size_t> index;
  std::vector<ClassRange> classes;
  std::vector<std::size_t> class_of_original(n);
  for (std::size_t i = 0; i < n; ++i) {
    auto [it, inserted] = index.try_emplace(labels[i], classes.size());
    if (inserted) classes.push_back(ClassRange{labels[i], 0, 0});
    class_of_original[i] = it->second;
    ++classes[it->second].count;
  }
  if (classes.size() < 2)
    throw DataError("need at least 2 response classes, found " + std::to_string(classes.size()));
  for (const ClassRange& c : classes) {
    if (c.count < 2)
      throw DataError("class size must be at least 2, but class \"" + c.label + "\" has " +
                      std::to_string(c.count) + " observation(s)");
  }

  Grouping g;
  g.classes = std::move(classes);
  std::size_t offset = 0;
  for (ClassRange& c : g.classes) {
    c.begin = offset;
    offset += c.count;
  }
  std::vector<std::size_t> cursor(g.classes.size());
  for (std::size_t k = 0; k < g.classes.size(); ++k) cursor[k] = g.classes[k].begin;
  g.order.resize(n);
  g.class_of.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t k = class_of_original[i];
    const std::size_t r = cursor[k]++;
    g.order[r] = i;
    g.class_of[r] = k;
  }
  return g;
}

Matrix reorder_rows(const Matrix& m, const std::vector<std::size_t>& order) {
  Matrix out(m.rows(), m.cols());
  for (std::size_t r = 0; r < order.size(); ++r) out.set_row(r, m.row(order[r]));
  return out;
}

void check_features(const Matrix& m, std::size_t nlabels, const char* what) {
  if (m.rows() != nlabels)
    throw DataError(std::string(what) + ": feature rows (" + std::to_string(m.rows()) +
                    ") and labels (" + std::to_string(nlabels) + ") differ in length");
  if (m.cols() == 0) throw DataError(std::string(what) + ": needs at least one feature column");
  if (!m.all_finite()) throw DataError(std::string(what) + ": features contain NaN or infinity");
}

}  // namespace

LabeledDataset::LabeledDataset(Matrix features, std::vector<std::string> labels) {
  check_features(features, labels.size(), "LabeledDataset");
  Grouping g = group_by_label(labels);
  features_ = reorder_rows(features, g.order);
  labels_.resize(labels.size());
  for (std::size_t r = 0; r < g.order.size(); ++r) labels_[r] = labels[g.order[r]];
  classes_ = std::move(g.classes);
  class_of_ = std::move(g.class_of);
  feature_names_.resize(features_.cols());
  for (std::size_t j = 0; j < features_.cols(); ++j) feature_names_[j] = "f" + std::to_string(j);
}

double LabeledDataset::class_prop(std::size_t k) const {
  return static_cast<double>(classes_[k].count) / static_cast<double>(n());
}

void LabeledDataset::set_names(std::vector<std::string> feature_names, std::string label_name) {
  if (feature_names.size() != dim())
    throw DataError("set_names: expected " + std::to_string(dim()) + " feature names");
  feature_names_ = std::move(feature_names);
  label_name_ = std::move(label_name);
}

PairedDataset::PairedDataset(Matrix x, Matrix y, std::vector<std::string> labels) {
  check_features(x, labels.size(), "PairedDataset (x)");
  check_features(y, labels.size(), "PairedDataset (y)");
  Grouping g = group_by_label(labels);
  x_ = reorder_rows(x, g.order);
  y_ = reorder_rows(y, g.order);
  labels_.resize(labels.size());
  for (std::size_t r = 0; r < g.order.size(); ++r) labels_[r] = labels[g.order[r]];
  classes_ = std::move(g.classes);
  class_of_ = std::move(g.class_of);
}

LabeledDataset PairedDataset::x_dataset() const { return LabeledDataset(x_, labels_); }

LabeledDataset PairedDataset::y_dataset() const { return LabeledDataset(y_, labels_); }

PairedDataset PairedDataset::swapped() const { return PairedDataset(y_, x_, labels_); }

LabeledDataset concat_features(const PairedDataset& d) {
  return LabeledDataset(Matrix::hcat(d.x(), d.y()), d.labels());
}

}  // namespace cgc
