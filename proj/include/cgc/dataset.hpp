#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "cgc/matrix.hpp"

namespace cgc {

// One response class: its label plus the contiguous row block it occupies
// after grouping.
struct ClassRange {
  std::string label;
  std::size_t begin = 0;  // first row of the block
  std::size_t count = 0;  // class size n_k

  bool operator==(const ClassRange&) const = default;
};

// Numeric features paired with a categorical response. On construction rows
// are physically regrouped by class — classes ordered by first appearance in
// the input, original row order kept within each class — so every class is a
// contiguous block of the feature matrix. Immutable afterwards; safe to
// share across threads.
class LabeledDataset {
public:
  LabeledDataset(Matrix features, std::vector<std::string> labels);

  std::size_t n() const { return features_.rows(); }
  std::size_t dim() const { return features_.cols(); }
  std::size_t num_classes() const { return classes_.size(); }

  const Matrix& features() const { return features_; }
  const std::vector<std::string>& labels() const { return labels_; }  // grouped order
  const std::vector<ClassRange>& classes() const { return classes_; }

  // Class index of a (grouped) row.
  std::size_t class_of(std::size_t row) const { return class_of_[row]; }
  // Class proportion n_k / n.
  double class_prop(std::size_t k) const;

  // Column names for serialization; defaults to f0..f{d-1} and "label".
  const std::vector<std::string>& feature_names() const { return feature_names_; }
  const std::string& label_name() const { return label_name_; }
  void set_names(std::vector<std::string> feature_names, std::string label_name);

private:
  Matrix features_;
  std::vector<std::string> labels_;
  std::vector<ClassRange> classes_;
  std::vector<std::size_t> class_of_;
  std::vector<std::string> feature_names_;
  std::string label_name_ = "label";
};

// Two feature groups sharing one categorical response. x, y, and labels are
// row-aligned and grouped identically (same class layout as LabeledDataset).
class PairedDataset {
public:
  PairedDataset(Matrix x, Matrix y, std::vector<std::string> labels);

  std::size_t n() const { return x_.rows(); }
  std::size_t p() const { return x_.cols(); }
  std::size_t q() const { return y_.cols(); }
  std::size_t num_classes() const { return classes_.size(); }

  const Matrix& x() const { return x_; }
  const Matrix& y() const { return y_; }
  const std::vector<std::string>& labels() const { return labels_; }
  const std::vector<ClassRange>& classes() const { return classes_; }
  std::size_t class_of(std::size_t row) const { return class_of_[row]; }

  // The two groups as standalone datasets (copies the features).
  LabeledDataset x_dataset() const;
  LabeledDataset y_dataset() const;

  // The pair with the roles of x and y exchanged.
  PairedDataset swapped() const;

private:
  Matrix x_;
  Matrix y_;
  std::vector<std::string> labels_;
  std::vector<ClassRange> classes_;
  std::vector<std::size_t> class_of_;
};

// Column-wise concatenation [x | y] with the shared labels.
LabeledDataset concat_features(const PairedDataset& d);

}  // namespace cgc
