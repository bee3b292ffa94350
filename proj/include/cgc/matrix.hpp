#pragma once

#include <cstddef>
#include <vector>

namespace cgc {

// Dense row-major matrix of doubles. Rows are observations, columns are
// features. Row pointers stay valid as long as the matrix is alive and
// unmodified.
class Matrix {
public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0);

  // Builds a matrix from equally sized rows; convenient in tests.
  static Matrix from_rows(const std::vector<std::vector<double>>& rows);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  double* row(std::size_t i) { return data_.data() + i * cols_; }
  const double* row(std::size_t i) const { return data_.data() + i * cols_; }

  const std::vector<double>& data() const { return data_; }

  void set_row(std::size_t i, const double* src);

  // Rows [r0, r1) copied into a new matrix.
  Matrix slice_rows(std::size_t r0, std::size_t r1) const;

  // The listed columns, in the given order.
  Matrix select_cols(const std::vector<std::size_t>& cols) const;

  // Column-wise concatenation [a | b]; row counts must match.
  static Matrix hcat(const Matrix& a, const Matrix& b);

  bool all_finite() const;

  bool operator==(const Matrix& other) const = default;

private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

}  // namespace cgc
