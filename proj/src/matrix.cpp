#include "cgc/matrix.hpp"

#include <cmath>
#include <cstring>

#include "cgc/errors.hpp"

namespace cgc {

Matrix::Matrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

Matrix Matrix::from_rows(const std::vector<std::vector<double>>& rows) {
  if (rows.empty()) return Matrix();
  Matrix m(rows.size(), rows.front().size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != m.cols_)
      throw DataError("Matrix::from_rows: ragged row lengths");
    std::memcpy(m.row(i), rows[i].data(), m.cols_ * sizeof(double));
  }
  return m;
}

void Matrix::set_row(std::size_t i, const double* src) {
  std::memcpy(row(i), src, cols_ * sizeof(double));
}

Matrix Matrix::slice_rows(std::size_t r0, std::size_t r1) const {
  if (r0 > r1 || r1 > rows_) throw DataError("Matrix::slice_rows: range out of bounds");
  Matrix m(r1 - r0, cols_);
  std::memcpy(m.data_.data(), data_.data() + r0 * cols_, (r1 - r0) * cols_ * sizeof(double));
  return m;
}

Matrix Matrix::select_cols(const std::vector<std::size_t>& cols) const {
  Matrix m(rows_, cols.size());
  for (std::size_t j = 0; j < cols.size(); ++j)
    if (cols[j] >= cols_) throw DataError("Matrix::select_cols: column index out of range");
  for (std::size_t i = 0; i < rows_; ++i) {
    const double* src = row(i);
    double* dst = m.row(i);
    for (std::size_t j = 0; j < cols.size(); ++j) dst[j] = src[cols[j]];
  }
  return m;
}

Matrix Matrix::hcat(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows()) throw DataError("Matrix::hcat: row counts differ");
  Matrix m(a.rows(), a.cols() + b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    std::memcpy(m.row(i), a.row(i), a.cols() * sizeof(double));
    std::memcpy(m.row(i) + a.cols(), b.row(i), b.cols() * sizeof(double));
  }
  return m;
}

bool Matrix::all_finite() const {
  for (double v : data_)
    if (!std::isfinite(v)) return false;
  return true;
}

}  // namespace cgc
