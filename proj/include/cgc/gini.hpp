#pragma once

#include <cstddef>
#include <vector>

#include "cgc/dataset.hpp"
#include "cgc/matrix.hpp"

namespace cgc {

// Euclidean distance between rows a and b of length d: square root of a
// compensated (Kahan) sum of squared coordinate differences.
double euclidean(const double* a, const double* b, std::size_t d);

// Number of unordered pairs C(n, 2) as a double.
double pair_count(std::size_t n);

// Pairwise-distance totals for a block of rows. total sums each unordered
// pair once; row_sums[i] sums the distances from row i to every other row,
// so total equals half the sum of row_sums (up to rounding).
struct DistanceSums {
  double total = 0.0;
  std::vector<double> row_sums;
};

DistanceSums distance_sums(const Matrix& m);
// Same, restricted to rows [r0, r1); row_sums is indexed relative to r0.
DistanceSums distance_sums(const Matrix& m, std::size_t r0, std::size_t r1);

// Sum of pairwise distances within rows [r0, r1), each unordered pair once.
// Equals distance_sums(m, r0, r1).total bit for bit.
double pair_distance_total(const Matrix& m, std::size_t r0, std::size_t r1);

// Gini mean difference: pair_distance_total / C(n, 2). Needs n >= 2.
double gmd(const Matrix& m);

// The sample categorical Gini correlation of one feature group against the
// response, together with the pieces it is built from.
struct GiniEstimate {
  double delta = 0.0;                // overall Gini mean difference
  std::vector<double> class_deltas;  // within-class Gini mean differences
  std::vector<double> class_props;   // n_k / n
  double gcov = 0.0;                 // delta - sum_k p_k * delta_k
  double rho = 0.0;                  // gcov / delta; at most 1, may dip below 0 in sample
};

GiniEstimate gini_correlation(const LabeledDataset& d);

// Same estimator over an externally supplied contiguous class layout
// (the PairedDataset storage order). Throws DegenerateError when the
// overall Gini mean difference is zero.
GiniEstimate gini_correlation_blocked(const Matrix& m, const std::vector<ClassRange>& classes);

// Sample distance correlation (biased, V-statistic, double-centered),
// in [0, 1] up to rounding; 0 by convention when either side is constant.
// Used as a diagnostic alongside the main tests. Costs O(n^2) memory.
double distance_correlation(const Matrix& x, const Matrix& y);

}  // namespace cgc
