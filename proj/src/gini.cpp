#include "cgc/gini.hpp"

#include <cmath>

#include "cgc/errors.hpp"
#include "cgc/parallel.hpp"

namespace cgc {

namespace {

// Rows processed per parallel block. Fixed so that the block partition —
// and therefore the combination order of partial sums — never depends on
// the thread count.
constexpr std::size_t kRowBlock = 64;

inline void kahan_add(double& sum, double& comp, double term) {
  const double y = term - comp;
  const double t = sum + y;
  comp = (t - sum) - y;
  sum = t;
}

}  // namespace

double euclidean(const double* a, const double* b, std::size_t d) {
  double sum = 0.0, comp = 0.0;
  for (std::size_t t = 0; t < d; ++t) {
    const double diff = a[t] - b[t];
    kahan_add(sum, comp, diff * diff);
  }
  return std::sqrt(sum);
}

double pair_count(std::size_t n) {
  return 0.5 * static_cast<double>(n) * static_cast<double>(n - 1);
}

double pair_distance_total(const Matrix& m, std::size_t r0, std::size_t r1) {
  if (r1 > m.rows() || r0 > r1) throw DataError("pair_distance_total: row range out of bounds");
  const std::size_t n = r1 - r0;
  const std::size_t d = m.cols();
  const std::size_t nblocks = block_count(n, kRowBlock);
  std::vector<double> partial(nblocks, 0.0);
  parallel_blocks(n, kRowBlock, [&](std::size_t b, std::size_t lo, std::size_t hi) {
    double sum = 0.0, comp = 0.0;
    for (std::size_t i = lo; i < hi; ++i) {
      const double* ri = m.row(r0 + i);
      for (std::size_t j = i + 1; j < n; ++j)
        kahan_add(sum, comp, euclidean(ri, m.row(r0 + j), d));
    }
    partial[b] = sum;
  });
  double total = 0.0, comp = 0.0;
  for (double v : partial) kahan_add(total, comp, v);
  return total;
}

DistanceSums distance_sums(const Matrix& m, std::size_t r0, std::size_t r1) {
  if (r1 > m.rows() || r0 > r1) throw DataError("distance_sums: row range out of bounds");
  const std::size_t n = r1 - r0;
  if (n < 2) throw DataError("distance_sums: needs at least 2 rows");
  const std::size_t d = m.cols();

  DistanceSums out;
  out.row_sums.assign(n, 0.0);
  const std::size_t nblocks = block_count(n, kRowBlock);
  std::vector<double> partial(nblocks, 0.0);
  // Each row sum is computed in full by the block owning that row (every
  // pair is therefore evaluated twice); the upper-triangle partials are
  // combined in block order afterwards so results are thread-count
  // independent.
  parallel_blocks(n, kRowBlock, [&](std::size_t b, std::size_t lo, std::size_t hi) {
    double tri = 0.0, tri_comp = 0.0;
    for (std::size_t i = lo; i < hi; ++i) {
      const double* ri = m.row(r0 + i);
      double rs = 0.0, rs_comp = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        if (j == i) continue;
        const double dist = euclidean(ri, m.row(r0 + j), d);
        kahan_add(rs, rs_comp, dist);
        if (j > i) kahan_add(tri, tri_comp, dist);
      }
      out.row_sums[i] = rs;
    }
    partial[b] = tri;
  });
  double total = 0.0, comp = 0.0;
  for (double v : partial) kahan_add(total, comp, v);
  out.total = total;
  return out;
}

DistanceSums distance_sums(const Matrix& m) { return distance_sums(m, 0, m.rows()); }

double gmd(const Matrix& m) {
  if (m.rows() < 2) throw DataError("gmd: needs at least 2 rows");
  return pair_distance_total(m, 0, m.rows()) / pair_count(m.rows());
}

GiniEstimate gini_correlation_blocked(const Matrix& m, const std::vector<ClassRange>& classes) {
  const std::size_t n = m.rows();
  GiniEstimate g;
  g.delta = pair_distance_total(m, 0, n) / pair_count(n);
  if (!(g.delta > 0.0))
    throw DegenerateError("Gini mean difference is zero (all observations identical)");

  g.class_deltas.reserve(classes.size());
  g.class_props.reserve(classes.size());
  double within = 0.0;
  for (const ClassRange& c : classes) {
    const double dk = pair_distance_total(m, c.begin, c.begin + c.count) / pair_count(c.count);
    const double pk = static_cast<double>(c.count) / static_cast<double>(n);
    g.class_deltas.push_back(dk);
    g.class_props.push_back(pk);
    within += pk * dk;
  }
  g.gcov = g.delta - within;
  g.rho = g.gcov / g.delta;
  return g;
}

GiniEstimate gini_correlation(const LabeledDataset& d) {
  return gini_correlation_blocked(d.features(), d.classes());
}

double distance_correlation(const Matrix& x, const Matrix& y) {
  const std::size_t n = x.rows();
  if (y.rows() != n) throw DataError("distance_correlation: row counts differ");
  if (n < 2) throw DataError("distance_correlation: needs at least 2 rows");

  // Double-centered distance matrix, flattened row-major.
  auto centered = [n](const Matrix& m) {
    std::vector<double> a(n * n, 0.0);
    parallel_blocks(n, kRowBlock, [&](std::size_t, std::size_t lo, std::size_t hi) {
      for (std::size_t i = lo; i < hi; ++i)
        for (std::size_t j = 0; j < n; ++j)
          a[i * n + j] = j == i ? 0.0 : euclidean(m.row(i), m.row(j), m.cols());
    });
    std::vector<double> row_mean(n, 0.0);
    double grand = 0.0, grand_comp = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double s = 0.0, c = 0.0;
      for (std::size_t j = 0; j < n; ++j) kahan_add(s, c, a[i * n + j]);
      row_mean[i] = s / static_cast<double>(n);
      kahan_add(grand, grand_comp, s);
    }
    const double gm = grand / static_cast<double>(n * n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        a[i * n + j] += gm - row_mean[i] - row_mean[j];
    return a;
  };

  const std::vector<double> a = centered(x);
  const std::vector<double> b = centered(y);
  double vxy = 0.0, cxy = 0.0, vxx = 0.0, cxx = 0.0, vyy = 0.0, cyy = 0.0;
  for (std::size_t t = 0; t < a.size(); ++t) {
    kahan_add(vxy, cxy, a[t] * b[t]);
    kahan_add(vxx, cxx, a[t] * a[t]);
    kahan_add(vyy, cyy, b[t] * b[t]);
  }
  if (!(vxx > 0.0) || !(vyy > 0.0)) return 0.0;  // a constant side carries no signal
  const double r2 = vxy / std::sqrt(vxx * vyy);
  return std::sqrt(std::max(0.0, r2));
}

}  // namespace cgc
