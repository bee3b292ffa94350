#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "cgc/dataset.hpp"
#include "cgc/errors.hpp"
#include "cgc/gini.hpp"
#include "cgc/parallel.hpp"
#include "oracles.hpp"

using namespace cgc;

namespace {

double rel_err(double got, double want) {
  return std::fabs(got - want) / std::max(1.0, std::fabs(want));
}

// Random rotation (QR of a Gaussian matrix via Gram-Schmidt).
std::vector<std::vector<double>> random_orthogonal(std::size_t d, std::mt19937_64& gen) {
  std::normal_distribution<double> nd;
  std::vector<std::vector<double>> a(d, std::vector<double>(d));
  for (auto& row : a)
    for (auto& v : row) v = nd(gen);
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      double dot = 0.0;
      for (std::size_t t = 0; t < d; ++t) dot += a[i][t] * a[j][t];
      for (std::size_t t = 0; t < d; ++t) a[i][t] -= dot * a[j][t];
    }
    double norm = 0.0;
    for (std::size_t t = 0; t < d; ++t) norm += a[i][t] * a[i][t];
    norm = std::sqrt(norm);
    for (std::size_t t = 0; t < d; ++t) a[i][t] /= norm;
  }
  return a;
}

Matrix transform(const Matrix& m, const std::vector<std::vector<double>>& rot) {
  Matrix out(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t r = 0; r < m.cols(); ++r) {
      double acc = 0.0;
      for (std::size_t c = 0; c < m.cols(); ++c) acc += rot[r][c] * m(i, c);
      out(i, r) = acc;
    }
  return out;
}

}  // namespace

TEST_SUITE_BEGIN("gini");

TEST_CASE("distance sums on the 3-point line {0, 1, 3}") {
  const Matrix m = Matrix::from_rows({{0}, {1}, {3}});
  const DistanceSums s = distance_sums(m);
  CHECK(s.total == 6.0);
  REQUIRE(s.row_sums.size() == 3);
  CHECK(s.row_sums[0] == 4.0);
  CHECK(s.row_sums[1] == 3.0);
  CHECK(s.row_sums[2] == 5.0);
  CHECK(gmd(m) == 2.0);
}

TEST_CASE("euclidean basics") {
  const double a[2] = {0.0, 0.0};
  const double b[2] = {3.0, 4.0};
  CHECK(euclidean(a, b, 2) == 5.0);
  CHECK(euclidean(a, a, 2) == 0.0);
  CHECK(pair_count(5) == 10.0);
}

TEST_CASE("distance sums: identical rows, scaling, consistency") {
  const Matrix same = Matrix::from_rows({{2, 2}, {2, 2}, {2, 2}});
  const DistanceSums s0 = distance_sums(same);
  CHECK(s0.total == 0.0);
  CHECK(gmd(same) == 0.0);

  std::mt19937_64 gen(3);
  std::normal_distribution<double> nd;
  Matrix m(17, 3);
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) m(i, j) = nd(gen);

  const DistanceSums s = distance_sums(m);
  // total is half the row-sum total
  double half = 0.0;
  for (double v : s.row_sums) half += v;
  CHECK(rel_err(s.total, half / 2.0) < 1e-12);
  // pair_distance_total agrees bit for bit
  CHECK(pair_distance_total(m, 0, m.rows()) == s.total);

  // scaling by c scales all sums by |c|
  Matrix scaled = m;
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) scaled(i, j) *= -2.5;
  const DistanceSums s2 = distance_sums(scaled);
  CHECK(rel_err(s2.total, 2.5 * s.total) < 1e-12);
  for (std::size_t i = 0; i < s.row_sums.size(); ++i)
    CHECK(rel_err(s2.row_sums[i], 2.5 * s.row_sums[i]) < 1e-12);

  CHECK_THROWS_AS(distance_sums(Matrix(1, 2)), DataError);
  CHECK_THROWS_AS(gmd(Matrix(1, 2)), DataError);
}

TEST_CASE("hand-worked correlations: perfect separation and perfect overlap") {
  // classes {0,0} vs {1,1}: within-class spread zero, rho = 1
  const LabeledDataset sep(Matrix::from_rows({{0}, {0}, {1}, {1}}), {"a", "a", "b", "b"});
  const GiniEstimate gs = gini_correlation(sep);
  CHECK(rel_err(gs.delta, 2.0 / 3.0) < 1e-15);
  CHECK(gs.class_deltas[0] == 0.0);
  CHECK(gs.class_deltas[1] == 0.0);
  CHECK(gs.rho == 1.0);

  // classes {0,1} vs {0,1}: identical within-class structure, rho = -1/2
  const LabeledDataset ovl(Matrix::from_rows({{0}, {1}, {0}, {1}}), {"a", "a", "b", "b"});
  const GiniEstimate go = gini_correlation(ovl);
  CHECK(rel_err(go.delta, 2.0 / 3.0) < 1e-15);
  CHECK(go.class_deltas[0] == 1.0);
  CHECK(go.class_deltas[1] == 1.0);
  CHECK(std::fabs(go.rho - (-0.5)) < 1e-15);

  // invariants on the pieces
  CHECK(go.class_props[0] + go.class_props[1] == 1.0);
  CHECK(gs.gcov == gs.delta);
}

TEST_CASE("degenerate predictor raises") {
  const LabeledDataset d(Matrix::from_rows({{5, 5}, {5, 5}, {5, 5}, {5, 5}}),
                         {"a", "a", "b", "b"});
  CHECK_THROWS_AS(gini_correlation(d), DegenerateError);
}

TEST_CASE("estimates match the naive oracle to 1e-12") {
  std::mt19937_64 gen(2026);
  for (int it = 0; it < 30; ++it) {
    const LabeledDataset d = oracle::random_labeled(gen, 30, 2, 4);
    const oracle::Cgc want = oracle::cgc_of(d.features(), oracle::class_rows(d.classes()));
    const GiniEstimate got = gini_correlation(d);
    CHECK(rel_err(got.delta, want.delta) < 1e-12);
    CHECK(rel_err(got.gcov, want.gcov) < 1e-12);
    CHECK(rel_err(got.rho, want.rho) < 1e-12);
    REQUIRE(got.class_deltas.size() == want.class_deltas.size());
    for (std::size_t k = 0; k < want.class_deltas.size(); ++k) {
      CHECK(rel_err(got.class_deltas[k], want.class_deltas[k]) < 1e-12);
      CHECK(got.class_props[k] == want.props[k]);
    }
    CHECK(got.rho <= 1.0);
  }
}

TEST_CASE("rho is invariant under translation, scaling, and rotation") {
  std::mt19937_64 gen(99);
  std::normal_distribution<double> nd;
  for (int it = 0; it < 20; ++it) {
    const LabeledDataset d = oracle::random_labeled(gen, 24, 3, 3);
    const double base = gini_correlation(d).rho;

    Matrix shifted = d.features();
    std::vector<double> offset(d.dim());
    for (auto& v : offset) v = 10.0 * nd(gen);
    for (std::size_t i = 0; i < d.n(); ++i)
      for (std::size_t j = 0; j < d.dim(); ++j) shifted(i, j) += offset[j];
    CHECK(std::fabs(gini_correlation(LabeledDataset(shifted, d.labels())).rho - base) < 1e-10);

    Matrix scaled = d.features();
    const double c = 0.25 + 5.0 * std::fabs(nd(gen));
    for (std::size_t i = 0; i < d.n(); ++i)
      for (std::size_t j = 0; j < d.dim(); ++j) scaled(i, j) *= c;
    CHECK(std::fabs(gini_correlation(LabeledDataset(scaled, d.labels())).rho - base) < 1e-10);

    const Matrix rotated = transform(d.features(), random_orthogonal(d.dim(), gen));
    CHECK(std::fabs(gini_correlation(LabeledDataset(rotated, d.labels())).rho - base) < 1e-8);
  }
}

TEST_CASE("relabeling classes leaves the estimate bitwise unchanged") {
  std::mt19937_64 gen(17);
  const LabeledDataset d = oracle::random_labeled(gen, 20, 3, 3);
  // rename every class; first-appearance order and row content are identical
  std::vector<std::string> renamed(d.labels().size());
  for (std::size_t i = 0; i < renamed.size(); ++i) renamed[i] = "class_" + d.labels()[i];
  const LabeledDataset r(d.features(), renamed);
  const GiniEstimate a = gini_correlation(d);
  const GiniEstimate b = gini_correlation(r);
  CHECK(a.rho == b.rho);
  CHECK(a.delta == b.delta);
  CHECK(a.gcov == b.gcov);
}

TEST_CASE("identical results for any thread count") {
  std::mt19937_64 gen(55);
  const LabeledDataset d = oracle::random_labeled(gen, 150, 20, 4);
  const int saved = thread_count();
  set_thread_count(1);
  const GiniEstimate one = gini_correlation(d);
  const DistanceSums s1 = distance_sums(d.features());
  set_thread_count(5);
  const GiniEstimate five = gini_correlation(d);
  const DistanceSums s5 = distance_sums(d.features());
  set_thread_count(saved);

  CHECK(one.rho == five.rho);
  CHECK(one.delta == five.delta);
  CHECK(s1.total == s5.total);
  CHECK(s1.row_sums == s5.row_sums);
}

TEST_CASE("distance correlation: identical, constant, and independent inputs") {
  std::mt19937_64 gen(8);
  std::normal_distribution<double> nd;
  Matrix x(60, 2);
  for (std::size_t i = 0; i < x.rows(); ++i)
    for (std::size_t j = 0; j < x.cols(); ++j) x(i, j) = nd(gen);

  CHECK(std::fabs(distance_correlation(x, x) - 1.0) < 1e-10);

  const Matrix constant(60, 1, 3.0);
  CHECK(distance_correlation(x, constant) == 0.0);
  CHECK(distance_correlation(constant, x) == 0.0);

  // independent draws: small but nonzero (V-statistic bias), well under 0.1
  Matrix a(2000, 1), b(2000, 1);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    a(i, 0) = nd(gen);
    b(i, 0) = nd(gen);
  }
  const double r = distance_correlation(a, b);
  CHECK(r > 0.0);
  CHECK(r < 0.1);

  // a linear relation scores higher than noise
  Matrix c = a;
  for (std::size_t i = 0; i < c.rows(); ++i) c(i, 0) = 2.0 * a(i, 0) + 0.1 * b(i, 0);
  CHECK(distance_correlation(a, c) > 0.9);

  CHECK_THROWS_AS(distance_correlation(x, a), DataError);  // row mismatch
}

TEST_SUITE_END();
