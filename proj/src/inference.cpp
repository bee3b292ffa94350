#include "cgc/inference.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>

#include "cgc/errors.hpp"
#include "cgc/normal.hpp"
#include "cgc/parallel.hpp"

namespace cgc {

namespace {

// Variance estimates at or below this are treated as exactly degenerate
// (the studentized statistic would be meaningless noise).
constexpr double kDegenerateVariance = 1e-14;

// Resample / redraw attempts before a replicate is abandoned.
constexpr int kRetryCap = 100;

// Pair caches beyond this many entries (128 MiB) fall back to recomputing
// distances on the fly; results are identical either way.
constexpr std::size_t kMaxCachedPairs = std::size_t(1) << 24;

inline void kahan_add(double& sum, double& comp, double term) {
  const double y = term - comp;
  const double t = sum + y;
  comp = (t - sum) - y;
  sum = t;
}

void check_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw DataError("alpha must lie in (0, 1)");
}

// Pairwise distances of one group, cached in condensed upper-triangle form
// when small enough, with a CGC evaluator for re-indexed samples (bootstrap
// resamples and label permutations both reduce to an index vector).
class GroupScorer {
public:
  explicit GroupScorer(const Matrix& m) : m_(&m), n_(m.rows()) {
    const std::size_t pairs = n_ * (n_ - 1) / 2;
    if (pairs <= kMaxCachedPairs) {
      cache_.resize(pairs);
      parallel_blocks(n_, 64, [&](std::size_t, std::size_t lo, std::size_t hi) {
        for (std::size_t i = lo; i < hi; ++i) {
          double* dst = cache_.data() + offset(i);
          for (std::size_t j = i + 1; j < n_; ++j)
            dst[j - i - 1] = euclidean(m_->row(i), m_->row(j), m_->cols());
        }
      });
    }
  }

  double dist(std::size_t a, std::size_t b) const {
    if (a == b) return 0.0;
    if (a > b) std::swap(a, b);
    if (!cache_.empty()) return cache_[offset(a) + (b - a - 1)];
    return euclidean(m_->row(a), m_->row(b), m_->cols());
  }

  // The CGC of the sample whose slot t holds original row idx[t], with the
  // fixed contiguous class layout. nullopt when the overall Gini mean
  // difference vanishes. Summation order is fixed (slot-lexicographic), so
  // the value does not depend on caching or threading.
  std::optional<double> rho(const std::vector<std::uint32_t>& idx,
                            const std::vector<ClassRange>& classes) const {
    const std::size_t n = idx.size();
    double total = 0.0, total_comp = 0.0;
    double within = 0.0;
    for (const ClassRange& c : classes) {
      const std::size_t end = c.begin + c.count;
      double cls = 0.0, cls_comp = 0.0;
      for (std::size_t i = c.begin; i < end; ++i) {
        for (std::size_t j = i + 1; j < end; ++j) {
          const double v = dist(idx[i], idx[j]);
          kahan_add(total, total_comp, v);
          kahan_add(cls, cls_comp, v);
        }
        for (std::size_t j = end; j < n; ++j)
          kahan_add(total, total_comp, dist(idx[i], idx[j]));
      }
      within += (static_cast<double>(c.count) / static_cast<double>(n)) *
                (cls / pair_count(c.count));
    }
    if (!(total > 0.0)) return std::nullopt;
    const double delta = total / pair_count(n);
    return (delta - within) / delta;
  }

private:
  // Start of row i's entries in the condensed upper triangle:
  // sum_{t<i} (n-1-t) = i*n - i*(i+1)/2.
  std::size_t offset(std::size_t i) const { return i * n_ - i * (i + 1) / 2; }

  const Matrix* m_;
  std::size_t n_;
  std::vector<double> cache_;
};

std::vector<std::uint32_t> identity_index(std::size_t n) {
  std::vector<std::uint32_t> idx(n);
  for (std::size_t i = 0; i < n; ++i) idx[i] = static_cast<std::uint32_t>(i);
  return idx;
}

// Leave-one-out CGC from cached distance sums: the deleted row's
// contribution is subtracted from the full and own-class totals, every
// other class is untouched.
double leave_one_rho(const DistanceSums& full, const std::vector<DistanceSums>& per_class,
                     const std::vector<ClassRange>& classes, std::size_t i, std::size_t k,
                     std::size_t n) {
  const double total = full.total - full.row_sums[i];
  const double delta = total / pair_count(n - 1);
  if (!(delta > 0.0))
    throw DegenerateError("leave-one-out Gini mean difference is zero");
  double within = 0.0;
  for (std::size_t l = 0; l < classes.size(); ++l) {
    double cls_total = per_class[l].total;
    std::size_t nl = classes[l].count;
    if (l == k) {
      cls_total -= per_class[l].row_sums[i - classes[l].begin];
      --nl;
    }
    const double pl = static_cast<double>(nl) / static_cast<double>(n - 1);
    within += pl * (cls_total / pair_count(nl));
  }
  return (delta - within) / delta;
}

double jackknife_for(const Matrix& mx, const Matrix& my, const std::vector<ClassRange>& classes,
                     const std::vector<std::size_t>& class_of) {
  const std::size_t n = mx.rows();
  const DistanceSums fx = distance_sums(mx);
  const DistanceSums fy = distance_sums(my);
  std::vector<DistanceSums> cx, cy;
  cx.reserve(classes.size());
  cy.reserve(classes.size());
  for (const ClassRange& c : classes) {
    cx.push_back(distance_sums(mx, c.begin, c.begin + c.count));
    cy.push_back(distance_sums(my, c.begin, c.begin + c.count));
  }

  std::vector<double> deltas(n);
  parallel_blocks(n, 64, [&](std::size_t, std::size_t lo, std::size_t hi) {
    for (std::size_t i = lo; i < hi; ++i) {
      const std::size_t k = class_of[i];
      const double rho1 = leave_one_rho(fx, cx, classes, i, k, n);
      const double rho2 = leave_one_rho(fy, cy, classes, i, k, n);
      deltas[i] = rho1 - rho2;
    }
  });

  double mean = 0.0, mean_comp = 0.0;
  for (double v : deltas) kahan_add(mean, mean_comp, v);
  mean /= static_cast<double>(n);
  double ss = 0.0, ss_comp = 0.0;
  for (double v : deltas) {
    const double dev = v - mean;
    kahan_add(ss, ss_comp, dev * dev);
  }
  return ss * static_cast<double>(n - 1) / static_cast<double>(n);
}

void require_min_class_size(const std::vector<ClassRange>& classes, std::size_t min_size,
                            const char* why) {
  for (const ClassRange& c : classes)
    if (c.count < min_size)
      throw DataError(std::string(why) + " requires every class to have at least " +
                      std::to_string(min_size) + " observations; class \"" + c.label +
                      "\" has " + std::to_string(c.count));
}

ComparisonResult studentized_result(const CgcDifference& diff, double variance, double alpha,
                                    Method method) {
  if (variance <= kDegenerateVariance)
    throw DegenerateError(
        "variance estimate is numerically zero; the two groups appear exactly dependent, so "
        "the studentized test is undefined");
  ComparisonResult r;
  r.rho1 = diff.g1.rho;
  r.rho2 = diff.g2.rho;
  r.d_n = diff.d_n;
  r.variance = variance;
  r.alpha = alpha;
  r.method = method;
  const double sd = std::sqrt(variance);
  r.z = r.d_n / sd;
  r.p_value = 1.0 - normal_cdf(r.z);
  r.reject = r.d_n > upper_quantile(alpha) * sd;
  return r;
}

}  // namespace

const char* method_name(Method m) {
  switch (m) {
    case Method::asn: return "asN";
    case Method::bootstrap: return "bootstrap";
    case Method::projection: return "projection";
  }
  return "?";
}

Method method_from_name(const std::string& name) {
  if (name == "asN" || name == "asn") return Method::asn;
  if (name == "bootstrap") return Method::bootstrap;
  if (name == "projection") return Method::projection;
  throw DataError("unknown method \"" + name + "\" (valid: asN, bootstrap, projection)");
}

CgcDifference cgc_difference(const PairedDataset& d) {
  CgcDifference out;
  try {
    out.g1 = gini_correlation_blocked(d.x(), d.classes());
  } catch (const DegenerateError& e) {
    throw DegenerateError(std::string("x group: ") + e.what());
  }
  try {
    out.g2 = gini_correlation_blocked(d.y(), d.classes());
  } catch (const DegenerateError& e) {
    throw DegenerateError(std::string("y group: ") + e.what());
  }
  out.d_n = out.g1.rho - out.g2.rho;
  return out;
}

double jackknife_variance(const PairedDataset& d) {
  require_min_class_size(d.classes(), 3, "the jackknife");
  std::vector<std::size_t> class_of(d.n());
  for (std::size_t i = 0; i < d.n(); ++i) class_of[i] = d.class_of(i);
  return jackknife_for(d.x(), d.y(), d.classes(), class_of);
}

ComparisonResult asn_test(const PairedDataset& d, double alpha) {
  check_alpha(alpha);
  const CgcDifference diff = cgc_difference(d);
  const double m = jackknife_variance(d);
  return studentized_result(diff, m, alpha, Method::asn);
}

ComparisonResult projection_test(const PairedDataset& d, double alpha) {
  check_alpha(alpha);
  const CgcDifference diff = cgc_difference(d);
  const double v = projection_variance(d) / static_cast<double>(d.n());
  return studentized_result(diff, v, alpha, Method::projection);
}

double projection_variance(const PairedDataset& d) {
  const std::size_t n = d.n();
  const std::size_t nk = d.num_classes();
  const auto& classes = d.classes();

  // S[i][l]: summed distance from row i to every row of class l (x and y).
  std::vector<double> sx(n * nk, 0.0), sy(n * nk, 0.0);
  parallel_blocks(n, 64, [&](std::size_t, std::size_t lo, std::size_t hi) {
    for (std::size_t i = lo; i < hi; ++i) {
      double* rx = sx.data() + i * nk;
      double* ry = sy.data() + i * nk;
      for (std::size_t l = 0; l < nk; ++l) {
        const std::size_t end = classes[l].begin + classes[l].count;
        double ax = 0.0, cx = 0.0, ay = 0.0, cy = 0.0;
        for (std::size_t j = classes[l].begin; j < end; ++j) {
          if (j == i) continue;
          kahan_add(ax, cx, euclidean(d.x().row(i), d.x().row(j), d.p()));
          kahan_add(ay, cy, euclidean(d.y().row(i), d.y().row(j), d.q()));
        }
        rx[l] = ax;
        ry[l] = ay;
      }
    }
  });

  // Overall Gini mean differences derived from the same sums.
  auto overall_delta = [&](const std::vector<double>& s) {
    double acc = 0.0, comp = 0.0;
    for (double v : s) kahan_add(acc, comp, v);
    return 0.5 * acc / pair_count(n);
  };
  const double delta_x = overall_delta(sx);
  const double delta_y = overall_delta(sy);
  if (!(delta_x > 0.0))
    throw DegenerateError("x group: Gini mean difference is zero (all observations identical)");
  if (!(delta_y > 0.0))
    throw DegenerateError("y group: Gini mean difference is zero (all observations identical)");

  // Between- and within-class mean distances per (k, l).
  auto block_mean = [&](const std::vector<double>& s, std::size_t k, std::size_t l) {
    const std::size_t end = classes[k].begin + classes[k].count;
    double acc = 0.0, comp = 0.0;
    for (std::size_t i = classes[k].begin; i < end; ++i) kahan_add(acc, comp, s[i * nk + l]);
    if (k == l)
      return 0.5 * acc / pair_count(classes[k].count);
    return acc / (static_cast<double>(classes[k].count) * static_cast<double>(classes[l].count));
  };

  double acc = 0.0;
  std::vector<double> h(n);
  for (std::size_t k = 0; k < nk; ++k) {
    const double pk = d.classes()[k].count / static_cast<double>(n);
    const double nk_m1 = static_cast<double>(classes[k].count - 1);
    const double dkk_x = block_mean(sx, k, k);
    const double dkk_y = block_mean(sy, k, k);
    for (std::size_t l = 0; l < nk; ++l) {
      if (l == k) continue;
      const double pl = d.classes()[l].count / static_cast<double>(n);
      const double nl = static_cast<double>(classes[l].count);
      const double dkl_x = block_mean(sx, k, l);
      const double dkl_y = block_mean(sy, k, l);

      // Projection of the two-class kernel onto observation i of class k.
      const std::size_t end = classes[k].begin + classes[k].count;
      double mean = 0.0, mean_comp = 0.0;
      std::size_t t = 0;
      for (std::size_t i = classes[k].begin; i < end; ++i, ++t) {
        const double hx =
            (sx[i * nk + l] / nl - sx[i * nk + k] / nk_m1 - dkl_x + dkk_x) / (2.0 * delta_x);
        const double hy =
            (sy[i * nk + l] / nl - sy[i * nk + k] / nk_m1 - dkl_y + dkk_y) / (2.0 * delta_y);
        h[t] = hx - hy;
        kahan_add(mean, mean_comp, h[t]);
      }
      mean /= static_cast<double>(classes[k].count);
      double ss = 0.0, ss_comp = 0.0;
      for (std::size_t u = 0; u < classes[k].count; ++u) {
        const double dev = h[u] - mean;
        kahan_add(ss, ss_comp, dev * dev);
      }
      // Var of the projection representation: observation i of class k enters
      // through n_l * h_kl, so the ordered pair (k, l) carries weight
      // p_k * p_l^2. Summed over both orders of {k, l} this reproduces the
      // symmetric (p_k^2 p_l + p_l^2 p_k) per-pair weight.
      const double var_kl = ss / nk_m1;
      acc += pk * pl * pl * var_kl;
    }
  }
  return 16.0 * acc;
}

BootstrapResult bootstrap_test(const PairedDataset& d, std::size_t b, RngStream rng) {
  if (b < 1) throw DataError("bootstrap needs at least 1 replicate");
  const std::size_t n = d.n();
  const auto& classes = d.classes();
  const GroupScorer sx(d.x());
  const GroupScorer sy(d.y());

  const std::vector<std::uint32_t> ident = identity_index(n);
  const auto rho1_obs = sx.rho(ident, classes);
  const auto rho2_obs = sy.rho(ident, classes);
  if (!rho1_obs) throw DegenerateError("x group: Gini mean difference is zero");
  if (!rho2_obs) throw DegenerateError("y group: Gini mean difference is zero");
  const double d0 = *rho1_obs - *rho2_obs;

  std::vector<double> u(b);
  parallel_blocks(b, 1, [&](std::size_t rep, std::size_t, std::size_t) {
    RngStream s = rng.substream(rng.stream_id() + rep);
    std::vector<std::uint32_t> idx(n);
    for (int attempt = 0;; ++attempt) {
      if (attempt >= kRetryCap)
        throw ReplicateAbort("bootstrap replicate " + std::to_string(rep) +
                             ": resample still degenerate after " + std::to_string(kRetryCap) +
                             " attempts");
      // Stratified resample: slots of class k draw uniformly from class k,
      // the same drawn row supplying both x and y.
      for (const ClassRange& c : classes)
        for (std::size_t t = 0; t < c.count; ++t)
          idx[c.begin + t] = static_cast<std::uint32_t>(c.begin + s.below(c.count));
      const auto r1 = sx.rho(idx, classes);
      if (!r1) continue;
      const auto r2 = sy.rho(idx, classes);
      if (!r2) continue;
      u[rep] = *r1 - *r2;
      break;
    }
  });

  double mean = 0.0, comp = 0.0;
  for (double v : u) kahan_add(mean, comp, v);
  mean /= static_cast<double>(b);

  BootstrapResult res;
  res.d0 = d0;
  res.b = b;
  res.replicates.resize(b);
  std::size_t count = 0;
  for (std::size_t j = 0; j < b; ++j) {
    res.replicates[j] = u[j] - mean;
    if (res.replicates[j] >= d0) ++count;
  }
  res.p_value = static_cast<double>(count) / static_cast<double>(b);
  return res;
}

PermutationResult permutation_independence_test(const LabeledDataset& d, std::size_t r,
                                                RngStream rng) {
  if (r < 1) throw DataError("permutation test needs at least 1 permutation");
  const std::size_t n = d.n();
  const auto& classes = d.classes();
  const GroupScorer scorer(d.features());

  const auto rho_obs = scorer.rho(identity_index(n), classes);
  if (!rho_obs)
    throw DegenerateError("Gini mean difference is zero (all observations identical)");

  std::vector<double> rhos(r);
  parallel_blocks(r, 1, [&](std::size_t rep, std::size_t, std::size_t) {
    RngStream s = rng.substream(rng.stream_id() + rep);
    // Uniform permutation (Fisher–Yates); slot t gets original row perm[t],
    // so class k's block receives a uniform random subset of rows.
    std::vector<std::uint32_t> perm = identity_index(n);
    for (std::size_t i = n - 1; i > 0; --i) {
      const std::size_t j = s.below(i + 1);
      std::swap(perm[i], perm[j]);
    }
    // The overall Gini mean difference is permutation-invariant, so a
    // degenerate value would already have been caught on the observed data.
    rhos[rep] = *scorer.rho(perm, classes);
  });

  std::size_t count = 0;
  for (double v : rhos)
    if (v > *rho_obs) ++count;

  PermutationResult res;
  res.rho_hat = *rho_obs;
  res.replicates = std::move(rhos);
  res.p_value = static_cast<double>(1 + count) / static_cast<double>(r + 1);
  return res;
}

PairedDataset added_value_pair(const PairedDataset& d) {
  return PairedDataset(Matrix::hcat(d.x(), d.y()), d.x(), d.labels());
}

ComparisonResult added_value_asn_test(const PairedDataset& d, double alpha) {
  return asn_test(added_value_pair(d), alpha);
}

BootstrapResult added_value_bootstrap_test(const PairedDataset& d, std::size_t b, RngStream rng) {
  return bootstrap_test(added_value_pair(d), b, rng);
}

}  // namespace cgc
