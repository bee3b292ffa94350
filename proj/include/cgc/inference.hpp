#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "cgc/dataset.hpp"
#include "cgc/gini.hpp"
#include "cgc/rng.hpp"

namespace cgc {

// Variance estimators available for the one-sided comparison test.
enum class Method { asn, bootstrap, projection };

const char* method_name(Method m);
Method method_from_name(const std::string& name);

// Observed difference of the two categorical Gini correlations,
// d_n = rho1_hat - rho2_hat, with both full estimates attached.
struct CgcDifference {
  GiniEstimate g1;  // x against the response
  GiniEstimate g2;  // y against the response
  double d_n = 0.0;
};

CgcDifference cgc_difference(const PairedDataset& d);

// Delete-one jackknife variance of d_n. Cached distance row sums make each
// deletion O(K) after one O(n^2) pass; equal to naive recomputation up to
// rounding. Requires every class size >= 3 so no deletion empties a class
// below 2.
double jackknife_variance(const PairedDataset& d);

// Asymptotic variance of sqrt(n) * d_n under the null, estimated through
// the projection decomposition of the two-sample kernel; divide by n for
// the variance of d_n itself.
double projection_variance(const PairedDataset& d);

// One-sided z-test result. H0: rho1 = rho2 against H1: rho1 > rho2.
struct ComparisonResult {
  double rho1 = 0.0;
  double rho2 = 0.0;
  double d_n = 0.0;
  double variance = 0.0;  // estimated variance of d_n
  double z = 0.0;
  double p_value = 1.0;
  double alpha = 0.05;
  bool reject = false;
  Method method = Method::asn;
};

// Jackknife-studentized normal test: z = d_n / sqrt(M_hat),
// reject iff d_n > z_alpha * sqrt(M_hat).
ComparisonResult asn_test(const PairedDataset& d, double alpha = 0.05);

// Same test shape with the projection variance estimate in place of the
// jackknife.
ComparisonResult projection_test(const PairedDataset& d, double alpha = 0.05);

// Class-stratified bootstrap of the difference.
struct BootstrapResult {
  double d0 = 0.0;                 // observed difference
  std::vector<double> replicates;  // centered replicate differences d_b
  double p_value = 1.0;            // (1/B) * #{d_b >= d0}; a multiple of 1/B
  std::size_t b = 0;
};

// Resamples (x_i, y_i) pairs jointly, with replacement, within each class,
// keeping all class sizes fixed. A replicate whose overall Gini mean
// difference degenerates to zero is redrawn (at most 100 attempts; then
// ReplicateAbort). Replicate j draws from rng stream_id + j, so results do
// not depend on the thread layout.
BootstrapResult bootstrap_test(const PairedDataset& d, std::size_t b, RngStream rng);

// Permutation test of independence between features and response for a
// single group, based on the CGC.
struct PermutationResult {
  double rho_hat = 0.0;
  std::vector<double> replicates;  // permuted rho values
  double p_value = 1.0;            // (1 + #{rho_perm > rho_hat}) / (r + 1)
};

// Permutes class labels r times (features fixed, class sizes fixed) using
// one substream per permutation (rng stream_id + j). Distances are cached
// once; each permutation only reassigns rows to classes.
PermutationResult permutation_independence_test(const LabeledDataset& d, std::size_t r,
                                                RngStream rng);

// The added-value pair: w = [x | y] against the baseline x, sharing the
// response. Rejecting w-beats-x supports y adding marginal signal.
PairedDataset added_value_pair(const PairedDataset& d);

ComparisonResult added_value_asn_test(const PairedDataset& d, double alpha = 0.05);
BootstrapResult added_value_bootstrap_test(const PairedDataset& d, std::size_t b, RngStream rng);

}  // namespace cgc
