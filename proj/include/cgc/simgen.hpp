#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "cgc/dataset.hpp"
#include "cgc/kvconfig.hpp"
#include "cgc/matrix.hpp"
#include "cgc/rng.hpp"

namespace cgc {

// First-order autoregressive covariance Sigma_ij = base^|i-j|.
struct CovarianceSpec {
  std::size_t dim = 1;
  double base = 0.7;
};

Matrix ar_covariance(const CovarianceSpec& spec);

// Symmetric PSD square root via eigendecomposition. Eigenvalues in
// [-1e-10, 0) are clamped to 0; any smaller one, or an asymmetric input,
// is an error.
Matrix psd_sqrt(const Matrix& sigma);

// n rows of N(mean, sigma), drawn as mean + S z with S = psd_sqrt(sigma)
// and z filled row by row, coordinate by coordinate.
Matrix sample_mvnormal(const std::vector<double>& mean, const Matrix& sigma, std::size_t n,
                       RngStream& rng);

// dim iid Exp(rate) coordinates.
std::vector<double> sample_exponential_vector(double rate, std::size_t dim, RngStream& rng);

// The five simulation designs.
//
//   ex1a  X and Y independent of each other; three Gaussian classes.
//         X_k ~ N((2+k)1_p + k*beta*1_p, AR_p(0.7)) for k = 0,1,2;
//         Y_k ~ N(k*1_q, AR_q(0.7)).
//   ex1b  Skewed classes: X_k = S_p w + beta*1_p (classes 1,2; class 3
//         unshifted), w iid Exp with rates 1,2,4 per class, S_p the PSD
//         root of AR_p(0.7); Y_k = S_q w', same rates, no shift.
//   ex2a  X and Y jointly Gaussian: one (p+q)-variate normal per class,
//         means (2_p, 0_q), ((3+beta)_p, 1_q), ((4+2beta)_p, 2_q),
//         covariance AR_{p+q}(0.7); X = first p coordinates, Y = rest.
//   ex2b  Skewed joint pair (p = q = 1): w = S_2 (Exp(r), Exp(r)) with
//         rates 1,2,4 per class, S_2 the root of AR_2(0.7); classes 1,2
//         shifted by (beta, 0); X = w_1, Y = w_2.
//   ex3   Logistic response on latent V ~ N(0, Sigma_10):
//         logit P(Z=1|V) = -3 + 2V1 + 2V2 + 2V3 + 3 sin(V4) + 4V5^2,
//         labels in {1, -1}; X = (V1..V5); q in {5,3,1} selects
//         Y = (V6..V10), (V6,V7,V8), or V6. class_sizes only sets the
//         total n; realized class counts are random (a draw leaving any
//         class below 3 members is redrawn, at most 100 times). beta is
//         ignored.
enum class Design { ex1a, ex1b, ex2a, ex2b, ex3 };

Design design_from_name(const std::string& name);
const char* design_name(Design d);

enum class SigmaVariant { independent, ar };  // ex3 latent covariance: I or AR(0.5)

struct ScenarioConfig {
  Design design = Design::ex1a;
  std::size_t p = 1;
  std::size_t q = 1;
  std::vector<std::size_t> class_sizes = {40, 40, 40};
  double beta = 0.0;
  SigmaVariant sigma_variant = SigmaVariant::independent;
  // Reads the exponential parameters 1,2,4 as means instead of rates.
  bool exp_mean = false;

  std::size_t total_n() const;
  void validate() const;  // throws DataError with the offending field named
};

// One simulated dataset; identical (config, seed, stream) always gives
// identical bytes.
PairedDataset gen_scenario(const ScenarioConfig& cfg, RngStream& rng);

// Flat key=value (de)serialization; round-trips exactly.
ScenarioConfig scenario_from_kv(const KvMap& kv);
void scenario_to_kv(const ScenarioConfig& cfg, KvMap& kv);

}  // namespace cgc
