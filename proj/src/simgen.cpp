#include "cgc/simgen.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdio>

#include "cgc/errors.hpp"

namespace cgc {

namespace {

constexpr int kRedrawCap = 100;

// Entries of base^|i-j| computed by iterated multiplication so that equal
// exponents give bitwise-equal entries on every platform.
std::vector<double> ar_powers(std::size_t dim, double base) {
  std::vector<double> pow(dim, 1.0);
  for (std::size_t k = 1; k < dim; ++k) pow[k] = pow[k - 1] * base;
  return pow;
}

// out = s * z for a square matrix s.
void apply_root(const Matrix& s, const double* z, double* out) {
  const std::size_t d = s.rows();
  for (std::size_t i = 0; i < d; ++i) {
    double acc = 0.0;
    const double* row = s.row(i);
    for (std::size_t j = 0; j < d; ++j) acc += row[j] * z[j];
    out[i] = acc;
  }
}

const double kExpParams[3] = {1.0, 2.0, 4.0};

double exp_rate(const ScenarioConfig& cfg, std::size_t k) {
  // parameters 1,2,4 read as rates by default, as means when flagged
  return cfg.exp_mean ? 1.0 / kExpParams[k] : kExpParams[k];
}

void require(bool cond, const std::string& msg) {
  if (!cond) throw DataError(msg);
}

PairedDataset gen_ex1a(const ScenarioConfig& cfg, RngStream& rng) {
  const Matrix sig_x = ar_covariance({cfg.p, 0.7});
  const Matrix sig_y = ar_covariance({cfg.q, 0.7});
  Matrix x(cfg.total_n(), cfg.p), y(cfg.total_n(), cfg.q);
  std::vector<std::string> labels(cfg.total_n());
  std::size_t row = 0;
  for (std::size_t k = 0; k < 3; ++k) {
    const double kd = static_cast<double>(k);
    const std::vector<double> mean_x(cfg.p, 2.0 + kd + kd * cfg.beta);
    const Matrix bx = sample_mvnormal(mean_x, sig_x, cfg.class_sizes[k], rng);
    for (std::size_t t = 0; t < cfg.class_sizes[k]; ++t) x.set_row(row + t, bx.row(t));
    for (std::size_t t = 0; t < cfg.class_sizes[k]; ++t) labels[row + t] = std::to_string(k + 1);
    row += cfg.class_sizes[k];
  }
  row = 0;
  for (std::size_t k = 0; k < 3; ++k) {
    const std::vector<double> mean_y(cfg.q, static_cast<double>(k));
    const Matrix by = sample_mvnormal(mean_y, sig_y, cfg.class_sizes[k], rng);
    for (std::size_t t = 0; t < cfg.class_sizes[k]; ++t) y.set_row(row + t, by.row(t));
    row += cfg.class_sizes[k];
  }
  return PairedDataset(std::move(x), std::move(y), std::move(labels));
}

PairedDataset gen_ex1b(const ScenarioConfig& cfg, RngStream& rng) {
  const Matrix root_x = psd_sqrt(ar_covariance({cfg.p, 0.7}));
  const Matrix root_y = psd_sqrt(ar_covariance({cfg.q, 0.7}));
  Matrix x(cfg.total_n(), cfg.p), y(cfg.total_n(), cfg.q);
  std::vector<std::string> labels(cfg.total_n());
  std::size_t row = 0;
  for (std::size_t k = 0; k < 3; ++k) {
    const double rate = exp_rate(cfg, k);
    const double shift = k < 2 ? cfg.beta : 0.0;  // classes 1 and 2 shifted, class 3 not
    for (std::size_t t = 0; t < cfg.class_sizes[k]; ++t) {
      const std::vector<double> w = sample_exponential_vector(rate, cfg.p, rng);
      apply_root(root_x, w.data(), x.row(row));
      for (std::size_t j = 0; j < cfg.p; ++j) x(row, j) += shift;
      labels[row] = std::to_string(k + 1);
      ++row;
    }
  }
  row = 0;
  for (std::size_t k = 0; k < 3; ++k) {
    const double rate = exp_rate(cfg, k);
    for (std::size_t t = 0; t < cfg.class_sizes[k]; ++t) {
      const std::vector<double> w = sample_exponential_vector(rate, cfg.q, rng);
      apply_root(root_y, w.data(), y.row(row));
      ++row;
    }
  }
  return PairedDataset(std::move(x), std::move(y), std::move(labels));
}

PairedDataset gen_ex2a(const ScenarioConfig& cfg, RngStream& rng) {
  const std::size_t d = cfg.p + cfg.q;
  const Matrix sig = ar_covariance({d, 0.7});
  Matrix x(cfg.total_n(), cfg.p), y(cfg.total_n(), cfg.q);
  std::vector<std::string> labels(cfg.total_n());
  std::size_t row = 0;
  for (std::size_t k = 0; k < 3; ++k) {
    const double kd = static_cast<double>(k);
    std::vector<double> mean(d);
    for (std::size_t j = 0; j < cfg.p; ++j) mean[j] = 2.0 + kd + kd * cfg.beta;
    for (std::size_t j = cfg.p; j < d; ++j) mean[j] = kd;
    const Matrix w = sample_mvnormal(mean, sig, cfg.class_sizes[k], rng);
    for (std::size_t t = 0; t < cfg.class_sizes[k]; ++t) {
      for (std::size_t j = 0; j < cfg.p; ++j) x(row, j) = w(t, j);
      for (std::size_t j = 0; j < cfg.q; ++j) y(row, j) = w(t, cfg.p + j);
      labels[row] = std::to_string(k + 1);
      ++row;
    }
  }
  return PairedDataset(std::move(x), std::move(y), std::move(labels));
}

PairedDataset gen_ex2b(const ScenarioConfig& cfg, RngStream& rng) {
  const Matrix root = psd_sqrt(ar_covariance({2, 0.7}));
  Matrix x(cfg.total_n(), 1), y(cfg.total_n(), 1);
  std::vector<std::string> labels(cfg.total_n());
  std::size_t row = 0;
  for (std::size_t k = 0; k < 3; ++k) {
    const double rate = exp_rate(cfg, k);
    const double shift = k < 2 ? cfg.beta : 0.0;
    for (std::size_t t = 0; t < cfg.class_sizes[k]; ++t) {
      const std::vector<double> w = sample_exponential_vector(rate, 2, rng);
      double pair[2];
      apply_root(root, w.data(), pair);
      x(row, 0) = pair[0] + shift;
      y(row, 0) = pair[1];
      labels[row] = std::to_string(k + 1);
      ++row;
    }
  }
  return PairedDataset(std::move(x), std::move(y), std::move(labels));
}

PairedDataset gen_ex3(const ScenarioConfig& cfg, RngStream& rng) {
  const std::size_t n = cfg.total_n();
  const std::size_t latent = 10;
  Matrix sigma = cfg.sigma_variant == SigmaVariant::ar
                     ? ar_covariance({latent, 0.5})
                     : ar_covariance({latent, 0.0});  // identity
  const Matrix root = psd_sqrt(sigma);

  Matrix v(n, latent);
  std::vector<std::string> labels(n);
  for (int attempt = 0;; ++attempt) {
    if (attempt >= kRedrawCap)
      throw ReplicateAbort("ex3: a class stayed below 3 members after " +
                           std::to_string(kRedrawCap) + " redraws (n = " + std::to_string(n) +
                           " is too small)");
    std::size_t pos = 0, neg = 0;
    std::vector<double> z(latent);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < latent; ++j) z[j] = rng.normal();
      apply_root(root, z.data(), v.row(i));
      const double* vi = v.row(i);
      const double eta = -3.0 + 2.0 * vi[0] + 2.0 * vi[1] + 2.0 * vi[2] +
                         3.0 * std::sin(vi[3]) + 4.0 * vi[4] * vi[4];
      const double prob = 1.0 / (1.0 + std::exp(-eta));
      const bool one = rng.uniform() < prob;
      labels[i] = one ? "1" : "-1";
      one ? ++pos : ++neg;
    }
    if (pos >= 3 && neg >= 3) break;
  }

  std::vector<std::size_t> xcols = {0, 1, 2, 3, 4};
  std::vector<std::size_t> ycols;
  for (std::size_t j = 0; j < cfg.q; ++j) ycols.push_back(5 + j);
  return PairedDataset(v.select_cols(xcols), v.select_cols(ycols), std::move(labels));
}

}  // namespace

Matrix ar_covariance(const CovarianceSpec& spec) {
  if (spec.dim < 1) throw DataError("ar_covariance: dimension must be at least 1");
  if (!(spec.base > -1.0 && spec.base < 1.0))
    throw DataError("ar_covariance: base must lie in (-1, 1)");
  const std::vector<double> pow = ar_powers(spec.dim, spec.base);
  Matrix m(spec.dim, spec.dim);
  for (std::size_t i = 0; i < spec.dim; ++i)
    for (std::size_t j = 0; j < spec.dim; ++j)
      m(i, j) = pow[i > j ? i - j : j - i];
  return m;
}

Matrix psd_sqrt(const Matrix& sigma) {
  const std::size_t d = sigma.rows();
  if (d == 0 || sigma.cols() != d) throw DataError("psd_sqrt: matrix must be square");
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = i + 1; j < d; ++j)
      if (sigma(i, j) != sigma(j, i))
        throw DataError("psd_sqrt: matrix is not symmetric");

  Eigen::MatrixXd m(d, d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) m(i, j) = sigma(i, j);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m);
  if (solver.info() != Eigen::Success) throw DataError("psd_sqrt: eigendecomposition failed");

  Eigen::VectorXd ev = solver.eigenvalues();
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    if (ev[i] < -1e-10) {
      char buf[64];
      std::snprintf(buf, sizeof buf, "%.3g", ev[i]);
      throw DataError(std::string("psd_sqrt: matrix is not positive semidefinite (eigenvalue ") +
                      buf + ")");
    }
    ev[i] = std::sqrt(std::max(0.0, ev[i]));
  }
  const Eigen::MatrixXd root =
      solver.eigenvectors() * ev.asDiagonal() * solver.eigenvectors().transpose();

  Matrix out(d, d);
  // exact symmetry, so downstream products cannot pick up asymmetric noise
  for (std::size_t i = 0; i < d; ++i) {
    out(i, i) = root(i, i);
    for (std::size_t j = i + 1; j < d; ++j)
      out(i, j) = out(j, i) = 0.5 * (root(i, j) + root(j, i));
  }
  return out;
}

Matrix sample_mvnormal(const std::vector<double>& mean, const Matrix& sigma, std::size_t n,
                       RngStream& rng) {
  const std::size_t d = mean.size();
  if (sigma.rows() != d || sigma.cols() != d)
    throw DataError("sample_mvnormal: mean and covariance dimensions differ");
  const Matrix root = psd_sqrt(sigma);
  Matrix out(n, d);
  std::vector<double> z(d);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < d; ++j) z[j] = rng.normal();
    apply_root(root, z.data(), out.row(i));
    for (std::size_t j = 0; j < d; ++j) out(i, j) += mean[j];
  }
  return out;
}

std::vector<double> sample_exponential_vector(double rate, std::size_t dim, RngStream& rng) {
  if (!(rate > 0.0)) throw DataError("sample_exponential_vector: rate must be positive");
  std::vector<double> out(dim);
  for (std::size_t j = 0; j < dim; ++j) out[j] = rng.exponential(rate);
  return out;
}

Design design_from_name(const std::string& name) {
  if (name == "ex1a") return Design::ex1a;
  if (name == "ex1b") return Design::ex1b;
  if (name == "ex2a") return Design::ex2a;
  if (name == "ex2b") return Design::ex2b;
  if (name == "ex3") return Design::ex3;
  throw DataError("unknown design \"" + name + "\" (valid: ex1a, ex1b, ex2a, ex2b, ex3)");
}

const char* design_name(Design d) {
  switch (d) {
    case Design::ex1a: return "ex1a";
    case Design::ex1b: return "ex1b";
    case Design::ex2a: return "ex2a";
    case Design::ex2b: return "ex2b";
    case Design::ex3: return "ex3";
  }
  return "?";
}

std::size_t ScenarioConfig::total_n() const {
  std::size_t n = 0;
  for (std::size_t s : class_sizes) n += s;
  return n;
}

void ScenarioConfig::validate() const {
  require(!class_sizes.empty(), "class_sizes: must not be empty");
  for (std::size_t s : class_sizes)
    require(s >= 3, "class_sizes: every class needs at least 3 observations (jackknife)");
  require(beta >= 0.0 && beta <= 1.0, "beta: must lie in [0, 1]");
  require(p >= 1, "p: must be at least 1");
  require(q >= 1, "q: must be at least 1");
  switch (design) {
    case Design::ex1a:
    case Design::ex1b:
    case Design::ex2a:
      require(class_sizes.size() == 3,
              std::string(design_name(design)) + ": needs exactly 3 class sizes");
      break;
    case Design::ex2b:
      require(class_sizes.size() == 3, "ex2b: needs exactly 3 class sizes");
      require(p == 1 && q == 1, "ex2b: is a bivariate design (p = q = 1)");
      break;
    case Design::ex3:
      require(p == 5, "ex3: X is fixed to the first 5 latent coordinates (p = 5)");
      require(q == 1 || q == 3 || q == 5, "ex3: q must be one of 1, 3, 5");
      break;
  }
}

PairedDataset gen_scenario(const ScenarioConfig& cfg, RngStream& rng) {
  cfg.validate();
  switch (cfg.design) {
    case Design::ex1a: return gen_ex1a(cfg, rng);
    case Design::ex1b: return gen_ex1b(cfg, rng);
    case Design::ex2a: return gen_ex2a(cfg, rng);
    case Design::ex2b: return gen_ex2b(cfg, rng);
    case Design::ex3: return gen_ex3(cfg, rng);
  }
  throw DataError("gen_scenario: unhandled design");
}

ScenarioConfig scenario_from_kv(const KvMap& kv) {
  ScenarioConfig cfg;
  cfg.design = design_from_name(kv.get_string("design"));
  if (kv.has("p")) cfg.p = static_cast<std::size_t>(kv.get_u64("p"));
  if (kv.has("q")) cfg.q = static_cast<std::size_t>(kv.get_u64("q"));
  if (kv.has("n")) cfg.class_sizes = parse_size_list(kv.get_string("n"), "key \"n\"");
  if (kv.has("beta")) cfg.beta = kv.get_double("beta");
  if (kv.has("sigma_variant")) {
    const std::string v = kv.get_string("sigma_variant");
    if (v == "independent") cfg.sigma_variant = SigmaVariant::independent;
    else if (v == "ar") cfg.sigma_variant = SigmaVariant::ar;
    else throw DataError("sigma_variant: must be \"independent\" or \"ar\", got \"" + v + "\"");
  }
  if (kv.has("exp_mean")) cfg.exp_mean = kv.get_bool("exp_mean");
  return cfg;
}

void scenario_to_kv(const ScenarioConfig& cfg, KvMap& kv) {
  kv.set("design", design_name(cfg.design));
  kv.set("p", std::to_string(cfg.p));
  kv.set("q", std::to_string(cfg.q));
  std::string sizes;
  for (std::size_t i = 0; i < cfg.class_sizes.size(); ++i) {
    if (i) sizes += ",";
    sizes += std::to_string(cfg.class_sizes[i]);
  }
  kv.set("n", sizes);
  char beta[40];
  std::snprintf(beta, sizeof beta, "%.17g", cfg.beta);
  kv.set("beta", beta);
  kv.set("sigma_variant", cfg.sigma_variant == SigmaVariant::ar ? "ar" : "independent");
  kv.set("exp_mean", cfg.exp_mean ? "true" : "false");
}

}  // namespace cgc
