// Command-line front end: compare two feature groups by their categorical
// Gini correlation with a shared response, run the added-value variant, test
// independence by permutation, or drive simulation studies.
//
// Exit codes: 0 success, 2 bad input, 3 degenerate estimate, 4 aborted
// replicate.

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cgc/csv.hpp"
#include "cgc/errors.hpp"
#include "cgc/gini.hpp"
#include "cgc/harness.hpp"
#include "cgc/inference.hpp"
#include "cgc/json_writer.hpp"
#include "cgc/kvconfig.hpp"

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

void emit(const std::string& text, const std::string& output_path) {
  if (output_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(output_path, std::ios::binary);
  if (!out) throw cgc::DataError("cannot open file for writing: " + output_path);
  out << text;
  if (!out) throw cgc::DataError("write failed: " + output_path);
}

std::vector<cgc::Method> parse_methods(const std::string& list) {
  std::vector<cgc::Method> methods;
  for (const std::string& name : cgc::split_list(list))
    methods.push_back(cgc::method_from_name(name));
  if (methods.empty()) throw cgc::DataError("no methods given");
  return methods;
}

// Options shared by `compare` and `added-value`.
struct CompareOptions {
  std::string input;
  std::string label;
  std::string x_cols;
  std::string y_cols;
  std::string method = "asN";
  double alpha = 0.05;
  std::uint64_t b = 1000;
  std::uint64_t seed = 0;
  bool swap = false;
  bool json = false;
  std::string output;
};

void add_compare_options(CLI::App* cmd, CompareOptions& o) {
  cmd->add_option("--input", o.input, "CSV file with features and the response column")
      ->required();
  cmd->add_option("--label", o.label, "response column (name or 0-based index)")->required();
  cmd->add_option("--x", o.x_cols, "first group's columns (names, indices, ranges like 3-17)")
      ->required();
  cmd->add_option("--y", o.y_cols, "second group's columns")->required();
  cmd->add_option("--method", o.method, "asN, bootstrap, projection; comma-separated for several")
      ->capture_default_str();
  cmd->add_option("--alpha", o.alpha, "test level")->capture_default_str();
  cmd->add_option("--B", o.b, "bootstrap replicates")->capture_default_str();
  cmd->add_option("--seed", o.seed, "RNG seed")->capture_default_str();
  cmd->add_flag("--swap", o.swap, "exchange the roles of --x and --y");
  cmd->add_flag("--json", o.json, "machine-readable output (17 significant digits)");
  cmd->add_option("--output", o.output, "write the result here instead of stdout");
}

int run_comparison(const CompareOptions& o, bool added_value) {
  cgc::PairedDataset base = cgc::load_paired_csv(o.input, o.label, o.x_cols, o.y_cols);
  if (o.swap) base = base.swapped();
  const cgc::PairedDataset pair = added_value ? cgc::added_value_pair(base) : base;
  const std::vector<cgc::Method> methods = parse_methods(o.method);

  const cgc::CgcDifference diff = cgc::cgc_difference(pair);
  const double dcor = cgc::distance_correlation(base.x(), base.y());

  struct MethodOutcome {
    cgc::Method method;
    double variance = 0.0;  // asN / projection only
    double z = 0.0;
    double p_value = 1.0;
    bool reject = false;
    bool studentized = false;
  };
  std::vector<MethodOutcome> outcomes;
  for (cgc::Method m : methods) {
    MethodOutcome out;
    out.method = m;
    switch (m) {
      case cgc::Method::asn:
      case cgc::Method::projection: {
        const cgc::ComparisonResult r = m == cgc::Method::asn
                                            ? cgc::asn_test(pair, o.alpha)
                                            : cgc::projection_test(pair, o.alpha);
        out.variance = r.variance;
        out.z = r.z;
        out.p_value = r.p_value;
        out.reject = r.reject;
        out.studentized = true;
        break;
      }
      case cgc::Method::bootstrap: {
        const cgc::BootstrapResult r =
            cgc::bootstrap_test(pair, o.b, cgc::RngStream(o.seed, 0));
        out.p_value = r.p_value;
        out.reject = r.p_value < o.alpha;
        break;
      }
    }
    outcomes.push_back(out);
  }

  const char* g1 = added_value ? "W = [X|Y]" : "X";
  const char* g2 = added_value ? "X" : "Y";

  if (o.json) {
    cgc::JsonWriter w;
    w.begin_object();
    w.field("command", added_value ? "added-value" : "compare");
    w.field("input", o.input);
    w.field("n", pair.n());
    w.field("classes", pair.num_classes());
    // dimensions of the selected input groups, not of the derived pair
    w.field("p", base.p());
    w.field("q", base.q());
    w.field("swap", o.swap);
    w.field("alpha", o.alpha);
    w.field("seed", o.seed);
    w.field("hypothesis", std::string("H0: rho_g(") + g1 + ", Z) = rho_g(" + g2 +
                              ", Z) vs H1: rho_g(" + g1 + ", Z) > rho_g(" + g2 + ", Z)");
    w.field("rho1", diff.g1.rho);
    w.field("rho2", diff.g2.rho);
    w.field("d_n", diff.d_n);
    w.field("distance_correlation_xy", dcor);
    w.key("results");
    w.begin_array();
    for (const MethodOutcome& out : outcomes) {
      w.begin_object();
      w.field("method", cgc::method_name(out.method));
      if (out.studentized) {
        w.field("variance", out.variance);
        w.field("z", out.z);
      } else {
        w.field("b", o.b);
      }
      w.field("p_value", out.p_value);
      w.field("reject", out.reject);
      w.end_object();
    }
    w.end_array();
    w.end_object();
    emit(w.str() + "\n", o.output);
    return 0;
  }

  std::string text;
  text += added_value ? "added-value test via categorical Gini correlations\n"
                      : "comparison of categorical Gini correlations\n";
  text += "data: " + o.input + " (n = " + std::to_string(pair.n()) +
          ", K = " + std::to_string(pair.num_classes()) + ", p = " + std::to_string(base.p()) +
          ", q = " + std::to_string(base.q()) + ")\n";
  text += std::string("H0: rho_g(") + g1 + ", Z) = rho_g(" + g2 + ", Z)   vs   H1: rho_g(" +
          g1 + ", Z) > rho_g(" + g2 + ", Z)\n\n";
  text += std::string("rho1_hat (") + g1 + ") = " + fmt(diff.g1.rho) + "\n";
  text += std::string("rho2_hat (") + g2 + ") = " + fmt(diff.g2.rho) + "\n";
  text += "d_n = " + fmt(diff.d_n) + "\n";
  text += "distance correlation between the groups = " + fmt(dcor) + "\n\n";
  for (const MethodOutcome& out : outcomes) {
    text += std::string("method ") + cgc::method_name(out.method) + ": ";
    if (out.studentized)
      text += "variance = " + fmt(out.variance) + ", z = " + fmt(out.z) + ", ";
    else
      text += "B = " + std::to_string(o.b) + ", ";
    text += "p = " + fmt(out.p_value) + ", reject at alpha = " + fmt(o.alpha) + ": " +
            (out.reject ? "yes" : "no") + "\n";
  }
  emit(text, o.output);
  return 0;
}

struct IndependenceOptions {
  std::string input;
  std::string label;
  std::string features;
  std::uint64_t r = 999;
  double alpha = 0.05;
  std::uint64_t seed = 0;
  bool json = false;
  std::string output;
};

int run_independence(const IndependenceOptions& o) {
  const cgc::LabeledDataset d = cgc::load_csv(o.input, o.label, o.features);
  const cgc::PermutationResult res =
      cgc::permutation_independence_test(d, o.r, cgc::RngStream(o.seed, 0));
  const bool reject = res.p_value < o.alpha;

  if (o.json) {
    cgc::JsonWriter w;
    w.begin_object();
    w.field("command", "independence");
    w.field("input", o.input);
    w.field("n", d.n());
    w.field("classes", d.num_classes());
    w.field("dim", d.dim());
    w.field("r", o.r);
    w.field("seed", o.seed);
    w.field("alpha", o.alpha);
    w.field("rho_hat", res.rho_hat);
    w.field("p_value", res.p_value);
    w.field("reject", reject);
    w.end_object();
    emit(w.str() + "\n", o.output);
    return 0;
  }

  std::string text;
  text += "permutation test of independence (categorical Gini correlation)\n";
  text += "data: " + o.input + " (n = " + std::to_string(d.n()) +
          ", K = " + std::to_string(d.num_classes()) + ", d = " + std::to_string(d.dim()) +
          ")\n\n";
  text += "rho_hat = " + fmt(res.rho_hat) + "\n";
  text += "R = " + std::to_string(o.r) + " permutations, p = " + fmt(res.p_value) + "\n";
  text += std::string("reject independence at alpha = ") + fmt(o.alpha) + ": " +
          (reject ? "yes" : "no") + "\n";
  emit(text, o.output);
  return 0;
}

struct SimulateOptions {
  std::string plan_file;
  std::string design;
  std::uint64_t p = 0;
  std::uint64_t q = 0;
  std::string n;
  std::string beta_grid;
  std::string methods;
  std::string mode;
  std::uint64_t replications = 0;
  std::uint64_t b = 0;
  double alpha = 0.0;
  std::uint64_t seed = 0;
  std::string sigma_variant;
  bool exp_mean = false;
  std::string format = "csv";
  bool timing = false;
  std::string output;

  // which flags were actually given
  CLI::App* cmd = nullptr;
  bool given(const std::string& flag) const { return cmd->count(flag) > 0; }
};

int run_simulate(const SimulateOptions& o) {
  cgc::KvMap kv;
  if (!o.plan_file.empty()) kv = cgc::read_kv_file(o.plan_file);
  if (o.given("--design")) kv.set("design", o.design);
  if (o.given("--p")) kv.set("p", std::to_string(o.p));
  if (o.given("--q")) kv.set("q", std::to_string(o.q));
  if (o.given("--n")) kv.set("n", o.n);
  if (o.given("--beta-grid")) kv.set("beta_grid", o.beta_grid);
  if (o.given("--methods")) kv.set("methods", o.methods);
  if (o.given("--mode")) kv.set("mode", o.mode);
  if (o.given("--R")) kv.set("replications", std::to_string(o.replications));
  if (o.given("--B")) kv.set("bootstrap_b", std::to_string(o.b));
  if (o.given("--alpha")) kv.set("alpha", fmt(o.alpha));
  if (o.given("--seed")) kv.set("seed", std::to_string(o.seed));
  if (o.given("--sigma-variant")) kv.set("sigma_variant", o.sigma_variant);
  if (o.given("--exp-mean")) kv.set("exp_mean", o.exp_mean ? "true" : "false");
  if (!kv.has("design"))
    throw cgc::DataError("simulate needs a design (give --design or a --plan file)");

  const cgc::ExperimentPlan plan = cgc::plan_from_kv(kv);
  const cgc::ScenarioReport report = cgc::run_beta_sweep(plan);
  const cgc::ReportFormat format = cgc::report_format_from_name(o.format);
  emit(cgc::format_report(report, format, o.timing), o.output);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"categorical Gini correlation toolkit"};
  app.require_subcommand(1);

  CompareOptions compare_opts;
  CLI::App* compare_cmd = app.add_subcommand(
      "compare", "one-sided test of rho_g(X, Z) = rho_g(Y, Z) against rho_g(X, Z) > rho_g(Y, Z)");
  add_compare_options(compare_cmd, compare_opts);

  CompareOptions added_opts;
  CLI::App* added_cmd = app.add_subcommand(
      "added-value", "does Y add marginal signal on top of X? tests [X|Y] against X");
  add_compare_options(added_cmd, added_opts);

  IndependenceOptions indep_opts;
  CLI::App* indep_cmd =
      app.add_subcommand("independence", "permutation test of feature/response independence");
  indep_cmd->add_option("--input", indep_opts.input, "CSV file")->required();
  indep_cmd->add_option("--label", indep_opts.label, "response column (name or 0-based index)")
      ->required();
  indep_cmd->add_option("--features", indep_opts.features,
                        "feature columns (default: all except the label)");
  indep_cmd->add_option("--R", indep_opts.r, "number of permutations")->capture_default_str();
  indep_cmd->add_option("--alpha", indep_opts.alpha, "test level")->capture_default_str();
  indep_cmd->add_option("--seed", indep_opts.seed, "RNG seed")->capture_default_str();
  indep_cmd->add_flag("--json", indep_opts.json, "machine-readable output");
  indep_cmd->add_option("--output", indep_opts.output, "write the result here instead of stdout");

  SimulateOptions sim_opts;
  CLI::App* sim_cmd = app.add_subcommand("simulate", "Monte Carlo power/size study");
  sim_opts.cmd = sim_cmd;
  sim_cmd->add_option("--plan", sim_opts.plan_file, "key=value plan file; flags override it");
  sim_cmd->add_option("--design", sim_opts.design, "ex1a, ex1b, ex2a, ex2b, or ex3");
  sim_cmd->add_option("--p", sim_opts.p, "x dimension");
  sim_cmd->add_option("--q", sim_opts.q, "y dimension");
  sim_cmd->add_option("--n", sim_opts.n, "class sizes, e.g. 40,40,40");
  sim_cmd->add_option("--beta-grid", sim_opts.beta_grid,
                      "shift grid: comma list or start:stop:step, e.g. 0:1:0.2");
  sim_cmd->add_option("--methods", sim_opts.methods, "comma list of asN, bootstrap, projection");
  sim_cmd->add_option("--mode", sim_opts.mode, "compare or added_value");
  sim_cmd->add_option("--R", sim_opts.replications, "Monte Carlo replications per grid point");
  sim_cmd->add_option("--B", sim_opts.b, "bootstrap replicates inside each replication");
  sim_cmd->add_option("--alpha", sim_opts.alpha, "test level");
  sim_cmd->add_option("--seed", sim_opts.seed, "RNG seed");
  sim_cmd->add_option("--sigma-variant", sim_opts.sigma_variant,
                      "ex3 latent covariance: independent or ar");
  sim_cmd->add_flag("--exp-mean", sim_opts.exp_mean,
                    "read exponential parameters as means, not rates");
  sim_cmd->add_option("--format", sim_opts.format, "csv, json, or markdown")
      ->capture_default_str();
  sim_cmd->add_flag("--timing", sim_opts.timing, "include wall-clock time per report row");
  sim_cmd->add_option("--output", sim_opts.output, "write the report here instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (compare_cmd->parsed()) return run_comparison(compare_opts, false);
    if (added_cmd->parsed()) return run_comparison(added_opts, true);
    if (indep_cmd->parsed()) return run_independence(indep_opts);
    if (sim_cmd->parsed()) return run_simulate(sim_opts);
  } catch (const cgc::DataError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const cgc::DegenerateError& e) {
    std::cerr << "degenerate: " << e.what() << "\n";
    return 3;
  } catch (const cgc::ReplicateAbort& e) {
    std::cerr << "aborted: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
