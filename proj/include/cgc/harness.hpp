#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cgc/inference.hpp"
#include "cgc/kvconfig.hpp"
#include "cgc/simgen.hpp"

namespace cgc {

enum class ExperimentMode { compare, added_value };

// A full Monte Carlo experiment: one scenario swept over a beta grid,
// evaluated by one or more methods.
struct ExperimentPlan {
  ScenarioConfig scenario;
  std::vector<double> beta_grid = {0.0};
  std::size_t replications = 1000;
  double alpha = 0.05;
  std::vector<Method> methods = {Method::asn};
  std::size_t bootstrap_b = 500;  // replicates per bootstrap call inside the sweep
  ExperimentMode mode = ExperimentMode::compare;
  std::uint64_t seed = 0;

  void validate() const;
};

// Aggregates for one (beta, method) cell.
struct ReportRow {
  double beta = 0.0;
  Method method = Method::asn;
  double rejection_rate = 0.0;
  double mean_dn = 0.0;
  double mc_se = 0.0;       // binomial standard error of the rejection rate
  double wall_time_s = 0.0; // cumulative test time; reported only on request
};

struct ScenarioReport {
  ExperimentPlan plan;  // fully resolved, echoed for provenance
  std::vector<ReportRow> rows;
};

// Runs the plan at a single beta (the scenario's own; beta_grid ignored).
// Monte Carlo replicate r generates its data from RngStream(seed, r); a
// bootstrap inside replicate r draws from stream ids (1+r)*2^32 + j. Any
// replicate failure aborts the run, identified by (beta, replicate).
ScenarioReport run_experiment(const ExperimentPlan& plan);

// Runs every grid point; rows ordered by beta, then by method in plan order.
ScenarioReport run_beta_sweep(const ExperimentPlan& plan);

enum class ReportFormat { csv, json, markdown };

ReportFormat report_format_from_name(const std::string& name);

// Renders the report; identical reports give identical bytes. Wall times
// are included only when include_timing is set (they vary run to run).
std::string format_report(const ScenarioReport& report, ReportFormat format,
                          bool include_timing = false);
void export_report(const ScenarioReport& report, const std::string& path, ReportFormat format,
                   bool include_timing = false);

// Plan files are flat key=value; unknown keys are rejected.
ExperimentPlan plan_from_kv(const KvMap& kv);
void plan_to_kv(const ExperimentPlan& plan, KvMap& kv);

}  // namespace cgc
