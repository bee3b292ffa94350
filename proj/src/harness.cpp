#include "cgc/harness.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "cgc/errors.hpp"
#include "cgc/json_writer.hpp"
#include "cgc/parallel.hpp"

namespace cgc {

namespace {

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string fmt4(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  return buf;
}

std::string methods_string(const std::vector<Method>& methods) {
  std::string out;
  for (std::size_t i = 0; i < methods.size(); ++i) {
    if (i) out += ",";
    out += method_name(methods[i]);
  }
  return out;
}

const char* mode_name(ExperimentMode m) {
  return m == ExperimentMode::compare ? "compare" : "added_value";
}

ExperimentMode mode_from_name(const std::string& name) {
  if (name == "compare") return ExperimentMode::compare;
  if (name == "added_value" || name == "added-value") return ExperimentMode::added_value;
  throw DataError("unknown mode \"" + name + "\" (valid: compare, added_value)");
}

// Bootstrap stream ids for Monte Carlo replicate r start at (1+r)*2^32:
// disjoint from the data streams (ids below the replication count) and
// from every other replicate's bootstrap block.
std::uint64_t bootstrap_stream_base(std::size_t replicate) {
  return (1 + static_cast<std::uint64_t>(replicate)) << 32;
}

ScenarioReport run_single_beta(const ExperimentPlan& plan) {
  const std::size_t reps = plan.replications;
  const std::size_t nm = plan.methods.size();
  std::vector<double> dns(reps, 0.0);
  std::vector<std::uint8_t> rejects(reps * nm, 0);
  std::vector<double> times(reps * nm, 0.0);

  parallel_blocks(reps, 1, [&](std::size_t r, std::size_t, std::size_t) {
    try {
      RngStream data_stream(plan.seed, r);
      const PairedDataset base = gen_scenario(plan.scenario, data_stream);
      const PairedDataset pair =
          plan.mode == ExperimentMode::added_value ? added_value_pair(base) : base;
      dns[r] = cgc_difference(pair).d_n;
      for (std::size_t m = 0; m < nm; ++m) {
        const auto start = std::chrono::steady_clock::now();
        bool reject = false;
        switch (plan.methods[m]) {
          case Method::asn:
            reject = asn_test(pair, plan.alpha).reject;
            break;
          case Method::projection:
            reject = projection_test(pair, plan.alpha).reject;
            break;
          case Method::bootstrap: {
            const RngStream boot(plan.seed, bootstrap_stream_base(r));
            const BootstrapResult res = bootstrap_test(pair, plan.bootstrap_b, boot);
            reject = res.p_value < plan.alpha;
            break;
          }
        }
        rejects[r * nm + m] = reject ? 1 : 0;
        times[r * nm + m] = std::chrono::duration<double>(
                                std::chrono::steady_clock::now() - start).count();
      }
    } catch (const DataError& e) {
      throw ReplicateAbort("beta = " + fmt17(plan.scenario.beta) + ", replicate " +
                           std::to_string(r) + ": " + e.what());
    } catch (const DegenerateError& e) {
      throw ReplicateAbort("beta = " + fmt17(plan.scenario.beta) + ", replicate " +
                           std::to_string(r) + ": " + e.what());
    } catch (const ReplicateAbort& e) {
      throw ReplicateAbort("beta = " + fmt17(plan.scenario.beta) + ", replicate " +
                           std::to_string(r) + ": " + e.what());
    }
  });

  double mean_dn = 0.0, comp = 0.0;
  for (double v : dns) {
    const double y = v - comp;
    const double t = mean_dn + y;
    comp = (t - mean_dn) - y;
    mean_dn = t;
  }
  mean_dn /= static_cast<double>(reps);

  ScenarioReport report;
  report.plan = plan;
  for (std::size_t m = 0; m < nm; ++m) {
    ReportRow row;
    row.beta = plan.scenario.beta;
    row.method = plan.methods[m];
    std::size_t count = 0;
    double time = 0.0;
    for (std::size_t r = 0; r < reps; ++r) {
      count += rejects[r * nm + m];
      time += times[r * nm + m];
    }
    row.rejection_rate = static_cast<double>(count) / static_cast<double>(reps);
    row.mean_dn = mean_dn;
    row.mc_se = std::sqrt(row.rejection_rate * (1.0 - row.rejection_rate) /
                          static_cast<double>(reps));
    row.wall_time_s = time;
    report.rows.push_back(row);
  }
  return report;
}

}  // namespace

void ExperimentPlan::validate() const {
  scenario.validate();
  if (beta_grid.empty()) throw DataError("beta_grid: must not be empty");
  for (double b : beta_grid)
    if (!(b >= 0.0 && b <= 1.0)) throw DataError("beta_grid: entries must lie in [0, 1]");
  for (std::size_t i = 1; i < beta_grid.size(); ++i)
    if (!(beta_grid[i] > beta_grid[i - 1]))
      throw DataError("beta_grid: entries must be strictly increasing");
  if (replications < 1) throw DataError("replications: must be at least 1");
  if (!(alpha > 0.0 && alpha < 1.0)) throw DataError("alpha: must lie in (0, 1)");
  if (methods.empty()) throw DataError("methods: must not be empty");
  for (std::size_t i = 0; i < methods.size(); ++i)
    for (std::size_t j = i + 1; j < methods.size(); ++j)
      if (methods[i] == methods[j]) throw DataError("methods: duplicate entries");
  if (bootstrap_b < 1) throw DataError("bootstrap_b: must be at least 1");
}

ScenarioReport run_experiment(const ExperimentPlan& plan) {
  ExperimentPlan resolved = plan;
  resolved.scenario.beta = plan.scenario.beta;
  resolved.beta_grid = {plan.scenario.beta};
  resolved.validate();
  return run_single_beta(resolved);
}

ScenarioReport run_beta_sweep(const ExperimentPlan& plan) {
  ExperimentPlan resolved = plan;
  resolved.validate();
  ScenarioReport report;
  report.plan = resolved;
  for (double beta : resolved.beta_grid) {
    ExperimentPlan cell = resolved;
    cell.scenario.beta = beta;
    const ScenarioReport partial = run_single_beta(cell);
    report.rows.insert(report.rows.end(), partial.rows.begin(), partial.rows.end());
  }
  return report;
}

ReportFormat report_format_from_name(const std::string& name) {
  if (name == "csv") return ReportFormat::csv;
  if (name == "json") return ReportFormat::json;
  if (name == "markdown" || name == "md") return ReportFormat::markdown;
  throw DataError("unknown report format \"" + name + "\" (valid: csv, json, markdown)");
}

std::string format_report(const ScenarioReport& report, ReportFormat format,
                          bool include_timing) {
  KvMap plan_kv;
  plan_to_kv(report.plan, plan_kv);

  switch (format) {
    case ReportFormat::csv: {
      std::string out;
      for (const auto& [k, v] : plan_kv.entries()) out += "# " + k + " = " + v + "\n";
      out += "beta,method,rejection_rate,mean_dn,mc_se";
      if (include_timing) out += ",wall_time_s";
      out += "\n";
      for (const ReportRow& r : report.rows) {
        out += fmt17(r.beta);
        out += ",";
        out += method_name(r.method);
        out += "," + fmt17(r.rejection_rate) + "," + fmt17(r.mean_dn) + "," + fmt17(r.mc_se);
        if (include_timing) out += "," + fmt17(r.wall_time_s);
        out += "\n";
      }
      return out;
    }
    case ReportFormat::json: {
      const ExperimentPlan& p = report.plan;
      JsonWriter w;
      w.begin_object();
      w.key("plan");
      w.begin_object();
      w.field("design", design_name(p.scenario.design));
      w.field("p", static_cast<std::uint64_t>(p.scenario.p));
      w.field("q", static_cast<std::uint64_t>(p.scenario.q));
      w.key("n");
      w.begin_array();
      for (std::size_t s : p.scenario.class_sizes) w.value(static_cast<std::uint64_t>(s));
      w.end_array();
      w.field("sigma_variant",
              p.scenario.sigma_variant == SigmaVariant::ar ? "ar" : "independent");
      w.field("exp_mean", p.scenario.exp_mean);
      w.key("beta_grid");
      w.begin_array();
      for (double b : p.beta_grid) w.value(b);
      w.end_array();
      w.field("replications", static_cast<std::uint64_t>(p.replications));
      w.field("alpha", p.alpha);
      w.key("methods");
      w.begin_array();
      for (Method m : p.methods) w.value(method_name(m));
      w.end_array();
      w.field("bootstrap_b", static_cast<std::uint64_t>(p.bootstrap_b));
      w.field("mode", mode_name(p.mode));
      w.field("seed", p.seed);
      w.end_object();
      w.key("rows");
      w.begin_array();
      for (const ReportRow& r : report.rows) {
        w.begin_object();
        w.field("beta", r.beta);
        w.field("method", method_name(r.method));
        w.field("rejection_rate", r.rejection_rate);
        w.field("mean_dn", r.mean_dn);
        w.field("mc_se", r.mc_se);
        if (include_timing) w.field("wall_time_s", r.wall_time_s);
        w.end_object();
      }
      w.end_array();
      w.end_object();
      return w.str() + "\n";
    }
    case ReportFormat::markdown: {
      std::string out;
      out += "# Monte Carlo report\n\n";
      for (const auto& [k, v] : plan_kv.entries()) out += "- " + k + " = " + v + "\n";
      out += "\n| beta | method | rejection rate | mean d_n | MC s.e. |";
      if (include_timing) out += " time (s) |";
      out += "\n|---|---|---|---|---|";
      if (include_timing) out += "---|";
      out += "\n";
      for (const ReportRow& r : report.rows) {
        out += "| " + fmt4(r.beta) + " | " + method_name(r.method) + " | " +
               fmt4(r.rejection_rate) + " | " + fmt4(r.mean_dn) + " | " + fmt4(r.mc_se) + " |";
        if (include_timing) out += " " + fmt4(r.wall_time_s) + " |";
        out += "\n";
      }
      return out;
    }
  }
  throw DataError("format_report: unhandled format");
}

void export_report(const ScenarioReport& report, const std::string& path, ReportFormat format,
                   bool include_timing) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot open file for writing: " + path);
  out << format_report(report, format, include_timing);
  if (!out) throw DataError("write failed: " + path);
}

ExperimentPlan plan_from_kv(const KvMap& kv) {
  ExperimentPlan plan;
  plan.scenario = scenario_from_kv(kv);
  if (kv.has("beta_grid"))
    plan.beta_grid = parse_double_list(kv.get_string("beta_grid"), "key \"beta_grid\"");
  else
    plan.beta_grid = {plan.scenario.beta};
  if (kv.has("replications")) plan.replications = kv.get_u64("replications");
  if (kv.has("alpha")) plan.alpha = kv.get_double("alpha");
  if (kv.has("methods")) {
    plan.methods.clear();
    for (const std::string& name : split_list(kv.get_string("methods")))
      plan.methods.push_back(method_from_name(name));
  }
  if (kv.has("bootstrap_b")) plan.bootstrap_b = kv.get_u64("bootstrap_b");
  if (kv.has("mode")) plan.mode = mode_from_name(kv.get_string("mode"));
  if (kv.has("seed")) plan.seed = kv.get_u64("seed");

  const auto unread = kv.unread_keys();
  if (!unread.empty()) {
    std::string msg = "unknown plan key(s):";
    for (const std::string& k : unread) msg += " \"" + k + "\"";
    throw DataError(msg);
  }
  plan.validate();
  return plan;
}

void plan_to_kv(const ExperimentPlan& plan, KvMap& kv) {
  scenario_to_kv(plan.scenario, kv);
  std::string grid;
  for (std::size_t i = 0; i < plan.beta_grid.size(); ++i) {
    if (i) grid += ",";
    grid += fmt17(plan.beta_grid[i]);
  }
  kv.set("beta_grid", grid);
  kv.set("replications", std::to_string(plan.replications));
  kv.set("alpha", fmt17(plan.alpha));
  kv.set("methods", methods_string(plan.methods));
  kv.set("bootstrap_b", std::to_string(plan.bootstrap_b));
  kv.set("mode", mode_name(plan.mode));
  kv.set("seed", std::to_string(plan.seed));
}

}  // namespace cgc
