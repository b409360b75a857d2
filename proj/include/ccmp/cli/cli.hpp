#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "ccmp/benders/benders.hpp"
#include "ccmp/model/instance.hpp"

namespace ccmp::cli {

enum class Method {
  kExtensiveBigM,
  kExtensiveMibp,
  kStrengthenedRhs,
  kStrengthenedRecourse,
  kSp,
  kSmallM,
  kBenders,
  kOracle,
};

struct MethodId {
  Method method = Method::kOracle;
  benders::Variant variant = benders::Variant::kBD1;  // kBenders only

  std::string name() const;
  bool operator==(const MethodId&) const = default;
};

std::optional<MethodId> parse_method(const std::string& name);
std::vector<std::string> method_names();

// Every tunable of the command-line runs. The built-in values equal
// config/defaults.json.
struct RunConfig {
  double time_limit = 3600;
  double mip_gap = 0.005;  // extensive formulations
  double master_gap = 0.005;
  double sub_gap = 1e-4;
  double init_gap = 0.02;
  double init_time_cap = 500;
  double small_M = 1000;
  double big_M = 1e5;
  double product_bound = 1e5;
  double opt_tol = 0.005;
  double lb_floor = 1e-10;
  long max_iterations = 100000;
  int oracle_max_scenarios = 12;
  double oracle_gap = 1e-9;
  std::optional<double> eta_floor;

  benders::BendersConfig benders(benders::Variant v) const;
};

// Keys absent from the JSON keep their current value; unknown keys and
// wrong types raise SchemaError.
void apply_config(RunConfig& cfg, const std::string& json_text);
RunConfig load_config(const std::string& path);
std::string config_json(const RunConfig& cfg);

struct ReportRow {
  std::string instance;
  std::string method;
  double epsilon = 0;
  std::string status;
  double objective = kInf;
  double lb = -kInf;
  double ub = kInf;
  double gap_pct = kInf;  // 100 (UB - LB) / max(|LB|, floor)
  long iterations = 0;    // Benders init + main; B&B nodes; oracle subproblems
  double seconds = 0;

  bool operator==(const ReportRow&) const = default;
};

double gap_percent(double lb, double ub, double floor = 1e-10);

struct RunOutcome {
  ReportRow row;
  SolveStatus status;
  bool has_solution = false;
  Solution solution;
  std::vector<std::string> log;  // one JSON line per Benders iteration
};

// Solves `inst` as given (epsilon included) with one method.
RunOutcome run_method(const CcmpInstance& inst, const MethodId& method, const RunConfig& cfg);

// 0 Optimal/Feasible, 2 Infeasible, 3 time/iteration limit, 5 Unbounded.
int exit_code(StatusTag tag);
inline constexpr int kExitUsage = 1;
inline constexpr int kExitError = 4;

// Loss-free CSV: shortest round-trip numbers, "inf"/"-inf"/"nan".
std::string csv_header();
std::string csv_line(const ReportRow& row);
ReportRow parse_csv_line(const std::string& line);
std::string format_number(double v);

// Summary over the rows of one method and epsilon.
struct CellSummary {
  std::string method;
  double epsilon = 0;
  int runs = 0;
  int solved = 0;            // status Optimal
  double avg_seconds = kInf;  // over solved runs; inf when none
  double avg_gap_pct = kInf;  // over unsolved runs with a finite gap
};

std::vector<CellSummary> summarize(const std::vector<ReportRow>& rows);

// Summary lines appended to the bench CSV: "# solved", "avg sec (solved)",
// "avg gap (unsolved)", one per method and epsilon.
std::string csv_footer(const std::vector<CellSummary>& cells);

// One block per epsilon: an instance column, then "itr. sec. g(%)" per
// method, closed by "# solved (S)", "avg. sec.: S" and "avg. gap: U".
std::string text_table(const std::vector<ReportRow>& rows);

std::string solution_json(const ReportRow& row, const RunOutcome& out);

// Bench instance source, written "kind,key=value,...", e.g.
// "scaled,K=6,count=5,seed=1". Kinds: scaled, T1, T2, random, rhs, or.
struct BenchSpec {
  std::string kind = "scaled";
  int count = 5;
  std::uint64_t seed = 1;
  int K = 6;
  std::string x_kind = "mixed";
  bool common_recourse = false;
  int surgeries = 4;
  int surgeons = 2;
  int rooms = 2;
  std::string group = "I";
};

BenchSpec parse_bench_spec(const std::string& text);
// Instances of a spec, epsilon left at the generator default.
std::vector<CcmpInstance> bench_instances(const BenchSpec& spec);

}  // namespace ccmp::cli
