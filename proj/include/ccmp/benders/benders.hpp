#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "ccmp/formulate/formulate.hpp"
#include "ccmp/jensen/jensen.hpp"
#include "ccmp/model/instance.hpp"

namespace ccmp::benders {

enum class Variant { kBD0, kBD1, kBD2, kBD3, kBD4, kBD5, kBD6, kBD7, kBD8, kBD1J, kBD1RJ };

const char* to_string(Variant v);
std::optional<Variant> parse_variant(const std::string& name);  // "bd1", "BD1RJ", ...

enum class InitMode { kNone, kSp, kSmallM };

// Feature flags of a variant.
struct VariantTraits {
  bool all_scenarios = true;  // false: cuts only where z0_k = 0
  bool pareto = false;        // Pareto refinement in the main loop
  bool integer_cuts = false;
  InitMode init = InitMode::kNone;
  bool strongest_only = false;
  bool init_pareto = false;
  std::optional<jensen::BlockMode> jensen;  // kCommonGLinear stands for "exact"
};

VariantTraits traits(Variant v);

enum class Origin { kMainLoop, kSpInit, kSmallMInit, kPareto };

const char* to_string(Origin o);

// Dual extreme point of DP_k: H_k^T mu <= f_k, mu >= 0.
struct DualPoint {
  int k = 0;
  std::vector<double> mu;
  Origin origin = Origin::kMainLoop;
};

// Extreme ray of DP_k: H_k^T v <= 0, v >= 0, max-norm 1.
struct DualRay {
  int k = 0;
  std::vector<double> v;
  Origin origin = Origin::kMainLoop;
};

bool feasible(const CcmpInstance& inst, const DualPoint& p);
bool feasible(const CcmpInstance& inst, const DualRay& r);

// Per-scenario dual points and rays, deduplicated at 1e-7 (points compared
// after scaling by their max-norm). Elements failing their feasibility
// invariant are rejected.
class CutPool {
 public:
  CutPool() = default;
  explicit CutPool(int num_scenarios) : points_(num_scenarios), rays_(num_scenarios) {}

  // True when the element is new and feasible.
  bool add(const CcmpInstance& inst, DualPoint p);
  bool add(const CcmpInstance& inst, DualRay r);

  int num_scenarios() const { return static_cast<int>(points_.size()); }
  const std::vector<DualPoint>& points(int k) const { return points_[k]; }
  const std::vector<DualRay>& rays(int k) const { return rays_[k]; }
  std::size_t size() const;

  // Keeps, per scenario, only the point maximizing (h_k - G_k x)^T mu, and
  // no rays.
  void keep_strongest(const CcmpInstance& inst, const std::vector<double>& x);

 private:
  std::vector<std::vector<DualPoint>> points_;
  std::vector<std::vector<DualRay>> rays_;
};

// (h_k - G_k x)^T u for a dual vector u of scenario k.
double dual_value(const CcmpInstance& inst, int k, const std::vector<double>& u,
                  const std::vector<double>& x);

struct IterationRecord {
  int iteration = 0;
  std::string phase;  // "init" or "main"
  double lb = -std::numeric_limits<double>::infinity();
  double ub = std::numeric_limits<double>::infinity();
  double master_bound = std::numeric_limits<double>::quiet_NaN();
  double master_objective = std::numeric_limits<double>::quiet_NaN();
  int points_added = 0;
  int rays_added = 0;
  int integer_cuts = 0;
  double master_seconds = 0;
  double sub_seconds = 0;
  std::string z_hash;

  std::string json_line() const;
};

struct BendersConfig {
  Variant variant = Variant::kBD1;
  double master_gap = 0.005;
  double sub_gap = 1e-4;  // subproblems are LPs solved to optimality
  double init_gap = 0.02;
  double init_time_cap = 500;
  double time_limit = 3600;
  double small_M = 1000;
  double big_M = 1e5;
  formulate::ProductBounds mccormick;
  double opt_tol = 0.005;
  double lb_floor = 1e-10;
  long max_iterations = 100000;
  // Lower bound for eta_k when f_k has negative entries (0 otherwise).
  double eta_floor = std::numeric_limits<double>::quiet_NaN();
  // Called after every iteration record, init and main.
  std::function<void(const IterationRecord&)> on_iteration;
};

enum class ScenarioTag { kRegular, kForceZ1, kForceZ0 };

const char* to_string(ScenarioTag t);

struct Classification {
  std::vector<ScenarioTag> tags;
  std::vector<double> reference_x;  // empty when the LP over X is infeasible
  bool x_infeasible = false;
};

// Probes each scenario: no (x, y) with x in the LP relaxation of X
// satisfies its rows -> kForceZ1; dual region empty and recourse feasible
// at every probe point -> kForceZ0; dual region empty with the recourse
// feasible at some probe points only -> SplitCaseDetected.
Classification classify_scenarios(const CcmpInstance& inst);

struct SubproblemResult {
  bool bounded = true;
  double value = 0;  // eta*_k(x0) when bounded
  DualPoint point;
  DualRay ray;
};

// max (h_k - G_k x0 - shift)^T u s.t. H_k^T u <= f_k, u >= 0, where shift
// is added to every row (small-M init uses shift = M z_k). Throws
// DualInfeasible(k) when the dual region is empty.
SubproblemResult solve_dual_subproblem(const CcmpInstance& inst, int k,
                                       const std::vector<double>& x0,
                                       double shift = 0.0);

// Magnanti-Wong refinement: among u with (h_k - G_k x0)^T u within 1e-6 of
// `value`, maximize (h_k - G_k core)^T u. Falls back to `point` on any
// numerical trouble.
DualPoint pareto_refine(const CcmpInstance& inst, const DualPoint& point,
                        const std::vector<double>& x0, const std::vector<double>& core,
                        double value, double shift = 0.0, double core_shift = 0.0);

// Midpoint of the finite bounds of x (lower + 1 when the upper bound is
// infinite), moved onto the LP relaxation of X by an L1 projection.
std::vector<double> core_point(const CcmpInstance& inst);

// Linearized bilinear master over (x, z, eta, w = x z).
class Master {
 public:
  Master(const CcmpInstance& inst, const BendersConfig& config,
         const std::vector<ScenarioTag>& tags = {});

  void add_cut(const DualPoint& p);
  void add_cut(const DualRay& r);
  void add_pool(const CutPool& pool);
  // sum_{K1} z_k - sum_{K0} z_k <= |K1| - 1
  void add_integer_cut(const std::vector<int>& z0);
  jensen::JensenBlock attach_jensen(jensen::BlockMode mode);

  const formulate::BuiltFormulation& built() const { return built_; }
  lpkit::MipProblem& mip() { return built_.mip; }
  const formulate::VariableMap& vars() const { return built_.vars; }

  // eta_k - (h_k - G_k x)^T u (1 - z_k), nonnegative when the cut holds;
  // pass eta_k = 0 for rays.
  static double cut_slack(const CcmpInstance& inst, int k, const std::vector<double>& u,
                          bool ray, const std::vector<double>& x, int z_k, double eta_k);

 private:
  int product(int j, int k);
  void add_dual_row(int k, const std::vector<double>& u, bool ray);

  const CcmpInstance& inst_;
  formulate::ProductBounds bounds_;
  double epsilon_;
  formulate::BuiltFormulation built_;
};

// Builds a master holding every pool element (plus the variant's Jensen
// block for BD1J/BD1RJ).
Master build_master(const CcmpInstance& inst, const CutPool& pool,
                    const BendersConfig& config);

// Integer (no-good) cut on a master's z columns.
void add_integer_cut(lpkit::MipProblem& master, const std::vector<int>& z_cols,
                     const std::vector<int>& z0);

struct InitResult {
  CutPool pool;
  double ub = kInf;  // CCMP objective of the best harvested solution
  bool has_solution = false;
  Solution solution;
  std::vector<IterationRecord> log;
  bool timed_out = false;
  bool infeasible = false;  // the init model (SP or small-M) was infeasible
  double seconds = 0;
};

// Classical Benders on the SP (z = 0) or small-M restriction. Scenarios
// tagged forced are left out of the restriction.
InitResult initialize(const CcmpInstance& inst, const BendersConfig& config,
                      InitMode mode, const std::vector<ScenarioTag>& tags = {});

struct SolveReport {
  Variant variant = Variant::kBD1;
  SolveStatus status;
  double lb = -kInf;
  double ub = kInf;
  double gap = kInf;
  bool has_solution = false;
  Solution solution;
  int init_iterations = 0;
  int main_iterations = 0;
  double init_seconds = 0;
  double seconds = 0;
  int integer_cuts = 0;
  std::string termination;
  std::vector<IterationRecord> log;
  CutPool pool;
};

// (UB - LB) / max(|LB|, floor); +inf unless both are finite.
double benders_gap(double lb, double ub, double floor = 1e-10);

SolveReport run(const CcmpInstance& inst, const BendersConfig& config);

}  // namespace ccmp::benders
