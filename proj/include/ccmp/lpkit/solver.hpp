#pragma once

#include <cstdint>
#include <limits>
#include <memory>
#include <vector>

#include "ccmp/lpkit/linear_program.hpp"

namespace ccmp::lpkit {

enum class VarStatus : std::uint8_t { kBasic, kAtLower, kAtUpper, kFree };

struct BasisFactor;  // cached basis inverse, reused when the basis matches

// Simplex basis in terms of column and row (logical) statuses. Exactly
// num_rows entries are kBasic in a consistent basis. A basis taken from a
// smaller program is extended: extra columns start nonbasic, extra rows
// start with their logical basic.
struct Basis {
  std::vector<VarStatus> col_status;
  std::vector<VarStatus> row_status;
  std::shared_ptr<const BasisFactor> factor;

  bool empty() const { return col_status.empty() && row_status.empty(); }
};

struct Limits {
  double time_seconds = std::numeric_limits<double>::infinity();
  long iterations = std::numeric_limits<long>::max();  // simplex pivots
  long nodes = std::numeric_limits<long>::max();       // branch-and-bound
};

enum class LpStatus { kOptimal, kInfeasible, kUnbounded };

const char* to_string(LpStatus s);

// Result of an LP solve with its witness:
//  - kOptimal: primal, row_dual, reduced_cost, objective. Duals follow the
//    program's own sense: cost = A^T row_dual + reduced_cost.
//  - kInfeasible: farkas holds one multiplier per row (see
//    check_certificate for the inequality it proves).
//  - kUnbounded: ray is an improving recession direction of the feasible
//    set, normalized to max-norm 1; primal holds a feasible point.
struct LpOutcome {
  LpStatus status = LpStatus::kInfeasible;
  double objective = 0.0;
  std::vector<double> primal;
  std::vector<double> row_dual;
  std::vector<double> reduced_cost;
  std::vector<double> farkas;
  std::vector<double> ray;
  Basis basis;
  long iterations = 0;
};

// Bounded-variable primal simplex on a dense basis inverse. Dantzig pricing
// with a Harris ratio test; switches to Bland's rule when the objective
// stalls. Deterministic for identical input. Intended for desk-scale
// programs (a few thousand rows at most: memory and pivot cost grow with
// rows squared).
//
// Throws LimitExceeded on a time/iteration cap and NumericalFailure when
// the basis cannot be repaired.
LpOutcome solve_lp(const LinearProgram& lp, const Limits& limits = {},
                   const Basis* warm_start = nullptr);

enum class MipStatus { kOptimal, kInfeasible, kUnbounded, kLimitReached };

const char* to_string(MipStatus s);

struct MipResult {
  MipStatus status = MipStatus::kInfeasible;
  bool has_incumbent = false;
  std::vector<double> x;
  double objective = std::numeric_limits<double>::quiet_NaN();
  double bound = std::numeric_limits<double>::quiet_NaN();  // best bound
  double gap = std::numeric_limits<double>::infinity();
  long nodes = 0;
  long lp_iterations = 0;
  Basis root_basis;
};

// Relative gap (|incumbent - bound|) / max(|incumbent|, 1e-10).
double relative_gap(double incumbent, double bound);

// LP-based branch and bound: best-bound node selection (deeper node first
// on ties, then creation order), most-fractional branching with ties going
// to the lowest column index. Integer-feasible node solutions are polished
// by re-solving with the integer columns fixed at their rounded values.
// Returns kLimitReached (with incumbent if any and the best bound) on a cap.
MipResult solve_mip(const MipProblem& mip, const Limits& limits = {},
                    double rel_gap = 1e-9, const Basis* warm_start = nullptr);

// True iff the witness of `outcome` is valid for `lp`: optimal primal/dual
// pair (feasibility 1e-7, dual feasibility 1e-7, objective agreement
// 1e-6 * (1 + |obj|)), Farkas multipliers proving infeasibility, or an
// improving ray consistent with every row sense and bound.
bool check_certificate(const LinearProgram& lp, const LpOutcome& outcome);

}  // namespace ccmp::lpkit
