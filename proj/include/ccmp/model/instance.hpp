#pragma once

#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ccmp/lpkit/linear_program.hpp"
#include "ccmp/model/sparse_matrix.hpp"

namespace ccmp {

using lpkit::kInf;
inline constexpr double kFeasTol = 1e-7;  // constraint satisfaction
inline constexpr double kMassTol = 1e-9;  // chance budget
inline constexpr double kProbSumTol = 1e-12;

enum class VarKind { kContinuous, kBinary, kInteger };

const char* to_string(VarKind k);

struct VarSpec {
  VarKind kind = VarKind::kContinuous;
  double lower = 0.0;
  double upper = kInf;

  bool integral() const { return kind != VarKind::kContinuous; }
  bool operator==(const VarSpec&) const = default;
};

struct Scenario {
  double prob = 0.0;
  SparseMatrix G;  // I2 x n
  SparseMatrix H;  // I2 x m
  std::vector<double> h;
  std::vector<double> f;

  bool operator==(const Scenario&) const = default;
};

// min c x + E[f_k y_k] s.t. A x >= b, x per x_specs, and with probability
// at least 1 - epsilon: G_k x + H_k y_k >= h_k, y_k >= 0.
struct CcmpInstance {
  std::string name;
  std::vector<double> c;
  SparseMatrix A;  // I1 x n
  std::vector<double> b;
  std::vector<VarSpec> x_specs;
  int m = 0;
  std::vector<Scenario> scenarios;
  double epsilon = 0.0;

  int n() const { return static_cast<int>(c.size()); }
  int num_scenarios() const { return static_cast<int>(scenarios.size()); }
  int first_stage_rows() const { return A.rows(); }
  int scenario_rows() const {
    return scenarios.empty() ? 0 : static_cast<int>(scenarios[0].h.size());
  }
  bool equal_probabilities() const;

  bool operator==(const CcmpInstance&) const = default;
};

struct Violation {
  std::string field;  // e.g. "scenarios[2].H"
  std::string message;
};

// Empty iff every instance invariant holds.
std::vector<Violation> validate_instance(const CcmpInstance& inst);

struct Solution {
  std::vector<double> x;
  std::vector<int> z;
  std::map<int, std::vector<double>> y;  // responsive scenarios only
  double objective = 0.0;
};

enum class StatusTag { kOptimal, kFeasible, kInfeasible, kUnbounded, kTimeLimit, kIterLimit };

struct SolveStatus {
  StatusTag tag = StatusTag::kInfeasible;
  double gap = std::numeric_limits<double>::quiet_NaN();  // limits and Feasible only

  static SolveStatus optimal() { return {StatusTag::kOptimal}; }
  static SolveStatus infeasible() { return {StatusTag::kInfeasible}; }
  static SolveStatus unbounded() { return {StatusTag::kUnbounded}; }
  static SolveStatus feasible(double g) { return {StatusTag::kFeasible, g}; }
  static SolveStatus time_limit(double g) { return {StatusTag::kTimeLimit, g}; }
  static SolveStatus iter_limit(double g) { return {StatusTag::kIterLimit, g}; }
  bool has_gap() const {
    return tag == StatusTag::kFeasible || tag == StatusTag::kTimeLimit ||
           tag == StatusTag::kIterLimit;
  }
};

const char* to_string(StatusTag t);

// Recourse LP of scenario k at x0: min f y s.t. H y >= h - G x0, y >= 0.
lpkit::LinearProgram recourse_lp(const CcmpInstance& inst, int k,
                                 const std::vector<double>& x0);

// eta*_k(x0), or nullopt when the recourse is infeasible. Throws
// UnboundedRecourse when it is unbounded below.
std::optional<double> recourse_cost(const CcmpInstance& inst, int k,
                                    const std::vector<double>& x0);

struct BestResponse {
  std::vector<int> z;
  std::vector<double> recourse_costs;  // +inf where infeasible
  double expected_cost = kInf;         // sum over responsive k of pi_k eta*_k
};

// Optimal scenario selection for a fixed first stage. Equal probabilities
// drop the largest positive costs (lower index first on ties); otherwise a
// knapsack MIP decides.
BestResponse best_response_z(const CcmpInstance& inst,
                             const std::vector<double>& x0);

struct Evaluation {
  bool feasible = false;
  double objective = 0.0;  // recomputed
  bool objective_consistent = false;  // stored objective within 1e-6
  std::vector<std::string> issues;
};

Evaluation evaluate_solution(const CcmpInstance& inst, const Solution& sol);

// X = {A x >= b, bounds, integrality}: columns 0..n-1 of a fresh program.
lpkit::MipProblem first_stage_problem(const CcmpInstance& inst);

}  // namespace ccmp
