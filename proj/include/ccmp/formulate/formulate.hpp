#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ccmp/lpkit/solver.hpp"
#include "ccmp/model/instance.hpp"

namespace ccmp::formulate {

inline constexpr double kDefaultBigM = 1e5;
inline constexpr double kDefaultProductBound = 1e5;

enum class FormulationKind {
  kIndicator,
  kMibpMcCormick,
  kStrengthenedRhs,
  kStrengthenedRecourse,
  kFixedZ,
};

const char* to_string(FormulationKind k);

// Column indices of the model variables; -1 where a variable is absent.
struct VariableMap {
  std::vector<int> x;
  std::vector<std::vector<int>> y;  // per scenario, empty when not modelled
  std::vector<int> z;
  std::vector<int> eta;
  std::map<std::pair<int, int>, int> lambda_x;  // (j, k) -> x_j z_k
  std::map<std::pair<int, int>, int> lambda_y;  // (k, j) -> y_kj z_k
  std::vector<int> fixed_z;  // set when z is data rather than a variable

  // Every index distinct and below `num_cols`.
  bool injective(int num_cols) const;
};

struct BuiltFormulation {
  lpkit::MipProblem mip;
  VariableMap vars;
  FormulationKind kind = FormulationKind::kIndicator;
  std::vector<std::string> notes;  // coefficients used (M, q*, U)

  // Reads x, z, y out of a column vector. Integral x and z are rounded.
  Solution extract(const CcmpInstance& inst, const std::vector<double>& cols,
                   double objective) const;
};

// Upper bounds for variables entering x*z and y*z products. Per-variable
// overrides win, then finite VarSpec bounds, then `fallback`. A
// non-finite fallback makes missing bounds an error.
struct ProductBounds {
  std::vector<double> x_upper;  // empty or one per x; NaN = no override
  double y_upper = kDefaultProductBound;
  double fallback = kDefaultProductBound;

  double for_x(const CcmpInstance& inst, int j) const;
};

// G_k x + H_k y_k + M z_k >= h_k.
BuiltFormulation build_indicator(const CcmpInstance& inst, double M);

// Bilinear model with every product v*z_k replaced by its McCormick
// envelope over [lower(v), U_v].
BuiltFormulation build_mibp_mccormick(const CcmpInstance& inst,
                                      const ProductBounds& bounds = {});

enum class RhsVariant { kDominant, kBaseline };

// Models without recourse and a common G:
//  dominant: G x + (h_k - min_l h_l) z_k >= h_k
//  baseline: G x + h_k z_k >= h_k
BuiltFormulation build_strengthened_rhs(const CcmpInstance& inst,
                                        RhsVariant variant);

enum class QStarMode { kExactMip, kLpRelax };

// q*[k][i] = min{(G_k x)_i : x in X}.
std::vector<std::vector<double>> compute_q_star(const CcmpInstance& inst,
                                                QStarMode mode);

// G_k x + H_k y_k + (h_k - q*_k) z_k >= h_k.
BuiltFormulation build_strengthened_recourse(
    const CcmpInstance& inst, const std::vector<std::vector<double>>& qstar);

// Extensive form restricted to the scenarios with z0_k = 0. With `fix_x`
// the first stage is fixed by its bounds.
BuiltFormulation build_fixed_z(const CcmpInstance& inst,
                               const std::vector<int>& z0,
                               const std::optional<std::vector<double>>& fix_x = {});

// Same model with x fixed, solved scenario by scenario.
struct FixedEvaluation {
  bool feasible = false;
  double objective = kInf;              // c x0 + sum over responsive pi_k eta_k
  std::vector<double> eta;              // +inf where infeasible, 0 where dropped
  std::map<int, std::vector<double>> y;
  int infeasible_scenario = -1;
};
FixedEvaluation evaluate_fixed(const CcmpInstance& inst,
                               const std::vector<int>& z0,
                               const std::vector<double>& x0);

// Copy with integrality dropped.
lpkit::MipProblem lp_relaxation(const lpkit::MipProblem& mip);

struct FormulationResult {
  SolveStatus status;
  double objective = kInf;
  double bound = -kInf;
  bool has_solution = false;
  Solution solution;
  lpkit::MipResult raw;
};

FormulationResult solve_formulation(const CcmpInstance& inst,
                                    const BuiltFormulation& built,
                                    const lpkit::Limits& limits = {},
                                    double rel_gap = 1e-9);

struct OracleResult {
  SolveStatus status;
  double objective = kInf;
  std::vector<int> z;
  Solution solution;
  int subproblems = 0;
};

// Enumerates every z with sum pi_k z_k <= epsilon and solves the fixed-z
// model of each. Throws TooManyScenarios above `max_scenarios`.
OracleResult oracle_solve(const CcmpInstance& inst, int max_scenarios = 12,
                          double rel_gap = 1e-9,
                          const lpkit::Limits& limits = {});

}  // namespace ccmp::formulate

namespace ccmp::formulate {

// Adds lambda = v * z over v in [L, U], z in [0, 1] as its four envelope
// rows and returns the lambda column. Bounds must be finite.
int add_mccormick_product(lpkit::MipProblem& mip, int v_col, int z_col,
                          double L, double U, std::string name = {});

}  // namespace ccmp::formulate
