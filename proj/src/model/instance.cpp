#include "ccmp/model/instance.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "ccmp/errors.hpp"
#include "ccmp/lpkit/solver.hpp"

namespace ccmp {

using lpkit::LinExpr;
using lpkit::RowSense;

const char* to_string(VarKind k) {
  switch (k) {
    case VarKind::kContinuous: return "continuous";
    case VarKind::kBinary: return "binary";
    case VarKind::kInteger: return "integer";
  }
  return "?";
}

const char* to_string(StatusTag t) {
  switch (t) {
    case StatusTag::kOptimal: return "Optimal";
    case StatusTag::kFeasible: return "Feasible";
    case StatusTag::kInfeasible: return "Infeasible";
    case StatusTag::kUnbounded: return "Unbounded";
    case StatusTag::kTimeLimit: return "TimeLimit";
    case StatusTag::kIterLimit: return "IterLimit";
  }
  return "?";
}

bool CcmpInstance::equal_probabilities() const {
  for (const auto& s : scenarios)
    if (std::abs(s.prob - scenarios[0].prob) > 1e-12) return false;
  return true;
}

namespace {

std::string fmt(double v) {
  std::ostringstream s;
  s.precision(15);
  s << v;
  return s.str();
}

bool all_finite(const std::vector<double>& v) {
  return std::all_of(v.begin(), v.end(), [](double d) { return std::isfinite(d); });
}

}  // namespace

std::vector<Violation> validate_instance(const CcmpInstance& inst) {
  std::vector<Violation> out;
  auto add = [&](std::string field, std::string msg) {
    out.push_back({std::move(field), std::move(msg)});
  };
  const int n = inst.n();
  if (!all_finite(inst.c)) add("c", "non-finite cost");
  if (inst.A.cols() != n)
    add("A", "A has " + std::to_string(inst.A.cols()) + " columns, expected " +
                 std::to_string(n));
  if (static_cast<int>(inst.b.size()) != inst.A.rows())
    add("b", "b has " + std::to_string(inst.b.size()) + " entries, A has " +
                 std::to_string(inst.A.rows()) + " rows");
  if (!all_finite(inst.b)) add("b", "non-finite right-hand side");
  if (!all_finite(inst.A.values())) add("A", "non-finite coefficient");
  if (static_cast<int>(inst.x_specs.size()) != n)
    add("x_specs", "expected " + std::to_string(n) + " variable specs, got " +
                       std::to_string(inst.x_specs.size()));
  for (std::size_t j = 0; j < inst.x_specs.size(); ++j) {
    const VarSpec& v = inst.x_specs[j];
    const std::string f = "x_specs[" + std::to_string(j) + "]";
    if (std::isnan(v.lower) || std::isnan(v.upper) || v.lower > v.upper ||
        v.lower == kInf || v.upper == -kInf)
      add(f, "invalid bounds [" + fmt(v.lower) + ", " + fmt(v.upper) + "]");
    if (v.kind == VarKind::kBinary && (v.lower < 0 || v.upper > 1))
      add(f, "binary variable with bounds outside [0, 1]");
  }
  if (inst.m < 0) add("m", "negative recourse dimension");
  if (!(inst.epsilon >= 0.0 && inst.epsilon <= 1.0))
    add("epsilon", "epsilon " + fmt(inst.epsilon) + " outside [0, 1]");
  if (inst.scenarios.empty()) add("scenarios", "no scenarios");
  const int rows = inst.scenario_rows();
  double total = 0.0;
  for (int k = 0; k < inst.num_scenarios(); ++k) {
    const Scenario& s = inst.scenarios[k];
    const std::string f = "scenarios[" + std::to_string(k) + "]";
    total += s.prob;
    if (!(s.prob > 0.0 && s.prob <= 1.0))
      add(f + ".prob", "probability " + fmt(s.prob) + " outside (0, 1]");
    if (static_cast<int>(s.h.size()) != rows)
      add(f + ".h", "scenario " + std::to_string(k) + " has " +
                        std::to_string(s.h.size()) + " rows, expected " +
                        std::to_string(rows));
    if (s.G.rows() != static_cast<int>(s.h.size()) || s.G.cols() != n)
      add(f + ".G", "scenario " + std::to_string(k) + " G is " +
                        std::to_string(s.G.rows()) + "x" + std::to_string(s.G.cols()) +
                        ", expected " + std::to_string(s.h.size()) + "x" +
                        std::to_string(n));
    if (s.H.rows() != static_cast<int>(s.h.size()) || s.H.cols() != inst.m)
      add(f + ".H", "scenario " + std::to_string(k) + " H is " +
                        std::to_string(s.H.rows()) + "x" + std::to_string(s.H.cols()) +
                        ", expected " + std::to_string(s.h.size()) + "x" +
                        std::to_string(inst.m));
    if (static_cast<int>(s.f.size()) != inst.m)
      add(f + ".f", "scenario " + std::to_string(k) + " f has " +
                        std::to_string(s.f.size()) + " entries, expected " +
                        std::to_string(inst.m));
    if (!all_finite(s.h) || !all_finite(s.f) || !all_finite(s.G.values()) ||
        !all_finite(s.H.values()))
      add(f, "non-finite scenario data");
  }
  if (!inst.scenarios.empty() && std::abs(total - 1.0) > kProbSumTol)
    add("scenarios", "probabilities sum " + fmt(total));
  return out;
}

lpkit::LinearProgram recourse_lp(const CcmpInstance& inst, int k,
                                 const std::vector<double>& x0) {
  const Scenario& s = inst.scenarios[k];
  lpkit::LinearProgram lp;
  for (int j = 0; j < inst.m; ++j) lp.add_column(0.0, kInf, s.f[j]);
  const auto gx = s.G.multiply(x0);
  for (int i = 0; i < s.H.rows(); ++i) {
    LinExpr e;
    for (int p = s.H.row_start()[i]; p < s.H.row_start()[i + 1]; ++p)
      e.add(s.H.col_index()[p], s.H.values()[p]);
    lp.add_row(e, RowSense::kGreaterEqual, s.h[i] - gx[i]);
  }
  return lp;
}

std::optional<double> recourse_cost(const CcmpInstance& inst, int k,
                                    const std::vector<double>& x0) {
  const Scenario& s = inst.scenarios[k];
  if (inst.m == 0) {
    const auto gx = s.G.multiply(x0);
    for (int i = 0; i < s.G.rows(); ++i)
      if (gx[i] < s.h[i] - kFeasTol) return std::nullopt;
    return 0.0;
  }
  const auto out = lpkit::solve_lp(recourse_lp(inst, k, x0));
  switch (out.status) {
    case lpkit::LpStatus::kOptimal: return out.objective;
    case lpkit::LpStatus::kInfeasible: return std::nullopt;
    case lpkit::LpStatus::kUnbounded: throw UnboundedRecourse(k);
  }
  return std::nullopt;
}

BestResponse best_response_z(const CcmpInstance& inst,
                             const std::vector<double>& x0) {
  const int K = inst.num_scenarios();
  BestResponse br;
  br.z.assign(K, 0);
  br.recourse_costs.assign(K, kInf);
  double forced = 0.0;
  for (int k = 0; k < K; ++k) {
    const auto v = recourse_cost(inst, k, x0);
    if (v) {
      br.recourse_costs[k] = *v;
    } else {
      br.z[k] = 1;
      forced += inst.scenarios[k].prob;
    }
  }
  if (forced > inst.epsilon + kMassTol) return br;
  const double budget = inst.epsilon + kMassTol - forced;

  // Only scenarios with positive cost are worth dropping.
  std::vector<int> cand;
  for (int k = 0; k < K; ++k)
    if (!br.z[k] && br.recourse_costs[k] > 0.0) cand.push_back(k);

  if (inst.equal_probabilities()) {
    const double pi = inst.scenarios[0].prob;
    int slots = static_cast<int>(std::floor(budget / pi));
    std::stable_sort(cand.begin(), cand.end(), [&](int a, int b) {
      return br.recourse_costs[a] > br.recourse_costs[b];
    });
    for (int k : cand) {
      if (slots-- <= 0) break;
      br.z[k] = 1;
    }
  } else if (!cand.empty()) {
    lpkit::MipProblem mip;
    mip.lp.sense = lpkit::ObjSense::kMaximize;
    LinExpr mass;
    for (int k : cand) {
      const int col = mip.add_column(0, 1, inst.scenarios[k].prob * br.recourse_costs[k], true);
      mass.add(col, inst.scenarios[k].prob);
    }
    mip.lp.add_row(mass, RowSense::kLessEqual, budget);
    const auto res = lpkit::solve_mip(mip, {}, 1e-12);
    if (!res.has_incumbent) throw NumericalFailure("scenario selection MIP failed");
    for (std::size_t t = 0; t < cand.size(); ++t)
      if (res.x[t] > 0.5) br.z[cand[t]] = 1;
  }
  br.expected_cost = 0.0;
  for (int k = 0; k < K; ++k)
    if (!br.z[k]) br.expected_cost += inst.scenarios[k].prob * br.recourse_costs[k];
  return br;
}

Evaluation evaluate_solution(const CcmpInstance& inst, const Solution& sol) {
  Evaluation ev;
  const int n = inst.n();
  const int K = inst.num_scenarios();
  auto issue = [&](std::string s) { ev.issues.push_back(std::move(s)); };
  if (static_cast<int>(sol.x.size()) != n || static_cast<int>(sol.z.size()) != K) {
    issue("solution dimensions do not match the instance");
    return ev;
  }
  for (int j = 0; j < n; ++j) {
    const VarSpec& v = inst.x_specs[j];
    const double x = sol.x[j];
    if (!std::isfinite(x) || x < v.lower - kFeasTol || x > v.upper + kFeasTol)
      issue("x[" + std::to_string(j) + "] = " + fmt(x) + " outside its bounds");
    if (v.integral() && std::abs(x - std::round(x)) > kFeasTol)
      issue("x[" + std::to_string(j) + "] = " + fmt(x) + " is not integral");
  }
  const auto ax = inst.A.multiply(sol.x);
  for (int i = 0; i < inst.A.rows(); ++i)
    if (ax[i] < inst.b[i] - kFeasTol)
      issue("first-stage row " + std::to_string(i) + " violated by " +
            fmt(inst.b[i] - ax[i]));
  double mass = 0.0;
  double obj = 0.0;
  for (int j = 0; j < n; ++j) obj += inst.c[j] * sol.x[j];
  for (int k = 0; k < K; ++k) {
    const Scenario& s = inst.scenarios[k];
    if (sol.z[k] != 0 && sol.z[k] != 1) {
      issue("z[" + std::to_string(k) + "] is not binary");
      continue;
    }
    if (sol.z[k] == 1) {
      mass += s.prob;
      continue;
    }
    std::vector<double> y;
    if (auto it = sol.y.find(k); it != sol.y.end()) {
      y = it->second;
    } else if (inst.m == 0) {
      y.clear();
    } else {
      issue("no recourse for responsive scenario " + std::to_string(k));
      continue;
    }
    if (static_cast<int>(y.size()) != inst.m) {
      issue("recourse of scenario " + std::to_string(k) + " has wrong length");
      continue;
    }
    for (int j = 0; j < inst.m; ++j)
      if (!(y[j] >= -kFeasTol))
        issue("y[" + std::to_string(k) + "][" + std::to_string(j) + "] negative");
    const auto gx = s.G.multiply(sol.x);
    const auto hy = s.H.multiply(y);
    for (int i = 0; i < static_cast<int>(s.h.size()); ++i)
      if (gx[i] + hy[i] < s.h[i] - kFeasTol)
        issue("scenario " + std::to_string(k) + " row " + std::to_string(i) +
              " violated by " + fmt(s.h[i] - gx[i] - hy[i]));
    double fy = 0.0;
    for (int j = 0; j < inst.m; ++j) fy += s.f[j] * y[j];
    obj += s.prob * fy;
  }
  if (mass > inst.epsilon + kMassTol)
    issue("dropped probability " + fmt(mass) + " exceeds epsilon " + fmt(inst.epsilon));
  ev.objective = obj;
  ev.objective_consistent =
      std::abs(obj - sol.objective) <= 1e-6 * std::max(1.0, std::abs(obj));
  ev.feasible = ev.issues.empty();
  return ev;
}

lpkit::MipProblem first_stage_problem(const CcmpInstance& inst) {
  lpkit::MipProblem mip;
  for (int j = 0; j < inst.n(); ++j) {
    const VarSpec& v = inst.x_specs[j];
    mip.add_column(v.lower, v.upper, inst.c[j], v.integral(), "x" + std::to_string(j));
  }
  for (int i = 0; i < inst.A.rows(); ++i) {
    LinExpr e;
    for (int p = inst.A.row_start()[i]; p < inst.A.row_start()[i + 1]; ++p)
      e.add(inst.A.col_index()[p], inst.A.values()[p]);
    mip.lp.add_row(e, RowSense::kGreaterEqual, inst.b[i], "A" + std::to_string(i));
  }
  return mip;
}

}  // namespace ccmp
