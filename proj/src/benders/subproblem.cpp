#include <algorithm>
#include <cmath>

#include "ccmp/benders/benders.hpp"
#include "ccmp/errors.hpp"
#include "ccmp/lpkit/solver.hpp"

namespace ccmp::benders {

using lpkit::LinearProgram;
using lpkit::LinExpr;
using lpkit::LpStatus;
using lpkit::RowSense;

namespace {

std::vector<double> residual(const Scenario& s, const std::vector<double>& x, double shift) {
  std::vector<double> r(s.h.size());
  for (int i = 0; i < s.G.rows(); ++i) r[i] = s.h[i] - s.G.row_dot(i, x) - shift;
  return r;
}

// u >= 0 with objective `cost` and rows H^T u <= f.
LinearProgram dual_lp(const Scenario& s, const std::vector<double>& cost, int m) {
  LinearProgram lp;
  lp.sense = lpkit::ObjSense::kMaximize;
  for (double c : cost) lp.add_column(0.0, kInf, c);
  std::vector<LinExpr> rows(m);
  for (int i = 0; i < s.H.rows(); ++i)
    for (int p = s.H.row_start()[i]; p < s.H.row_start()[i + 1]; ++p)
      rows[s.H.col_index()[p]].add(i, s.H.values()[p]);
  for (int j = 0; j < m; ++j) lp.add_row(rows[j], RowSense::kLessEqual, s.f[j]);
  return lp;
}

std::vector<double> clip(std::vector<double> u) {
  for (double& a : u) a = std::max(a, 0.0);
  return u;
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double v = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) v += a[i] * b[i];
  return v;
}

bool recourse_feasible(const CcmpInstance& inst, int k, const std::vector<double>& x) {
  auto lp = recourse_lp(inst, k, x);
  for (int j = 0; j < lp.num_cols(); ++j) lp.set_cost(j, 0.0);
  return lpkit::solve_lp(lp).status != LpStatus::kInfeasible;
}

}  // namespace

SubproblemResult solve_dual_subproblem(const CcmpInstance& inst, int k,
                                       const std::vector<double>& x0, double shift) {
  const Scenario& s = inst.scenarios[k];
  const auto r = residual(s, x0, shift);
  const auto out = lpkit::solve_lp(dual_lp(s, r, inst.m));
  SubproblemResult res;
  if (out.status == LpStatus::kInfeasible) throw DualInfeasible(k);
  if (out.status == LpStatus::kUnbounded) {
    res.bounded = false;
    res.value = kInf;
    res.ray.k = k;
    res.ray.v = clip(out.ray);
    double m = 0.0;
    for (double a : res.ray.v) m = std::max(m, a);
    if (m > 0.0)
      for (double& a : res.ray.v) a /= m;
    return res;
  }
  res.point.k = k;
  res.point.mu = clip(out.primal);
  res.value = dot(r, res.point.mu);
  return res;
}

DualPoint pareto_refine(const CcmpInstance& inst, const DualPoint& point,
                        const std::vector<double>& x0, const std::vector<double>& core,
                        double value, double shift, double core_shift) {
  const Scenario& s = inst.scenarios[point.k];
  const auto r0 = residual(s, x0, shift);
  const auto rc = residual(s, core, core_shift);
  auto lp = dual_lp(s, rc, inst.m);
  LinExpr face;
  for (std::size_t i = 0; i < r0.size(); ++i) face.add(static_cast<int>(i), r0[i]);
  lp.add_row(face, RowSense::kGreaterEqual, value - 1e-7 * (1.0 + std::abs(value)));
  try {
    const auto out = lpkit::solve_lp(lp);
    if (out.status != LpStatus::kOptimal) return point;
    DualPoint p{point.k, clip(out.primal), Origin::kPareto};
    if (std::abs(dot(r0, p.mu) - value) > 1e-6 * (1.0 + std::abs(value))) return point;
    if (!feasible(inst, p)) return point;
    return p;
  } catch (const Error&) {
    return point;
  }
}

std::vector<double> core_point(const CcmpInstance& inst) {
  const int n = inst.n();
  std::vector<double> p(n);
  for (int j = 0; j < n; ++j) {
    const double lo = inst.x_specs[j].lower, up = inst.x_specs[j].upper;
    if (std::isfinite(lo) && std::isfinite(up))
      p[j] = 0.5 * (lo + up);
    else if (std::isfinite(lo))
      p[j] = lo + 1.0;
    else if (std::isfinite(up))
      p[j] = up - 1.0;
    else
      p[j] = 0.0;
  }
  // min sum t_j, t_j >= |x_j - p_j| over the LP relaxation of X
  auto lp = first_stage_problem(inst).lp;
  for (int j = 0; j < n; ++j) lp.set_cost(j, 0.0);
  for (int j = 0; j < n; ++j) {
    const int t = lp.add_column(0.0, kInf, 1.0);
    lp.add_row(LinExpr{}.add(t, 1).add(j, -1), RowSense::kGreaterEqual, -p[j]);
    lp.add_row(LinExpr{}.add(t, 1).add(j, 1), RowSense::kGreaterEqual, p[j]);
  }
  try {
    const auto out = lpkit::solve_lp(lp);
    if (out.status == LpStatus::kOptimal) return {out.primal.begin(), out.primal.begin() + n};
  } catch (const Error&) {
  }
  return p;
}

Classification classify_scenarios(const CcmpInstance& inst) {
  const int K = inst.num_scenarios();
  const int n = inst.n();
  Classification cl;
  cl.tags.assign(K, ScenarioTag::kRegular);
  auto x_lp = first_stage_problem(inst).lp;
  for (int j = 0; j < n; ++j) x_lp.set_cost(j, 0.0);
  const auto ref = lpkit::solve_lp(x_lp);
  if (ref.status != LpStatus::kOptimal) {
    cl.x_infeasible = true;
    return cl;
  }
  cl.reference_x = ref.primal;
  std::vector<std::vector<double>> probes{cl.reference_x, core_point(inst)};
  for (int k = 0; k < K; ++k) {
    const Scenario& s = inst.scenarios[k];
    // rows over X_LP x y
    auto joint = x_lp;
    std::vector<int> y(inst.m);
    for (int j = 0; j < inst.m; ++j) y[j] = joint.add_column(0.0, kInf, 0.0);
    for (int i = 0; i < s.G.rows(); ++i) {
      LinExpr e;
      for (int p = s.G.row_start()[i]; p < s.G.row_start()[i + 1]; ++p)
        e.add(s.G.col_index()[p], s.G.values()[p]);
      for (int p = s.H.row_start()[i]; p < s.H.row_start()[i + 1]; ++p)
        e.add(y[s.H.col_index()[p]], s.H.values()[p]);
      joint.add_row(e, RowSense::kGreaterEqual, s.h[i]);
    }
    if (lpkit::solve_lp(joint).status == LpStatus::kInfeasible) {
      cl.tags[k] = ScenarioTag::kForceZ1;
      continue;
    }
    const std::vector<double> zero(s.h.size(), 0.0);
    if (lpkit::solve_lp(dual_lp(s, zero, inst.m)).status != LpStatus::kInfeasible) continue;
    for (const auto& x : probes)
      if (!recourse_feasible(inst, k, x)) throw SplitCaseDetected(k);
    cl.tags[k] = ScenarioTag::kForceZ0;
  }
  return cl;
}

}  // namespace ccmp::benders
