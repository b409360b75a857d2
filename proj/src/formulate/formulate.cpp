#include "ccmp/formulate/formulate.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>

#include "ccmp/errors.hpp"

namespace ccmp::formulate {

using lpkit::LinExpr;
using lpkit::MipProblem;
using lpkit::RowSense;

const char* to_string(FormulationKind k) {
  switch (k) {
    case FormulationKind::kIndicator: return "indicator";
    case FormulationKind::kMibpMcCormick: return "mibp-mccormick";
    case FormulationKind::kStrengthenedRhs: return "strengthened-rhs";
    case FormulationKind::kStrengthenedRecourse: return "strengthened-recourse";
    case FormulationKind::kFixedZ: return "fixed-z";
  }
  return "?";
}

bool VariableMap::injective(int num_cols) const {
  std::set<int> seen;
  auto take = [&](int c) {
    if (c < 0) return true;
    if (c >= num_cols) return false;
    return seen.insert(c).second;
  };
  for (int c : x) if (!take(c)) return false;
  for (const auto& v : y) for (int c : v) if (!take(c)) return false;
  for (int c : z) if (!take(c)) return false;
  for (int c : eta) if (!take(c)) return false;
  for (const auto& [key, c] : lambda_x) if (!take(c)) return false;
  for (const auto& [key, c] : lambda_y) if (!take(c)) return false;
  return true;
}

Solution BuiltFormulation::extract(const CcmpInstance& inst,
                                   const std::vector<double>& cols,
                                   double objective) const {
  Solution sol;
  sol.objective = objective;
  sol.x.resize(inst.n());
  for (int j = 0; j < inst.n(); ++j) {
    double v = cols[vars.x[j]];
    if (inst.x_specs[j].integral()) v = std::round(v);
    sol.x[j] = v;
  }
  const int K = inst.num_scenarios();
  sol.z.assign(K, 0);
  for (int k = 0; k < K; ++k) {
    if (!vars.fixed_z.empty())
      sol.z[k] = vars.fixed_z[k];
    else if (!vars.z.empty() && vars.z[k] >= 0)
      sol.z[k] = cols[vars.z[k]] > 0.5 ? 1 : 0;
    if (sol.z[k]) continue;
    std::vector<double> y(inst.m, 0.0);
    if (k < static_cast<int>(vars.y.size()) && !vars.y[k].empty())
      for (int j = 0; j < inst.m; ++j) y[j] = std::max(0.0, cols[vars.y[k][j]]);
    sol.y[k] = std::move(y);
  }
  return sol;
}

double ProductBounds::for_x(const CcmpInstance& inst, int j) const {
  if (j < static_cast<int>(x_upper.size()) && !std::isnan(x_upper[j]))
    return x_upper[j];
  if (std::isfinite(inst.x_specs[j].upper)) return inst.x_specs[j].upper;
  if (std::isfinite(fallback)) return fallback;
  throw MissingBound("x" + std::to_string(j));
}

int add_mccormick_product(MipProblem& mip, int v_col, int z_col, double L,
                          double U, std::string name) {
  if (!std::isfinite(L) || !std::isfinite(U))
    throw MissingBound(mip.lp.col_names()[v_col].empty()
                           ? "column " + std::to_string(v_col)
                           : mip.lp.col_names()[v_col]);
  const int lam = mip.add_column(std::min(L, 0.0), std::max(U, 0.0), 0.0, false,
                                 std::move(name));
  // lambda <= U z, lambda >= L z, lambda >= v - U (1 - z), lambda <= v - L (1 - z)
  mip.lp.add_row(LinExpr{}.add(lam, 1).add(z_col, -U), RowSense::kLessEqual, 0.0);
  if (L != 0.0)
    mip.lp.add_row(LinExpr{}.add(lam, 1).add(z_col, -L), RowSense::kGreaterEqual, 0.0);
  mip.lp.add_row(LinExpr{}.add(lam, 1).add(v_col, -1).add(z_col, -U),
                 RowSense::kGreaterEqual, -U);
  mip.lp.add_row(LinExpr{}.add(lam, 1).add(v_col, -1).add(z_col, -L),
                 RowSense::kLessEqual, -L);
  return lam;
}

namespace {

std::string num(double v) {
  std::ostringstream s;
  s.precision(17);
  s << v;
  return s.str();
}

// x columns and A x >= b.
void add_first_stage(const CcmpInstance& inst, BuiltFormulation& bf) {
  bf.mip = first_stage_problem(inst);
  bf.vars.x.resize(inst.n());
  for (int j = 0; j < inst.n(); ++j) bf.vars.x[j] = j;
}

void add_z(const CcmpInstance& inst, BuiltFormulation& bf) {
  const int K = inst.num_scenarios();
  LinExpr mass;
  bf.vars.z.resize(K);
  for (int k = 0; k < K; ++k) {
    bf.vars.z[k] = bf.mip.add_column(0, 1, 0, true, "z" + std::to_string(k));
    mass.add(bf.vars.z[k], inst.scenarios[k].prob);
  }
  bf.mip.lp.add_row(mass, RowSense::kLessEqual, inst.epsilon + kMassTol, "chance");
}

void add_y(const CcmpInstance& inst, BuiltFormulation& bf, int k, double upper,
           bool cost) {
  const Scenario& s = inst.scenarios[k];
  bf.vars.y.resize(inst.num_scenarios());
  bf.vars.y[k].resize(inst.m);
  for (int j = 0; j < inst.m; ++j)
    bf.vars.y[k][j] = bf.mip.add_column(
        0, upper, cost ? s.prob * s.f[j] : 0.0, false,
        "y" + std::to_string(k) + "_" + std::to_string(j));
}

// G_k x + H_k y_k + coef_i z_k >= h_k row by row.
void add_scenario_rows(const CcmpInstance& inst, BuiltFormulation& bf, int k,
                       const std::vector<double>& zcoef) {
  const Scenario& s = inst.scenarios[k];
  for (int i = 0; i < static_cast<int>(s.h.size()); ++i) {
    LinExpr e;
    for (int p = s.G.row_start()[i]; p < s.G.row_start()[i + 1]; ++p)
      e.add(bf.vars.x[s.G.col_index()[p]], s.G.values()[p]);
    for (int p = s.H.row_start()[i]; p < s.H.row_start()[i + 1]; ++p)
      e.add(bf.vars.y[k][s.H.col_index()[p]], s.H.values()[p]);
    if (!zcoef.empty() && zcoef[i] != 0.0) e.add(bf.vars.z[k], zcoef[i]);
    bf.mip.lp.add_row(e, RowSense::kGreaterEqual, s.h[i],
                      "s" + std::to_string(k) + "_" + std::to_string(i));
  }
}

void require_valid(const CcmpInstance& inst) {
  const auto v = validate_instance(inst);
  if (!v.empty()) throw PreconditionViolated(v[0].field + ": " + v[0].message);
}

}  // namespace

BuiltFormulation build_indicator(const CcmpInstance& inst, double M) {
  require_valid(inst);
  BuiltFormulation bf;
  bf.kind = FormulationKind::kIndicator;
  add_first_stage(inst, bf);
  add_z(inst, bf);
  const int I2 = inst.scenario_rows();
  for (int k = 0; k < inst.num_scenarios(); ++k) {
    add_y(inst, bf, k, kInf, true);
    add_scenario_rows(inst, bf, k, std::vector<double>(I2, M));
  }
  bf.notes.push_back("M = " + num(M));
  return bf;
}

BuiltFormulation build_mibp_mccormick(const CcmpInstance& inst,
                                      const ProductBounds& bounds) {
  require_valid(inst);
  BuiltFormulation bf;
  bf.kind = FormulationKind::kMibpMcCormick;
  add_first_stage(inst, bf);
  add_z(inst, bf);
  const int K = inst.num_scenarios();
  const double Uy = bounds.y_upper;
  if (inst.m > 0 && !std::isfinite(Uy)) throw MissingBound("y");
  std::vector<double> Ux(inst.n(), 0.0);
  std::set<int> noted;
  bf.vars.eta.assign(K, -1);
  for (int k = 0; k < K; ++k) {
    const Scenario& s = inst.scenarios[k];
    const int zk = bf.vars.z[k];
    add_y(inst, bf, k, Uy, false);
    const auto gused = s.G.column_used();
    const auto hused = s.H.column_used();
    std::vector<int> lx(inst.n(), -1), ly(inst.m, -1);
    for (int j = 0; j < inst.n(); ++j) {
      if (!gused[j]) continue;
      if (!noted.count(j)) {
        Ux[j] = bounds.for_x(inst, j);
        noted.insert(j);
      }
      const double L = inst.x_specs[j].lower;
      if (!std::isfinite(L)) throw MissingBound("x" + std::to_string(j) + " (lower)");
      lx[j] = add_mccormick_product(bf.mip, bf.vars.x[j], zk, L, Ux[j],
                                    "lx" + std::to_string(j) + "_" + std::to_string(k));
      bf.vars.lambda_x[{j, k}] = lx[j];
    }
    for (int j = 0; j < inst.m; ++j) {
      if (!hused[j] && s.f[j] == 0.0) continue;
      ly[j] = add_mccormick_product(bf.mip, bf.vars.y[k][j], zk, 0.0, Uy,
                                    "ly" + std::to_string(k) + "_" + std::to_string(j));
      bf.vars.lambda_y[{k, j}] = ly[j];
    }
    // (G_k x + H_k y_k - h_k)(1 - z_k) >= 0
    for (int i = 0; i < static_cast<int>(s.h.size()); ++i) {
      LinExpr e;
      for (int p = s.G.row_start()[i]; p < s.G.row_start()[i + 1]; ++p) {
        const int j = s.G.col_index()[p];
        e.add(bf.vars.x[j], s.G.values()[p]).add(lx[j], -s.G.values()[p]);
      }
      for (int p = s.H.row_start()[i]; p < s.H.row_start()[i + 1]; ++p) {
        const int j = s.H.col_index()[p];
        e.add(bf.vars.y[k][j], s.H.values()[p]).add(ly[j], -s.H.values()[p]);
      }
      e.add(zk, s.h[i]);
      bf.mip.lp.add_row(e, RowSense::kGreaterEqual, s.h[i],
                        "s" + std::to_string(k) + "_" + std::to_string(i));
    }
    // eta_k = f_k y_k (1 - z_k)
    if (inst.m > 0) {
      const int eta = bf.mip.add_column(-kInf, kInf, s.prob, false, "eta" + std::to_string(k));
      bf.vars.eta[k] = eta;
      LinExpr e;
      e.add(eta, 1);
      for (int j = 0; j < inst.m; ++j) {
        if (s.f[j] == 0.0) continue;
        e.add(bf.vars.y[k][j], -s.f[j]).add(ly[j], s.f[j]);
      }
      bf.mip.lp.add_row(e, RowSense::kEqual, 0.0, "eta" + std::to_string(k));
    }
  }
  for (int j : noted) bf.notes.push_back("U_x" + std::to_string(j) + " = " + num(Ux[j]));
  if (inst.m > 0) bf.notes.push_back("U_y = " + num(Uy));
  return bf;
}

BuiltFormulation build_strengthened_rhs(const CcmpInstance& inst,
                                        RhsVariant variant) {
  require_valid(inst);
  if (inst.m != 0) throw PreconditionViolated("m = 0 (no recourse) required");
  for (const auto& s : inst.scenarios)
    if (!(s.G == inst.scenarios[0].G))
      throw PreconditionViolated("G_k identical across scenarios required");
  for (const auto& s : inst.scenarios)
    for (double v : s.h)
      if (v < 0) throw PreconditionViolated("h_k >= 0 componentwise required");
  BuiltFormulation bf;
  bf.kind = FormulationKind::kStrengthenedRhs;
  add_first_stage(inst, bf);
  add_z(inst, bf);
  const int I2 = inst.scenario_rows();
  std::vector<double> hmin(I2, kInf);
  for (const auto& s : inst.scenarios)
    for (int i = 0; i < I2; ++i) hmin[i] = std::min(hmin[i], s.h[i]);
  for (int k = 0; k < inst.num_scenarios(); ++k) {
    add_y(inst, bf, k, kInf, true);
    std::vector<double> coef = inst.scenarios[k].h;
    if (variant == RhsVariant::kDominant)
      for (int i = 0; i < I2; ++i) coef[i] -= hmin[i];
    add_scenario_rows(inst, bf, k, coef);
  }
  bf.notes.push_back(variant == RhsVariant::kDominant ? "z coefficient h_k - min_l h_l"
                                                      : "z coefficient h_k");
  return bf;
}

std::vector<std::vector<double>> compute_q_star(const CcmpInstance& inst,
                                                QStarMode mode) {
  require_valid(inst);
  const MipProblem base = first_stage_problem(inst);
  std::map<std::vector<std::pair<int, double>>, double> cache;
  std::vector<std::vector<double>> q(inst.num_scenarios());
  for (int k = 0; k < inst.num_scenarios(); ++k) {
    const Scenario& s = inst.scenarios[k];
    q[k].resize(s.h.size());
    for (int i = 0; i < static_cast<int>(s.h.size()); ++i) {
      std::vector<std::pair<int, double>> row;
      for (int p = s.G.row_start()[i]; p < s.G.row_start()[i + 1]; ++p)
        row.emplace_back(s.G.col_index()[p], s.G.values()[p]);
      if (row.empty()) {
        q[k][i] = 0.0;
        continue;
      }
      if (auto it = cache.find(row); it != cache.end()) {
        if (!std::isfinite(it->second)) throw QStarUnbounded(k, i);
        q[k][i] = it->second;
        continue;
      }
      MipProblem p = base;
      for (int j = 0; j < p.lp.num_cols(); ++j) p.lp.set_cost(j, 0.0);
      for (const auto& [j, a] : row) p.lp.set_cost(j, a);
      double value;
      if (mode == QStarMode::kLpRelax) {
        const auto out = lpkit::solve_lp(p.lp);
        if (out.status == lpkit::LpStatus::kInfeasible)
          throw PreconditionViolated("first-stage set X is empty");
        value = out.status == lpkit::LpStatus::kUnbounded ? -kInf : out.objective;
      } else {
        const auto res = lpkit::solve_mip(p, {}, 1e-9);
        if (res.status == lpkit::MipStatus::kInfeasible)
          throw PreconditionViolated("first-stage set X is empty");
        // The proven bound keeps q* valid even within the gap.
        value = res.status == lpkit::MipStatus::kUnbounded ? -kInf : res.bound;
      }
      cache[row] = value;
      if (!std::isfinite(value)) throw QStarUnbounded(k, i);
      q[k][i] = value;
    }
  }
  return q;
}

BuiltFormulation build_strengthened_recourse(
    const CcmpInstance& inst, const std::vector<std::vector<double>>& qstar) {
  require_valid(inst);
  const int K = inst.num_scenarios();
  if (static_cast<int>(qstar.size()) != K)
    throw PreconditionViolated("q* must have one row per scenario");
  for (int k = 0; k < K; ++k) {
    for (double v : inst.scenarios[k].f)
      if (v < 0) throw PreconditionViolated("f_k >= 0 required");
    if (qstar[k].size() != inst.scenarios[k].h.size())
      throw PreconditionViolated("q* dimension mismatch");
    for (double v : qstar[k])
      if (!std::isfinite(v)) throw PreconditionViolated("q* must be finite");
  }
  BuiltFormulation bf;
  bf.kind = FormulationKind::kStrengthenedRecourse;
  add_first_stage(inst, bf);
  add_z(inst, bf);
  for (int k = 0; k < K; ++k) {
    add_y(inst, bf, k, kInf, true);
    std::vector<double> coef = inst.scenarios[k].h;
    for (std::size_t i = 0; i < coef.size(); ++i) coef[i] -= qstar[k][i];
    add_scenario_rows(inst, bf, k, coef);
  }
  bf.notes.push_back("z coefficient h_k - q*_k");
  return bf;
}

BuiltFormulation build_fixed_z(const CcmpInstance& inst,
                               const std::vector<int>& z0,
                               const std::optional<std::vector<double>>& fix_x) {
  require_valid(inst);
  const int K = inst.num_scenarios();
  if (static_cast<int>(z0.size()) != K) throw PreconditionViolated("z0 has wrong length");
  double mass = 0.0;
  for (int k = 0; k < K; ++k) mass += z0[k] ? inst.scenarios[k].prob : 0.0;
  if (mass > inst.epsilon + kMassTol) {
    std::string s;
    for (int v : z0) s += std::to_string(v);
    throw ChanceViolated("z0 = " + s + " drops mass " + num(mass) +
                         " above epsilon " + num(inst.epsilon));
  }
  BuiltFormulation bf;
  bf.kind = FormulationKind::kFixedZ;
  add_first_stage(inst, bf);
  bf.vars.fixed_z = z0;
  bf.vars.y.resize(K);
  if (fix_x) {
    for (int j = 0; j < inst.n(); ++j)
      bf.mip.lp.set_bounds(bf.vars.x[j], (*fix_x)[j], (*fix_x)[j]);
  }
  for (int k = 0; k < K; ++k) {
    if (z0[k]) continue;
    add_y(inst, bf, k, kInf, true);
    add_scenario_rows(inst, bf, k, {});
  }
  return bf;
}

FixedEvaluation evaluate_fixed(const CcmpInstance& inst,
                               const std::vector<int>& z0,
                               const std::vector<double>& x0) {
  FixedEvaluation ev;
  const int K = inst.num_scenarios();
  ev.eta.assign(K, 0.0);
  double obj = 0.0;
  for (int j = 0; j < inst.n(); ++j) obj += inst.c[j] * x0[j];
  for (int k = 0; k < K; ++k) {
    if (z0[k]) continue;
    const Scenario& s = inst.scenarios[k];
    if (inst.m == 0) {
      const auto v = recourse_cost(inst, k, x0);
      if (!v) {
        ev.eta[k] = kInf;
        if (ev.infeasible_scenario < 0) ev.infeasible_scenario = k;
        continue;
      }
      ev.y[k] = {};
      continue;
    }
    const auto out = lpkit::solve_lp(recourse_lp(inst, k, x0));
    if (out.status == lpkit::LpStatus::kUnbounded) throw UnboundedRecourse(k);
    if (out.status == lpkit::LpStatus::kInfeasible) {
      ev.eta[k] = kInf;
      if (ev.infeasible_scenario < 0) ev.infeasible_scenario = k;
      continue;
    }
    ev.eta[k] = out.objective;
    ev.y[k] = out.primal;
    for (double& v : ev.y[k]) v = std::max(0.0, v);
    obj += s.prob * out.objective;
  }
  ev.feasible = ev.infeasible_scenario < 0;
  if (ev.feasible) ev.objective = obj;
  return ev;
}

MipProblem lp_relaxation(const MipProblem& mip) {
  MipProblem r = mip;
  std::fill(r.integral.begin(), r.integral.end(), 0);
  return r;
}

FormulationResult solve_formulation(const CcmpInstance& inst,
                                    const BuiltFormulation& built,
                                    const lpkit::Limits& limits,
                                    double rel_gap) {
  FormulationResult fr;
  fr.raw = lpkit::solve_mip(built.mip, limits, rel_gap);
  const auto& r = fr.raw;
  switch (r.status) {
    case lpkit::MipStatus::kOptimal:
      fr.status = SolveStatus::optimal();
      break;
    case lpkit::MipStatus::kInfeasible:
      fr.status = SolveStatus::infeasible();
      return fr;
    case lpkit::MipStatus::kUnbounded:
      fr.status = SolveStatus::unbounded();
      fr.objective = -kInf;
      fr.bound = -kInf;
      return fr;
    case lpkit::MipStatus::kLimitReached:
      fr.status = r.nodes >= limits.nodes ? SolveStatus::iter_limit(r.gap)
                                          : SolveStatus::time_limit(r.gap);
      break;
  }
  fr.bound = std::isnan(r.bound) ? -kInf : r.bound;
  if (r.has_incumbent) {
    fr.has_solution = true;
    fr.objective = r.objective;
    fr.solution = built.extract(inst, r.x, r.objective);
  }
  return fr;
}

OracleResult oracle_solve(const CcmpInstance& inst, int max_scenarios,
                          double rel_gap, const lpkit::Limits& limits) {
  const int K = inst.num_scenarios();
  if (K > max_scenarios) throw TooManyScenarios(K);
  OracleResult best;
  best.status = SolveStatus::infeasible();
  for (long mask = 0; mask < (1L << K); ++mask) {
    std::vector<int> z(K);
    double mass = 0.0;
    for (int k = 0; k < K; ++k) {
      z[k] = (mask >> k) & 1;
      if (z[k]) mass += inst.scenarios[k].prob;
    }
    if (mass > inst.epsilon + kMassTol) continue;
    const auto built = build_fixed_z(inst, z);
    const auto fr = solve_formulation(inst, built, limits, rel_gap);
    ++best.subproblems;
    if (fr.status.tag == StatusTag::kUnbounded) {
      best.status = fr.status;
      best.objective = -kInf;
      best.z = z;
      return best;
    }
    if (fr.status.has_gap())
      throw LimitExceeded("oracle subproblem hit a limit", fr.bound);
    if (fr.status.tag != StatusTag::kOptimal) continue;
    if (fr.objective < best.objective) {
      best.status = SolveStatus::optimal();
      best.objective = fr.objective;
      best.z = z;
      best.solution = fr.solution;
    }
  }
  return best;
}

}  // namespace ccmp::formulate
