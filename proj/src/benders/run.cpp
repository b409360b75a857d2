#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>

#include "ccmp/benders/benders.hpp"
#include "ccmp/errors.hpp"
#include "ccmp/lpkit/solver.hpp"

namespace ccmp::benders {

using lpkit::LinExpr;
using lpkit::MipStatus;
using lpkit::RowSense;

namespace {

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string z_hash(const std::vector<int>& z) {
  std::uint64_t h = 1469598103934665603ull;
  for (int v : z) {
    h ^= static_cast<std::uint64_t>(v + 1);
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

double first_stage_cost(const CcmpInstance& inst, const std::vector<double>& x) {
  double v = 0.0;
  for (int j = 0; j < inst.n(); ++j) v += inst.c[j] * x[j];
  return v;
}

double dropped_mass(const CcmpInstance& inst, const std::vector<int>& z) {
  double m = 0.0;
  for (int k = 0; k < inst.num_scenarios(); ++k) m += z[k] ? inst.scenarios[k].prob : 0.0;
  return m;
}

bool regular(const std::vector<ScenarioTag>& tags, int k) {
  return tags.empty() || tags[k] == ScenarioTag::kRegular;
}

void emit(const BendersConfig& config, std::vector<IterationRecord>& log, IterationRecord rec) {
  if (config.on_iteration) config.on_iteration(rec);
  log.push_back(std::move(rec));
}

double eta_floor(const CcmpInstance& inst, const BendersConfig& config) {
  for (const Scenario& s : inst.scenarios)
    for (double v : s.f)
      if (v < 0.0) {
        if (!std::isfinite(config.eta_floor))
          throw MissingBound("eta (recourse cost has negative entries)");
        return std::min(config.eta_floor, 0.0);
      }
  return 0.0;
}

// Master of the SP / small-M restriction over (x, z, eta); rows
// eta_k >= (h_k - G_k x - M z_k)^T mu.
struct RestrictionMaster {
  lpkit::MipProblem mip;
  std::vector<int> z, eta;
  double M = 0.0;

  RestrictionMaster(const CcmpInstance& inst, const BendersConfig& config, InitMode mode,
                    const std::vector<ScenarioTag>& tags) {
    const int K = inst.num_scenarios();
    mip = first_stage_problem(inst);
    M = mode == InitMode::kSmallM ? config.small_M : 0.0;
    const double floor = eta_floor(inst, config);
    LinExpr mass;
    for (int k = 0; k < K; ++k) {
      const bool forced = !regular(tags, k);
      const double lo = forced ? 1.0 : 0.0;
      const double up = forced || mode == InitMode::kSmallM ? 1.0 : 0.0;
      z.push_back(mip.add_column(lo, up, 0.0, true, "z" + std::to_string(k)));
      eta.push_back(mip.add_column(forced ? 0.0 : floor, forced ? 0.0 : kInf,
                                   inst.scenarios[k].prob, false, "eta" + std::to_string(k)));
      mass.add(z[k], inst.scenarios[k].prob);
    }
    if (mode == InitMode::kSmallM)
      mip.lp.add_row(mass, RowSense::kLessEqual, inst.epsilon + kMassTol, "chance");
  }

  void add(const CcmpInstance& inst, int k, const std::vector<double>& u, bool ray) {
    const Scenario& s = inst.scenarios[k];
    const auto g = s.G.transpose_multiply(u);
    double hu = 0.0, sum = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
      hu += s.h[i] * u[i];
      sum += u[i];
    }
    LinExpr e;
    if (!ray) e.add(eta[k], 1.0);
    for (int j = 0; j < inst.n(); ++j) e.add(j, g[j]);
    e.add(z[k], M * sum);
    mip.lp.add_row(e, RowSense::kGreaterEqual, hu);
  }
};

}  // namespace

InitResult initialize(const CcmpInstance& inst, const BendersConfig& config, InitMode mode,
                      const std::vector<ScenarioTag>& tags) {
  const auto t0 = Clock::now();
  const int K = inst.num_scenarios();
  const auto tr = traits(config.variant);
  const Origin origin = mode == InitMode::kSmallM ? Origin::kSmallMInit : Origin::kSpInit;
  InitResult res;
  res.pool = CutPool(K);
  if (mode == InitMode::kNone) return res;

  RestrictionMaster rm(inst, config, mode, tags);
  std::vector<double> core;
  if (tr.init_pareto) core = core_point(inst);
  const double core_shift = rm.M * inst.epsilon;
  const double cap = std::min(config.init_time_cap, config.time_limit);
  double lb = -kInf, ub_restr = kInf;
  std::vector<double> last_x;
  lpkit::Basis warm;

  for (int it = 1;; ++it) {
    const double left = cap - since(t0);
    if (left <= 0.0) {
      res.timed_out = true;
      break;
    }
    IterationRecord rec;
    rec.iteration = it;
    rec.phase = "init";
    auto tm = Clock::now();
    lpkit::Limits lim;
    lim.time_seconds = left;
    const auto mr = lpkit::solve_mip(rm.mip, lim, config.init_gap, warm.empty() ? nullptr : &warm);
    rec.master_seconds = since(tm);
    if (mr.status == MipStatus::kInfeasible) {
      res.infeasible = true;
      break;
    }
    if (mr.status == MipStatus::kUnbounded) break;
    if (!mr.has_incumbent) {
      res.timed_out = true;
      break;
    }
    warm = mr.root_basis;
    std::vector<double> x0(mr.x.begin(), mr.x.begin() + inst.n());
    for (int j = 0; j < inst.n(); ++j)
      if (inst.x_specs[j].integral()) x0[j] = std::round(x0[j]);
    std::vector<int> z0(K);
    for (int k = 0; k < K; ++k) z0[k] = mr.x[rm.z[k]] > 0.5 ? 1 : 0;
    last_x = x0;
    if (std::isfinite(mr.bound)) lb = std::max(lb, mr.bound);
    rec.master_bound = mr.bound;
    rec.master_objective = mr.objective;

    tm = Clock::now();
    bool bounded = true;
    double restr = first_stage_cost(inst, x0), ccmp = restr;
    for (int k = 0; k < K; ++k) {
      if (!regular(tags, k)) continue;
      const double shift = rm.M * z0[k];
      auto sp = solve_dual_subproblem(inst, k, x0, shift);
      if (sp.bounded) {
        restr += inst.scenarios[k].prob * sp.value;
        if (!z0[k]) ccmp += inst.scenarios[k].prob * sp.value;
        DualPoint p = sp.point;
        p.origin = origin;
        if (tr.init_pareto) p = pareto_refine(inst, p, x0, core, sp.value, shift, core_shift);
        if (res.pool.add(inst, p)) {
          rm.add(inst, k, p.mu, false);
          ++rec.points_added;
        }
      } else {
        bounded = false;
        DualRay r = sp.ray;
        r.origin = origin;
        if (res.pool.add(inst, r)) {
          rm.add(inst, k, r.v, true);
          ++rec.rays_added;
        }
      }
    }
    rec.sub_seconds = since(tm);
    if (bounded) {
      ub_restr = std::min(ub_restr, restr);
      if (dropped_mass(inst, z0) <= inst.epsilon + kMassTol && ccmp < res.ub) {
        const auto ev = formulate::evaluate_fixed(inst, z0, x0);
        if (ev.feasible && ev.objective < res.ub) {
          res.ub = ev.objective;
          res.has_solution = true;
          res.solution = Solution{x0, z0, ev.y, ev.objective};
        }
      }
    }
    rec.lb = lb;
    rec.ub = res.ub;
    rec.z_hash = z_hash(z0);
    emit(config, res.log, rec);
    if (benders_gap(lb, ub_restr, config.lb_floor) <= config.init_gap) break;
    if (rec.points_added + rec.rays_added == 0) break;
  }
  if (tr.strongest_only) {
    const auto& xh = res.has_solution ? res.solution.x : last_x;
    if (!xh.empty()) res.pool.keep_strongest(inst, xh);
  }
  res.seconds = since(t0);
  return res;
}

SolveReport run(const CcmpInstance& inst, const BendersConfig& config) {
  const auto t0 = Clock::now();
  const auto tr = traits(config.variant);
  const int K = inst.num_scenarios();
  SolveReport rep;
  rep.variant = config.variant;
  rep.pool = CutPool(K);

  auto finish = [&](SolveStatus st, std::string why) {
    rep.status = st;
    rep.termination = std::move(why);
    rep.gap = rep.has_solution ? std::max(0.0, benders_gap(rep.lb, rep.ub, config.lb_floor)) : kInf;
    if (st.tag == StatusTag::kOptimal) rep.gap = std::max(0.0, std::min(rep.gap, config.opt_tol));
    rep.seconds = since(t0);
    return rep;
  };

  {
    auto x_lp = formulate::lp_relaxation(first_stage_problem(inst)).lp;
    const auto out = lpkit::solve_lp(x_lp);
    if (out.status == lpkit::LpStatus::kUnbounded)
      throw PreconditionViolated("min c x over X is unbounded");
    if (out.status == lpkit::LpStatus::kInfeasible)
      return finish(SolveStatus::infeasible(), "first stage infeasible");
  }

  const auto cl = classify_scenarios(inst);
  if (std::count(cl.tags.begin(), cl.tags.end(), ScenarioTag::kForceZ0) > 0) {
    // any feasible point responsive in such a scenario has cost -inf
    auto bf = formulate::build_indicator(inst, config.big_M);
    for (int j = 0; j < bf.mip.lp.num_cols(); ++j) bf.mip.lp.set_cost(j, 0.0);
    for (int k = 0; k < K; ++k)
      if (cl.tags[k] == ScenarioTag::kForceZ0) bf.mip.lp.set_bounds(bf.vars.z[k], 0.0, 0.0);
    lpkit::Limits lim;
    lim.time_seconds = config.time_limit;
    const auto r = lpkit::solve_mip(bf.mip, lim);
    if (r.status == MipStatus::kInfeasible)
      return finish(SolveStatus::infeasible(), "infeasible with unbounded-recourse scenarios responsive");
    if (r.status == MipStatus::kLimitReached && !r.has_incumbent)
      return finish(SolveStatus::time_limit(kInf), "time limit while classifying");
    rep.lb = rep.ub = -kInf;
    return finish(SolveStatus::unbounded(), "unbounded recourse");
  }

  CutPool& pool = rep.pool;
  if (tr.init != InitMode::kNone) {
    auto init = initialize(inst, config, tr.init, cl.tags);
    pool = std::move(init.pool);
    rep.init_iterations = static_cast<int>(init.log.size());
    rep.init_seconds = init.seconds;
    rep.log = std::move(init.log);
    if (init.has_solution) {
      rep.ub = init.ub;
      rep.has_solution = true;
      rep.solution = std::move(init.solution);
    }
  }

  Master master(inst, config, cl.tags);
  master.add_pool(pool);
  if (tr.jensen) {
    auto mode = *tr.jensen;
    if (mode == jensen::BlockMode::kCommonGLinear && !jensen::applicability(inst).G_common)
      mode = jensen::BlockMode::kEqualProbExact;
    master.attach_jensen(mode);
  }

  std::vector<double> core;
  if (tr.pareto) core = core_point(inst);
  double gap_now = config.master_gap;
  double evaluated_bound = kInf;  // min bound over z removed by integer cuts
  lpkit::Basis warm;

  for (int it = 1;; ++it) {
    const double gap = benders_gap(rep.lb, rep.ub, config.lb_floor);
    if (it > config.max_iterations) return finish(SolveStatus::iter_limit(gap), "iteration limit");
    const double left = config.time_limit - since(t0);
    if (left <= 0.0) return finish(SolveStatus::time_limit(gap), "time limit");

    IterationRecord rec;
    rec.iteration = it;
    rec.phase = "main";
    lpkit::Limits lim;
    lim.time_seconds = left;
    auto tm = Clock::now();
    const auto mr = lpkit::solve_mip(master.mip(), lim, gap_now, warm.empty() ? nullptr : &warm);
    rec.master_seconds = since(tm);
    rep.main_iterations = it;
    if (mr.status == MipStatus::kInfeasible) {
      if (rep.has_solution) {
        rep.lb = rep.ub;
        return finish(SolveStatus::optimal(), "master infeasible");
      }
      return finish(SolveStatus::infeasible(), "master infeasible");
    }
    if (mr.status == MipStatus::kUnbounded) return finish(SolveStatus::unbounded(), "master unbounded");
    if (!mr.has_incumbent) return finish(SolveStatus::time_limit(gap), "time limit");
    warm = mr.root_basis;

    const Solution ms = master.built().extract(inst, mr.x, mr.objective);
    const auto& x0 = ms.x;
    const auto& z0 = ms.z;
    const double bound = std::isfinite(mr.bound) ? mr.bound : mr.objective;
    rec.master_bound = bound;
    rec.master_objective = mr.objective;
    rep.lb = std::max(rep.lb, tr.integer_cuts ? std::min(bound, evaluated_bound) : bound);

    tm = Clock::now();
    std::vector<double> value(K, kInf);
    bool responsive_bounded = true;
    for (int k = 0; k < K; ++k) {
      if (cl.tags[k] != ScenarioTag::kRegular) continue;
      if (!tr.all_scenarios && z0[k]) continue;
      const auto sp = solve_dual_subproblem(inst, k, x0);
      if (sp.bounded) {
        value[k] = sp.value;
        DualPoint p = sp.point;
        if (tr.pareto) p = pareto_refine(inst, p, x0, core, sp.value);
        if (pool.add(inst, p)) {
          master.add_cut(p);
          ++rec.points_added;
        }
      } else {
        if (!z0[k]) responsive_bounded = false;
        if (pool.add(inst, sp.ray)) {
          master.add_cut(sp.ray);
          ++rec.rays_added;
        }
      }
    }
    rec.sub_seconds = since(tm);

    bool improved = false;
    if (tr.integer_cuts) {
      lpkit::Limits fl;
      fl.time_seconds = std::max(config.time_limit - since(t0), 0.0);
      const auto fz = formulate::build_fixed_z(inst, z0);
      const auto fr = formulate::solve_formulation(inst, fz, fl, gap_now);
      if (fr.status.tag == StatusTag::kInfeasible)
        evaluated_bound = std::min(evaluated_bound, kInf);
      else
        evaluated_bound = std::min(evaluated_bound, fr.bound);
      if (fr.has_solution && fr.objective < rep.ub) {
        rep.ub = fr.objective;
        rep.has_solution = true;
        rep.solution = fr.solution;
        improved = true;
      }
      master.add_integer_cut(z0);
      ++rec.integer_cuts;
      ++rep.integer_cuts;
    } else if (responsive_bounded) {
      double cand = first_stage_cost(inst, x0);
      for (int k = 0; k < K; ++k)
        if (!z0[k]) cand += inst.scenarios[k].prob * value[k];
      if (!rep.has_solution || cand < rep.ub - 1e-12 * (1.0 + std::abs(rep.ub))) {
        const auto ev = formulate::evaluate_fixed(inst, z0, x0);
        if (ev.feasible && ev.objective < rep.ub) {
          rep.ub = ev.objective;
          rep.has_solution = true;
          rep.solution = Solution{x0, z0, ev.y, ev.objective};
          improved = true;
        }
      }
    }

    rec.lb = rep.lb;
    rec.ub = rep.ub;
    rec.z_hash = z_hash(z0);
    emit(config, rep.log, rec);

    if (rep.has_solution && (benders_gap(rep.lb, rep.ub, config.lb_floor) <= config.opt_tol ||
                             rep.ub - rep.lb <= 1e-9))
      return finish(SolveStatus::optimal(), "gap closed");
    if (rec.points_added + rec.rays_added + rec.integer_cuts == 0 && !improved) {
      if (gap_now > 1e-9) {
        gap_now = 1e-9;
      } else {
        return finish(SolveStatus::feasible(benders_gap(rep.lb, rep.ub, config.lb_floor)),
                      "stalled");
      }
    }
  }
}

}  // namespace ccmp::benders
