#include <cmath>

#include "ccmp/benders/benders.hpp"
#include "ccmp/errors.hpp"

namespace ccmp::benders {

using lpkit::LinExpr;
using lpkit::RowSense;

namespace {

bool recourse_cost_nonneg(const CcmpInstance& inst) {
  for (const Scenario& s : inst.scenarios)
    for (double v : s.f)
      if (v < 0.0) return false;
  return true;
}

}  // namespace

Master::Master(const CcmpInstance& inst, const BendersConfig& config,
               const std::vector<ScenarioTag>& tags)
    : inst_(inst), bounds_(config.mccormick), epsilon_(inst.epsilon) {
  const int K = inst.num_scenarios();
  const int n = inst.n();
  auto& mip = built_.mip;
  mip = first_stage_problem(inst);
  built_.kind = formulate::FormulationKind::kMibpMcCormick;
  built_.vars.x.resize(n);
  for (int j = 0; j < n; ++j) built_.vars.x[j] = j;

  LinExpr mass;
  built_.vars.z.resize(K);
  for (int k = 0; k < K; ++k) {
    const bool fixed = !tags.empty() && tags[k] == ScenarioTag::kForceZ1;
    built_.vars.z[k] = mip.add_column(fixed ? 1.0 : 0.0, 1.0, 0.0, true, "z" + std::to_string(k));
    mass.add(built_.vars.z[k], inst.scenarios[k].prob);
  }
  mip.lp.add_row(mass, RowSense::kLessEqual, inst.epsilon + kMassTol, "chance");

  double floor = 0.0;
  if (!recourse_cost_nonneg(inst)) {
    if (!std::isfinite(config.eta_floor)) throw MissingBound("eta (recourse cost has negative entries)");
    floor = std::min(config.eta_floor, 0.0);
  }
  built_.vars.eta.resize(K);
  for (int k = 0; k < K; ++k) {
    built_.vars.eta[k] = mip.add_column(floor, kInf, inst.scenarios[k].prob, false,
                                        "eta" + std::to_string(k));
    // a dropped scenario costs nothing
    if (floor < 0.0)
      mip.lp.add_row(LinExpr{}.add(built_.vars.eta[k], 1).add(built_.vars.z[k], floor),
                     RowSense::kGreaterEqual, floor);
  }
}

int Master::product(int j, int k) {
  auto& lx = built_.vars.lambda_x;
  if (const auto it = lx.find({j, k}); it != lx.end()) return it->second;
  const double L = inst_.x_specs[j].lower;
  if (!std::isfinite(L)) throw MissingBound("x" + std::to_string(j) + " (lower)");
  const double U = bounds_.for_x(inst_, j);
  const int col = formulate::add_mccormick_product(
      built_.mip, built_.vars.x[j], built_.vars.z[k], L, U,
      "w" + std::to_string(j) + "_" + std::to_string(k));
  lx[{j, k}] = col;
  return col;
}

void Master::add_dual_row(int k, const std::vector<double>& u, bool ray) {
  const Scenario& s = inst_.scenarios[k];
  const auto g = s.G.transpose_multiply(u);
  double hu = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) hu += s.h[i] * u[i];
  // eta_k >= (h - G x)^T u (1 - z_k), with w_jk = x_j z_k
  LinExpr e;
  if (!ray) e.add(built_.vars.eta[k], 1.0);
  e.add(built_.vars.z[k], hu);
  for (int j = 0; j < inst_.n(); ++j) {
    if (g[j] == 0.0) continue;
    e.add(built_.vars.x[j], g[j]);
    e.add(product(j, k), -g[j]);
  }
  built_.mip.lp.add_row(e, RowSense::kGreaterEqual, hu,
                        (ray ? "ray" : "cut") + std::to_string(k) + "_" +
                            std::to_string(built_.mip.lp.num_rows()));
}

void Master::add_cut(const DualPoint& p) { add_dual_row(p.k, p.mu, false); }

void Master::add_cut(const DualRay& r) { add_dual_row(r.k, r.v, true); }

void Master::add_pool(const CutPool& pool) {
  for (int k = 0; k < pool.num_scenarios(); ++k) {
    if (built_.mip.lp.lower()[built_.vars.z[k]] > 0.5) continue;
    for (const DualPoint& p : pool.points(k)) add_cut(p);
    for (const DualRay& r : pool.rays(k)) add_cut(r);
  }
}

void Master::add_integer_cut(const std::vector<int>& z0) {
  benders::add_integer_cut(built_.mip, built_.vars.z, z0);
}

jensen::JensenBlock Master::attach_jensen(jensen::BlockMode mode) {
  if (mode == jensen::BlockMode::kEqualProbExact) {
    // products built here use the configured bounds; the block reuses them
    for (int k = 0; k < inst_.num_scenarios(); ++k) {
      const auto used = inst_.scenarios[k].G.column_used();
      for (int j = 0; j < inst_.n(); ++j)
        if (used[j]) product(j, k);
    }
  }
  jensen::MasterColumns cols{built_.vars.x, built_.vars.z, built_.vars.eta};
  return jensen::attach_jensen_block(built_.mip, inst_, mode, epsilon_, cols,
                                     &built_.vars.lambda_x);
}

double Master::cut_slack(const CcmpInstance& inst, int k, const std::vector<double>& u,
                         bool ray, const std::vector<double>& x, int z_k, double eta_k) {
  return (ray ? 0.0 : eta_k) - dual_value(inst, k, u, x) * (1 - z_k);
}

void add_integer_cut(lpkit::MipProblem& master, const std::vector<int>& z_cols,
                     const std::vector<int>& z0) {
  LinExpr e;
  int ones = 0;
  for (std::size_t k = 0; k < z0.size(); ++k) {
    e.add(z_cols[k], z0[k] ? 1.0 : -1.0);
    ones += z0[k] ? 1 : 0;
  }
  master.lp.add_row(e, RowSense::kLessEqual, ones - 1.0, "nogood");
}

Master build_master(const CcmpInstance& inst, const CutPool& pool,
                    const BendersConfig& config) {
  Master m(inst, config);
  m.add_pool(pool);
  const auto t = traits(config.variant);
  if (t.jensen) {
    auto mode = *t.jensen;
    if (mode == jensen::BlockMode::kCommonGLinear && !jensen::applicability(inst).G_common)
      mode = jensen::BlockMode::kEqualProbExact;
    m.attach_jensen(mode);
  }
  return m;
}

}  // namespace ccmp::benders
