#include "ccmp/jensen/jensen.hpp"

#include <algorithm>
#include <cmath>

#include "ccmp/errors.hpp"
#include "ccmp/formulate/formulate.hpp"
#include "ccmp/lpkit/solver.hpp"

namespace ccmp::jensen {

using lpkit::LinExpr;
using lpkit::MipProblem;
using lpkit::RowSense;

namespace {

constexpr double kCompareTol = 1e-12;

bool same(const SparseMatrix& a, const SparseMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  for (int i = 0; i < a.rows(); ++i) {
    for (int p = a.row_start()[i]; p < a.row_start()[i + 1]; ++p)
      if (std::abs(a.values()[p] - b.at(i, a.col_index()[p])) > kCompareTol) return false;
    for (int p = b.row_start()[i]; p < b.row_start()[i + 1]; ++p)
      if (std::abs(b.values()[p] - a.at(i, b.col_index()[p])) > kCompareTol) return false;
  }
  return true;
}

bool same(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (std::abs(a[i] - b[i]) > kCompareTol) return false;
  return true;
}

void require_common_recourse(const JensenApplicability& ap) {
  if (!ap.H_common) throw ApplicabilityFailed("recourse matrix H differs across scenarios");
  if (!ap.f_common) throw ApplicabilityFailed("recourse cost f differs across scenarios");
}

void require_equal_prob(const JensenApplicability& ap) {
  require_common_recourse(ap);
  if (!ap.equal_prob) throw ApplicabilityFailed("scenario probabilities are not equal");
  if (!ap.f_nonneg) throw ApplicabilityFailed("recourse cost f has negative entries");
}

// h_k - G_k x0 for every scenario.
std::vector<std::vector<double>> residuals(const CcmpInstance& inst,
                                           const std::vector<double>& x0) {
  std::vector<std::vector<double>> r;
  for (const auto& s : inst.scenarios) {
    auto gx = s.G.multiply(x0);
    for (std::size_t i = 0; i < gx.size(); ++i) gx[i] = s.h[i] - gx[i];
    r.push_back(std::move(gx));
  }
  return r;
}

// ybar >= 0 columns with cost scale * f.
std::vector<int> add_ybar(MipProblem& mip, const CcmpInstance& inst, double scale,
                          double upper) {
  std::vector<int> cols;
  const auto& f = inst.scenarios[0].f;
  for (int j = 0; j < inst.m; ++j)
    cols.push_back(mip.add_column(0, upper, scale * f[j], false, "ybar" + std::to_string(j)));
  return cols;
}

double solve_value(const MipProblem& mip) {
  if (std::none_of(mip.integral.begin(), mip.integral.end(), [](char c) { return c; })) {
    const auto out = lpkit::solve_lp(mip.lp);
    if (out.status == lpkit::LpStatus::kInfeasible) return kInf;
    if (out.status == lpkit::LpStatus::kUnbounded) return -kInf;
    return out.objective;
  }
  const auto res = lpkit::solve_mip(mip, {}, 1e-9);
  switch (res.status) {
    case lpkit::MipStatus::kInfeasible: return kInf;
    case lpkit::MipStatus::kUnbounded: return -kInf;
    case lpkit::MipStatus::kOptimal: return res.objective;
    case lpkit::MipStatus::kLimitReached: return res.bound;
  }
  return res.bound;
}

// Adds H ybar >= rhs as one row per scenario row i; `extra(i, expr)` appends
// the variable part of the right-hand side moved to the left.
template <typename Extra>
void add_h_rows(MipProblem& mip, const SparseMatrix& H, const std::vector<int>& ybar,
                const std::vector<double>& rhs, Extra extra, const std::string& prefix) {
  for (int i = 0; i < H.rows(); ++i) {
    LinExpr e;
    for (int p = H.row_start()[i]; p < H.row_start()[i + 1]; ++p)
      e.add(ybar[H.col_index()[p]], H.values()[p]);
    extra(i, e);
    mip.lp.add_row(e, RowSense::kGreaterEqual, rhs[i], prefix + std::to_string(i));
  }
}

}  // namespace

JensenApplicability applicability(const CcmpInstance& inst) {
  JensenApplicability ap;
  const int K = inst.num_scenarios();
  if (K == 0) return ap;
  const auto& s0 = inst.scenarios[0];
  ap.H_common = ap.f_common = ap.G_common = ap.equal_prob = true;
  for (const auto& s : inst.scenarios) {
    ap.H_common = ap.H_common && same(s.H, s0.H);
    ap.f_common = ap.f_common && same(s.f, s0.f);
    ap.G_common = ap.G_common && same(s.G, s0.G);
    ap.equal_prob = ap.equal_prob && std::abs(s.prob - 1.0 / K) <= kCompareTol;
  }
  ap.f_nonneg = ap.f_common &&
                std::all_of(s0.f.begin(), s0.f.end(), [](double v) { return v >= 0; });
  ap.L = drop_count(K, inst.epsilon);
  return ap;
}

int drop_count(int K, double epsilon) {
  return std::clamp(static_cast<int>(std::floor(epsilon * K + 1e-9)), 0, K);
}

double jensen_bound_sp(const CcmpInstance& inst, const std::vector<double>& x0) {
  require_common_recourse(applicability(inst));
  const auto r = residuals(inst, x0);
  std::vector<double> rhs(inst.scenario_rows(), 0.0);
  for (int k = 0; k < inst.num_scenarios(); ++k)
    for (std::size_t i = 0; i < rhs.size(); ++i) rhs[i] += inst.scenarios[k].prob * r[k][i];
  MipProblem mip;
  const auto ybar = add_ybar(mip, inst, 1.0, kInf);
  add_h_rows(mip, inst.scenarios[0].H, ybar, rhs, [](int, LinExpr&) {}, "j");
  return solve_value(mip);
}

double jensen_bound_ccmp(const CcmpInstance& inst, const std::vector<double>& x0,
                         double U_y) {
  require_common_recourse(applicability(inst));
  if (!std::isfinite(U_y)) throw MissingBound("ybar");
  const int K = inst.num_scenarios();
  const auto r = residuals(inst, x0);
  const auto& H = inst.scenarios[0].H;
  const auto& f = inst.scenarios[0].f;

  MipProblem mip;
  const auto ybar = add_ybar(mip, inst, 1.0, U_y);
  std::vector<int> z;
  for (int k = 0; k < K; ++k) z.push_back(mip.add_column(0, 1, 0, true, "z" + std::to_string(k)));
  // w[k][j] = z_k ybar_j
  std::vector<std::vector<int>> w(K, std::vector<int>(inst.m));
  for (int k = 0; k < K; ++k) {
    const double pk = inst.scenarios[k].prob;
    for (int j = 0; j < inst.m; ++j) {
      w[k][j] = formulate::add_mccormick_product(
          mip, ybar[j], z[k], 0, U_y, "w" + std::to_string(k) + "_" + std::to_string(j));
      mip.lp.set_cost(w[k][j], -pk * f[j]);
    }
  }
  std::vector<double> rhs(inst.scenario_rows(), 0.0);
  for (int k = 0; k < K; ++k)
    for (std::size_t i = 0; i < rhs.size(); ++i) rhs[i] += inst.scenarios[k].prob * r[k][i];
  add_h_rows(mip, H, ybar, rhs, [&](int i, LinExpr& e) {
    for (int k = 0; k < K; ++k) {
      const double pk = inst.scenarios[k].prob;
      for (int p = H.row_start()[i]; p < H.row_start()[i + 1]; ++p)
        e.add(w[k][H.col_index()[p]], -pk * H.values()[p]);
      e.add(z[k], pk * r[k][i]);
    }
  }, "j");
  LinExpr chance;
  for (int k = 0; k < K; ++k) chance.add(z[k], inst.scenarios[k].prob);
  mip.lp.add_row(chance, RowSense::kLessEqual, inst.epsilon + 1e-9, "chance");
  return solve_value(mip);
}

double jensen_bound_equal_prob(const CcmpInstance& inst, const std::vector<double>& x0) {
  const auto ap = applicability(inst);
  require_equal_prob(ap);
  const int K = inst.num_scenarios();
  const int L = ap.L;
  if (L == K) return 0.0;
  const auto r = residuals(inst, x0);
  MipProblem mip;
  const auto ybar = add_ybar(mip, inst, static_cast<double>(K - L) / K, kInf);
  std::vector<int> z;
  for (int k = 0; k < K; ++k) z.push_back(mip.add_column(0, 1, 0, true, "z" + std::to_string(k)));
  std::vector<double> rhs(inst.scenario_rows(), 0.0);
  for (int k = 0; k < K; ++k)
    for (std::size_t i = 0; i < rhs.size(); ++i) rhs[i] += r[k][i] / (K - L);
  add_h_rows(mip, inst.scenarios[0].H, ybar, rhs, [&](int i, LinExpr& e) {
    for (int k = 0; k < K; ++k) e.add(z[k], r[k][i] / (K - L));
  }, "j");
  LinExpr count;
  for (int k = 0; k < K; ++k) count.add(z[k], 1);
  mip.lp.add_row(count, RowSense::kEqual, L, "count");
  return solve_value(mip);
}

std::vector<double> conditional_mean_rhs(const CcmpInstance& inst, double epsilon) {
  const auto ap = applicability(inst);
  if (!ap.equal_prob) throw ApplicabilityFailed("scenario probabilities are not equal");
  const int K = inst.num_scenarios();
  const int L = drop_count(K, epsilon);
  if (L == K) throw ApplicabilityFailed("epsilon allows dropping every scenario");
  std::vector<double> out(inst.scenario_rows());
  std::vector<double> col(K);
  for (std::size_t i = 0; i < out.size(); ++i) {
    for (int k = 0; k < K; ++k) col[k] = inst.scenarios[k].h[i];
    std::sort(col.begin(), col.end());
    double sum = 0;
    for (int k = 0; k < K - L; ++k) sum += col[k];
    out[i] = sum / (K - L);
  }
  return out;
}

double jensen_bound_relaxed(const CcmpInstance& inst, const std::vector<double>& x0) {
  const auto ap = applicability(inst);
  require_equal_prob(ap);
  if (!ap.G_common) throw ApplicabilityFailed("technology matrix G differs across scenarios");
  const int K = inst.num_scenarios();
  if (ap.L == K) return 0.0;
  auto rhs = conditional_mean_rhs(inst, inst.epsilon);
  const auto gx = inst.scenarios[0].G.multiply(x0);
  for (std::size_t i = 0; i < rhs.size(); ++i) rhs[i] -= gx[i];
  MipProblem mip;
  const auto ybar = add_ybar(mip, inst, static_cast<double>(K - ap.L) / K, kInf);
  add_h_rows(mip, inst.scenarios[0].H, ybar, rhs, [](int, LinExpr&) {}, "j");
  return solve_value(mip);
}

const char* to_string(BlockMode m) {
  switch (m) {
    case BlockMode::kEqualProbExact: return "equal_prob_exact";
    case BlockMode::kCommonGLinear: return "common_G_linear";
    case BlockMode::kRelaxed: return "relaxed";
  }
  return "?";
}

JensenBlock attach_jensen_block(MipProblem& master, const CcmpInstance& inst,
                                BlockMode mode, double epsilon, const MasterColumns& cols,
                                std::map<std::pair<int, int>, int>* products) {
  const auto ap = applicability(inst);
  require_equal_prob(ap);
  if (mode != BlockMode::kEqualProbExact && !ap.G_common)
    throw ApplicabilityFailed("technology matrix G differs across scenarios");
  const int K = inst.num_scenarios();
  JensenBlock block;
  block.mode = mode;
  block.L = drop_count(K, epsilon);
  const int L = block.L;
  block.first_row = master.lp.num_rows();
  if (L == K) return block;  // every scenario may be dropped; nothing to add

  const auto& H = inst.scenarios[0].H;
  const auto& f = inst.scenarios[0].f;
  const auto& G0 = inst.scenarios[0].G;
  for (int j = 0; j < inst.m; ++j)
    block.ybar.push_back(master.add_column(0, kInf, 0, false, "ybar" + std::to_string(j)));

  LinExpr link;
  for (int k = 0; k < K; ++k) link.add(cols.eta[k], inst.scenarios[k].prob);
  for (int j = 0; j < inst.m; ++j)
    link.add(block.ybar[j], -static_cast<double>(K - L) / K * f[j]);
  master.lp.add_row(link, RowSense::kGreaterEqual, 0, "jensen_eta");

  std::map<std::pair<int, int>, int> local;
  auto& prod = products != nullptr ? *products : local;
  auto product = [&](int j, int k) {
    auto it = prod.find({j, k});
    if (it != prod.end()) return it->second;
    const auto& spec = inst.x_specs[j];
    const double lo = std::isfinite(spec.lower) ? spec.lower : -formulate::kDefaultProductBound;
    const double up = std::isfinite(spec.upper) ? spec.upper : formulate::kDefaultProductBound;
    const int c = formulate::add_mccormick_product(
        master, cols.x[j], cols.z[k], lo, up,
        "w" + std::to_string(j) + "_" + std::to_string(k));
    prod.emplace(std::make_pair(j, k), c);
    return c;
  };

  const double inv = 1.0 / (K - L);
  std::vector<double> rhs(inst.scenario_rows(), 0.0);
  switch (mode) {
    case BlockMode::kEqualProbExact:
      // (1 - z_k)(h_k - G_k x) = h_k - h_k z_k - G_k x + G_k (x z_k)
      for (int k = 0; k < K; ++k)
        for (std::size_t i = 0; i < rhs.size(); ++i) rhs[i] += inst.scenarios[k].h[i] * inv;
      add_h_rows(master, H, block.ybar, rhs, [&](int i, LinExpr& e) {
        for (int k = 0; k < K; ++k) {
          const auto& s = inst.scenarios[k];
          e.add(cols.z[k], s.h[i] * inv);
          for (int p = s.G.row_start()[i]; p < s.G.row_start()[i + 1]; ++p) {
            const int j = s.G.col_index()[p];
            e.add(cols.x[j], s.G.values()[p] * inv);
            e.add(product(j, k), -s.G.values()[p] * inv);
          }
        }
      }, "jensen_");
      break;
    case BlockMode::kCommonGLinear:
      for (int k = 0; k < K; ++k)
        for (std::size_t i = 0; i < rhs.size(); ++i) rhs[i] += inst.scenarios[k].h[i] * inv;
      add_h_rows(master, H, block.ybar, rhs, [&](int i, LinExpr& e) {
        for (int k = 0; k < K; ++k) e.add(cols.z[k], inst.scenarios[k].h[i] * inv);
        for (int p = G0.row_start()[i]; p < G0.row_start()[i + 1]; ++p)
          e.add(cols.x[G0.col_index()[p]], G0.values()[p]);
      }, "jensen_");
      break;
    case BlockMode::kRelaxed:
      rhs = conditional_mean_rhs(inst, epsilon);
      add_h_rows(master, H, block.ybar, rhs, [&](int i, LinExpr& e) {
        for (int p = G0.row_start()[i]; p < G0.row_start()[i + 1]; ++p)
          e.add(cols.x[G0.col_index()[p]], G0.values()[p]);
      }, "jensen_");
      break;
  }
  block.num_rows = master.lp.num_rows() - block.first_row;
  return block;
}

}  // namespace ccmp::jensen
