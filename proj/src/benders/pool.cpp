#include <algorithm>
#include <cctype>
#include <cmath>

#include <json.hpp>

#include "ccmp/benders/benders.hpp"

namespace ccmp::benders {

namespace {

constexpr double kDedupTol = 1e-7;
constexpr double kDualFeasTol = 1e-7;
constexpr double kSignTol = 1e-9;

double max_norm(const std::vector<double>& v) {
  double m = 0.0;
  for (double a : v) m = std::max(m, std::abs(a));
  return m;
}

bool near(const std::vector<double>& a, double sa, const std::vector<double>& b, double sb) {
  for (std::size_t i = 0; i < a.size(); ++i)
    if (std::abs(a[i] / sa - b[i] / sb) > kDedupTol) return false;
  return true;
}

// H^T u <= f (or 0 without f) and u >= 0, both within tolerance.
bool in_dual_region(const Scenario& s, const std::vector<double>& u,
                    const std::vector<double>* f) {
  if (static_cast<int>(u.size()) != s.H.rows()) return false;
  for (double a : u)
    if (!std::isfinite(a) || a < -kSignTol) return false;
  const auto ht = s.H.transpose_multiply(u);
  for (std::size_t j = 0; j < ht.size(); ++j)
    if (ht[j] > (f ? (*f)[j] : 0.0) + kDualFeasTol) return false;
  return true;
}

nlohmann::json number(double v) {
  if (std::isnan(v)) return nullptr;
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

}  // namespace

const char* to_string(Variant v) {
  switch (v) {
    case Variant::kBD0: return "bd0";
    case Variant::kBD1: return "bd1";
    case Variant::kBD2: return "bd2";
    case Variant::kBD3: return "bd3";
    case Variant::kBD4: return "bd4";
    case Variant::kBD5: return "bd5";
    case Variant::kBD6: return "bd6";
    case Variant::kBD7: return "bd7";
    case Variant::kBD8: return "bd8";
    case Variant::kBD1J: return "bd1j";
    case Variant::kBD1RJ: return "bd1rj";
  }
  return "?";
}

std::optional<Variant> parse_variant(const std::string& name) {
  std::string s = name;
  for (char& ch : s) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
  for (Variant v : {Variant::kBD0, Variant::kBD1, Variant::kBD2, Variant::kBD3, Variant::kBD4,
                    Variant::kBD5, Variant::kBD6, Variant::kBD7, Variant::kBD8, Variant::kBD1J,
                    Variant::kBD1RJ})
    if (s == to_string(v)) return v;
  return std::nullopt;
}

VariantTraits traits(Variant v) {
  VariantTraits t;
  switch (v) {
    case Variant::kBD0:
      t.all_scenarios = false;
      break;
    case Variant::kBD1:
      break;
    case Variant::kBD2:
      t.pareto = true;
      break;
    case Variant::kBD3:
      t.init = InitMode::kSp;
      break;
    case Variant::kBD4:
      t.init = InitMode::kSp;
      t.integer_cuts = true;
      break;
    case Variant::kBD5:
      t.init = InitMode::kSmallM;
      break;
    case Variant::kBD6:
      t.init = InitMode::kSmallM;
      t.integer_cuts = true;
      break;
    case Variant::kBD7:
      t.init = InitMode::kSmallM;
      t.strongest_only = true;
      t.integer_cuts = true;
      break;
    case Variant::kBD8:
      t.init = InitMode::kSmallM;
      t.strongest_only = true;
      t.init_pareto = true;
      t.integer_cuts = true;
      break;
    case Variant::kBD1J:
      t.jensen = jensen::BlockMode::kCommonGLinear;
      break;
    case Variant::kBD1RJ:
      t.jensen = jensen::BlockMode::kRelaxed;
      break;
  }
  return t;
}

const char* to_string(Origin o) {
  switch (o) {
    case Origin::kMainLoop: return "main_loop";
    case Origin::kSpInit: return "sp_init";
    case Origin::kSmallMInit: return "small_m_init";
    case Origin::kPareto: return "pareto";
  }
  return "?";
}

const char* to_string(ScenarioTag t) {
  switch (t) {
    case ScenarioTag::kRegular: return "regular";
    case ScenarioTag::kForceZ1: return "force_z1";
    case ScenarioTag::kForceZ0: return "force_z0";
  }
  return "?";
}

bool feasible(const CcmpInstance& inst, const DualPoint& p) {
  if (p.k < 0 || p.k >= inst.num_scenarios()) return false;
  const Scenario& s = inst.scenarios[p.k];
  return in_dual_region(s, p.mu, &s.f);
}

bool feasible(const CcmpInstance& inst, const DualRay& r) {
  if (r.k < 0 || r.k >= inst.num_scenarios()) return false;
  if (std::abs(max_norm(r.v) - 1.0) > kDualFeasTol) return false;
  return in_dual_region(inst.scenarios[r.k], r.v, nullptr);
}

bool CutPool::add(const CcmpInstance& inst, DualPoint p) {
  if (!feasible(inst, p) || p.k >= num_scenarios()) return false;
  const double sp = std::max(max_norm(p.mu), 1.0);
  for (const DualPoint& q : points_[p.k])
    if (near(p.mu, sp, q.mu, std::max(max_norm(q.mu), 1.0))) return false;
  points_[p.k].push_back(std::move(p));
  return true;
}

bool CutPool::add(const CcmpInstance& inst, DualRay r) {
  if (!feasible(inst, r) || r.k >= num_scenarios()) return false;
  for (const DualRay& q : rays_[r.k])
    if (near(r.v, 1.0, q.v, 1.0)) return false;
  rays_[r.k].push_back(std::move(r));
  return true;
}

std::size_t CutPool::size() const {
  std::size_t n = 0;
  for (const auto& p : points_) n += p.size();
  for (const auto& r : rays_) n += r.size();
  return n;
}

void CutPool::keep_strongest(const CcmpInstance& inst, const std::vector<double>& x) {
  for (int k = 0; k < num_scenarios(); ++k) {
    rays_[k].clear();
    if (points_[k].empty()) continue;
    std::size_t best = 0;
    double best_v = -kInf;
    for (std::size_t l = 0; l < points_[k].size(); ++l) {
      const double v = dual_value(inst, k, points_[k][l].mu, x);
      if (v > best_v) {
        best_v = v;
        best = l;
      }
    }
    DualPoint keep = std::move(points_[k][best]);
    points_[k].assign(1, std::move(keep));
  }
}

double dual_value(const CcmpInstance& inst, int k, const std::vector<double>& u,
                  const std::vector<double>& x) {
  const Scenario& s = inst.scenarios[k];
  double v = 0.0;
  for (int i = 0; i < s.G.rows(); ++i) v += (s.h[i] - s.G.row_dot(i, x)) * u[i];
  return v;
}

std::string IterationRecord::json_line() const {
  nlohmann::ordered_json j;
  j["iteration"] = iteration;
  j["phase"] = phase;
  j["lb"] = number(lb);
  j["ub"] = number(ub);
  j["master_bound"] = number(master_bound);
  j["master_objective"] = number(master_objective);
  j["points_added"] = points_added;
  j["rays_added"] = rays_added;
  j["integer_cuts"] = integer_cuts;
  j["master_seconds"] = master_seconds;
  j["sub_seconds"] = sub_seconds;
  j["z_hash"] = z_hash;
  return j.dump();
}

double benders_gap(double lb, double ub, double floor) {
  if (!std::isfinite(lb) || !std::isfinite(ub)) return kInf;
  return (ub - lb) / std::max(std::abs(lb), floor);
}

}  // namespace ccmp::benders
