#include <algorithm>
#include <cmath>

#include "ccmp/lpkit/solver.hpp"

namespace ccmp::lpkit {

namespace {

constexpr double kTol = 1e-7;

std::vector<double> transpose_times(const LinearProgram& lp,
                                    const std::vector<double>& y) {
  std::vector<double> out(lp.num_cols(), 0.0);
  for (int r = 0; r < lp.num_rows(); ++r) {
    if (y[r] == 0.0) continue;
    for (int p = lp.row_start()[r]; p < lp.row_start()[r + 1]; ++p)
      out[lp.row_index()[p]] += lp.row_value()[p] * y[r];
  }
  return out;
}

bool check_optimal(const LinearProgram& lp, const LpOutcome& o) {
  const int n = lp.num_cols();
  const int m = lp.num_rows();
  if (static_cast<int>(o.primal.size()) != n ||
      static_cast<int>(o.row_dual.size()) != m)
    return false;
  for (int j = 0; j < n; ++j) {
    const double x = o.primal[j];
    if (!std::isfinite(x)) return false;
    if (x < lp.lower()[j] - kTol * (1 + std::abs(lp.lower()[j]))) return false;
    if (x > lp.upper()[j] + kTol * (1 + std::abs(lp.upper()[j]))) return false;
  }
  const auto act = lp.activities(o.primal);
  for (int r = 0; r < m; ++r) {
    const double slack = kTol * (1 + std::abs(lp.rhs()[r]));
    const double diff = act[r] - lp.rhs()[r];
    switch (lp.row_sense()[r]) {
      case RowSense::kGreaterEqual: if (diff < -slack) return false; break;
      case RowSense::kLessEqual: if (diff > slack) return false; break;
      case RowSense::kEqual: if (std::abs(diff) > slack) return false; break;
    }
  }
  // Work in minimization form.
  const double sign = lp.sense == ObjSense::kMaximize ? -1.0 : 1.0;
  std::vector<double> y(m);
  for (int r = 0; r < m; ++r) {
    y[r] = sign * o.row_dual[r];
    if (!std::isfinite(y[r])) return false;
    if (lp.row_sense()[r] == RowSense::kGreaterEqual && y[r] < -kTol) return false;
    if (lp.row_sense()[r] == RowSense::kLessEqual && y[r] > kTol) return false;
  }
  const auto aty = transpose_times(lp, y);
  double dual = 0.0;
  for (int r = 0; r < m; ++r) dual += lp.rhs()[r] * y[r];
  for (int j = 0; j < n; ++j) {
    const double d = sign * lp.cost()[j] - aty[j];
    if (std::abs(d) <= kTol * (1 + std::abs(lp.cost()[j]))) {
      // Treated as zero; contributes at the primal value.
      dual += d * o.primal[j];
      continue;
    }
    const double bound = d > 0 ? lp.lower()[j] : lp.upper()[j];
    if (!std::isfinite(bound)) return false;
    dual += d * bound;
  }
  const double primal = sign * (lp.objective_value(o.primal) - lp.objective_offset);
  return std::abs(primal - dual) <= 1e-6 * (1 + std::abs(primal));
}

bool check_farkas(const LinearProgram& lp, const std::vector<double>& pi) {
  const int m = lp.num_rows();
  if (static_cast<int>(pi.size()) != m) return false;
  double scale = 0.0;
  for (double v : pi) {
    if (!std::isfinite(v)) return false;
    scale = std::max(scale, std::abs(v));
  }
  if (scale == 0.0) return false;
  // min over the row boxes of pi^T r must exceed max over the column box of
  // (A^T pi)^T x.
  double lhs = 0.0;
  for (int r = 0; r < m; ++r) {
    const double p = pi[r] / scale;
    if (std::abs(p) < 1e-12) continue;
    const RowSense s = lp.row_sense()[r];
    if (s == RowSense::kGreaterEqual && p < 0) return false;
    if (s == RowSense::kLessEqual && p > 0) return false;
    lhs += p * lp.rhs()[r];
  }
  std::vector<double> scaled(m);
  for (int r = 0; r < m; ++r) scaled[r] = pi[r] / scale;
  const auto atp = transpose_times(lp, scaled);
  double rhs = 0.0;
  for (int j = 0; j < lp.num_cols(); ++j) {
    const double a = atp[j];
    if (std::abs(a) < 1e-9) continue;
    const double bound = a > 0 ? lp.upper()[j] : lp.lower()[j];
    if (!std::isfinite(bound)) return false;
    rhs += a * bound;
  }
  return lhs - rhs > kTol;
}

bool check_ray(const LinearProgram& lp, const std::vector<double>& ray) {
  const int n = lp.num_cols();
  if (static_cast<int>(ray.size()) != n) return false;
  double norm = 0.0;
  for (double v : ray) {
    if (!std::isfinite(v)) return false;
    norm = std::max(norm, std::abs(v));
  }
  if (std::abs(norm - 1.0) > 1e-9) return false;
  for (int j = 0; j < n; ++j) {
    if (std::isfinite(lp.lower()[j]) && ray[j] < -kTol) return false;
    if (std::isfinite(lp.upper()[j]) && ray[j] > kTol) return false;
  }
  const auto act = lp.activities(ray);
  for (int r = 0; r < lp.num_rows(); ++r) {
    switch (lp.row_sense()[r]) {
      case RowSense::kGreaterEqual: if (act[r] < -kTol) return false; break;
      case RowSense::kLessEqual: if (act[r] > kTol) return false; break;
      case RowSense::kEqual: if (std::abs(act[r]) > kTol) return false; break;
    }
  }
  double slope = 0.0;
  for (int j = 0; j < n; ++j) slope += lp.cost()[j] * ray[j];
  return lp.sense == ObjSense::kMaximize ? slope > 1e-9 : slope < -1e-9;
}

}  // namespace

bool check_certificate(const LinearProgram& lp, const LpOutcome& outcome) {
  switch (outcome.status) {
    case LpStatus::kOptimal: return check_optimal(lp, outcome);
    case LpStatus::kInfeasible: return check_farkas(lp, outcome.farkas);
    case LpStatus::kUnbounded: return check_ray(lp, outcome.ray);
  }
  return false;
}

}  // namespace ccmp::lpkit
