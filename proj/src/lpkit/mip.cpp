#include <algorithm>
#include <chrono>
#include <cmath>
#include <queue>

#include "ccmp/errors.hpp"
#include "ccmp/lpkit/solver.hpp"

namespace ccmp::lpkit {

const char* to_string(MipStatus s) {
  switch (s) {
    case MipStatus::kOptimal: return "optimal";
    case MipStatus::kInfeasible: return "infeasible";
    case MipStatus::kUnbounded: return "unbounded";
    case MipStatus::kLimitReached: return "limit";
  }
  return "?";
}

double relative_gap(double incumbent, double bound) {
  if (!std::isfinite(incumbent) || !std::isfinite(bound))
    return std::numeric_limits<double>::infinity();
  return std::abs(incumbent - bound) / std::max(std::abs(incumbent), 1e-10);
}

namespace {

constexpr double kIntTol = 1e-6;

using Clock = std::chrono::steady_clock;

struct Node {
  double bound;  // parent LP value, minimization form
  int depth;
  long id;
  std::vector<double> lo, up;  // bounds of the integer columns
  Basis basis;
};

struct NodeOrder {
  bool operator()(const Node& a, const Node& b) const {
    if (a.bound != b.bound) return a.bound > b.bound;
    if (a.depth != b.depth) return a.depth < b.depth;
    return a.id > b.id;
  }
};

}  // namespace

MipResult solve_mip(const MipProblem& mip, const Limits& limits,
                    double rel_gap, const Basis* warm_start) {
  const auto start = Clock::now();
  mip.lp.validate();
  LinearProgram lp = mip.lp;
  const int n = lp.num_cols();
  const double sign = lp.sense == ObjSense::kMaximize ? -1.0 : 1.0;
  std::vector<int> ints;
  for (int j = 0; j < n; ++j)
    if (j < static_cast<int>(mip.integral.size()) && mip.integral[j])
      ints.push_back(j);

  MipResult result;
  auto elapsed = [&] {
    return std::chrono::duration<double>(Clock::now() - start).count();
  };
  auto lp_limits = [&] {
    Limits l;
    l.time_seconds = limits.time_seconds - elapsed();
    return l;
  };

  Node root{-kInf, 0, 0, {}, {}, {}};
  for (int j : ints) {
    const double lo = std::ceil(lp.lower()[j] - kIntTol);
    const double up = std::floor(lp.upper()[j] + kIntTol);
    if (lo > up) {
      result.status = MipStatus::kInfeasible;
      return result;
    }
    root.lo.push_back(lo);
    root.up.push_back(up);
  }
  if (warm_start != nullptr) root.basis = *warm_start;

  double incumbent = kInf;  // minimization form
  double pruned = kInf;     // least bound among nodes pruned by the gap rule
  std::priority_queue<Node, std::vector<Node>, NodeOrder> open;
  open.push(std::move(root));
  long next_id = 1;

  auto prunable = [&](double v) {
    if (incumbent - v > rel_gap * std::max(std::abs(incumbent), 1e-10))
      return false;
    pruned = std::min(pruned, v);
    return true;
  };
  auto accept = [&](const std::vector<double>& x) {
    const double v = sign * lp.objective_value(x);
    if (v < incumbent) {
      incumbent = v;
      result.x = x;
      result.has_incumbent = true;
    }
  };
  auto finish_limit = [&](double open_bound) {
    result.status = MipStatus::kLimitReached;
    double b = open_bound;
    if (!open.empty()) b = std::min(b, open.top().bound);
    b = std::min({b, incumbent, pruned});
    result.bound = sign * b;
    if (result.has_incumbent) {
      result.objective = sign * incumbent;
      result.gap = relative_gap(incumbent, b);
    }
    return result;
  };

  while (!open.empty()) {
    Node node = open.top();
    open.pop();
    if (result.has_incumbent && prunable(node.bound)) continue;
    if (result.nodes >= limits.nodes || elapsed() > limits.time_seconds)
      return finish_limit(node.bound);
    ++result.nodes;

    for (std::size_t t = 0; t < ints.size(); ++t)
      lp.set_bounds(ints[t], node.lo[t], node.up[t]);
    LpOutcome out;
    try {
      out = solve_lp(lp, lp_limits(), node.basis.empty() ? nullptr : &node.basis);
    } catch (const LimitExceeded&) {
      return finish_limit(node.bound);
    }
    result.lp_iterations += out.iterations;
    if (node.id == 0) result.root_basis = out.basis;
    if (out.status == LpStatus::kInfeasible) continue;
    if (out.status == LpStatus::kUnbounded) {
      result.status = MipStatus::kUnbounded;
      result.objective = sign * -kInf;
      result.bound = result.objective;
      return result;
    }
    const double v = sign * out.objective;
    if (result.has_incumbent && prunable(v)) continue;

    int branch = -1;
    double best_frac = kIntTol;
    for (std::size_t t = 0; t < ints.size(); ++t) {
      double& x = out.primal[ints[t]];
      x = std::clamp(x, node.lo[t], node.up[t]);
      const double frac = std::abs(x - std::round(x));
      if (frac > best_frac) {
        best_frac = frac;
        branch = static_cast<int>(t);
      }
    }

    if (branch < 0) {
      // Polish: fix the integer columns at their rounded values.
      if (ints.empty()) {
        accept(out.primal);
        continue;
      }
      LinearProgram fixed = lp;
      for (int j : ints) {
        const double r = std::round(out.primal[j]);
        fixed.set_bounds(j, r, r);
      }
      std::vector<double> x = out.primal;
      try {
        const LpOutcome pol = solve_lp(fixed, lp_limits(), &out.basis);
        result.lp_iterations += pol.iterations;
        if (pol.status == LpStatus::kOptimal) x = pol.primal;
      } catch (const LimitExceeded&) {
      }
      for (int j : ints) x[j] = std::round(x[j]);
      accept(x);
      continue;
    }

    const double x = out.primal[ints[branch]];
    Node down{v, node.depth + 1, next_id++, node.lo, node.up, out.basis};
    down.up[branch] = std::floor(x);
    Node upn{v, node.depth + 1, next_id++, std::move(node.lo),
             std::move(node.up), out.basis};
    upn.lo[branch] = std::ceil(x);
    open.push(std::move(down));
    open.push(std::move(upn));
  }

  if (!result.has_incumbent) {
    result.status = MipStatus::kInfeasible;
    return result;
  }
  result.status = MipStatus::kOptimal;
  const double b = std::min(incumbent, pruned);
  result.objective = sign * incumbent;
  result.bound = sign * b;
  result.gap = relative_gap(incumbent, b);
  return result;
}

}  // namespace ccmp::lpkit
