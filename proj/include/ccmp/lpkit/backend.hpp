#pragma once

#include <memory>
#include <string>

#include "ccmp/lpkit/solver.hpp"

namespace ccmp::lpkit {

struct BackendCapabilities {
  bool lp = false;
  bool mip = false;
  bool rays = false;    // unbounded LPs come back with a primal ray
  bool farkas = false;  // infeasible LPs come back with a certificate
  bool concurrent = false;
};

// Seam for substituting an external solver. Callers that solve Benders
// subproblems require `rays`.
class BackendPort {
 public:
  virtual ~BackendPort() = default;
  virtual std::string name() const = 0;
  virtual BackendCapabilities capabilities() const = 0;
  virtual LpOutcome solve(const LinearProgram& lp, const Limits& limits,
                          const Basis* warm_start = nullptr) const = 0;
  virtual MipResult solve(const MipProblem& mip, const Limits& limits,
                          double rel_gap,
                          const Basis* warm_start = nullptr) const = 0;
};

class SimplexBackend final : public BackendPort {
 public:
  std::string name() const override { return "simplex"; }
  BackendCapabilities capabilities() const override {
    return {true, true, true, true, true};
  }
  LpOutcome solve(const LinearProgram& lp, const Limits& limits,
                  const Basis* warm_start) const override {
    return solve_lp(lp, limits, warm_start);
  }
  MipResult solve(const MipProblem& mip, const Limits& limits, double rel_gap,
                  const Basis* warm_start) const override {
    return solve_mip(mip, limits, rel_gap, warm_start);
  }
};

// Process-wide default backend (the built-in simplex kernel).
const BackendPort& default_backend();

// Throws PreconditionViolated when `backend` cannot serve Benders
// subproblems.
void require_subproblem_capable(const BackendPort& backend);

}  // namespace ccmp::lpkit
