#pragma once

#include "ccmp/model/instance.hpp"

namespace ccmp::gen {

// min x, x in [0,10]; scenarios x >= 4 and x >= 6 with probability 1/2
// each; no recourse.
CcmpInstance tiny1(double epsilon);

// min x + E[y_k], x in [0,10]; y_k >= h_k - x with h = (2, 4), f = 1,
// probability 1/2 each.
CcmpInstance tiny2(double epsilon);

// Contradictory scenarios without recourse: K/2 require x >= hi-ish
// thresholds and K/2 require x <= low ones, equal probabilities. Variant
// picks K in {2, 4, 6}, thresholds and whether a slack recourse column is
// present. Infeasible at epsilon 0, feasible at epsilon 0.5.
CcmpInstance conflict1(double epsilon, int variant = 0);

}  // namespace ccmp::gen
