#pragma once

#include <map>
#include <utility>
#include <vector>

#include "ccmp/lpkit/linear_program.hpp"
#include "ccmp/model/instance.hpp"

namespace ccmp::jensen {

inline constexpr double kDefaultYBound = 1e5;

struct JensenApplicability {
  bool H_common = false;
  bool f_common = false;
  bool G_common = false;
  bool equal_prob = false;
  bool f_nonneg = false;
  int L = 0;  // L/K <= epsilon < (L+1)/K; meaningful when equal_prob

  bool all() const { return H_common && f_common && G_common && equal_prob; }
};

// Scenario data compared entry by entry at 1e-12.
JensenApplicability applicability(const CcmpInstance& inst);

// Largest L with L/K <= epsilon (within 1e-9).
int drop_count(int K, double epsilon);

// min f ybar s.t. H ybar >= sum_k pi_k (h_k - G_k x0), ybar >= 0. Ignores
// epsilon. Returns +inf when the aggregated system is infeasible.
double jensen_bound_sp(const CcmpInstance& inst, const std::vector<double>& x0);

// Chance-constrained bound at x0: minimize (1 - pi z) f ybar over binary z
// with pi z <= epsilon and ybar in [0, U_y], subject to
// (1 - pi z) H ybar >= sum_k pi_k (1 - z_k)(h_k - G_k x0), with the z ybar
// products linearized.
double jensen_bound_ccmp(const CcmpInstance& inst, const std::vector<double>& x0,
                         double U_y = kDefaultYBound);

// Equal-probability form: minimize (K-L)/K f ybar over z with sum z = L and
// H ybar >= sum_k (1 - z_k)/(K-L) (h_k - G_k x0). Needs f >= 0.
double jensen_bound_equal_prob(const CcmpInstance& inst,
                               const std::vector<double>& x0);

// (K-L)/K min f ybar s.t. H ybar >= hbar - G x0 with hbar the conditional
// mean right-hand side. Needs common G and f >= 0.
double jensen_bound_relaxed(const CcmpInstance& inst, const std::vector<double>& x0);

// Per component, the mean of the K-L smallest h_{k,i}.
std::vector<double> conditional_mean_rhs(const CcmpInstance& inst, double epsilon);

enum class BlockMode { kEqualProbExact, kCommonGLinear, kRelaxed };

const char* to_string(BlockMode m);

// Master columns the block refers to. eta[k] carries objective pi_k, so
// sum_k pi_k eta_k stands for the expected responsive recourse cost.
struct MasterColumns {
  std::vector<int> x;
  std::vector<int> z;
  std::vector<int> eta;
};

struct JensenBlock {
  BlockMode mode = BlockMode::kRelaxed;
  std::vector<int> ybar;
  int first_row = 0;
  int num_rows = 0;
  int L = 0;
};

// Adds ybar >= 0 and the rows
//   sum_k pi_k eta_k >= (K-L)/K f ybar
//   kEqualProbExact: H ybar >= sum_k (1 - z_k)/(K-L) (h_k - G_k x)
//   kCommonGLinear:  H ybar >= sum_k (1 - z_k)/(K-L) h_k - G x
//   kRelaxed:        H ybar >= hbar - G x
// The exact mode needs products x_j z_k; they are taken from `products`
// keyed (j, k) or created (McCormick over the x bounds, 1e5 when infinite)
// and recorded there. The common-G linear form assumes sum z = L, which
// some optimal solution attains when f >= 0.
JensenBlock attach_jensen_block(lpkit::MipProblem& master, const CcmpInstance& inst,
                                BlockMode mode, double epsilon,
                                const MasterColumns& cols,
                                std::map<std::pair<int, int>, int>* products = nullptr);

}  // namespace ccmp::jensen
