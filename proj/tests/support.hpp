#pragma once

#include <cmath>
#include <random>

#include "ccmp/model/instance.hpp"

namespace testing_support {

// Small random instance for property tests: continuous x in [0, 5],
// recourse with nonnegative costs, complete recourse when `complete`.
inline ccmp::CcmpInstance small_random(std::mt19937_64& rng, int n, int m,
                                       int rows, int K, double eps,
                                       bool equal_prob = true,
                                       bool complete = true,
                                       bool mixed = false) {
  using namespace ccmp;
  std::uniform_real_distribution<double> u(0, 1);
  CcmpInstance inst;
  inst.epsilon = eps;
  inst.m = m;
  for (int j = 0; j < n; ++j) {
    inst.c.push_back(std::round(u(rng) * 10) / 2);
    inst.x_specs.push_back(
        {mixed && j % 2 ? VarKind::kInteger : VarKind::kContinuous, 0.0, 5.0});
  }
  inst.A = SparseMatrix(0, n);
  std::vector<double> w(K);
  double total = 0;
  for (int k = 0; k < K; ++k) total += w[k] = equal_prob ? 1.0 : 0.5 + u(rng);
  for (int k = 0; k < K; ++k) {
    Scenario s;
    s.prob = w[k] / total;
    std::vector<Triplet> g, h;
    for (int i = 0; i < rows; ++i) {
      for (int j = 0; j < n; ++j)
        if (u(rng) < 0.6) g.push_back({i, j, std::round(u(rng) * 6 - 1)});
      for (int j = 0; j < m; ++j)
        if (u(rng) < 0.5 || (complete && j == i % m))
          h.push_back({i, j, complete && j == i % m ? 1.0 : std::round(u(rng) * 4 - 2)});
      s.h.push_back(std::round(u(rng) * 20 - 4));
    }
    s.G = SparseMatrix::from_triplets(rows, n, g);
    s.H = SparseMatrix::from_triplets(rows, m, h);
    for (int j = 0; j < m; ++j) s.f.push_back(1 + std::round(u(rng) * 4));
    inst.scenarios.push_back(std::move(s));
  }
  // Normalize probability mass exactly enough for validation.
  double sum = 0;
  for (auto& s : inst.scenarios) sum += s.prob;
  inst.scenarios.back().prob += 1.0 - sum;
  return inst;
}

}  // namespace testing_support
