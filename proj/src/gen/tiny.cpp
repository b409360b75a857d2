#include "ccmp/gen/tiny.hpp"

namespace ccmp::gen {

namespace {

CcmpInstance scalar_base(double epsilon, int m) {
  CcmpInstance inst;
  inst.c = {1.0};
  inst.A = SparseMatrix(0, 1);
  inst.x_specs = {VarSpec{VarKind::kContinuous, 0.0, 10.0}};
  inst.m = m;
  inst.epsilon = epsilon;
  return inst;
}

}  // namespace

CcmpInstance tiny1(double epsilon) {
  CcmpInstance inst = scalar_base(epsilon, 0);
  inst.name = "TINY1";
  for (double h : {4.0, 6.0})
    inst.scenarios.push_back({0.5, SparseMatrix::from_dense({{1.0}}),
                              SparseMatrix(1, 0), {h}, {}});
  return inst;
}

CcmpInstance tiny2(double epsilon) {
  CcmpInstance inst = scalar_base(epsilon, 1);
  inst.name = "TINY2";
  for (double h : {2.0, 4.0})
    inst.scenarios.push_back({0.5, SparseMatrix::from_dense({{1.0}}),
                              SparseMatrix::from_dense({{1.0}}), {h}, {1.0}});
  return inst;
}

CcmpInstance conflict1(double epsilon, int variant) {
  const int K = 2 + 2 * (variant % 3);
  const bool recourse = (variant / 3) % 2 == 1;
  CcmpInstance inst = scalar_base(epsilon, recourse ? 1 : 0);
  inst.name = "CONFLICT1-" + std::to_string(variant);
  inst.c = {variant % 2 == 0 ? 1.0 : -1.0};
  for (int k = 0; k < K; ++k) {
    Scenario s;
    s.prob = 1.0 / K;
    const bool lower = k < K / 2;
    const double t = lower ? 5.0 + k % 3 : 3.0 - k % 2;
    s.G = SparseMatrix::from_dense({{lower ? 1.0 : -1.0}});
    s.h = {lower ? t : -t};
    if (recourse) {
      // A recourse column that cannot help: zero row coefficient.
      s.H = SparseMatrix(1, 1);
      s.f = {1.0};
    } else {
      s.H = SparseMatrix(1, 0);
    }
    inst.scenarios.push_back(std::move(s));
  }
  return inst;
}

}  // namespace ccmp::gen
