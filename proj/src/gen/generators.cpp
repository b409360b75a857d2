#include "ccmp/gen/generators.hpp"

#include <cmath>

#include "ccmp/errors.hpp"
#include "ccmp/gen/rng.hpp"

namespace ccmp::gen {

RandomSpec RandomSpec::T1(int K, XKind kind, std::uint64_t seed) {
  RandomSpec s;
  s.I1 = 10, s.I2 = 30, s.n = 20, s.m = 40;
  s.K = K, s.x_kind = kind, s.seed = seed;
  return s;
}

RandomSpec RandomSpec::T2(int K, XKind kind, std::uint64_t seed) {
  RandomSpec s;
  s.I1 = 20, s.I2 = 50, s.n = 30, s.m = 70;
  s.K = K, s.x_kind = kind, s.seed = seed;
  return s;
}

RandomSpec RandomSpec::scaled(int K, std::uint64_t seed) {
  RandomSpec s;
  s.I1 = 4, s.I2 = 8, s.n = 6, s.m = 8;
  s.K = K, s.seed = seed;
  s.x_kind = XKind::kMixed;
  s.n_continuous = 3;
  return s;
}

namespace {

VarSpec spec_for(const RandomSpec& s, int j) {
  switch (s.x_kind) {
    case XKind::kBinary: return {VarKind::kBinary, 0, 1};
    case XKind::kInteger: return {VarKind::kInteger, 0, kIntegerUpper};
    case XKind::kContinuous: return {VarKind::kContinuous, 0, kInf};
    case XKind::kMixed:
      return j < s.n_continuous ? VarSpec{VarKind::kContinuous, 0, kInf}
                                : VarSpec{VarKind::kInteger, 0, kIntegerUpper};
  }
  return {};
}

SparseMatrix draw_dense(Rng& rng, int rows, int cols, int drawn_rows,
                        double lo, double hi) {
  std::vector<Triplet> t;
  for (int i = 0; i < drawn_rows; ++i)
    for (int j = 0; j < cols; ++j) t.push_back({i, j, rng.uniform(lo, hi)});
  return SparseMatrix::from_triplets(rows, cols, std::move(t));
}

}  // namespace

CcmpInstance random_instance(const RandomSpec& spec) {
  if (spec.K < 1) throw Error("K must be positive");
  Rng rng(spec.seed);
  CcmpInstance inst;
  inst.name = "rand-" + std::to_string(spec.I1) + "x" + std::to_string(spec.I2) +
              "x" + std::to_string(spec.n) + "x" + std::to_string(spec.m) + "-K" +
              std::to_string(spec.K) + "-s" + std::to_string(spec.seed);
  inst.epsilon = spec.epsilon;
  inst.m = spec.m;
  for (int j = 0; j < spec.n; ++j) inst.c.push_back(rng.uniform(100, 300));
  inst.A = draw_dense(rng, spec.I1, spec.n, spec.I1, -25, 25);
  for (int i = 0; i < spec.I1; ++i) inst.b.push_back(rng.uniform(-50, 50));
  for (int j = 0; j < spec.n; ++j) inst.x_specs.push_back(spec_for(spec, j));

  const int head = static_cast<int>(std::floor(0.4 * spec.I2));
  for (int k = 0; k < spec.K; ++k) {
    Scenario s;
    s.prob = 1.0 / spec.K;
    if (spec.common_recourse && k > 0) {
      s.G = inst.scenarios[0].G;
      s.H = inst.scenarios[0].H;
    } else {
      s.G = draw_dense(rng, spec.I2, spec.n, head, 0, 10);
      std::vector<Triplet> t;
      for (int i = 0; i < spec.I2; ++i)
        for (int j = 0; j < spec.m; ++j)
          t.push_back({i, j, i < head ? rng.uniform(-3, 0) : rng.uniform(0, 3)});
      s.H = SparseMatrix::from_triplets(spec.I2, spec.m, std::move(t));
    }
    for (int i = 0; i < spec.I2; ++i)
      s.h.push_back(i < head ? rng.uniform(-35, 0) : rng.uniform(-25, 100));
    if (spec.common_recourse && k > 0) {
      s.f = inst.scenarios[0].f;
    } else {
      for (int j = 0; j < spec.m; ++j) s.f.push_back(rng.uniform(5, 10));
    }
    inst.scenarios.push_back(std::move(s));
  }
  return inst;
}

CcmpInstance random_rhs_instance(const RhsSpec& spec) {
  Rng rng(spec.seed);
  CcmpInstance inst;
  inst.name = "rhs-" + std::to_string(spec.seed);
  inst.epsilon = spec.epsilon;
  inst.m = 0;
  for (int j = 0; j < spec.n; ++j) {
    inst.c.push_back(rng.uniform(1, 10));
    inst.x_specs.push_back(
        {j % 2 ? VarKind::kInteger : VarKind::kContinuous, 0, 10});
  }
  inst.A = SparseMatrix(0, spec.n);
  const SparseMatrix G = draw_dense(rng, spec.I2, spec.n, spec.I2, 0, 10);
  for (int k = 0; k < spec.K; ++k) {
    Scenario s;
    s.prob = 1.0 / spec.K;
    s.G = G;
    s.H = SparseMatrix(spec.I2, 0);
    for (int i = 0; i < spec.I2; ++i) s.h.push_back(rng.uniform(0, 100));
    inst.scenarios.push_back(std::move(s));
  }
  return inst;
}

CcmpInstance or_instance(const OrSpec& spec) {
  const int n = spec.n_surgeries;
  const int nS = spec.n_surgeons;
  const int nR = spec.n_rooms;
  if (nS < 1 || n % nS != 0)
    throw PreconditionViolated("surgeries must split evenly across surgeons");
  const int per = n / nS;
  auto surgeon_of = [&](int i) { return i / per; };
  auto first_of = [&](int k) { return k * per; };

  CcmpInstance inst;
  inst.name = "or-" + std::to_string(n) + "s" + std::to_string(nS) + "d" +
              std::to_string(nR) + "r-K" + std::to_string(spec.K) + "-" +
              (spec.group == DurationGroup::kI ? "I" : "II") + "-s" +
              std::to_string(spec.seed);
  inst.epsilon = spec.epsilon;

  // First-stage columns.
  int cols = 0;
  std::vector<int> x(nR), t(nS), u(n);
  std::vector<std::vector<int>> y(n, std::vector<int>(nR));
  std::vector<std::vector<std::vector<int>>> z(
      n, std::vector<std::vector<int>>(n, std::vector<int>(nR, -1)));
  auto binary = [&] {
    inst.x_specs.push_back({VarKind::kBinary, 0, 1});
    inst.c.push_back(0);
    return cols++;
  };
  for (int r = 0; r < nR; ++r) {
    x[r] = binary();
    inst.c[x[r]] = spec.c_f;
  }
  for (int i = 0; i < n; ++i)
    for (int r = 0; r < nR; ++r) y[i][r] = binary();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j)
        for (int r = 0; r < nR; ++r) z[i][j][r] = binary();
  for (int k = 0; k < nS; ++k) {
    inst.x_specs.push_back({VarKind::kContinuous, 0, spec.L});
    inst.c.push_back(0);
    t[k] = cols++;
  }
  for (int i = 0; i < n; ++i) {
    inst.x_specs.push_back({VarKind::kContinuous, 1, static_cast<double>(n)});
    inst.c.push_back(0);
    u[i] = cols++;
  }

  std::vector<Triplet> a;
  int row = 0;
  auto ge = [&](std::vector<std::pair<int, double>> terms, double rhs) {
    for (auto [c, v] : terms) a.push_back({row, c, v});
    inst.b.push_back(rhs);
    ++row;
  };
  auto eq = [&](std::vector<std::pair<int, double>> terms, double rhs) {
    ge(terms, rhs);
    for (auto& tv : terms) tv.second = -tv.second;
    ge(terms, -rhs);
  };
  for (int i = 0; i < n; ++i)
    for (int r = 0; r < nR; ++r) ge({{x[r], 1}, {y[i][r], -1}}, 0);  // y_ir <= x_r
  for (int i = 0; i < n; ++i) {
    std::vector<std::pair<int, double>> terms;
    for (int r = 0; r < nR; ++r) terms.push_back({y[i][r], 1});
    eq(terms, 1);
  }
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      for (int r = 0; r < nR; ++r) {
        ge({{y[i][r], 1}, {z[i][j][r], -1}, {z[j][i][r], -1}}, 0);
        ge({{y[j][r], 1}, {z[i][j][r], -1}, {z[j][i][r], -1}}, 0);
        // Both in room r forces an order between them.
        ge({{z[i][j][r], 1}, {z[j][i][r], 1}, {y[i][r], -1}, {y[j][r], -1}}, -1);
      }
    }
  }
  for (int r = 0; r + 1 < nR; ++r) ge({{x[r], 1}, {x[r + 1], -1}}, 0);
  for (int i = 0; i < std::min(n, nR); ++i) {
    std::vector<std::pair<int, double>> terms;
    for (int r = 0; r <= i; ++r) terms.push_back({y[i][r], 1});
    eq(terms, 1);
  }
  // Surgery i may open room r only if some earlier surgery uses room r-1.
  for (int i = 0; i < n; ++i) {
    for (int r = 1; r <= std::min(i, nR - 1); ++r) {
      std::vector<std::pair<int, double>> terms;
      for (int j = r - 1; j <= i - 1; ++j) terms.push_back({y[j][r - 1], 1});
      for (int q = r; q <= std::min(i, nR - 1); ++q) terms.push_back({y[i][q], -1});
      ge(terms, 0);
    }
  }
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      std::vector<std::pair<int, double>> terms{{u[j], 1}, {u[i], -1}};
      for (int r = 0; r < nR; ++r) terms.push_back({z[i][j][r], -static_cast<double>(n)});
      ge(terms, 1 - n);
    }
  }
  for (int i = 0; i + 1 < n; ++i)
    if (surgeon_of(i) == surgeon_of(i + 1)) ge({{u[i + 1], 1}, {u[i], -1}}, 1);
  inst.A = SparseMatrix::from_triplets(row, cols, std::move(a));

  // Recourse columns.
  int m = 0;
  std::vector<std::vector<int>> C(n, std::vector<int>(nR));
  std::vector<int> Iij(n, -1), Ik(nS), O(nR);
  std::vector<double> f;
  for (int i = 0; i < n; ++i)
    for (int r = 0; r < nR; ++r) {
      C[i][r] = m++;
      f.push_back(0);
    }
  for (int i = 0; i + 1 < n; ++i)
    if (surgeon_of(i) == surgeon_of(i + 1)) {
      Iij[i] = m++;  // idle time between i and i + 1
      f.push_back(spec.c_S);
    }
  for (int k = 0; k < nS; ++k) {
    Ik[k] = m++;
    f.push_back(spec.c_S);
  }
  for (int r = 0; r < nR; ++r) {
    O[r] = m++;
    f.push_back(spec.c_o);
  }
  inst.m = m;

  // Scenario rows share G and H; only the right-hand side depends on the
  // durations. Build the structure once with a placeholder per row.
  std::vector<Triplet> g, h;
  enum class Rhs { kZero, kSetup, kNegFirst, kPosFirst, kDur, kIdle, kNegIdle, kOver };
  struct RowInfo {
    Rhs kind;
    int i = -1, j = -1;
  };
  std::vector<RowInfo> info;
  int srow = 0;
  auto add_row = [&](std::vector<std::pair<int, double>> gt,
                     std::vector<std::pair<int, double>> ht, RowInfo ri) {
    for (auto [c, v] : gt) g.push_back({srow, c, v});
    for (auto [c, v] : ht) h.push_back({srow, c, v});
    info.push_back(ri);
    ++srow;
  };
  for (int i = 0; i < n; ++i)
    for (int r = 0; r < nR; ++r)
      add_row({{y[i][r], spec.M}}, {{C[i][r], -1}}, {Rhs::kZero});
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j)
        for (int r = 0; r < nR; ++r)
          add_row({{z[i][j][r], -spec.M}}, {{C[j][r], 1}, {C[i][r], -1}},
                  {Rhs::kSetup, i, j});
  for (int k = 0; k < nS; ++k) {
    const int i = first_of(k);
    std::vector<std::pair<int, double>> ht{{Ik[k], 1}}, neg{{Ik[k], -1}};
    for (int r = 0; r < nR; ++r) {
      ht.push_back({C[i][r], -1});
      neg.push_back({C[i][r], 1});
    }
    add_row({{t[k], 1}}, ht, {Rhs::kNegFirst, i});
    add_row({{t[k], -1}}, neg, {Rhs::kPosFirst, i});
  }
  for (int i = 0; i < n; ++i) {
    if (i == first_of(surgeon_of(i))) continue;
    std::vector<std::pair<int, double>> ht;
    for (int r = 0; r < nR; ++r) ht.push_back({C[i][r], 1});
    add_row({{t[surgeon_of(i)], -1}}, ht, {Rhs::kDur, i});
  }
  for (int i = 0; i + 1 < n; ++i) {
    if (Iij[i] < 0) continue;
    std::vector<std::pair<int, double>> ht{{Iij[i], 1}}, neg{{Iij[i], -1}};
    for (int r = 0; r < nR; ++r) {
      ht.push_back({C[i][r], 1});
      ht.push_back({C[i + 1][r], -1});
      neg.push_back({C[i][r], -1});
      neg.push_back({C[i + 1][r], 1});
    }
    add_row({}, ht, {Rhs::kIdle, i, i + 1});
    add_row({}, neg, {Rhs::kNegIdle, i, i + 1});
  }
  for (int i = 0; i < n; ++i)
    for (int r = 0; r < nR; ++r) add_row({}, {{O[r], 1}, {C[i][r], -1}}, {Rhs::kOver});

  const SparseMatrix G = SparseMatrix::from_triplets(srow, cols, std::move(g));
  const SparseMatrix H = SparseMatrix::from_triplets(srow, m, std::move(h));
  Rng rng(spec.seed);
  const bool g1 = spec.group == DurationGroup::kI;
  for (int k = 0; k < spec.K; ++k) {
    std::vector<double> pre(n), p(n), post(n);
    for (int i = 0; i < n; ++i) {
      pre[i] = static_cast<double>(g1 ? rng.uniform_int(32, 56) : rng.uniform_int(26, 38));
      p[i] = static_cast<double>(g1 ? rng.uniform_int(50, 150) : rng.uniform_int(76, 123));
      post[i] = static_cast<double>(g1 ? rng.uniform_int(32, 56) : rng.uniform_int(26, 38));
    }
    auto d = [&](int i) { return pre[i] + p[i] + post[i]; };
    Scenario s;
    s.prob = 1.0 / spec.K;
    s.G = G;
    s.H = H;
    s.f = f;
    for (const RowInfo& ri : info) {
      double v = 0;
      switch (ri.kind) {
        case Rhs::kZero: v = 0; break;
        case Rhs::kSetup: v = spec.s_R + d(ri.j) - spec.M; break;
        case Rhs::kNegFirst: v = -d(ri.i); break;
        case Rhs::kPosFirst: v = d(ri.i); break;
        case Rhs::kDur: v = d(ri.i); break;
        case Rhs::kIdle: v = post[ri.i] - spec.s_S - p[ri.j] - post[ri.j]; break;
        case Rhs::kNegIdle: v = -(post[ri.i] - spec.s_S - p[ri.j] - post[ri.j]); break;
        case Rhs::kOver: v = -spec.L; break;
      }
      s.h.push_back(v);
    }
    inst.scenarios.push_back(std::move(s));
  }
  return inst;
}

}  // namespace ccmp::gen
