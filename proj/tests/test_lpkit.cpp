#include <doctest.h>

#include <cmath>
#include <random>

#include "ccmp/errors.hpp"
#include "ccmp/lpkit/backend.hpp"
#include "ccmp/lpkit/lp_text.hpp"
#include "ccmp/lpkit/solver.hpp"

using namespace ccmp::lpkit;

namespace {

LinExpr term(int c, double a) { return LinExpr{}.add(c, a); }

// Random bounded LP in a box, with mixed row senses.
LinearProgram random_lp(std::mt19937_64& rng, int n, int m) {
  std::uniform_real_distribution<double> u(-5, 5);
  LinearProgram lp;
  lp.sense = rng() % 2 ? ObjSense::kMaximize : ObjSense::kMinimize;
  for (int j = 0; j < n; ++j) {
    const double lo = rng() % 4 == 0 ? -kInf : std::floor(u(rng));
    lp.add_column(lo, std::isfinite(lo) ? lo + 1 + rng() % 6 : 8.0, u(rng));
  }
  for (int i = 0; i < m; ++i) {
    LinExpr e;
    for (int j = 0; j < n; ++j)
      if (rng() % 3 != 0) e.add(j, std::round(u(rng)));
    const int s = rng() % 3;
    lp.add_row(e, s == 0 ? RowSense::kLessEqual
                  : s == 1 ? RowSense::kGreaterEqual
                           : RowSense::kEqual,
               std::round(u(rng) * 3));
  }
  return lp;
}

}  // namespace

TEST_CASE("max x with x <= 4") {
  LinearProgram lp;
  lp.sense = ObjSense::kMaximize;
  const int x = lp.add_column(0, kInf, 1);
  lp.add_row(term(x, 1), RowSense::kLessEqual, 4);
  const auto out = solve_lp(lp);
  REQUIRE(out.status == LpStatus::kOptimal);
  CHECK(out.primal[0] == doctest::Approx(4));
  CHECK(out.objective == doctest::Approx(4));
  CHECK(check_certificate(lp, out));
}

TEST_CASE("unbounded ray and its negation") {
  LinearProgram lp;
  lp.sense = ObjSense::kMaximize;
  const int u = lp.add_column(0, kInf, 1);
  lp.add_row(term(u, -1), RowSense::kLessEqual, 1);
  auto out = solve_lp(lp);
  REQUIRE(out.status == LpStatus::kUnbounded);
  CHECK(out.ray[0] == doctest::Approx(1));
  CHECK(check_certificate(lp, out));
  out.ray[0] = -out.ray[0];
  CHECK_FALSE(check_certificate(lp, out));
}

TEST_CASE("infeasible system yields a Farkas certificate") {
  LinearProgram lp;
  const int y = lp.add_column(0, kInf, 0);
  lp.add_row(term(y, -1), RowSense::kGreaterEqual, 1);
  auto out = solve_lp(lp);
  REQUIRE(out.status == LpStatus::kInfeasible);
  CHECK(check_certificate(lp, out));
  // Direct substitution: pi = 1 gives 1 * 1 - max(-y) over y >= 0 = 1 > 0.
  CHECK(out.farkas[0] == doctest::Approx(1));
  out.farkas[0] = -out.farkas[0];
  CHECK_FALSE(check_certificate(lp, out));
}

TEST_CASE("two-row infeasibility certificate, one entry negated") {
  LinearProgram lp;
  const int a = lp.add_column(0, 10, 0);
  const int b = lp.add_column(0, 10, 0);
  lp.add_row(LinExpr{}.add(a, 1).add(b, 1), RowSense::kGreaterEqual, 5);
  lp.add_row(LinExpr{}.add(a, 1).add(b, 1), RowSense::kLessEqual, 3);
  auto out = solve_lp(lp);
  REQUIRE(out.status == LpStatus::kInfeasible);
  CHECK(check_certificate(lp, out));
  for (int i = 0; i < 2; ++i) {
    auto bad = out;
    bad.farkas[i] = -bad.farkas[i];
    CHECK_FALSE(check_certificate(lp, bad));
  }
}

TEST_CASE("tampered optimal pair is rejected") {
  LinearProgram lp;
  const int x = lp.add_column(0, kInf, 1);
  const int y = lp.add_column(0, kInf, 2);
  lp.add_row(LinExpr{}.add(x, 1).add(y, 1), RowSense::kGreaterEqual, 3);
  lp.add_row(LinExpr{}.add(x, 1).add(y, -1), RowSense::kLessEqual, 1);
  auto out = solve_lp(lp);
  REQUIRE(out.status == LpStatus::kOptimal);
  CHECK(out.objective == doctest::Approx(4));
  CHECK(check_certificate(lp, out));
  auto bad = out;
  bad.row_dual[0] += 0.5;
  CHECK_FALSE(check_certificate(lp, bad));
  bad = out;
  bad.primal[0] -= 1;
  CHECK_FALSE(check_certificate(lp, bad));
}

TEST_CASE("free and equality columns") {
  LinearProgram lp;
  const int x = lp.add_column(-kInf, kInf, 1);
  const int y = lp.add_column(-kInf, kInf, -1);
  lp.add_row(LinExpr{}.add(x, 1).add(y, -2), RowSense::kEqual, 1);
  lp.add_row(term(y, 1), RowSense::kLessEqual, 3);
  lp.add_row(term(x, 1), RowSense::kGreaterEqual, -2);
  const auto out = solve_lp(lp);
  REQUIRE(out.status == LpStatus::kOptimal);
  // x = 1 + 2y, obj = 1 + y, minimized at x = -2 -> y = -1.5.
  CHECK(out.objective == doctest::Approx(-0.5));
  CHECK(check_certificate(lp, out));
}

TEST_CASE("random LPs: certificates, weak duality, ray feasibility, determinism") {
  std::mt19937_64 rng(7);
  int counts[3] = {0, 0, 0};
  for (int trial = 0; trial < 300; ++trial) {
    const int n = 2 + rng() % 8;
    const int m = 1 + rng() % 8;
    const auto lp = random_lp(rng, n, m);
    const auto out = solve_lp(lp);
    ++counts[static_cast<int>(out.status)];
    INFO("trial " << trial);
    CHECK(check_certificate(lp, out));
    const auto again = solve_lp(lp);
    CHECK(again.status == out.status);
    CHECK(again.primal == out.primal);
    CHECK(again.farkas == out.farkas);
    if (out.status == LpStatus::kUnbounded) {
      std::vector<double> moved = out.primal;
      for (int j = 0; j < n; ++j) moved[j] += out.ray[j];
      const auto act = lp.activities(moved);
      for (int r = 0; r < m; ++r) {
        const double d = act[r] - lp.rhs()[r];
        if (lp.row_sense()[r] != RowSense::kLessEqual) CHECK(d >= -1e-7);
        if (lp.row_sense()[r] != RowSense::kGreaterEqual) CHECK(d <= 1e-7);
      }
    }
  }
  CHECK(counts[0] > 20);
  CHECK(counts[1] > 20);
}

TEST_CASE("warm start reproduces the optimum after an added row") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    auto lp = random_lp(rng, 6, 5);
    const auto first = solve_lp(lp);
    if (first.status != LpStatus::kOptimal) continue;
    LinExpr e;
    for (int j = 0; j < 6; ++j) e.add(j, 1);
    lp.add_row(e, RowSense::kLessEqual, 1);
    const auto cold = solve_lp(lp);
    const auto warm = solve_lp(lp, {}, &first.basis);
    REQUIRE(cold.status == warm.status);
    if (cold.status == LpStatus::kOptimal)
      CHECK(warm.objective == doctest::Approx(cold.objective).epsilon(1e-9));
    CHECK(check_certificate(lp, warm));
  }
}

TEST_CASE("iteration limit raises LimitExceeded") {
  std::mt19937_64 rng(3);
  LinearProgram lp = random_lp(rng, 8, 8);
  Limits lim;
  lim.iterations = 0;
  LinearProgram big;
  big.sense = ObjSense::kMaximize;
  for (int j = 0; j < 5; ++j) big.add_column(0, 1, 1);
  LinExpr e;
  for (int j = 0; j < 5; ++j) e.add(j, 1);
  big.add_row(e, RowSense::kLessEqual, 2.5);
  CHECK_THROWS_AS(solve_lp(big, lim), ccmp::LimitExceeded);
}

TEST_CASE("mip: rounding forced") {
  MipProblem mip;
  mip.lp.sense = ObjSense::kMaximize;
  const int x = mip.add_column(0, 10, 1, true);
  mip.lp.add_row(term(x, 1), RowSense::kLessEqual, 2.5);
  const auto r = solve_mip(mip);
  REQUIRE(r.status == MipStatus::kOptimal);
  CHECK(r.x[0] == 2);
  CHECK(r.objective == doctest::Approx(2));
}

TEST_CASE("mip: knapsack") {
  MipProblem mip;
  mip.lp.sense = ObjSense::kMaximize;
  const int a = mip.add_column(0, 1, 3, true);
  const int b = mip.add_column(0, 1, 2, true);
  mip.lp.add_row(LinExpr{}.add(a, 1).add(b, 1), RowSense::kLessEqual, 1);
  const auto r = solve_mip(mip);
  REQUIRE(r.status == MipStatus::kOptimal);
  CHECK(r.x[a] == 1);
  CHECK(r.x[b] == 0);
  CHECK(r.objective == doctest::Approx(3));
}

TEST_CASE("mip: integral relaxation stops at the root") {
  MipProblem mip;
  const int a = mip.add_column(0, 5, 1, true);
  const int b = mip.add_column(0, 5, 1, true);
  mip.lp.add_row(LinExpr{}.add(a, 1), RowSense::kGreaterEqual, 2);
  mip.lp.add_row(LinExpr{}.add(b, 1), RowSense::kGreaterEqual, 3);
  const auto r = solve_mip(mip);
  REQUIRE(r.status == MipStatus::kOptimal);
  CHECK(r.nodes == 1);
  CHECK(r.objective == doctest::Approx(5));
}

TEST_CASE("mip: infeasible and node limit") {
  MipProblem mip;
  const int a = mip.add_column(0, 1, 1, true);
  mip.lp.add_row(term(a, 2), RowSense::kEqual, 1);
  CHECK(solve_mip(mip).status == MipStatus::kInfeasible);

  MipProblem k;
  k.lp.sense = ObjSense::kMaximize;
  LinExpr e;
  for (int j = 0; j < 12; ++j) e.add(k.add_column(0, 1, 3 + j % 5, true), 2 + j % 3);
  k.lp.add_row(e, RowSense::kLessEqual, 13.5);
  Limits lim;
  lim.nodes = 2;
  const auto r = solve_mip(k, lim);
  CHECK(r.status == MipStatus::kLimitReached);
  CHECK(r.bound >= 0);
}

TEST_CASE("mip agrees with enumeration on small random binaries") {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> u(-6, 6);
  for (int trial = 0; trial < 60; ++trial) {
    const int n = 5;
    MipProblem mip;
    for (int j = 0; j < n; ++j) mip.add_column(0, 1, u(rng), true);
    const int y = mip.add_column(0, 4, 1, false);
    std::vector<std::vector<int>> rows;
    std::vector<int> rhs;
    for (int i = 0; i < 3; ++i) {
      LinExpr e;
      std::vector<int> row(n);
      for (int j = 0; j < n; ++j) e.add(j, row[j] = u(rng));
      e.add(y, 1);
      rows.push_back(row);
      rhs.push_back(u(rng) / 2);
      mip.lp.add_row(e, RowSense::kGreaterEqual, rhs.back());
    }
    double best = kInf;
    for (int mask = 0; mask < (1 << n); ++mask) {
      double need = 0;
      for (int i = 0; i < 3; ++i) {
        double act = 0;
        for (int j = 0; j < n; ++j) act += rows[i][j] * ((mask >> j) & 1);
        need = std::max(need, rhs[i] - act);
      }
      if (need > 4) continue;
      double obj = need;
      for (int j = 0; j < n; ++j) obj += mip.lp.cost()[j] * ((mask >> j) & 1);
      best = std::min(best, obj);
    }
    const auto r = solve_mip(mip);
    if (!std::isfinite(best)) {
      CHECK(r.status == MipStatus::kInfeasible);
    } else {
      REQUIRE(r.status == MipStatus::kOptimal);
      CHECK(r.objective == doctest::Approx(best).epsilon(1e-9));
    }
  }
}

TEST_CASE("backend port and text export") {
  const auto& be = default_backend();
  CHECK(be.capabilities().rays);
  CHECK_NOTHROW(require_subproblem_capable(be));
  MipProblem mip;
  const int x = mip.add_column(0, 3, 2, true, "x");
  mip.lp.add_row(term(x, 1), RowSense::kGreaterEqual, 1, "cover");
  const std::string text = lp_text(mip);
  CHECK(text.find("minimize") == 0);
  CHECK(text.find("cover: + 1 x >= 1") != std::string::npos);
  CHECK(text.find("integer\n  x\n") != std::string::npos);
}
