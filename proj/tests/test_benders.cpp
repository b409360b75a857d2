#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <json.hpp>
#include <random>

#include "ccmp/benders/benders.hpp"
#include "ccmp/errors.hpp"
#include "ccmp/formulate/formulate.hpp"
#include "ccmp/gen/generators.hpp"
#include "ccmp/gen/tiny.hpp"
#include "ccmp/lpkit/solver.hpp"
#include "support.hpp"

using namespace ccmp;
using namespace ccmp::benders;

namespace {

// x in [0, 10], one scenario row G x + H y >= h per entry of `rows`.
CcmpInstance scalar(double eps, int m, std::vector<Scenario> scenarios) {
  CcmpInstance inst;
  inst.name = "scalar";
  inst.c = {1.0};
  inst.A = SparseMatrix(0, 1);
  inst.x_specs = {{VarKind::kContinuous, 0.0, 10.0}};
  inst.m = m;
  inst.epsilon = eps;
  inst.scenarios = std::move(scenarios);
  return inst;
}

Scenario row(double prob, double g, std::vector<double> H, double h, std::vector<double> f) {
  Scenario s;
  s.prob = prob;
  s.G = SparseMatrix::from_dense({{g}});
  s.H = H.empty() ? SparseMatrix(1, 0) : SparseMatrix::from_dense({H});
  s.h = {h};
  s.f = std::move(f);
  return s;
}

BendersConfig tight(Variant v) {
  BendersConfig c;
  c.variant = v;
  c.opt_tol = 1e-6;
  c.master_gap = 1e-9;
  c.init_gap = 1e-9;
  c.time_limit = 120;
  return c;
}

// Coefficient of `col` in row `r`.
double coef(const lpkit::LinearProgram& lp, int r, int col) {
  double v = 0.0;
  for (int p = lp.row_start()[r]; p < lp.row_start()[r + 1]; ++p)
    if (lp.row_index()[p] == col) v += lp.row_value()[p];
  return v;
}

const std::vector<Variant> kAll{Variant::kBD0, Variant::kBD1, Variant::kBD2, Variant::kBD3,
                                Variant::kBD4, Variant::kBD5, Variant::kBD6, Variant::kBD7,
                                Variant::kBD8};

}  // namespace

TEST_CASE("variant names and traits") {
  CHECK(parse_variant("BD1RJ") == Variant::kBD1RJ);
  CHECK(parse_variant("bd4") == Variant::kBD4);
  CHECK_FALSE(parse_variant("bd9"));
  CHECK_FALSE(traits(Variant::kBD0).all_scenarios);
  CHECK(traits(Variant::kBD2).pareto);
  CHECK(traits(Variant::kBD4).integer_cuts);
  CHECK(traits(Variant::kBD4).init == InitMode::kSp);
  CHECK_FALSE(traits(Variant::kBD5).integer_cuts);
  CHECK(traits(Variant::kBD7).strongest_only);
  CHECK(traits(Variant::kBD8).init_pareto);
  CHECK(traits(Variant::kBD1RJ).jensen == jensen::BlockMode::kRelaxed);
}

TEST_CASE("scenario classification") {
  SUBCASE("TINY2 is regular") {
    const auto cl = classify_scenarios(gen::tiny2(0.5));
    CHECK(cl.tags == std::vector<ScenarioTag>{ScenarioTag::kRegular, ScenarioTag::kRegular});
  }
  SUBCASE("empty dual region") {
    // min -y s.t. y >= 1 - x: the dual u <= -1, u >= 0 is empty
    auto inst = scalar(0.5, 1, {row(0.5, 1, {1}, 1, {-1}), row(0.5, 1, {1}, 2, {1})});
    const lpkit::LinearProgram dual = [&] {
      lpkit::LinearProgram lp;
      lp.add_column(0, kInf, 0);
      lp.add_row(lpkit::LinExpr{}.add(0, 1), lpkit::RowSense::kLessEqual, -1);
      return lp;
    }();
    CHECK(lpkit::solve_lp(dual).status == lpkit::LpStatus::kInfeasible);
    const auto cl = classify_scenarios(inst);
    CHECK(cl.tags[0] == ScenarioTag::kForceZ0);
    CHECK(cl.tags[1] == ScenarioTag::kRegular);
    CHECK(run(inst, BendersConfig{}).status.tag == StatusTag::kUnbounded);
  }
  SUBCASE("rows contradict X") {
    // 0 x + 0 y >= 1
    Scenario bad = row(0.5, 0, {0}, 1, {1});
    bad.G = SparseMatrix(1, 1);
    bad.H = SparseMatrix(1, 1);
    auto inst = scalar(0.5, 1, {bad, row(0.5, 1, {1}, 2, {1})});
    const auto cl = classify_scenarios(inst);
    CHECK(cl.tags[0] == ScenarioTag::kForceZ1);
    CHECK(cl.tags[1] == ScenarioTag::kRegular);
    // dropping scenario 0 leaves min x + y, y >= 2 - x: optimum 1.0 (prob 0.5)
    const auto rep = run(inst, tight(Variant::kBD1));
    CHECK(rep.status.tag == StatusTag::kOptimal);
    CHECK(rep.ub == doctest::Approx(1.0));
    CHECK(rep.solution.z[0] == 1);
    inst.epsilon = 0.0;
    CHECK(run(inst, tight(Variant::kBD1)).status.tag == StatusTag::kInfeasible);
  }
  SUBCASE("split case") {
    // rows x >= 5 and y >= 0 with f = -1: dual empty, recourse feasible only for x >= 5
    Scenario s;
    s.prob = 1.0;
    s.G = SparseMatrix::from_dense({{1}, {0}});
    s.H = SparseMatrix::from_dense({{0}, {1}});
    s.h = {5, 0};
    s.f = {-1};
    auto inst = scalar(0.0, 1, {s});
    CHECK_THROWS_AS(classify_scenarios(inst), SplitCaseDetected);
  }
}

TEST_CASE("dual subproblem") {
  const auto inst = gen::tiny2(0.5);
  auto r = solve_dual_subproblem(inst, 0, {0.0});
  REQUIRE(r.bounded);
  CHECK(r.value == doctest::Approx(2.0));
  CHECK(r.point.mu[0] == doctest::Approx(1.0));
  CHECK(feasible(inst, r.point));

  r = solve_dual_subproblem(inst, 0, {10.0});
  REQUIRE(r.bounded);
  CHECK(r.value == doctest::Approx(0.0));
  CHECK(r.point.mu[0] == doctest::Approx(0.0));

  // -y >= 1 - x at x = 0: max u s.t. -u <= 1
  const auto bad = scalar(0.0, 1, {row(1.0, 1, {-1}, 1, {1})});
  r = solve_dual_subproblem(bad, 0, {0.0});
  REQUIRE_FALSE(r.bounded);
  CHECK(r.ray.v == std::vector<double>{1.0});
  CHECK(feasible(bad, r.ray));

  // recourse cost unbounded below
  const auto open = scalar(0.0, 1, {row(1.0, 1, {1}, 1, {-1})});
  CHECK_THROWS_AS(solve_dual_subproblem(open, 0, {0.0}), DualInfeasible);
}

TEST_CASE("subproblem values match the recourse LP") {
  std::mt19937_64 rng(11);
  for (int t = 0; t < 10; ++t) {
    const auto inst = testing_support::small_random(rng, 3, 2, 3, 3, 0.34);
    std::uniform_real_distribution<double> u(0, 5);
    const std::vector<double> x{u(rng), u(rng), u(rng)};
    for (int k = 0; k < 3; ++k) {
      const auto r = solve_dual_subproblem(inst, k, x);
      const auto primal = recourse_cost(inst, k, x);
      CHECK(r.bounded == primal.has_value());
      if (!primal) {
        CHECK(feasible(inst, r.ray));
        CHECK(dual_value(inst, k, r.ray.v, x) > 0.0);
        continue;
      }
      CHECK(r.value == doctest::Approx(*primal).epsilon(1e-7));
      CHECK(feasible(inst, r.point));
    }
  }
}

TEST_CASE("cut pool") {
  const auto inst = gen::tiny2(0.5);
  CutPool pool(2);
  CHECK(pool.add(inst, DualPoint{0, {1.0}}));
  CHECK_FALSE(pool.add(inst, DualPoint{0, {1.0 + 1e-9}}));
  CHECK_FALSE(pool.add(inst, DualPoint{0, {1.5}}));  // H^T u > f
  CHECK_FALSE(pool.add(inst, DualPoint{0, {-0.1}}));
  CHECK(pool.add(inst, DualPoint{0, {0.5}}));
  CHECK(pool.add(inst, DualPoint{0, {0.0}}));
  CHECK(pool.add(inst, DualPoint{1, {1.0}}));
  CHECK_FALSE(pool.add(inst, DualRay{0, {1.0}}));  // H^T v = 1 > 0
  CHECK(pool.size() == 4);
  CHECK(pool.points(0).size() == 3);
  pool.keep_strongest(inst, {0.0});
  REQUIRE(pool.points(0).size() == 1);
  CHECK(pool.points(0)[0].mu[0] == 1.0);
  CHECK(pool.points(1).size() == 1);
}

TEST_CASE("master rows") {
  SUBCASE("optimality cut on TINY2") {
    const auto inst = gen::tiny2(0.5);
    BendersConfig cfg;
    Master m(inst, cfg);
    const int before = m.mip().lp.num_rows();
    m.add_cut(DualPoint{0, {1.0}});
    const auto& lp = m.mip().lp;
    const auto& v = m.vars();
    REQUIRE(v.lambda_x.count({0, 0}) == 1);
    const int w = v.lambda_x.at({0, 0});
    CHECK(lp.col_names()[w] == "w0_0");
    CHECK(lp.upper()[w] == 10.0);
    const int r = lp.num_rows() - 1;
    CHECK(r == before + 3);  // envelope rows (L = 0 drops one) then the cut
    // 2 - x - 2 z + w <= eta
    CHECK(coef(lp, r, v.eta[0]) == 1.0);
    CHECK(coef(lp, r, v.z[0]) == 2.0);
    CHECK(coef(lp, r, v.x[0]) == 1.0);
    CHECK(coef(lp, r, w) == -1.0);
    CHECK(lp.rhs()[r] == 2.0);
    CHECK(lp.row_sense()[r] == lpkit::RowSense::kGreaterEqual);
    // a second cut on the same scenario reuses the product
    m.add_cut(DualPoint{0, {0.5}});
    CHECK(m.vars().lambda_x.size() == 1);
  }
  SUBCASE("empty pool") {
    const auto inst = gen::tiny2(0.5);
    const auto m = build_master(inst, CutPool(2), BendersConfig{});
    const auto r = lpkit::solve_mip(m.built().mip);
    REQUIRE(r.status == lpkit::MipStatus::kOptimal);
    CHECK(r.objective == doctest::Approx(0.0));
    CHECK(r.x[0] == doctest::Approx(0.0));
  }
  SUBCASE("ray forces the scenario out") {
    auto inst = gen::tiny1(0.5);
    inst.x_specs[0].upper = 5.0;  // x >= 6 cannot hold
    CutPool pool(2);
    REQUIRE(pool.add(inst, DualRay{1, {1.0}}));
    const auto m = build_master(inst, pool, BendersConfig{});
    const auto r = lpkit::solve_mip(m.built().mip);
    REQUIRE(r.status == lpkit::MipStatus::kOptimal);
    CHECK(r.x[m.vars().z[1]] == doctest::Approx(1.0));
    CHECK(r.x[m.vars().z[0]] == doctest::Approx(0.0));
  }
  SUBCASE("negative recourse costs need an eta floor") {
    auto inst = gen::tiny2(0.5);
    inst.scenarios[1].f = {-1.0};
    BendersConfig cfg;
    CHECK_THROWS_AS(Master(inst, cfg), MissingBound);
    cfg.eta_floor = -50;
    Master m(inst, cfg);
    CHECK(m.mip().lp.lower()[m.vars().eta[1]] == -50);
  }
}

TEST_CASE("integer cuts") {
  lpkit::MipProblem mip;
  std::vector<int> z;
  for (int k = 0; k < 3; ++k) z.push_back(mip.add_column(0, 1, 0, true));
  add_integer_cut(mip, z, {1, 0, 0});
  CHECK(coef(mip.lp, 0, 0) == 1.0);
  CHECK(coef(mip.lp, 0, 1) == -1.0);
  CHECK(coef(mip.lp, 0, 2) == -1.0);
  CHECK(mip.lp.rhs()[0] == 0.0);
  add_integer_cut(mip, {z[0], z[1]}, {0, 0});
  CHECK(coef(mip.lp, 1, 0) == -1.0);
  CHECK(coef(mip.lp, 1, 1) == -1.0);
  CHECK(mip.lp.rhs()[1] == -1.0);
  CHECK(mip.lp.row_sense()[1] == lpkit::RowSense::kLessEqual);
}

TEST_CASE("integer cut excludes the master's z") {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 10; ++t) {
    const auto inst = testing_support::small_random(rng, 2, 2, 2, 4, 0.5);
    Master m(inst, BendersConfig{});
    for (int k = 0; k < 4; ++k) m.add_cut(solve_dual_subproblem(inst, k, {1.0, 1.0}).point);
    auto r = lpkit::solve_mip(m.mip());
    REQUIRE(r.status == lpkit::MipStatus::kOptimal);
    const auto z0 = m.built().extract(inst, r.x, r.objective).z;
    m.add_integer_cut(z0);
    r = lpkit::solve_mip(m.mip());
    if (r.status != lpkit::MipStatus::kOptimal) continue;
    CHECK(m.built().extract(inst, r.x, r.objective).z != z0);
  }
}

TEST_CASE("Pareto refinement") {
  SUBCASE("unique optimum") {
    const auto inst = gen::tiny2(0.5);
    const auto r = solve_dual_subproblem(inst, 0, {0.0});
    const auto p = pareto_refine(inst, r.point, {0.0}, {5.0}, r.value);
    CHECK(p.mu[0] == doctest::Approx(r.point.mu[0]));
  }
  SUBCASE("flat optimal edge") {
    // u1 + u2 <= 1; residual (1, 1) at x0 = 0 and (2, 1) at the core x = 1
    Scenario s;
    s.prob = 1.0;
    s.G = SparseMatrix::from_dense({{-1}, {0}});
    s.H = SparseMatrix::from_dense({{1}, {1}});
    s.h = {1, 1};
    s.f = {1};
    const auto inst = scalar(0.0, 1, {s});
    const auto r = solve_dual_subproblem(inst, 0, {0.0});
    REQUIRE(r.value == doctest::Approx(1.0));
    // vertices of the optimal face, scored at the core point
    const std::vector<std::vector<double>> face{{1, 0}, {0, 1}};
    std::vector<double> best;
    double best_v = -kInf;
    for (const auto& v : face) {
      const double d = dual_value(inst, 0, v, {1.0});
      if (d > best_v) {
        best_v = d;
        best = v;
      }
    }
    const auto p = pareto_refine(inst, r.point, {0.0}, {1.0}, r.value);
    CHECK(p.mu[0] == doctest::Approx(best[0]));
    CHECK(p.mu[1] == doctest::Approx(best[1]));
    CHECK(std::abs(dual_value(inst, 0, p.mu, {0.0}) - r.value) <= 1e-6);
    CHECK(p.origin == Origin::kPareto);
  }
  SUBCASE("value kept on random subproblems") {
    std::mt19937_64 rng(3);
    for (int t = 0; t < 10; ++t) {
      const auto inst = testing_support::small_random(rng, 3, 3, 4, 2, 0.0);
      const auto core = core_point(inst);
      const std::vector<double> x0{0.0, 5.0, 2.0};
      for (int k = 0; k < 2; ++k) {
        const auto r = solve_dual_subproblem(inst, k, x0);
        if (!r.bounded) continue;
        const auto p = pareto_refine(inst, r.point, x0, core, r.value);
        CHECK(std::abs(dual_value(inst, k, p.mu, x0) - r.value) <= 1e-6 * (1 + std::abs(r.value)));
        CHECK(dual_value(inst, k, p.mu, core) >= dual_value(inst, k, r.point.mu, core) - 1e-6);
        CHECK(feasible(inst, p));
      }
    }
  }
}

TEST_CASE("core point lies in the LP relaxation of X") {
  auto inst = gen::tiny2(0.5);
  CHECK(core_point(inst) == std::vector<double>{5.0});
  inst.A = SparseMatrix::from_dense({{1.0}});
  inst.b = {7.0};
  CHECK(core_point(inst)[0] == doctest::Approx(7.0));
}

TEST_CASE("initialization") {
  const auto inst = gen::tiny2(0.5);
  auto cfg = tight(Variant::kBD3);
  const auto sp = initialize(inst, cfg, InitMode::kSp);
  CHECK_FALSE(sp.infeasible);
  REQUIRE(sp.has_solution);
  CHECK(sp.ub == doctest::Approx(3.0));
  CHECK(sp.ub >= 1.0);  // SP optimum bounds the chance-constrained one
  CHECK(evaluate_solution(inst, sp.solution).feasible);
  for (int k = 0; k < 2; ++k) {
    const auto& pts = sp.pool.points(k);
    CHECK(std::any_of(pts.begin(), pts.end(), [](const DualPoint& p) {
      return std::abs(p.mu[0] - 1.0) < 1e-9 && p.origin == Origin::kSpInit;
    }));
  }
  CHECK(std::all_of(sp.log.begin(), sp.log.end(),
                    [](const IterationRecord& r) { return r.phase == "init"; }));

  cfg.variant = Variant::kBD5;
  cfg.small_M = 0.0;
  const auto sm = initialize(inst, cfg, InitMode::kSmallM);
  CHECK(sm.ub == doctest::Approx(sp.ub));
  for (int k = 0; k < 2; ++k) {
    REQUIRE(sm.pool.points(k).size() == sp.pool.points(k).size());
    for (std::size_t l = 0; l < sp.pool.points(k).size(); ++l)
      CHECK(sm.pool.points(k)[l].mu == sp.pool.points(k)[l].mu);
  }
}

TEST_CASE("small-M incumbents are chance-feasible") {
  std::mt19937_64 rng(21);
  for (int t = 0; t < 6; ++t) {
    const auto inst = testing_support::small_random(rng, 3, 2, 3, 4, 0.25);
    auto cfg = tight(Variant::kBD5);
    cfg.small_M = 10.0;
    const auto init = initialize(inst, cfg, InitMode::kSmallM);
    for (const auto& k_pts : {0, 1, 2, 3})
      for (const auto& p : init.pool.points(k_pts)) CHECK(feasible(inst, p));
    if (!init.has_solution) continue;
    const auto ev = evaluate_solution(inst, init.solution);
    CHECK(ev.feasible);
    CHECK(ev.objective == doctest::Approx(init.ub));
  }
}

TEST_CASE("strongest-only keeps one point per scenario") {
  std::mt19937_64 rng(8);
  const auto inst = testing_support::small_random(rng, 3, 2, 3, 4, 0.25);
  auto cfg = tight(Variant::kBD7);
  const auto init = initialize(inst, cfg, InitMode::kSmallM);
  for (int k = 0; k < 4; ++k) {
    CHECK(init.pool.points(k).size() <= 1);
    CHECK(init.pool.rays(k).empty());
  }
}

TEST_CASE("run on the tiny instances") {
  SUBCASE("TINY1") {
    const auto rep = run(gen::tiny1(0.5), BendersConfig{});
    CHECK(rep.status.tag == StatusTag::kOptimal);
    CHECK(rep.ub == doctest::Approx(4.0));
    CHECK(rep.main_iterations <= 3);
  }
  SUBCASE("TINY2") {
    for (Variant v : kAll) {
      const std::string name = to_string(v);
      CAPTURE(name);
      const auto rep = run(gen::tiny2(0.5), tight(v));
      CHECK(rep.status.tag == StatusTag::kOptimal);
      CHECK(rep.ub == doctest::Approx(1.0));
      CHECK(evaluate_solution(gen::tiny2(0.5), rep.solution).feasible);
    }
  }
  SUBCASE("CONFLICT1") {
    for (int variant = 0; variant < 6; ++variant)
      for (Variant v : kAll) {
        CAPTURE(variant);
        const std::string name = to_string(v);
      CAPTURE(name);
        const auto rep = run(gen::conflict1(0.0, variant), tight(v));
        CHECK(rep.status.tag == StatusTag::kInfeasible);
        CHECK(rep.main_iterations <= 5);
        const auto ok = run(gen::conflict1(0.5, variant), tight(v));
        CHECK(ok.status.tag == StatusTag::kOptimal);
      }
  }
}

TEST_CASE("variants agree with the oracle") {
  std::mt19937_64 rng(99);
  for (int t = 0; t < 6; ++t) {
    const double eps = t % 3 == 0 ? 0.0 : (t % 3 == 1 ? 0.25 : 0.5);
    const auto inst = testing_support::small_random(rng, 3, 2, 3, 4, eps, t % 2 == 0, true,
                                                    t % 2 == 1);
    const auto oracle = formulate::oracle_solve(inst);
    for (Variant v : kAll) {
      CAPTURE(t);
      const std::string name = to_string(v);
      CAPTURE(name);
      std::vector<double> lbs;
      auto cfg = tight(v);
      const auto rep = run(inst, cfg);
      if (oracle.status.tag == StatusTag::kInfeasible) {
        CHECK(rep.status.tag == StatusTag::kInfeasible);
        continue;
      }
      REQUIRE(rep.status.tag == StatusTag::kOptimal);
      CHECK(rep.ub == doctest::Approx(oracle.objective).epsilon(1e-6));
      const auto ev = evaluate_solution(inst, rep.solution);
      CHECK(ev.feasible);
      CHECK(ev.objective == doctest::Approx(rep.ub).epsilon(1e-7));

      // bounds move monotonically; the basic masters never exceed the optimum
      double lb = -kInf, ub = kInf;
      for (const auto& r : rep.log) {
        if (r.phase != "main") continue;
        CHECK(r.lb >= lb);
        CHECK(r.ub <= ub);
        lb = r.lb;
        ub = r.ub;
        if (!traits(v).integer_cuts)
          CHECK(r.master_bound <= oracle.objective + 1e-6 * (1 + std::abs(oracle.objective)));
      }
      // every cut holds at the oracle optimum
      const auto& xs = oracle.solution.x;
      for (int k = 0; k < inst.num_scenarios(); ++k) {
        const int zk = oracle.z[k];
        const double eta = zk ? 0.0 : *recourse_cost(inst, k, xs);
        for (const auto& p : rep.pool.points(k)) {
          CHECK(feasible(inst, p));
          CHECK(Master::cut_slack(inst, k, p.mu, false, xs, zk, eta) >= -1e-6);
        }
        for (const auto& r : rep.pool.rays(k)) {
          CHECK(feasible(inst, r));
          CHECK(Master::cut_slack(inst, k, r.v, true, xs, zk, 0.0) >= -1e-6);
        }
      }
    }
  }
}

TEST_CASE("Jensen variants agree with the oracle") {
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    auto spec = gen::RandomSpec::scaled(4, seed);
    spec.common_recourse = true;
    spec.epsilon = 0.25;
    const auto inst = gen::random_instance(spec);
    const auto oracle = formulate::oracle_solve(inst);
    for (Variant v : {Variant::kBD1J, Variant::kBD1RJ}) {
      CAPTURE(seed);
      const std::string name = to_string(v);
      CAPTURE(name);
      const auto rep = run(inst, tight(v));
      if (oracle.status.tag == StatusTag::kInfeasible) {
        CHECK(rep.status.tag == StatusTag::kInfeasible);
        continue;
      }
      REQUIRE(rep.status.tag == StatusTag::kOptimal);
      CHECK(rep.ub == doctest::Approx(oracle.objective).epsilon(1e-5));
    }
  }
}

TEST_CASE("limits and logging") {
  std::mt19937_64 rng(4);
  const auto inst = testing_support::small_random(rng, 3, 2, 3, 4, 0.25);
  auto cfg = tight(Variant::kBD1);
  cfg.max_iterations = 1;
  int seen = 0;
  cfg.on_iteration = [&](const IterationRecord&) { ++seen; };
  auto rep = run(inst, cfg);
  if (rep.status.tag != StatusTag::kOptimal) {
    CHECK(rep.status.tag == StatusTag::kIterLimit);
    CHECK(seen == 1);
  }
  REQUIRE_FALSE(rep.log.empty());
  const auto j = nlohmann::json::parse(rep.log[0].json_line());
  CHECK(j["iteration"] == 1);
  CHECK(j["phase"] == "main");
  CHECK(j["z_hash"].get<std::string>().size() == 16);

  cfg.max_iterations = 100000;
  cfg.time_limit = 0.0;
  rep = run(inst, cfg);
  CHECK(rep.status.tag == StatusTag::kTimeLimit);
}

TEST_CASE("unbounded first stage is rejected") {
  auto inst = gen::tiny2(0.5);
  inst.c = {-1.0};
  inst.x_specs[0].upper = kInf;
  CHECK_THROWS_AS(run(inst, BendersConfig{}), PreconditionViolated);
}
