#include <doctest.h>

#include <chrono>
#include <cmath>
#include <sstream>

#include "ccmp/errors.hpp"
#include "ccmp/formulate/formulate.hpp"
#include "ccmp/gen/generators.hpp"
#include "ccmp/gen/io.hpp"
#include "ccmp/gen/rng.hpp"
#include "ccmp/gen/tiny.hpp"

using namespace ccmp;

namespace {

// Reference xoshiro256** seeded through splitmix64, written out longhand.
struct RefRng {
  std::uint64_t s[4];
  explicit RefRng(std::uint64_t seed) {
    for (auto& w : s) {
      seed += 0x9e3779b97f4a7c15ULL;
      std::uint64_t z = seed;
      z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
      z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
      w = z ^ (z >> 31);
    }
  }
  static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
  std::uint64_t next() {
    const std::uint64_t r = rotl(s[1] * 5, 7) * 9;
    const std::uint64_t t = s[1] << 17;
    s[2] ^= s[0];
    s[3] ^= s[1];
    s[1] ^= s[2];
    s[0] ^= s[3];
    s[2] ^= t;
    s[3] = rotl(s[3], 45);
    return r;
  }
};

bool in_range(const SparseMatrix& a, int row_lo, int row_hi, double lo, double hi) {
  for (const auto& t : a.triplets())
    if (t.row >= row_lo && t.row < row_hi && (t.value < lo || t.value > hi)) return false;
  return true;
}

}  // namespace

TEST_CASE("rng matches the reference stream") {
  gen::Rng a(42);
  RefRng b(42);
  for (int i = 0; i < 1000; ++i) CHECK(a.next() == b.next());
  gen::Rng c(7);
  for (int i = 0; i < 1000; ++i) {
    const double u = c.uniform(-3, 2);
    CHECK(u >= -3);
    CHECK(u < 2);
    const auto k = c.uniform_int(32, 56);
    CHECK(k >= 32);
    CHECK(k <= 56);
  }
}

TEST_CASE("random_instance T1 ranges") {
  const auto inst = gen::random_instance(gen::RandomSpec::T1(4, gen::XKind::kBinary, 1));
  CHECK(validate_instance(inst).empty());
  CHECK(inst.n() == 20);
  CHECK(inst.m == 40);
  CHECK(inst.A.rows() == 10);
  CHECK(inst.num_scenarios() == 4);
  CHECK(in_range(inst.A, 0, 10, -25, 25));
  for (double v : inst.b) CHECK((v >= -50 && v <= 50));
  for (double v : inst.c) CHECK((v >= 100 && v <= 300));
  for (const auto& s : inst.scenarios) {
    CHECK(s.prob == 0.25);
    for (double v : s.f) CHECK((v >= 5 && v <= 10));
    for (const auto& t : s.G.triplets()) {
      CHECK(t.row < 12);
      CHECK((t.value >= 0 && t.value <= 10));
    }
    CHECK(in_range(s.H, 0, 12, -3, 0));
    CHECK(in_range(s.H, 12, 30, 0, 3));
    for (int i = 0; i < 30; ++i) {
      if (i < 12) CHECK((s.h[i] >= -35 && s.h[i] <= 0));
      else CHECK((s.h[i] >= -25 && s.h[i] <= 100));
    }
  }
  for (const auto& v : inst.x_specs) CHECK(v == VarSpec{VarKind::kBinary, 0, 1});
}

TEST_CASE("random_instance determinism and dimensions") {
  const auto spec = gen::RandomSpec::T1(4, gen::XKind::kInteger, 9);
  CHECK(gen::instance_text(gen::random_instance(spec)) ==
        gen::instance_text(gen::random_instance(spec)));
  CHECK(gen::instance_text(gen::random_instance(spec)) !=
        gen::instance_text(gen::random_instance(gen::RandomSpec::T1(4, gen::XKind::kInteger, 10))));
  const auto t2 = gen::random_instance(gen::RandomSpec::T2(3, gen::XKind::kInteger, 2));
  CHECK(t2.A.rows() == 20);
  CHECK(t2.A.cols() == 30);
  CHECK(t2.scenarios[0].H.rows() == 50);
  CHECK(t2.scenarios[0].H.cols() == 70);
  CHECK(t2.x_specs[0].upper == 500);

  auto common = gen::RandomSpec::scaled(5, 3);
  common.common_recourse = true;
  const auto inst = gen::random_instance(common);
  CHECK(validate_instance(inst).empty());
  for (const auto& s : inst.scenarios) {
    CHECK(s.G == inst.scenarios[0].G);
    CHECK(s.H == inst.scenarios[0].H);
    CHECK(s.f == inst.scenarios[0].f);
  }
  CHECK(inst.scenarios[1].h != inst.scenarios[0].h);
  CHECK(inst.x_specs[0].kind == VarKind::kContinuous);
  CHECK(inst.x_specs[3].kind == VarKind::kInteger);
}

TEST_CASE("random_rhs_instance") {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto inst = gen::random_rhs_instance({.seed = seed});
    CHECK(validate_instance(inst).empty());
    CHECK(inst.m == 0);
    for (const auto& s : inst.scenarios) {
      CHECK(s.G == inst.scenarios[0].G);
      for (double v : s.h) CHECK(v >= 0);
    }
  }
}

TEST_CASE("or_instance default counts") {
  const auto inst = gen::or_instance({});
  CHECK(validate_instance(inst).empty());
  int bin = 0, cont = 0;
  for (const auto& v : inst.x_specs) {
    if (v.kind == VarKind::kBinary) ++bin;
    if (v.kind == VarKind::kContinuous) {
      ++cont;
      CHECK(std::isfinite(v.upper));
    }
  }
  CHECK(bin == 2 + 16 + 112);
  CHECK(cont == 2 + 8);
  CHECK(inst.num_scenarios() == 100);
  CHECK(inst.c[0] == 4437);
  for (const auto& s : inst.scenarios) {
    CHECK(s.G == inst.scenarios[0].G);
    CHECK(s.H == inst.scenarios[0].H);
    CHECK(s.f == inst.scenarios[0].f);
    CHECK(s.prob == 0.01);
  }
}

TEST_CASE("or_instance group I durations") {
  // Rows with +1 on a surgeon's start time t_k carry -(pre + p + post) of
  // that surgeon's first surgery.
  const int t0 = 2 + 16 + 112;
  auto totals = [&](const CcmpInstance& inst) {
    std::vector<double> out;
    const auto& G = inst.scenarios[0].G;
    for (const auto& s : inst.scenarios)
      for (int i = 0; i < G.rows(); ++i)
        if (G.at(i, t0) == 1 || G.at(i, t0 + 1) == 1) out.push_back(-s.h[i]);
    return out;
  };
  gen::OrSpec one;
  one.K = 20;
  one.seed = 4;
  const auto d1 = totals(gen::or_instance(one));
  CHECK(d1.size() == 40);
  for (double d : d1) {
    CHECK(d >= 32 + 50 + 32);
    CHECK(d <= 56 + 150 + 56);
    CHECK(d == std::floor(d));
  }
  gen::OrSpec two = one;
  two.group = gen::DurationGroup::kII;
  for (double d : totals(gen::or_instance(two))) {
    CHECK(d >= 26 + 76 + 26);
    CHECK(d <= 38 + 123 + 38);
  }
  CHECK_THROWS_AS(gen::or_instance({.n_surgeries = 5}), PreconditionViolated);
}

TEST_CASE("desk-scale or_instance solves by enumeration") {
  gen::OrSpec spec;
  spec.n_surgeries = 4;
  spec.K = 4;
  spec.epsilon = 0.25;
  const auto inst = gen::or_instance(spec);
  CHECK(validate_instance(inst).empty());
  CHECK(inst.A.cols() == 2 + 8 + 24 + 2 + 4);
  const auto res = formulate::oracle_solve(inst);
  CHECK(res.status.tag == StatusTag::kOptimal);
  CHECK(std::isfinite(res.objective));
  CHECK(evaluate_solution(inst, res.solution).feasible);
}

TEST_CASE("instance round trip") {
  for (const auto& inst : {gen::tiny1(0.5), gen::tiny2(0.25), gen::conflict1(0, 4),
                           gen::random_instance(gen::RandomSpec::scaled(6, 11)),
                           gen::or_instance({.n_surgeries = 4, .K = 3})}) {
    const auto text = gen::instance_text(inst);
    const auto back = gen::parse_instance(text);
    CHECK(back == inst);
    CHECK(gen::instance_text(back) == text);
  }
}

TEST_CASE("instance schema errors") {
  const auto text = gen::instance_text(gen::tiny1(0.5));
  auto locus = [](const std::string& t) {
    try {
      gen::parse_instance(t);
    } catch (const SchemaError& e) {
      return e.locus();
    }
    return std::string("none");
  };
  auto without_eps = text;
  const auto at = without_eps.find("  \"epsilon\"");
  without_eps.erase(at, without_eps.find('\n', at) + 1 - at);
  CHECK(locus(without_eps) == "epsilon");

  auto with_nan = text;
  with_nan.replace(with_nan.find("\"h\": [") + 6, 3, "NaN");
  CHECK(locus(with_nan).rfind("line ", 0) == 0);

  auto nan_string = text;
  nan_string.replace(nan_string.find("\"h\": [") + 6, 3, "\"nan\"");
  CHECK(locus(nan_string) == "scenarios[0].h[0]");

  CHECK(locus("{\n\"format\": \n") == "line 3");
  auto bad_dim = text;
  bad_dim.replace(bad_dim.find("\"m\": 0"), 6, "\"m\": 1");
  CHECK(locus(bad_dim) != "none");
}
