#pragma once

#include <cstdint>
#include <string>

#include "ccmp/model/instance.hpp"

namespace ccmp::gen {

enum class XKind { kBinary, kInteger, kContinuous, kMixed };

inline constexpr double kIntegerUpper = 500;

// Random test bed. Draw order: c, A (row-major, dense), b, then per
// scenario G (first floor(0.4 I2) rows, row-major), H (row-major), h, f.
// With common_recourse only the first scenario draws G, H and f; later
// scenarios draw h alone and copy the rest.
struct RandomSpec {
  int I1 = 10;
  int I2 = 30;
  int n = 20;
  int m = 40;
  int K = 10;
  XKind x_kind = XKind::kBinary;
  int n_continuous = 0;  // kMixed: leading continuous columns, rest integer
  std::uint64_t seed = 1;
  double epsilon = 0.1;
  bool common_recourse = false;

  static RandomSpec T1(int K, XKind kind, std::uint64_t seed);
  static RandomSpec T2(int K, XKind kind, std::uint64_t seed);
  // I1=4, I2=8, n=6 (3 continuous + 3 integer), m=8.
  static RandomSpec scaled(int K, std::uint64_t seed);
};

CcmpInstance random_instance(const RandomSpec& spec);

// No recourse, one G shared by all scenarios (uniform [0,10]), h_k uniform
// in [0,100]; x mixes continuous and integer columns in [0,10].
struct RhsSpec {
  int n = 5;
  int I2 = 4;
  int K = 6;
  std::uint64_t seed = 1;
  double epsilon = 0.3;
};

CcmpInstance random_rhs_instance(const RhsSpec& spec);

enum class DurationGroup { kI, kII };

struct OrSpec {
  int n_surgeries = 8;
  int n_surgeons = 2;
  int n_rooms = 2;
  double L = 540;
  double c_f = 4437;
  double c_o = 12.37;
  double c_S = 17.748;
  double s_S = 0;
  double s_R = 30;
  double M = 2500;
  int K = 100;
  DurationGroup group = DurationGroup::kI;
  std::uint64_t seed = 1;
  double epsilon = 0.1;
};

// Operating-room scheduling instance. First stage columns in order:
// x_r, y_ir, z_ijr (i != j), t_k, u_i. Recourse columns: C_ir, I_ij for
// consecutive surgeries of a surgeon, I_k, O_r. Durations are integers
// drawn per scenario and surgery in the order pre, p, post.
CcmpInstance or_instance(const OrSpec& spec);

}  // namespace ccmp::gen
