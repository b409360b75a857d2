#include <Eigen/Dense>
#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdint>

#include "ccmp/errors.hpp"
#include "ccmp/lpkit/solver.hpp"

namespace ccmp::lpkit {

// Dense inverse of a basis together with the order of its basic variables
// and a fingerprint of the constraint matrix it was computed for.
struct BasisFactor {
  std::uint64_t matrix_hash = 0;
  std::vector<int> basic;  // variable index per basis position
  Eigen::MatrixXd inverse;
  int updates = 0;  // rank-one updates applied since the last factorization
};

const char* to_string(LpStatus s) {
  switch (s) {
    case LpStatus::kOptimal: return "optimal";
    case LpStatus::kInfeasible: return "infeasible";
    case LpStatus::kUnbounded: return "unbounded";
  }
  return "?";
}

namespace {

constexpr double kFeasTol = 1e-9;
constexpr double kOptTol = 1e-9;
constexpr double kPivotTol = 1e-9;
constexpr int kRefactorPeriod = 100;
constexpr int kStallLimit = 50;

using Clock = std::chrono::steady_clock;

std::uint64_t mix(std::uint64_t h, std::uint64_t v) {
  h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  return h;
}

std::uint64_t matrix_hash(const LinearProgram& lp) {
  std::uint64_t h = mix(lp.num_rows(), lp.num_cols());
  for (int r = 0; r <= lp.num_rows(); ++r) h = mix(h, lp.row_start()[r]);
  for (int p = 0; p < lp.num_nonzeros(); ++p) {
    h = mix(h, lp.row_index()[p]);
    h = mix(h, std::bit_cast<std::uint64_t>(lp.row_value()[p]));
  }
  return h;
}

// Primal simplex over the system A x - r = 0 where r holds one logical
// variable per row carrying the row bounds. Variables 0..n-1 are
// structural, n..n+m-1 logical. Costs are in minimization form.
class BoundedSimplex {
 public:
  BoundedSimplex(const LinearProgram& lp, const Limits& limits)
      : lp_(lp),
        limits_(limits),
        m_(lp.num_rows()),
        n_(lp.num_cols()),
        total_(m_ + n_),
        start_time_(Clock::now()) {
    // Column-wise copy of A.
    std::vector<int> count(n_ + 1, 0);
    for (int p = 0; p < lp.num_nonzeros(); ++p) ++count[lp.row_index()[p] + 1];
    for (int j = 0; j < n_; ++j) count[j + 1] += count[j];
    col_start_ = count;
    col_row_.resize(lp.num_nonzeros());
    col_val_.resize(lp.num_nonzeros());
    std::vector<int> fill(col_start_.begin(), col_start_.end() - 1);
    for (int r = 0; r < m_; ++r) {
      for (int p = lp.row_start()[r]; p < lp.row_start()[r + 1]; ++p) {
        const int j = lp.row_index()[p];
        col_row_[fill[j]] = r;
        col_val_[fill[j]] = lp.row_value()[p];
        ++fill[j];
      }
    }
    const double sign = lp.sense == ObjSense::kMaximize ? -1.0 : 1.0;
    cost_.assign(total_, 0.0);
    lo_.resize(total_);
    up_.resize(total_);
    for (int j = 0; j < n_; ++j) {
      cost_[j] = sign * lp.cost()[j];
      lo_[j] = lp.lower()[j];
      up_[j] = lp.upper()[j];
    }
    for (int i = 0; i < m_; ++i) {
      const double b = lp.rhs()[i];
      switch (lp.row_sense()[i]) {
        case RowSense::kGreaterEqual: lo_[n_ + i] = b; up_[n_ + i] = kInf; break;
        case RowSense::kLessEqual: lo_[n_ + i] = -kInf; up_[n_ + i] = b; break;
        case RowSense::kEqual: lo_[n_ + i] = b; up_[n_ + i] = b; break;
      }
    }
    hash_ = matrix_hash(lp);
    scale();
  }

  LpOutcome run(const Basis* warm) {
    install_basis(warm);
    if (!factor_reused_) factor();
    compute_basic_values();
    return iterate();
  }

 private:
  // Geometric row/column scaling by powers of two (exact in floating
  // point). The solver works on R A C; results are mapped back.
  void scale() {
    row_scale_.assign(m_, 1.0);
    col_scale_.assign(n_, 1.0);
    if (col_val_.empty()) return;
    auto pow2 = [](double v) { return std::exp2(std::round(std::log2(v))); };
    for (int pass = 0; pass < 6; ++pass) {
      std::vector<double> rmin(m_, kInf), rmax(m_, 0.0);
      for (int j = 0; j < n_; ++j) {
        for (int p = col_start_[j]; p < col_start_[j + 1]; ++p) {
          const double a = std::abs(col_val_[p]) * row_scale_[col_row_[p]] * col_scale_[j];
          rmin[col_row_[p]] = std::min(rmin[col_row_[p]], a);
          rmax[col_row_[p]] = std::max(rmax[col_row_[p]], a);
        }
      }
      for (int i = 0; i < m_; ++i)
        if (rmax[i] > 0) row_scale_[i] *= pow2(1.0 / std::sqrt(rmin[i] * rmax[i]));
      for (int j = 0; j < n_; ++j) {
        double cmin = kInf, cmax = 0.0;
        for (int p = col_start_[j]; p < col_start_[j + 1]; ++p) {
          const double a = std::abs(col_val_[p]) * row_scale_[col_row_[p]] * col_scale_[j];
          cmin = std::min(cmin, a);
          cmax = std::max(cmax, a);
        }
        if (cmax > 0) col_scale_[j] *= pow2(1.0 / std::sqrt(cmin * cmax));
      }
    }
    for (int j = 0; j < n_; ++j) {
      for (int p = col_start_[j]; p < col_start_[j + 1]; ++p)
        col_val_[p] *= row_scale_[col_row_[p]] * col_scale_[j];
      cost_[j] *= col_scale_[j];
      lo_[j] /= col_scale_[j];
      up_[j] /= col_scale_[j];
    }
    for (int i = 0; i < m_; ++i) {
      lo_[n_ + i] *= row_scale_[i];
      up_[n_ + i] *= row_scale_[i];
    }
  }

  VarStatus default_status(int j) const {
    if (std::isfinite(lo_[j])) return VarStatus::kAtLower;
    if (std::isfinite(up_[j])) return VarStatus::kAtUpper;
    return VarStatus::kFree;
  }

  void set_nonbasic(int j, VarStatus s) {
    if (s == VarStatus::kBasic ||
        (s == VarStatus::kAtLower && !std::isfinite(lo_[j])) ||
        (s == VarStatus::kAtUpper && !std::isfinite(up_[j])) ||
        (s == VarStatus::kFree &&
         (std::isfinite(lo_[j]) || std::isfinite(up_[j]))))
      s = default_status(j);
    status_[j] = s;
    x_[j] = s == VarStatus::kAtLower   ? lo_[j]
            : s == VarStatus::kAtUpper ? up_[j]
                                       : 0.0;
  }

  void install_basis(const Basis* warm) {
    status_.assign(total_, VarStatus::kAtLower);
    x_.assign(total_, 0.0);
    bool ok = false;
    if (warm != nullptr && !warm->empty() &&
        static_cast<int>(warm->col_status.size()) <= n_ &&
        static_cast<int>(warm->row_status.size()) <= m_) {
      int basics = 0;
      for (int j = 0; j < n_; ++j) {
        const VarStatus s = j < static_cast<int>(warm->col_status.size())
                                ? warm->col_status[j]
                                : default_status(j);
        status_[j] = s;
        if (s == VarStatus::kBasic) ++basics;
      }
      for (int i = 0; i < m_; ++i) {
        const VarStatus s = i < static_cast<int>(warm->row_status.size())
                                ? warm->row_status[i]
                                : VarStatus::kBasic;
        status_[n_ + i] = s;
        if (s == VarStatus::kBasic) ++basics;
      }
      ok = basics == m_;
    }
    if (!ok) {
      for (int j = 0; j < n_; ++j) status_[j] = default_status(j);
      for (int i = 0; i < m_; ++i) status_[n_ + i] = VarStatus::kBasic;
    }
    basic_.clear();
    pos_.assign(total_, -1);
    for (int j = 0; j < total_; ++j) {
      if (status_[j] == VarStatus::kBasic) {
        pos_[j] = static_cast<int>(basic_.size());
        basic_.push_back(j);
      } else {
        set_nonbasic(j, status_[j]);
      }
    }
    factor_reused_ = false;
    if (ok && warm->factor && warm->factor->matrix_hash == hash_ &&
        static_cast<int>(warm->factor->basic.size()) == m_ &&
        warm->factor->updates < kRefactorPeriod) {
      // Same matrix and same basic set: adopt the cached inverse and its
      // position order.
      bool same = true;
      for (int j : warm->factor->basic)
        if (j >= total_ || status_[j] != VarStatus::kBasic) same = false;
      if (same) {
        basic_ = warm->factor->basic;
        for (int p = 0; p < m_; ++p) pos_[basic_[p]] = p;
        binv_ = warm->factor->inverse;
        since_refactor_ = warm->factor->updates;
        factor_reused_ = true;
      }
    }
  }

  // Adds coef * (column j) into dense vector v.
  void axpy_column(int j, double coef, Eigen::VectorXd& v) const {
    if (j < n_) {
      for (int p = col_start_[j]; p < col_start_[j + 1]; ++p)
        v[col_row_[p]] += coef * col_val_[p];
    } else {
      v[j - n_] -= coef;
    }
  }

  double dot_column(int j, const Eigen::VectorXd& v) const {
    if (j >= n_) return -v[j - n_];
    double s = 0.0;
    for (int p = col_start_[j]; p < col_start_[j + 1]; ++p)
      s += v[col_row_[p]] * col_val_[p];
    return s;
  }

  // binv * column j
  Eigen::VectorXd ftran(int j) const {
    Eigen::VectorXd a = Eigen::VectorXd::Zero(m_);
    if (j < n_) {
      for (int p = col_start_[j]; p < col_start_[j + 1]; ++p)
        a.noalias() += col_val_[p] * binv_.col(col_row_[p]);
    } else {
      a = -binv_.col(j - n_);
    }
    return a;
  }

  Eigen::MatrixXd basis_matrix() const {
    Eigen::MatrixXd b = Eigen::MatrixXd::Zero(m_, m_);
    for (int p = 0; p < m_; ++p) {
      Eigen::VectorXd col = Eigen::VectorXd::Zero(m_);
      axpy_column(basic_[p], 1.0, col);
      b.col(p) = col;
    }
    return b;
  }

  void factor() {
    since_refactor_ = 0;
    if (m_ == 0) {
      binv_.resize(0, 0);
      return;
    }
    for (int attempt = 0; attempt < 4; ++attempt) {
      const Eigen::MatrixXd b = basis_matrix();
      Eigen::PartialPivLU<Eigen::MatrixXd> lu(b);
      // rcond is only an estimate; an exactly zero pivot still shows up as
      // a non-finite inverse.
      if (lu.rcond() > 1e-12) {
        binv_ = lu.inverse();
        if (binv_.allFinite()) return;
      }
      Eigen::FullPivLU<Eigen::MatrixXd> full(b);
      if (full.isInvertible()) {
        binv_ = full.inverse();
        if (binv_.allFinite()) return;
      }
      repair(b);
    }
    throw NumericalFailure("basis remains singular after repair");
  }

  // Swaps dependent basic columns for logicals of uncovered rows.
  void repair(const Eigen::MatrixXd& b) {
    Eigen::FullPivLU<Eigen::MatrixXd> lu(b);
    const int rank = static_cast<int>(lu.rank());
    const auto& rowp = lu.permutationP().indices();
    const auto& colq = lu.permutationQ().indices();
    std::vector<int> uncovered;
    for (int i = 0; i < m_; ++i)
      if (rowp[i] >= rank && status_[n_ + i] != VarStatus::kBasic)
        uncovered.push_back(i);
    std::size_t next = 0;
    for (int k = rank; k < m_ && next < uncovered.size(); ++k) {
      const int p = colq[k];
      const int leaving = basic_[p];
      const int entering = n_ + uncovered[next++];
      pos_[leaving] = -1;
      const double v = x_[leaving];
      VarStatus s = default_status(leaving);
      if (std::isfinite(up_[leaving]) &&
          (!std::isfinite(lo_[leaving]) ||
           std::abs(v - up_[leaving]) < std::abs(v - lo_[leaving])))
        s = VarStatus::kAtUpper;
      set_nonbasic(leaving, s);
      basic_[p] = entering;
      pos_[entering] = p;
      status_[entering] = VarStatus::kBasic;
    }
  }

  void compute_basic_values() {
    if (m_ == 0) return;
    Eigen::VectorXd w = Eigen::VectorXd::Zero(m_);
    for (int j = 0; j < total_; ++j)
      if (status_[j] != VarStatus::kBasic && x_[j] != 0.0)
        axpy_column(j, x_[j], w);
    const Eigen::VectorXd xb = -(binv_ * w);
    for (int p = 0; p < m_; ++p) x_[basic_[p]] = xb[p];
  }

  void check_limits(long iterations) const {
    if (iterations >= limits_.iterations)
      throw LimitExceeded("simplex iteration limit reached", -kInf);
    if ((iterations & 15) == 0 && std::isfinite(limits_.time_seconds)) {
      const double elapsed =
          std::chrono::duration<double>(Clock::now() - start_time_).count();
      if (elapsed > limits_.time_seconds)
        throw LimitExceeded("simplex time limit reached", -kInf);
    }
  }

  struct Ratio {
    int row = -1;       // leaving basis position, -1 for a bound flip
    double step = kInf;
    double bound = 0.0;  // value at which the leaving variable exits
    bool at_upper = false;
  };

  Ratio ratio_test(int q, int dir, const Eigen::VectorXd& alpha,
                   bool phase1, bool bland) const {
    // Per basis position: rate of change and the limiting bound.
    Ratio best;
    double relaxed_max = kInf;
    struct Cand {
      int p;
      double exact;
      double bound;
      bool upper;
    };
    std::vector<Cand> cands;
    for (int p = 0; p < m_; ++p) {
      const double a = alpha[p];
      if (std::abs(a) <= kPivotTol) continue;
      const double rate = -dir * a;
      const int j = basic_[p];
      const double v = x_[j];
      const bool below = v < lo_[j] - kFeasTol;
      const bool above = v > up_[j] + kFeasTol;
      double target;
      bool upper;
      if (rate < 0) {
        if (phase1 && above) {
          target = up_[j];
          upper = true;
        } else if (below || !std::isfinite(lo_[j])) {
          continue;
        } else {
          target = lo_[j];
          upper = false;
        }
        const double relaxed = (v - target + kFeasTol) / -rate;
        relaxed_max = std::min(relaxed_max, relaxed);
        cands.push_back({p, std::max(0.0, (v - target) / -rate), target, upper});
      } else {
        if (phase1 && below) {
          target = lo_[j];
          upper = false;
        } else if (above || !std::isfinite(up_[j])) {
          continue;
        } else {
          target = up_[j];
          upper = true;
        }
        const double relaxed = (target - v + kFeasTol) / rate;
        relaxed_max = std::min(relaxed_max, relaxed);
        cands.push_back({p, std::max(0.0, (target - v) / rate), target, upper});
      }
    }
    const double span = up_[q] - lo_[q];
    if (bland) {
      double min_ratio = kInf;
      for (const auto& c : cands) min_ratio = std::min(min_ratio, c.exact);
      int best_var = total_;
      for (const auto& c : cands) {
        if (c.exact <= min_ratio + 1e-12 && basic_[c.p] < best_var) {
          best_var = basic_[c.p];
          best = {c.p, c.exact, c.bound, c.upper};
        }
      }
    } else if (!cands.empty()) {
      double best_pivot = -1.0;
      for (const auto& c : cands) {
        if (c.exact <= relaxed_max && std::abs(alpha[c.p]) > best_pivot) {
          best_pivot = std::abs(alpha[c.p]);
          best = {c.p, c.exact, c.bound, c.upper};
        }
      }
    }
    if (std::isfinite(span) && span <= best.step) {
      best.row = -1;
      best.step = span;
    }
    return best;
  }

  void pivot(int r, int q, const Eigen::VectorXd& alpha) {
    const Eigen::RowVectorXd pivot_row = binv_.row(r) / alpha[r];
    binv_.noalias() -= alpha * pivot_row;
    binv_.row(r) = pivot_row;
    const int leaving = basic_[r];
    pos_[leaving] = -1;
    basic_[r] = q;
    pos_[q] = r;
    status_[q] = VarStatus::kBasic;
    ++since_refactor_;
  }

  LpOutcome iterate() {
    LpOutcome out;
    long iterations = 0;
    bool bland = false;
    int stall = 0;
    int relapses = 0;
    double last_obj = kInf;
    bool last_phase1 = true;
    Eigen::VectorXd cb(m_);
    Eigen::VectorXd pi(m_);
    for (;;) {
      check_limits(iterations);

      if (since_refactor_ >= kRefactorPeriod) {
        factor();
        compute_basic_values();
      }
      double infeas = 0.0;
      for (int p = 0; p < m_; ++p) {
        const int j = basic_[p];
        if (x_[j] < lo_[j] - kFeasTol) {
          cb[p] = -1.0;
          infeas += lo_[j] - x_[j];
        } else if (x_[j] > up_[j] + kFeasTol) {
          cb[p] = 1.0;
          infeas += x_[j] - up_[j];
        } else {
          cb[p] = 0.0;
        }
      }
      const bool phase1 = infeas > 0.0;
      double obj;
      if (phase1) {
        obj = infeas;
      } else {
        for (int p = 0; p < m_; ++p) cb[p] = cost_[basic_[p]];
        obj = 0.0;
        for (int j = 0; j < total_; ++j) obj += cost_[j] * x_[j];
      }
      if (phase1 && !last_phase1 && ++relapses > 50)
        throw NumericalFailure("simplex keeps losing primal feasibility");
      if (iterations > 100L * (m_ + n_) + 10000)
        throw NumericalFailure("simplex made no progress within its pivot budget");
      if (phase1 != last_phase1 || obj < last_obj - 1e-12 * (1.0 + std::abs(last_obj))) {
        stall = 0;
        bland = false;
      } else if (++stall > kStallLimit) {
        bland = true;
      }
      last_obj = obj;
      last_phase1 = phase1;


      pi = m_ > 0 ? Eigen::VectorXd(binv_.transpose() * cb) : Eigen::VectorXd();

      // Pricing.
      int q = -1;
      int dir = 0;
      double best = 0.0;
      for (int j = 0; j < total_; ++j) {
        const VarStatus s = status_[j];
        if (s == VarStatus::kBasic || lo_[j] == up_[j]) continue;
        const double d = (phase1 ? 0.0 : cost_[j]) - dot_column(j, pi);
        int want = 0;
        if (d < -kOptTol && s != VarStatus::kAtUpper) want = 1;
        if (d > kOptTol && s != VarStatus::kAtLower) want = -1;
        if (want == 0) continue;
        if (bland) {
          q = j;
          dir = want;
          break;
        }
        if (std::abs(d) > best) {
          best = std::abs(d);
          q = j;
          dir = want;
        }
      }

      if (q < 0) {
        if (since_refactor_ > 0) {
          // Confirm with a fresh factorization before declaring a result.
          factor();
          compute_basic_values();
          continue;
        }
        if (phase1) {
          out.status = LpStatus::kInfeasible;
          double scale = 0.0;
          out.farkas.assign(m_, 0.0);
          for (int i = 0; i < m_; ++i) {
            out.farkas[i] = pi[i] * row_scale_[i];
            scale = std::max(scale, std::abs(out.farkas[i]));
          }
          for (double& v : out.farkas) v = scale > 0 ? v / scale : 0.0;
        } else {
          finish_optimal(out, pi);
        }
        break;
      }

      const Eigen::VectorXd alpha = ftran(q);
      const Ratio ratio = ratio_test(q, dir, alpha, phase1, bland);
      if (!std::isfinite(ratio.step)) {
        if (phase1) {
          if (since_refactor_ > 0) {
            factor();
            compute_basic_values();
            continue;
          }
          throw NumericalFailure("unbounded step during phase 1");
        }
        finish_unbounded(out, q, dir, alpha);
        break;
      }
      const double t = ratio.step;

      for (int p = 0; p < m_; ++p) x_[basic_[p]] += -dir * alpha[p] * t;
      x_[q] += dir * t;
      if (ratio.row < 0) {
        set_nonbasic(q, dir > 0 ? VarStatus::kAtUpper : VarStatus::kAtLower);
      } else {
        const int leaving = basic_[ratio.row];
        pivot(ratio.row, q, alpha);
        status_[leaving] =
            ratio.at_upper ? VarStatus::kAtUpper : VarStatus::kAtLower;
        if (lo_[leaving] == up_[leaving]) status_[leaving] = VarStatus::kAtLower;
        x_[leaving] = ratio.bound;
      }
      ++iterations;
    }
    out.iterations = iterations;
    out.basis.col_status.assign(status_.begin(), status_.begin() + n_);
    out.basis.row_status.assign(status_.begin() + n_, status_.end());
    auto f = std::make_shared<BasisFactor>();
    f->matrix_hash = hash_;
    f->basic = basic_;
    f->inverse = binv_;
    f->updates = since_refactor_;
    out.basis.factor = std::move(f);
    return out;
  }

  void finish_optimal(LpOutcome& out, const Eigen::VectorXd& pi) const {
    const double sign = lp_.sense == ObjSense::kMaximize ? -1.0 : 1.0;
    out.status = LpStatus::kOptimal;
    out.primal.resize(n_);
    for (int j = 0; j < n_; ++j) {
      // Nonbasic columns sit exactly on their original bounds.
      if (status_[j] == VarStatus::kAtLower)
        out.primal[j] = lp_.lower()[j];
      else if (status_[j] == VarStatus::kAtUpper)
        out.primal[j] = lp_.upper()[j];
      else
        out.primal[j] = x_[j] * col_scale_[j];
    }
    out.row_dual.resize(m_);
    for (int i = 0; i < m_; ++i) out.row_dual[i] = sign * pi[i] * row_scale_[i];
    out.reduced_cost.resize(n_);
    for (int j = 0; j < n_; ++j)
      out.reduced_cost[j] =
          status_[j] == VarStatus::kBasic
              ? 0.0
              : sign * (cost_[j] - dot_column(j, pi)) / col_scale_[j];
    out.objective = lp_.objective_value(out.primal);
  }

  void finish_unbounded(LpOutcome& out, int q, int dir,
                        const Eigen::VectorXd& alpha) const {
    out.status = LpStatus::kUnbounded;
    out.primal.resize(n_);
    for (int j = 0; j < n_; ++j) out.primal[j] = x_[j] * col_scale_[j];
    std::vector<double> ray(n_, 0.0);
    if (q < n_) ray[q] = dir * col_scale_[q];
    for (int p = 0; p < m_; ++p)
      if (basic_[p] < n_) ray[basic_[p]] = -dir * alpha[p] * col_scale_[basic_[p]];
    double scale = 0.0;
    for (double v : ray) scale = std::max(scale, std::abs(v));
    if (scale <= 0.0) throw NumericalFailure("empty unbounded direction");
    for (double& v : ray) {
      v /= scale;
      if (std::abs(v) < 1e-12) v = 0.0;
    }
    out.ray = std::move(ray);
    out.objective = lp_.sense == ObjSense::kMaximize ? kInf : -kInf;
  }

  const LinearProgram& lp_;
  Limits limits_;
  int m_, n_, total_;
  Clock::time_point start_time_;
  std::uint64_t hash_ = 0;
  std::vector<int> col_start_, col_row_;
  std::vector<double> col_val_;
  std::vector<double> cost_, lo_, up_;
  std::vector<double> row_scale_, col_scale_;
  std::vector<VarStatus> status_;
  std::vector<int> basic_, pos_;
  std::vector<double> x_;
  Eigen::MatrixXd binv_;
  int since_refactor_ = 0;
  bool factor_reused_ = false;
};

}  // namespace

LpOutcome solve_lp(const LinearProgram& lp, const Limits& limits,
                   const Basis* warm_start) {
  lp.validate();
  BoundedSimplex simplex(lp, limits);
  return simplex.run(warm_start);
}

}  // namespace ccmp::lpkit
