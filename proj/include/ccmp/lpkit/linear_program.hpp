#pragma once

#include <limits>
#include <string>
#include <utility>
#include <vector>

namespace ccmp::lpkit {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class ObjSense { kMinimize, kMaximize };
enum class RowSense { kLessEqual, kGreaterEqual, kEqual };

// Sparse linear expression sum_j coef_j * x_j + constant. Duplicate indices
// are merged when the expression is added to a program.
struct LinExpr {
  std::vector<std::pair<int, double>> terms;
  double constant = 0.0;

  LinExpr& add(int col, double coef) {
    if (coef != 0.0) terms.emplace_back(col, coef);
    return *this;
  }
  LinExpr& add_constant(double v) {
    constant += v;
    return *this;
  }
};

// An LP stored row-wise. Columns carry bounds (possibly infinite) and a
// cost; rows carry a sense and a finite right-hand side.
class LinearProgram {
 public:
  ObjSense sense = ObjSense::kMinimize;
  double objective_offset = 0.0;

  int add_column(double lower, double upper, double cost,
                 std::string name = {});
  // Adds `expr (sense) rhs`; the expression constant is moved to the rhs.
  int add_row(const LinExpr& expr, RowSense sense, double rhs,
              std::string name = {});

  int num_cols() const { return static_cast<int>(cost_.size()); }
  int num_rows() const { return static_cast<int>(rhs_.size()); }
  int num_nonzeros() const { return static_cast<int>(row_index_.size()); }

  const std::vector<double>& cost() const { return cost_; }
  const std::vector<double>& lower() const { return lower_; }
  const std::vector<double>& upper() const { return upper_; }
  const std::vector<double>& rhs() const { return rhs_; }
  const std::vector<RowSense>& row_sense() const { return row_sense_; }
  const std::vector<std::string>& col_names() const { return col_names_; }
  const std::vector<std::string>& row_names() const { return row_names_; }

  // Row r occupies [row_start()[r], row_start()[r+1]) in row_index/row_value.
  const std::vector<int>& row_start() const { return row_start_; }
  const std::vector<int>& row_index() const { return row_index_; }
  const std::vector<double>& row_value() const { return row_value_; }

  void set_cost(int col, double c) { cost_[col] = c; }
  void set_bounds(int col, double lower, double upper) {
    lower_[col] = lower;
    upper_[col] = upper;
  }
  void set_rhs(int row, double rhs) { rhs_[row] = rhs; }

  // Row activities A x.
  std::vector<double> activities(const std::vector<double>& x) const;
  double objective_value(const std::vector<double>& x) const;

  // Throws ccmp::Error when bounds are crossed, a rhs is not finite or an
  // index is out of range.
  void validate() const;

 private:
  std::vector<double> cost_, lower_, upper_;
  std::vector<std::string> col_names_;
  std::vector<int> row_start_{0};
  std::vector<int> row_index_;
  std::vector<double> row_value_;
  std::vector<RowSense> row_sense_;
  std::vector<double> rhs_;
  std::vector<std::string> row_names_;
};

struct MipProblem {
  LinearProgram lp;
  std::vector<char> integral;  // one flag per column

  int add_column(double lower, double upper, double cost, bool is_integral,
                 std::string name = {}) {
    integral.push_back(is_integral ? 1 : 0);
    return lp.add_column(lower, upper, cost, std::move(name));
  }
};

}  // namespace ccmp::lpkit
