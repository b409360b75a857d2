#include "ccmp/lpkit/linear_program.hpp"

#include <algorithm>
#include <cmath>

#include "ccmp/errors.hpp"

namespace ccmp::lpkit {

int LinearProgram::add_column(double lower, double upper, double cost,
                              std::string name) {
  lower_.push_back(lower);
  upper_.push_back(upper);
  cost_.push_back(cost);
  col_names_.push_back(std::move(name));
  return num_cols() - 1;
}

int LinearProgram::add_row(const LinExpr& expr, RowSense sense, double rhs,
                           std::string name) {
  auto terms = expr.terms;
  std::sort(terms.begin(), terms.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  std::size_t out = 0;
  for (std::size_t i = 0; i < terms.size(); ++i) {
    if (out > 0 && terms[out - 1].first == terms[i].first) {
      terms[out - 1].second += terms[i].second;
    } else {
      terms[out++] = terms[i];
    }
  }
  terms.resize(out);
  for (const auto& [col, coef] : terms) {
    if (coef == 0.0) continue;
    row_index_.push_back(col);
    row_value_.push_back(coef);
  }
  row_start_.push_back(static_cast<int>(row_index_.size()));
  row_sense_.push_back(sense);
  rhs_.push_back(rhs - expr.constant);
  row_names_.push_back(std::move(name));
  return num_rows() - 1;
}

std::vector<double> LinearProgram::activities(
    const std::vector<double>& x) const {
  std::vector<double> act(num_rows(), 0.0);
  for (int r = 0; r < num_rows(); ++r) {
    double s = 0.0;
    for (int p = row_start_[r]; p < row_start_[r + 1]; ++p)
      s += row_value_[p] * x[row_index_[p]];
    act[r] = s;
  }
  return act;
}

double LinearProgram::objective_value(const std::vector<double>& x) const {
  double v = objective_offset;
  for (int j = 0; j < num_cols(); ++j) v += cost_[j] * x[j];
  return v;
}

void LinearProgram::validate() const {
  for (int j = 0; j < num_cols(); ++j) {
    if (std::isnan(lower_[j]) || std::isnan(upper_[j]) ||
        lower_[j] > upper_[j] || lower_[j] == kInf || upper_[j] == -kInf)
      throw Error("column " + std::to_string(j) + " has invalid bounds");
    if (!std::isfinite(cost_[j]))
      throw Error("column " + std::to_string(j) + " has non-finite cost");
  }
  for (int r = 0; r < num_rows(); ++r) {
    if (!std::isfinite(rhs_[r]))
      throw Error("row " + std::to_string(r) + " has non-finite rhs");
    for (int p = row_start_[r]; p < row_start_[r + 1]; ++p) {
      if (row_index_[p] < 0 || row_index_[p] >= num_cols())
        throw Error("row " + std::to_string(r) + " references column " +
                    std::to_string(row_index_[p]));
      if (!std::isfinite(row_value_[p]))
        throw Error("row " + std::to_string(r) + " has non-finite entry");
    }
  }
}

}  // namespace ccmp::lpkit
