#include "ccmp/model/sparse_matrix.hpp"

#include <algorithm>

#include "ccmp/errors.hpp"

namespace ccmp {

SparseMatrix SparseMatrix::from_triplets(int rows, int cols,
                                         std::vector<Triplet> entries) {
  if (rows < 0 || cols < 0) throw Error("negative matrix dimension");
  std::sort(entries.begin(), entries.end(), [](const Triplet& a, const Triplet& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });
  SparseMatrix m(rows, cols);
  std::vector<int> count(rows + 1, 0);
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const Triplet& t = entries[i];
    if (t.row < 0 || t.row >= rows || t.col < 0 || t.col >= cols)
      throw Error("matrix entry (" + std::to_string(t.row) + ", " +
                  std::to_string(t.col) + ") out of range");
    if (!m.index_.empty() && i > 0 && entries[i - 1].row == t.row &&
        entries[i - 1].col == t.col) {
      m.values_.back() += t.value;
      continue;
    }
    m.index_.push_back(t.col);
    m.values_.push_back(t.value);
    ++count[t.row + 1];
  }
  for (int r = 0; r < rows; ++r) count[r + 1] += count[r];
  m.start_ = std::move(count);
  // Drop entries that are (or summed to) zero.
  std::vector<int> idx;
  std::vector<double> val;
  std::vector<int> start(rows + 1, 0);
  for (int r = 0; r < rows; ++r) {
    for (int p = m.start_[r]; p < m.start_[r + 1]; ++p) {
      if (m.values_[p] == 0.0) continue;
      idx.push_back(m.index_[p]);
      val.push_back(m.values_[p]);
    }
    start[r + 1] = static_cast<int>(idx.size());
  }
  m.start_ = std::move(start);
  m.index_ = std::move(idx);
  m.values_ = std::move(val);
  return m;
}

SparseMatrix SparseMatrix::from_dense(
    const std::vector<std::vector<double>>& dense) {
  const int rows = static_cast<int>(dense.size());
  const int cols = rows > 0 ? static_cast<int>(dense[0].size()) : 0;
  std::vector<Triplet> t;
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c)
      if (dense[r][c] != 0.0) t.push_back({r, c, dense[r][c]});
  return from_triplets(rows, cols, std::move(t));
}

double SparseMatrix::at(int r, int c) const {
  const auto b = index_.begin() + start_[r];
  const auto e = index_.begin() + start_[r + 1];
  const auto it = std::lower_bound(b, e, c);
  return it != e && *it == c ? values_[it - index_.begin()] : 0.0;
}

std::vector<Triplet> SparseMatrix::triplets() const {
  std::vector<Triplet> out;
  out.reserve(index_.size());
  for (int r = 0; r < rows_; ++r)
    for (int p = start_[r]; p < start_[r + 1]; ++p)
      out.push_back({r, index_[p], values_[p]});
  return out;
}

std::vector<char> SparseMatrix::column_used() const {
  std::vector<char> used(cols_, 0);
  for (int c : index_) used[c] = 1;
  return used;
}

double SparseMatrix::row_dot(int r, const std::vector<double>& x) const {
  double s = 0.0;
  for (int p = start_[r]; p < start_[r + 1]; ++p) s += values_[p] * x[index_[p]];
  return s;
}

std::vector<double> SparseMatrix::multiply(const std::vector<double>& x) const {
  std::vector<double> y(rows_);
  for (int r = 0; r < rows_; ++r) y[r] = row_dot(r, x);
  return y;
}

std::vector<double> SparseMatrix::transpose_multiply(
    const std::vector<double>& u) const {
  std::vector<double> y(cols_, 0.0);
  for (int r = 0; r < rows_; ++r)
    for (int p = start_[r]; p < start_[r + 1]; ++p) y[index_[p]] += values_[p] * u[r];
  return y;
}

}  // namespace ccmp
