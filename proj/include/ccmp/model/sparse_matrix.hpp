#pragma once

#include <vector>

namespace ccmp {

struct Triplet {
  int row;
  int col;
  double value;

  bool operator==(const Triplet&) const = default;
};

// Compressed sparse row matrix built from triplets. Duplicates are summed,
// explicit zeros dropped, entries kept in (row, col) order.
class SparseMatrix {
 public:
  SparseMatrix() = default;
  SparseMatrix(int rows, int cols) : rows_(rows), cols_(cols), start_(rows + 1, 0) {}
  static SparseMatrix from_triplets(int rows, int cols,
                                    std::vector<Triplet> entries);
  static SparseMatrix from_dense(const std::vector<std::vector<double>>& dense);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  int nonzeros() const { return static_cast<int>(index_.size()); }

  const std::vector<int>& row_start() const { return start_; }
  const std::vector<int>& col_index() const { return index_; }
  const std::vector<double>& values() const { return values_; }

  double at(int r, int c) const;
  std::vector<Triplet> triplets() const;
  // Column j holds any nonzero.
  std::vector<char> column_used() const;

  std::vector<double> multiply(const std::vector<double>& x) const;
  double row_dot(int r, const std::vector<double>& x) const;
  std::vector<double> transpose_multiply(const std::vector<double>& u) const;

  bool operator==(const SparseMatrix&) const = default;

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<int> start_{0};
  std::vector<int> index_;
  std::vector<double> values_;
};

}  // namespace ccmp
