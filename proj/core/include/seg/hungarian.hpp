#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "seg/error.hpp"

namespace seg {

/// Dense row-major matrix of costs.
class CostMatrix {
 public:
  CostMatrix() = default;
  CostMatrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
  /// Throws InvalidArgument on ragged input.
  static CostMatrix from_rows(const std::vector<std::vector<double>>& rows);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool square() const noexcept { return rows_ == cols_; }

  double& operator()(std::size_t r, std::size_t c) noexcept { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const noexcept { return data_[r * cols_ + c]; }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

struct Assignment {
  /// column_of_row[r] is the column assigned to row r.
  std::vector<std::size_t> column_of_row;
  double total_cost = 0.0;
};

/// Minimum-cost perfect assignment on a square, finite, non-negative matrix
/// (Kuhn-Munkres with potentials, O(n^3)). Among optimal assignments the
/// lexicographically smallest column_of_row is returned. Throws
/// InvalidArgument for non-square, non-finite or negative input.
Assignment hungarian_min_cost(const CostMatrix& cost);

struct PartialAssignment {
  /// (row, column) pairs, ascending by row; min(rows, cols) of them.
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  double total_cost = 0.0;
};

/// Minimum-cost matching of min(rows, cols) pairs in a rectangular matrix.
/// The matrix is padded to a square with a constant sentinel; every perfect
/// assignment of the padded matrix uses the same number of sentinel cells, so
/// dropping them leaves an optimal rectangular matching.
PartialAssignment rectangular_min_cost(const CostMatrix& cost);

}  // namespace seg
