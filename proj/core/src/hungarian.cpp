#include "seg/hungarian.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace seg {

CostMatrix CostMatrix::from_rows(const std::vector<std::vector<double>>& rows) {
  std::size_t cols = rows.empty() ? 0 : rows.front().size();
  CostMatrix m(rows.size(), cols);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != cols) throw InvalidArgument("ragged cost matrix");
    for (std::size_t c = 0; c < cols; ++c) m(r, c) = rows[r][c];
  }
  return m;
}

namespace {

struct Potentials {
  std::vector<double> u, v;          // 1-based, index 0 unused for u
  std::vector<std::size_t> col_row;  // col_row[j] = row (1-based) matched to column j, 0 if none
};

// Shortest augmenting path Hungarian; rows are 1..n, columns 1..n.
Potentials solve(const CostMatrix& a) {
  const std::size_t n = a.rows();
  constexpr double inf = std::numeric_limits<double>::infinity();
  Potentials p{std::vector<double>(n + 1, 0.0), std::vector<double>(n + 1, 0.0),
               std::vector<std::size_t>(n + 1, 0)};
  std::vector<std::size_t> way(n + 1, 0);
  for (std::size_t i = 1; i <= n; ++i) {
    p.col_row[0] = i;
    std::size_t j0 = 0;
    std::vector<double> minv(n + 1, inf);
    std::vector<char> used(n + 1, 0);
    do {
      used[j0] = 1;
      std::size_t i0 = p.col_row[j0], j1 = 0;
      double delta = inf;
      for (std::size_t j = 1; j <= n; ++j) {
        if (used[j]) continue;
        double cur = a(i0 - 1, j - 1) - p.u[i0] - p.v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= n; ++j) {
        if (used[j]) {
          p.u[p.col_row[j]] += delta;
          p.v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p.col_row[j0] != 0);
    do {
      std::size_t j1 = way[j0];
      p.col_row[j0] = p.col_row[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  return p;
}

// Every optimal assignment is a perfect matching of the equality subgraph of
// an optimal dual solution. Walk rows in order and give each the smallest
// tight column that still leaves a perfect matching on the remaining rows.
class LexSmallest {
 public:
  LexSmallest(const CostMatrix& a, const Potentials& p, double tol)
      : n_(a.rows()), tight_(n_), row_col_(n_), col_row_(n_), fixed_col_(n_, 0) {
    for (std::size_t i = 0; i < n_; ++i) {
      for (std::size_t j = 0; j < n_; ++j) {
        if (a(i, j) - p.u[i + 1] - p.v[j + 1] <= tol) tight_[i].push_back(j);
      }
    }
    for (std::size_t j = 1; j <= n_; ++j) {
      row_col_[p.col_row[j] - 1] = j - 1;
      col_row_[j - 1] = p.col_row[j] - 1;
    }
  }

  std::vector<std::size_t> run() {
    for (std::size_t i = 0; i < n_; ++i) {
      for (std::size_t j : tight_[i]) {
        if (fixed_col_[j]) continue;
        if (row_col_[i] == j || reroute(i, j)) {
          fixed_col_[j] = 1;
          break;
        }
      }
    }
    return row_col_;
  }

 private:
  // Moves row i onto column j, re-matching j's current row along an
  // alternating path that ends at the column i gives up.
  bool reroute(std::size_t i, std::size_t j) {
    std::size_t freed = row_col_[i];
    std::size_t displaced = col_row_[j];
    std::vector<char> seen(n_, 0);
    seen[j] = 1;
    path_.clear();
    if (!augment(displaced, freed, i, seen)) return false;
    for (auto [row, col] : path_) {
      row_col_[row] = col;
      col_row_[col] = row;
    }
    row_col_[i] = j;
    col_row_[j] = i;
    return true;
  }

  bool augment(std::size_t row, std::size_t target, std::size_t skip_row, std::vector<char>& seen) {
    for (std::size_t c : tight_[row]) {
      if (seen[c] || fixed_col_[c]) continue;
      seen[c] = 1;
      if (c == target) {
        path_.emplace_back(row, c);
        return true;
      }
      std::size_t next = col_row_[c];
      if (next == skip_row) continue;
      if (augment(next, target, skip_row, seen)) {
        path_.emplace_back(row, c);
        return true;
      }
    }
    return false;
  }

  std::size_t n_;
  std::vector<std::vector<std::size_t>> tight_;
  std::vector<std::size_t> row_col_;
  std::vector<std::size_t> col_row_;
  std::vector<char> fixed_col_;
  std::vector<std::pair<std::size_t, std::size_t>> path_;
};

}  // namespace

Assignment hungarian_min_cost(const CostMatrix& cost) {
  if (!cost.square()) {
    throw InvalidArgument("hungarian_min_cost needs a square matrix, got " + std::to_string(cost.rows()) +
                          "x" + std::to_string(cost.cols()));
  }
  const std::size_t n = cost.rows();
  double scale = 1.0;
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < n; ++c) {
      double x = cost(r, c);
      if (!std::isfinite(x)) throw InvalidArgument("cost matrix has a non-finite cell");
      if (x < 0.0) throw InvalidArgument("cost matrix has a negative cell");
      scale = std::max(scale, x);
    }
  }
  Assignment out;
  if (n == 0) return out;

  Potentials p = solve(cost);
  out.column_of_row = LexSmallest(cost, p, 1e-11 * scale).run();
  for (std::size_t r = 0; r < n; ++r) out.total_cost += cost(r, out.column_of_row[r]);
  return out;
}

PartialAssignment rectangular_min_cost(const CostMatrix& cost) {
  constexpr double kSentinel = 1e3;
  const std::size_t n = std::max(cost.rows(), cost.cols());
  CostMatrix padded(n, n, kSentinel);
  for (std::size_t r = 0; r < cost.rows(); ++r) {
    for (std::size_t c = 0; c < cost.cols(); ++c) padded(r, c) = cost(r, c);
  }
  Assignment full = hungarian_min_cost(padded);
  PartialAssignment out;
  for (std::size_t r = 0; r < cost.rows(); ++r) {
    std::size_t c = full.column_of_row[r];
    if (c >= cost.cols()) continue;
    out.pairs.emplace_back(r, c);
    out.total_cost += cost(r, c);
  }
  return out;
}

}  // namespace seg
