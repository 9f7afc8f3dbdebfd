#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "oracles/assignment.hpp"
#include "seg/error.hpp"
#include "seg/hungarian.hpp"

using seg::CostMatrix;

TEST(Hungarian, SingleCell) {
  auto a = seg::hungarian_min_cost(CostMatrix::from_rows({{0}}));
  EXPECT_EQ(a.total_cost, 0.0);
  EXPECT_EQ(a.column_of_row, (std::vector<std::size_t>{0}));
}

TEST(Hungarian, AntiDiagonal) {
  auto a = seg::hungarian_min_cost(CostMatrix::from_rows({{1, 0}, {0, 1}}));
  EXPECT_EQ(a.total_cost, 0.0);
  EXPECT_EQ(a.column_of_row, (std::vector<std::size_t>{1, 0}));
}

TEST(Hungarian, EmptyMatrix) {
  auto a = seg::hungarian_min_cost(CostMatrix(0, 0));
  EXPECT_EQ(a.total_cost, 0.0);
  EXPECT_TRUE(a.column_of_row.empty());
}

TEST(Hungarian, MatchesBruteForceOnRandomMatrices) {
  std::mt19937 rng(20240601);
  std::uniform_real_distribution<double> cell(0.0, 1.0);
  for (int trial = 0; trial < 240; ++trial) {
    std::size_t n = 2 + trial % 6;
    CostMatrix m(n, n);
    for (std::size_t r = 0; r < n; ++r) {
      for (std::size_t c = 0; c < n; ++c) m(r, c) = cell(rng);
    }
    auto got = seg::hungarian_min_cost(m);
    auto want = oracle::brute_force_assignment(m);
    EXPECT_NEAR(got.total_cost, want.cost, 1e-9) << "n=" << n << " trial " << trial;
    double recomputed = 0;
    std::vector<bool> used(n, false);
    for (std::size_t r = 0; r < n; ++r) {
      ASSERT_LT(got.column_of_row[r], n);
      EXPECT_FALSE(used[got.column_of_row[r]]);
      used[got.column_of_row[r]] = true;
      recomputed += m(r, got.column_of_row[r]);
    }
    EXPECT_NEAR(recomputed, got.total_cost, 1e-12);
  }
}

TEST(Hungarian, TiesResolveToLexicographicallySmallest) {
  std::mt19937 rng(5);
  for (int trial = 0; trial < 150; ++trial) {
    std::size_t n = 2 + trial % 5;
    CostMatrix m(n, n);
    for (std::size_t r = 0; r < n; ++r) {
      for (std::size_t c = 0; c < n; ++c) m(r, c) = static_cast<double>(rng() % 3);
    }
    auto got = seg::hungarian_min_cost(m);
    auto want = oracle::brute_force_assignment(m);
    EXPECT_EQ(got.total_cost, want.cost);
    EXPECT_EQ(got.column_of_row, want.perm) << "trial " << trial;
  }
  CostMatrix flat(4, 4, 1.0);
  EXPECT_EQ(seg::hungarian_min_cost(flat).column_of_row, (std::vector<std::size_t>{0, 1, 2, 3}));
}

TEST(Hungarian, RejectsBadInput) {
  EXPECT_THROW(seg::hungarian_min_cost(CostMatrix(2, 3)), seg::InvalidArgument);
  EXPECT_THROW(seg::hungarian_min_cost(CostMatrix::from_rows({{0, -1}, {0, 0}})), seg::InvalidArgument);
  EXPECT_THROW(seg::hungarian_min_cost(CostMatrix::from_rows({{0, NAN}, {0, 0}})), seg::InvalidArgument);
  EXPECT_THROW(seg::hungarian_min_cost(CostMatrix::from_rows({{0, INFINITY}, {0, 0}})), seg::InvalidArgument);
  EXPECT_THROW(CostMatrix::from_rows({{0, 1}, {0}}), seg::InvalidArgument);
}

TEST(Rectangular, MatchesInjectionOracle) {
  std::mt19937 rng(99);
  std::uniform_real_distribution<double> cell(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    std::size_t rows = 1 + rng() % 6, cols = 1 + rng() % 6;
    CostMatrix m(rows, cols);
    for (std::size_t r = 0; r < rows; ++r) {
      for (std::size_t c = 0; c < cols; ++c) m(r, c) = cell(rng);
    }
    auto got = seg::rectangular_min_cost(m);
    EXPECT_EQ(got.pairs.size(), std::min(rows, cols));
    EXPECT_NEAR(got.total_cost, oracle::brute_force_rectangular(m), 1e-9);
    std::set<std::size_t> rs, cs;
    double sum = 0;
    for (std::size_t k = 0; k < got.pairs.size(); ++k) {
      auto [r, c] = got.pairs[k];
      rs.insert(r);
      cs.insert(c);
      sum += m(r, c);
      if (k) {
        EXPECT_LT(got.pairs[k - 1].first, r);
      }
    }
    EXPECT_EQ(rs.size(), got.pairs.size());
    EXPECT_EQ(cs.size(), got.pairs.size());
    EXPECT_NEAR(sum, got.total_cost, 1e-12);
  }
}

TEST(Rectangular, DegenerateShapes) {
  EXPECT_TRUE(seg::rectangular_min_cost(CostMatrix(0, 3)).pairs.empty());
  auto one = seg::rectangular_min_cost(CostMatrix::from_rows({{0.5, 0.2, 0.9}}));
  ASSERT_EQ(one.pairs.size(), 1u);
  EXPECT_EQ(one.pairs[0], (std::pair<std::size_t, std::size_t>{0, 1}));
  EXPECT_DOUBLE_EQ(one.total_cost, 0.2);
}
