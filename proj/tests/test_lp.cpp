#include <gtest/gtest.h>

#include <limits>
#include <random>
#include <sstream>

#include "fracvrp/lp.hpp"

using namespace fracvrp;

namespace {

void expect_certified(const LinearProgram& lp, const LpResult& r) {
  ASSERT_EQ(r.status, LpStatus::Optimal);
  double primal = 0;
  for (int j = 0; j < lp.n_cols(); ++j) {
    EXPECT_GE(r.x[j], -1e-7);
    primal += lp.cols[j].cost * r.x[j];
  }
  std::vector<double> act(lp.n_rows(), 0.0);
  for (int j = 0; j < lp.n_cols(); ++j)
    for (std::size_t k = 0; k < lp.cols[j].rows.size(); ++k) act[lp.cols[j].rows[k]] += lp.cols[j].vals[k] * r.x[j];
  double dual = 0;
  for (int i = 0; i < lp.n_rows(); ++i) {
    switch (lp.sense[i]) {
      case RowSense::Eq: EXPECT_NEAR(act[i], lp.rhs[i], 1e-7); break;
      case RowSense::Le: EXPECT_LE(act[i], lp.rhs[i] + 1e-7); EXPECT_LE(r.duals[i], 1e-9); break;
      case RowSense::Ge: EXPECT_GE(act[i], lp.rhs[i] - 1e-7); EXPECT_GE(r.duals[i], -1e-9); break;
    }
    dual += lp.rhs[i] * r.duals[i];
  }
  for (int j = 0; j < lp.n_cols(); ++j) {
    double rc = lp.cols[j].cost;
    for (std::size_t k = 0; k < lp.cols[j].rows.size(); ++k) rc -= lp.cols[j].vals[k] * r.duals[lp.cols[j].rows[k]];
    EXPECT_GE(rc, -1e-7);
  }
  EXPECT_NEAR(primal, r.objective, 1e-7 * (1 + std::abs(primal)));
  EXPECT_NEAR(primal, dual, 1e-7 * (1 + std::abs(primal)));
}

}  // namespace

TEST(Simplex, SingleLowerBound) {
  LinearProgram lp;
  int r = lp.add_row(RowSense::Ge, 3);
  lp.add_column(1, {r}, {1});
  LpResult res = solve_lp(lp);
  ASSERT_EQ(res.status, LpStatus::Optimal);
  EXPECT_NEAR(res.x[0], 3, 1e-9);
  EXPECT_NEAR(res.duals[0], 1, 1e-9);
  EXPECT_NEAR(res.objective, 3, 1e-9);
}

TEST(Simplex, UpperBoundedMaximization) {
  LinearProgram lp;
  lp.add_column(-1, {}, {}, 5);
  LpResult res = solve_lp(lp);
  ASSERT_EQ(res.status, LpStatus::Optimal);
  EXPECT_NEAR(res.x[0], 5, 1e-9);

  LinearProgram row;
  int r = row.add_row(RowSense::Le, 5);
  row.add_column(-1, {r}, {1});
  res = solve_lp(row);
  ASSERT_EQ(res.status, LpStatus::Optimal);
  EXPECT_NEAR(res.x[0], 5, 1e-9);
  EXPECT_NEAR(res.duals[0], -1, 1e-9);
}

TEST(Simplex, Unbounded) {
  LinearProgram lp;
  lp.add_column(-1, {}, {});
  EXPECT_EQ(solve_lp(lp).status, LpStatus::Unbounded);
}

TEST(Simplex, Infeasible) {
  LinearProgram lp;
  int a = lp.add_row(RowSense::Le, 1);
  int b = lp.add_row(RowSense::Ge, 2);
  lp.add_column(1, {a, b}, {1, 1});
  EXPECT_EQ(solve_lp(lp).status, LpStatus::Infeasible);
}

TEST(Simplex, RandomProgramsAreCertified) {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> coef(0, 6), pick(0, 2);
  for (int trial = 0; trial < 200; ++trial) {
    const int rows = 2 + trial % 7, cols = 3 + trial % 11;
    // Rows built around a known nonnegative point stay feasible.
    std::vector<double> x0(cols);
    for (double& v : x0) v = coef(rng) / 2.0;
    LinearProgram lp;
    std::vector<std::vector<double>> a(rows, std::vector<double>(cols));
    for (int i = 0; i < rows; ++i) {
      double act = 0;
      for (int j = 0; j < cols; ++j) act += (a[i][j] = coef(rng) - 2) * x0[j];
      RowSense s = static_cast<RowSense>(pick(rng));
      lp.add_row(s, s == RowSense::Eq ? act : s == RowSense::Le ? act + coef(rng) : act - coef(rng));
    }
    for (int j = 0; j < cols; ++j) {
      std::vector<int> r;
      std::vector<double> v;
      for (int i = 0; i < rows; ++i)
        if (a[i][j] != 0) {
          r.push_back(i);
          v.push_back(a[i][j]);
        }
      lp.add_column(coef(rng) + 1, r, v, pick(rng) == 0 ? 4.0 : std::numeric_limits<double>::infinity());
    }
    LpResult res = solve_lp(lp);
    if (res.status == LpStatus::Unbounded) continue;
    ASSERT_EQ(res.status, LpStatus::Optimal) << "trial " << trial;
    // Bounded columns are checked through their upper bound only.
    bool bounded = false;
    for (auto& c : lp.cols) bounded |= c.upper < std::numeric_limits<double>::infinity();
    if (!bounded) expect_certified(lp, res);
    for (int j = 0; j < cols; ++j) EXPECT_LE(res.x[j], lp.cols[j].upper + 1e-7);
  }
}

TEST(Simplex, DegenerateCoveringProgram) {
  // Set-partitioning style LP with many ties.
  LinearProgram lp;
  const int n = 8;
  for (int i = 0; i < n; ++i) lp.add_row(RowSense::Eq, 1);
  for (int a = 0; a < n; ++a)
    for (int b = a; b < n; ++b) {
      std::vector<int> r{a};
      if (b != a) r.push_back(b);
      lp.add_column(r.size() == 1 ? 1.0 : 1.5, r, std::vector<double>(r.size(), 1.0));
    }
  LpResult res = solve_lp(lp);
  expect_certified(lp, res);
  EXPECT_NEAR(res.objective, 6.0, 1e-9);
}

TEST(Simplex, ColumnsAddedAfterSolve) {
  LinearProgram lp;
  int r0 = lp.add_row(RowSense::Eq, 1);
  int r1 = lp.add_row(RowSense::Eq, 1);
  lp.add_column(10, {r0}, {1});
  lp.add_column(10, {r1}, {1});
  SimplexSolver s(lp);
  EXPECT_NEAR(s.solve().objective, 20, 1e-9);
  LinearProgram::Column c;
  c.cost = 3;
  c.rows = {r0, r1};
  c.vals = {1, 1};
  s.add_column(c);
  LpResult res = s.solve();
  ASSERT_EQ(res.status, LpStatus::Optimal);
  EXPECT_NEAR(res.objective, 3, 1e-9);
  EXPECT_EQ(s.n_cols(), 3);
}

TEST(LpFormat, WritesSections) {
  LinearProgram lp;
  int r = lp.add_row(RowSense::Ge, 3, "cover");
  lp.add_column(2, {r}, {1}, 4, "x");
  std::ostringstream out;
  write_lp_format(out, lp);
  const std::string s = out.str();
  EXPECT_NE(s.find("Minimize"), std::string::npos);
  EXPECT_NE(s.find("cover"), std::string::npos);
  EXPECT_NE(s.find("End"), std::string::npos);
}
