#pragma once

#include <iosfwd>
#include <limits>
#include <memory>
#include <string>
#include <vector>

namespace fracvrp {

enum class RowSense { Eq, Le, Ge };

// min c^T x subject to rows, 0 <= x <= upper.
struct LinearProgram {
  struct Column {
    double cost = 0;
    std::vector<int> rows;
    std::vector<double> vals;
    double upper = std::numeric_limits<double>::infinity();
    std::string name;
  };

  std::vector<RowSense> sense;
  std::vector<double> rhs;
  std::vector<std::string> row_names;
  std::vector<Column> cols;

  int n_rows() const { return static_cast<int>(sense.size()); }
  int n_cols() const { return static_cast<int>(cols.size()); }
  int add_row(RowSense s, double b, std::string name = {});
  int add_column(double cost, std::vector<int> rows, std::vector<double> vals,
                 double upper = std::numeric_limits<double>::infinity(), std::string name = {});
};

enum class LpStatus { Optimal, Infeasible, Unbounded, IterationLimit };

const char* to_string(LpStatus s);

struct LpResult {
  LpStatus status = LpStatus::Infeasible;
  double objective = 0;
  std::vector<double> x;
  std::vector<double> duals;  // one per row of the original program
  int iterations = 0;
};

// Revised simplex with an explicit basis inverse. Columns may be appended after
// a solve; the next solve restarts from the previous basis.
class SimplexSolver {
 public:
  explicit SimplexSolver(const LinearProgram& lp);
  ~SimplexSolver();
  SimplexSolver(const SimplexSolver&) = delete;
  SimplexSolver& operator=(const SimplexSolver&) = delete;

  int add_column(const LinearProgram::Column& col);
  LpResult solve(int max_iterations = 1'000'000);
  int n_cols() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

LpResult solve_lp(const LinearProgram& lp);

// CPLEX LP text format.
void write_lp_format(std::ostream& out, const LinearProgram& lp);

}  // namespace fracvrp
