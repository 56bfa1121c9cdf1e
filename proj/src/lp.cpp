#include "fracvrp/lp.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <cstdint>

#include "fracvrp/error.hpp"

namespace fracvrp {

int LinearProgram::add_row(RowSense s, double b, std::string name) {
  sense.push_back(s);
  rhs.push_back(b);
  row_names.push_back(std::move(name));
  return n_rows() - 1;
}

int LinearProgram::add_column(double cost, std::vector<int> rows, std::vector<double> vals, double upper,
                              std::string name) {
  if (rows.size() != vals.size()) throw InvalidInput("column rows/values size mismatch");
  cols.push_back({cost, std::move(rows), std::move(vals), upper, std::move(name)});
  return n_cols() - 1;
}

const char* to_string(LpStatus s) {
  switch (s) {
    case LpStatus::Optimal:
      return "Optimal";
    case LpStatus::Infeasible:
      return "Infeasible";
    case LpStatus::Unbounded:
      return "Unbounded";
    case LpStatus::IterationLimit:
      return "IterationLimit";
  }
  return "?";
}

namespace {

constexpr double kPivotTol = 1e-7;
constexpr double kHarrisTol = 1e-9;
constexpr double kFeasTol = 1e-9;
constexpr double kOptTol = 1e-9;
constexpr int kRefactorEvery = 50;
constexpr int kDegenerateStall = 60;
constexpr int kBlandAfter = 5000;  // degenerate pivots tolerated after perturbing
constexpr double kPerturb = 1e-7;

enum class VarKind { Structural, Slack, Artificial };
enum class RunStatus { Optimal, Unbounded, IterationLimit, Restart };

}  // namespace

struct SimplexSolver::Impl {
  int m = 0;
  int n_original_rows = 0;
  int n_struct = 0;
  std::vector<double> sign;  // row multiplier making rhs >= 0
  std::vector<double> b;
  std::vector<std::vector<int>> col_rows;
  std::vector<std::vector<double>> col_vals;
  std::vector<double> cost;
  std::vector<VarKind> kind;
  std::vector<int> struct_var;  // structural index -> variable
  std::vector<int> struct_of;   // variable -> structural index or -1
  std::vector<int> basis;       // row -> variable
  std::vector<int> where;       // variable -> basis row or -1
  std::vector<double> binv;     // m x m
  std::vector<double> xb;
  std::vector<int> unit_var;  // per row, a variable whose column is a signed unit vector
  double cost_scale = 1;
  bool phase2_ready = false;
  std::vector<double> b_orig;  // set while b carries a perturbation

  double& B(int r, int c) { return binv[static_cast<std::size_t>(r) * m + c]; }

  int add_var(std::vector<int> rows, std::vector<double> vals, double c, VarKind k) {
    for (std::size_t e = 0; e < rows.size(); ++e) vals[e] *= sign[rows[e]];
    col_rows.push_back(std::move(rows));
    col_vals.push_back(std::move(vals));
    cost.push_back(c);
    kind.push_back(k);
    where.push_back(-1);
    struct_of.push_back(k == VarKind::Structural ? static_cast<int>(struct_var.size()) : -1);
    return static_cast<int>(cost.size()) - 1;
  }

  // Returns true when dependent basis columns had to be replaced by unit columns.
  bool refactor() {
    bool repaired = false;
    std::vector<int> row_at(m);
    for (int r = 0; r < m; ++r) row_at[r] = r;
    std::vector<double> a(static_cast<std::size_t>(m) * m, 0.0);
    for (int r = 0; r < m; ++r) {
      int v = basis[r];
      for (std::size_t e = 0; e < col_rows[v].size(); ++e) a[static_cast<std::size_t>(col_rows[v][e]) * m + r] = col_vals[v][e];
    }
    binv.assign(static_cast<std::size_t>(m) * m, 0.0);
    for (int r = 0; r < m; ++r) B(r, r) = 1.0;
    for (int c = 0; c < m; ++c) {
      int piv = c;
      for (int r = c + 1; r < m; ++r)
        if (std::fabs(a[static_cast<std::size_t>(r) * m + c]) > std::fabs(a[static_cast<std::size_t>(piv) * m + c])) piv = r;
      if (std::fabs(a[static_cast<std::size_t>(piv) * m + c]) < 1e-11) {
        // Swap in the unit column of a row not pivoted yet.
        const int row = row_at[c];
        const int u = unit_var[row];
        if (where[u] >= 0) throw std::runtime_error("singular basis");
        const double sgn = col_vals[u][0];
        where[basis[c]] = -1;
        basis[c] = u;
        where[u] = c;
        for (int r = 0; r < m; ++r) a[static_cast<std::size_t>(r) * m + c] = sgn * B(r, row);
        piv = c;
        repaired = true;
      }
      if (piv != c) {
        std::swap(row_at[piv], row_at[c]);
        for (int k = 0; k < m; ++k) {
          std::swap(a[static_cast<std::size_t>(piv) * m + k], a[static_cast<std::size_t>(c) * m + k]);
          std::swap(B(piv, k), B(c, k));
        }
      }
      double inv = 1.0 / a[static_cast<std::size_t>(c) * m + c];
      for (int k = 0; k < m; ++k) {
        a[static_cast<std::size_t>(c) * m + k] *= inv;
        B(c, k) *= inv;
      }
      for (int r = 0; r < m; ++r) {
        if (r == c) continue;
        double f = a[static_cast<std::size_t>(r) * m + c];
        if (f == 0.0) continue;
        for (int k = 0; k < m; ++k) {
          a[static_cast<std::size_t>(r) * m + k] -= f * a[static_cast<std::size_t>(c) * m + k];
          B(r, k) -= f * B(c, k);
        }
      }
    }
    xb.assign(m, 0.0);
    for (int r = 0; r < m; ++r) {
      double s = 0;
      for (int k = 0; k < m; ++k) s += B(r, k) * b[k];
      xb[r] = std::fabs(s) < kFeasTol ? 0.0 : s;
    }
    return repaired;
  }

  void column(int v, std::vector<double>& out) {
    out.assign(m, 0.0);
    for (std::size_t e = 0; e < col_rows[v].size(); ++e) {
      int row = col_rows[v][e];
      double val = col_vals[v][e];
      for (int r = 0; r < m; ++r) out[r] += B(r, row) * val;
    }
  }

  void pivot(int p, int enter, const std::vector<double>& alpha) {
    double ap = alpha[p];
    double step = std::max(0.0, xb[p] / ap);
    for (int k = 0; k < m; ++k) B(p, k) /= ap;
    for (int r = 0; r < m; ++r) {
      if (r == p || alpha[r] == 0.0) continue;
      double f = alpha[r];
      for (int k = 0; k < m; ++k) B(r, k) -= f * B(p, k);
      xb[r] -= f * step;
      if (std::fabs(xb[r]) < kFeasTol) xb[r] = 0.0;
    }
    xb[p] = step;
    for (int r = 0; r < m; ++r)
      if (xb[r] < 0 && xb[r] > -1e-6) xb[r] = 0.0;
    where[basis[p]] = -1;
    basis[p] = enter;
    where[enter] = p;
  }

  double phase_cost(int v, int phase) const {
    if (phase == 1) return kind[v] == VarKind::Artificial ? 1.0 : 0.0;
    return cost[v];
  }

  // Shifts b so that every basic variable gains a small positive amount.
  void perturb() {
    b_orig = b;
    double bmax = 1;
    for (double v : b) bmax = std::max(bmax, std::fabs(v));
    std::uint32_t h = 12345;
    for (int r = 0; r < m; ++r) {
      h = h * 1664525U + 1013904223U;
      const double delta = kPerturb * bmax * (1.0 + (h >> 8) / 16777216.0);
      const int v = basis[r];
      for (std::size_t e = 0; e < col_rows[v].size(); ++e) b[col_rows[v][e]] += delta * col_vals[v][e];
    }
    refactor();
  }

  // Dual simplex passes that restore primal feasibility after the perturbation is removed.
  // Returns false when the basis had to be repaired.
  bool dual_cleanup(int phase, int& iterations, int max_iterations) {
    std::vector<double> y(m), alpha;
    const int nvar = static_cast<int>(cost.size());
    double bmax = 1;
    for (double v : b) bmax = std::max(bmax, std::fabs(v));
    int since_refactor = 0;
    while (iterations < max_iterations) {
      int r = -1;
      for (int k = 0; k < m; ++k)
        if (xb[k] < -kFeasTol * bmax && (r < 0 || xb[k] < xb[r])) r = k;
      if (r < 0) return true;
      for (int k = 0; k < m; ++k) {
        double s = 0;
        for (int q = 0; q < m; ++q) s += phase_cost(basis[q], phase) * B(q, k);
        y[k] = s;
      }
      int enter = -1;
      double best = kInfRatio;
      for (int v = 0; v < nvar; ++v) {
        if (where[v] >= 0 || kind[v] == VarKind::Artificial) continue;
        double a = 0, d = phase_cost(v, phase);
        for (std::size_t e = 0; e < col_rows[v].size(); ++e) {
          a += B(r, col_rows[v][e]) * col_vals[v][e];
          d -= y[col_rows[v][e]] * col_vals[v][e];
        }
        if (a >= -kPivotTol) continue;
        double q = std::max(0.0, d) / -a;
        if (q < best) {
          best = q;
          enter = v;
        }
      }
      if (enter < 0) {
        xb[r] = 0.0;
        continue;
      }
      column(enter, alpha);
      pivot(r, enter, alpha);
      ++iterations;
      if (++since_refactor >= kRefactorEvery) {
        if (refactor()) return false;
        since_refactor = 0;
      }
    }
    return true;
  }

  RunStatus run(int phase, int& iterations, int max_iterations) {
    RunStatus st = run_primal(phase, iterations, max_iterations);
    while (!b_orig.empty()) {
      b = b_orig;
      b_orig.clear();
      if (refactor() || !dual_cleanup(phase, iterations, max_iterations)) return RunStatus::Restart;
      if (st != RunStatus::Optimal) return st;
      st = run_primal(phase, iterations, max_iterations);
    }
    return st;
  }

  RunStatus run_primal(int phase, int& iterations, int max_iterations) {
    std::vector<double> y(m), alpha;
    int since_refactor = 0;
    int degenerate = 0;
    double scale = phase == 1 ? 1.0 : cost_scale;
    const int nvar = static_cast<int>(cost.size());
    while (true) {
      if (iterations >= max_iterations) return RunStatus::IterationLimit;
      for (int k = 0; k < m; ++k) {
        double s = 0;
        for (int r = 0; r < m; ++r) s += phase_cost(basis[r], phase) * B(r, k);
        y[k] = s;
      }
      if (degenerate >= kDegenerateStall && b_orig.empty()) {
        perturb();
        degenerate = 0;
        since_refactor = 0;
      }
      bool bland = !b_orig.empty() && degenerate >= kBlandAfter;
      int enter = -1;
      double best = -kOptTol * scale;
      for (int v = 0; v < nvar; ++v) {
        if (where[v] >= 0 || kind[v] == VarKind::Artificial) continue;
        double d = phase_cost(v, phase);
        for (std::size_t e = 0; e < col_rows[v].size(); ++e) d -= y[col_rows[v][e]] * col_vals[v][e];
        if (d < best) {
          enter = v;
          if (bland) break;
          best = d;
        }
      }
      if (enter < 0) return RunStatus::Optimal;
      column(enter, alpha);
      double ratio = kInfRatio;
      // A basic artificial left at zero must stay there in phase 2.
      auto blocks = [&](int r) {
        return alpha[r] > kPivotTol || (phase == 2 && kind[basis[r]] == VarKind::Artificial && alpha[r] < -kPivotTol);
      };
      auto ratio_of = [&](int r) { return alpha[r] > 0 ? xb[r] / alpha[r] : 0.0; };
      // Two-pass (Harris) test: widen the bound slightly, then take the largest pivot.
      for (int r = 0; r < m; ++r)
        if (blocks(r)) ratio = std::min(ratio, alpha[r] > 0 ? (xb[r] + kHarrisTol) / alpha[r] : 0.0);
      int leave = -1;
      double exact = kInfRatio;
      for (int r = 0; r < m; ++r)
        if (blocks(r)) exact = std::min(exact, ratio_of(r));
      for (int r = 0; r < m; ++r) {
        if (!blocks(r)) continue;
        if (bland ? ratio_of(r) > exact + 1e-12 : ratio_of(r) > ratio) continue;
        if (leave < 0 || (bland ? basis[r] < basis[leave] : std::fabs(alpha[r]) > std::fabs(alpha[leave]))) leave = r;
      }
      if (leave < 0) return RunStatus::Unbounded;
      ratio = ratio_of(leave);
      degenerate = ratio <= 1e-12 ? degenerate + 1 : 0;
      pivot(leave, enter, alpha);
      ++iterations;
      if (++since_refactor >= kRefactorEvery) {
        if (refactor()) return RunStatus::Restart;
        since_refactor = 0;
      }
    }
  }

  static constexpr double kInfRatio = std::numeric_limits<double>::infinity();

  void drive_out_artificials() {
    std::vector<double> alpha;
    for (int r = 0; r < m; ++r) {
      int v = basis[r];
      if (kind[v] != VarKind::Artificial) continue;
      // Row r of B^-1 A over non-artificial nonbasic columns.
      int best_var = -1;
      double best_val = 1e-7;
      for (int u = 0; u < static_cast<int>(cost.size()); ++u) {
        if (where[u] >= 0 || kind[u] == VarKind::Artificial) continue;
        double s = 0;
        for (std::size_t e = 0; e < col_rows[u].size(); ++e) s += B(r, col_rows[u][e]) * col_vals[u][e];
        if (std::fabs(s) > best_val) {
          best_val = std::fabs(s);
          best_var = u;
        }
      }
      if (best_var < 0) continue;
      column(best_var, alpha);
      pivot(r, best_var, alpha);
    }
    refactor();
  }

  bool artificial_positive() const {
    for (int r = 0; r < m; ++r)
      if (kind[basis[r]] == VarKind::Artificial && xb[r] > kFeasTol) return true;
    return false;
  }
};

SimplexSolver::SimplexSolver(const LinearProgram& lp) : impl_(std::make_unique<Impl>()) {
  Impl& s = *impl_;
  std::vector<RowSense> sense = lp.sense;
  std::vector<double> rhs = lp.rhs;
  s.n_original_rows = lp.n_rows();
  if (lp.rhs.size() != lp.sense.size()) throw InvalidInput("row sense/rhs size mismatch");
  std::vector<std::pair<int, int>> bound_rows;  // (structural, row)
  for (int j = 0; j < lp.n_cols(); ++j) {
    const auto& c = lp.cols[j];
    for (int r : c.rows)
      if (r < 0 || r >= lp.n_rows()) throw InvalidInput("column references missing row");
    if (!std::isfinite(c.cost)) throw InvalidInput("non-finite column cost");
    if (std::isfinite(c.upper)) {
      bound_rows.emplace_back(j, static_cast<int>(sense.size()));
      sense.push_back(RowSense::Le);
      rhs.push_back(c.upper);
    }
  }
  s.m = static_cast<int>(sense.size());
  s.b = rhs;
  s.sign.assign(s.m, 1.0);
  for (int r = 0; r < s.m; ++r) {
    if (rhs[r] < 0) {
      s.sign[r] = -1.0;
      s.b[r] = -rhs[r];
      if (sense[r] == RowSense::Le) {
        sense[r] = RowSense::Ge;
      } else if (sense[r] == RowSense::Ge) {
        sense[r] = RowSense::Le;
      }
    }
  }
  std::size_t next_bound = 0;
  for (int j = 0; j < lp.n_cols(); ++j) {
    auto rows = lp.cols[j].rows;
    auto vals = lp.cols[j].vals;
    if (next_bound < bound_rows.size() && bound_rows[next_bound].first == j) {
      rows.push_back(bound_rows[next_bound].second);
      vals.push_back(1.0);
      ++next_bound;
    }
    s.struct_var.push_back(s.add_var(std::move(rows), std::move(vals), lp.cols[j].cost, VarKind::Structural));
    s.cost_scale = std::max(s.cost_scale, std::fabs(lp.cols[j].cost));
  }
  s.n_struct = lp.n_cols();
  s.basis.assign(s.m, -1);
  s.unit_var.assign(s.m, -1);
  for (int r = 0; r < s.m; ++r) {
    // Slack columns are stored pre-sign so that the normalized row reads +s (Le) or -s (Ge).
    if (sense[r] == RowSense::Le) {
      int v = s.add_var({r}, {s.sign[r]}, 0.0, VarKind::Slack);
      s.basis[r] = v;
      s.unit_var[r] = v;
    } else if (sense[r] == RowSense::Ge) {
      s.unit_var[r] = s.add_var({r}, {-s.sign[r]}, 0.0, VarKind::Slack);
    }
  }
  for (int r = 0; r < s.m; ++r) {
    if (s.basis[r] < 0) {
      s.basis[r] = s.add_var({r}, {s.sign[r]}, 0.0, VarKind::Artificial);
      if (s.unit_var[r] < 0) s.unit_var[r] = s.basis[r];
    }
  }
  for (int r = 0; r < s.m; ++r) s.where[s.basis[r]] = r;
}

SimplexSolver::~SimplexSolver() = default;

int SimplexSolver::n_cols() const { return impl_->n_struct; }

int SimplexSolver::add_column(const LinearProgram::Column& col) {
  Impl& s = *impl_;
  if (std::isfinite(col.upper)) throw InvalidInput("bounded columns cannot be appended");
  for (int r : col.rows)
    if (r < 0 || r >= s.n_original_rows) throw InvalidInput("column references missing row");
  s.struct_var.push_back(s.add_var(col.rows, col.vals, col.cost, VarKind::Structural));
  s.cost_scale = std::max(s.cost_scale, std::fabs(col.cost));
  return s.n_struct++;
}

LpResult SimplexSolver::solve(int max_iterations) {
  Impl& s = *impl_;
  LpResult res;
  int iterations = 0;
  RunStatus st = RunStatus::Restart;
  while (st == RunStatus::Restart) {
    s.refactor();
    if (!s.phase2_ready || s.artificial_positive()) {
      bool any_art = false;
      for (int r = 0; r < s.m; ++r) any_art |= s.kind[s.basis[r]] == VarKind::Artificial;
      if (any_art) {
        RunStatus p1 = s.run(1, iterations, max_iterations);
        if (p1 == RunStatus::Restart) continue;
        if (p1 == RunStatus::IterationLimit) {
          res.status = LpStatus::IterationLimit;
          res.iterations = iterations;
          return res;
        }
        s.refactor();
        double infeas = 0;
        for (int r = 0; r < s.m; ++r)
          if (s.kind[s.basis[r]] == VarKind::Artificial) infeas += s.xb[r];
        double bscale = 1;
        for (double v : s.b) bscale = std::max(bscale, std::fabs(v));
        if (infeas > 1e-7 * bscale) {
          res.status = LpStatus::Infeasible;
          res.iterations = iterations;
          return res;
        }
        s.drive_out_artificials();
      }
      s.phase2_ready = true;
    }
    st = s.run(2, iterations, max_iterations);
  }
  res.iterations = iterations;
  res.status = st == RunStatus::Optimal     ? LpStatus::Optimal
               : st == RunStatus::Unbounded ? LpStatus::Unbounded
                                            : LpStatus::IterationLimit;
  if (res.status != LpStatus::Optimal) return res;
  s.refactor();
  res.x.assign(s.n_struct, 0.0);
  for (int r = 0; r < s.m; ++r) {
    int v = s.basis[r];
    if (s.kind[v] != VarKind::Structural) continue;
    double val = std::max(0.0, s.xb[r]);
    res.x[s.struct_of[v]] = val;
  }
  res.objective = 0;
  for (int j = 0; j < s.n_struct; ++j) res.objective += s.cost[s.struct_var[j]] * res.x[j];
  res.duals.assign(s.n_original_rows, 0.0);
  for (int k = 0; k < s.n_original_rows; ++k) {
    double y = 0;
    for (int r = 0; r < s.m; ++r) y += s.cost[s.basis[r]] * s.B(r, k);
    res.duals[k] = y * s.sign[k];
  }
  return res;
}

LpResult solve_lp(const LinearProgram& lp) {
  SimplexSolver solver(lp);
  return solver.solve();
}

void write_lp_format(std::ostream& out, const LinearProgram& lp) {
  auto var = [&](int j) { return lp.cols[j].name.empty() ? "x" + std::to_string(j) : lp.cols[j].name; };
  auto term = [&](double v, const std::string& name, bool first) {
    std::ostringstream t;
    t << std::setprecision(12);
    if (v < 0) {
      t << (first ? "- " : " - ") << -v << ' ' << name;
    } else {
      t << (first ? "" : " + ") << v << ' ' << name;
    }
    return t.str();
  };
  out << "Minimize\n obj:";
  bool first = true;
  for (int j = 0; j < lp.n_cols(); ++j) {
    out << ' ' << term(lp.cols[j].cost, var(j), first);
    first = false;
  }
  if (first) out << " 0 x0";
  out << "\nSubject To\n";
  std::vector<std::vector<std::pair<int, double>>> rows(lp.n_rows());
  for (int j = 0; j < lp.n_cols(); ++j)
    for (std::size_t e = 0; e < lp.cols[j].rows.size(); ++e) rows[lp.cols[j].rows[e]].emplace_back(j, lp.cols[j].vals[e]);
  for (int r = 0; r < lp.n_rows(); ++r) {
    std::string name = lp.row_names[r].empty() ? "r" + std::to_string(r) : lp.row_names[r];
    out << ' ' << name << ':';
    bool f = true;
    for (const auto& [j, v] : rows[r]) {
      out << ' ' << term(v, var(j), f);
      f = false;
    }
    if (f) out << " 0 " << var(0);
    const char* rel = lp.sense[r] == RowSense::Eq ? "=" : lp.sense[r] == RowSense::Le ? "<=" : ">=";
    out << ' ' << rel << ' ' << std::setprecision(12) << lp.rhs[r] << '\n';
  }
  out << "Bounds\n";
  for (int j = 0; j < lp.n_cols(); ++j) {
    if (std::isfinite(lp.cols[j].upper)) {
      out << " 0 <= " << var(j) << " <= " << lp.cols[j].upper << '\n';
    }
  }
  out << "End\n";
}

}  // namespace fracvrp
