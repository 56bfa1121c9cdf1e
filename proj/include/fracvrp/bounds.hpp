#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "fracvrp/core.hpp"
#include "fracvrp/instance.hpp"
#include "fracvrp/ngpath.hpp"

namespace fracvrp {

// Shared per-instance machinery for the bounding procedures.
struct BoundContext {
  const Instance* inst = nullptr;
  NgSets ng;
  NgStateSpace forward;
  double t_lower = 0;  // lower bound on the total working time of any solution
  std::optional<Solution> incumbent;
};

BoundContext make_bound_context(const Instance& inst, int delta_ng);

// Σ_{i∈F} s_i + Σ_{i∈F} min_{j≠i} t_ji.
double total_time_lower_bound(const Instance& inst);

struct DualSolution {
  std::vector<double> v;   // v[0] fleet row, v[i] customer rows
  std::vector<double> mu;  // mu[0] fleet row
  double omega = 0;
  double beta = 0;
  double cbar0 = 0;  // Σ mu_i + m mu_0
  double value = 0;  // certified lower bound on z(F)

  CcfDuals ccf() const { return {mu, omega}; }
};

struct BoundReport {
  std::string procedure;
  double dual_bound = -kInf;
  std::optional<Solution> primal;
  std::optional<DualSolution> duals;
  std::optional<int> m_min, m_max;
  double elapsed = 0;
  int columns = 0;
  int iterations = 0;
};

struct Theorem1Result {
  std::vector<double> v;
  double value = 0;
  std::vector<int> argmin;  // per mandatory customer, index into the core; -1 elsewhere
};

// v_i = φ_i + λ_i on F, v_i = λ_i on C, v_0 = λ_0, with φ_i taken over `core`.
// `lambda[0]` is the fleet penalty.
Theorem1Result theorem1_evaluate(const Instance& inst, const std::vector<double>& lambda,
                                 const std::vector<double>& pi, const std::vector<Route>& core);

// (μ, ω) from a DNCF vector; value is set to ω.
DualSolution theorem2_transform(const Instance& inst, const std::vector<double>& v);

// NCF and CCF masters over a fixed route set; used to cross-check the transformations.
struct MasterResult {
  bool feasible = false;
  double value = 0;
  std::vector<double> duals;  // row order: fleet, customers 1..n (and ω last for CCF)
};
MasterResult solve_ncf(const Instance& inst, const std::vector<Route>& routes);
MasterResult solve_ccf(const Instance& inst, const std::vector<Route>& routes);

struct DaParams {
  int max_iterations = 300;
  double time_limit = 100;
  int stall = 20;
  int price_limit = 30;
};

struct CbParams {
  int max_iterations = 200;  // Maxit3
  double epsilon = 1.0;
  // Step numerator |0.2 z*| is multiplied by t* when true, expressing it in cost units.
  bool step_in_cost_units = true;
};

struct CgParams {
  int price_limit = 50;
  int max_rounds = 100000;
};

BoundReport run_da(BoundContext& ctx, const DaParams& params = {});
BoundReport run_cb(BoundContext& ctx, const CbParams& params = {});
BoundReport run_cg(BoundContext& ctx, const CgParams& params = {});
BoundReport run_dk(BoundContext& ctx, const CgParams& params = {});

// g_n(t, k) for t in [0, m T], k in [0, m]; choice[i][k][t] is the time of the route
// ending at customer i in the optimum of g_i(t, k), or 0 when i is unused.
struct CbTables {
  int m = 0;
  int horizon = 0;
  std::vector<std::vector<double>> g;  // g[k][t] after the last customer
  std::vector<std::vector<std::vector<int>>> choice;
};

CbTables cb_g_recursion(const std::vector<std::vector<double>>& phi, int T, int m);

// (customer, time) pairs selected in the optimum of g_n(t, k).
std::vector<std::pair<int, int>> cb_backtrack(const CbTables& tab, int t, int k);

void write_bound_csv_header(std::ostream& out);
void write_bound_csv(std::ostream& out, const std::string& name, const std::vector<BoundReport>& reports,
                     double reference);

}  // namespace fracvrp
