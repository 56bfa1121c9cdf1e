#pragma once

#include <iosfwd>
#include <limits>
#include <vector>

#include "fracvrp/bounds.hpp"
#include "fracvrp/core.hpp"
#include "fracvrp/genr.hpp"
#include "fracvrp/instance.hpp"

namespace fracvrp {

struct ExactParams {
  int itermax = 3;
  long long delta_max = 300'000;
  double tlim = 3600;
  double gapmax = std::numeric_limits<double>::infinity();
  double eps1 = 5;
  double eps2 = 3600;
  long long nstatb = 200'000'000;
  int delta_ng = 12;
  bool dominance = true;
  bool keep_route_sets = false;
  DaParams da;
  CbParams cb;
};

enum class ExactStatus { Optimal, GapReached, IterLimit };

const char* to_string(ExactStatus s);

struct ExactIteration {
  long long routes = 0;
  bool hit_delta_max = false;
  bool hit_nstatb = false;
  Ratio value;  // optimum (or best) of the reduced problem
  int dinkelbach_iterations = 0;
  double db_new = 0;
  double elapsed = 0;
  bool reduced_optimal = false;
  bool fp_optimal = false;
};

struct ExactResult {
  ExactStatus status = ExactStatus::IterLimit;
  Solution best;
  double dual_bound = 0;
  double db_cb = 0;
  double db_da = 0;
  int m_min = 0;
  int m_max = 0;
  DualSolution duals;
  std::vector<ExactIteration> trace;
  std::vector<ReducedSet> route_sets;  // filled when keep_route_sets is set
  double elapsed = 0;
};

ExactResult solve_exact(const Instance& inst, const ExactParams& params = {});

struct DinkelbachStep {
  Ratio r;            // r_i
  long long z = 0;    // z(FP(r_i)) scaled by the denominator of r_i
  long long d = 0;    // d(x^i)
  bool optimal = false;
};

struct DinkelbachResult {
  Solution solution;
  bool fp_optimal = false;
  std::vector<DinkelbachStep> steps;
};

// Integer Dinkelbach iteration over a fixed route set. `x0` must consist of routes of `routes`.
// Throws CertificateViolation when a convergence property fails.
DinkelbachResult dinkelbach_reduced(const Instance& inst, const std::vector<Route>& routes, const Solution& x0,
                                    int m_min, int m_max, double tlim);

// Lower bound on the optimum implied by a solution and the reduced costs of its routes.
double solution_dual_gap_bound(const Instance& inst, const Solution& sol, const DualSolution& duals);

void write_trace_csv(std::ostream& out, const std::string& name, const ExactResult& res);

}  // namespace fracvrp
