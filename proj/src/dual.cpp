#include <algorithm>
#include <cmath>

#include "fracvrp/bounds.hpp"
#include "fracvrp/error.hpp"
#include "fracvrp/lp.hpp"

namespace fracvrp {

double total_time_lower_bound(const Instance& inst) {
  double total = 0;
  for (int i = 1; i <= inst.n1; ++i) {
    int best = inst.t(0, i);
    for (int j = 1; j < inst.n_vertices(); ++j)
      if (j != i) best = std::min(best, inst.t(j, i));
    total += inst.service[i] + best;
  }
  return total;
}

BoundContext make_bound_context(const Instance& inst, int delta_ng) {
  BoundContext ctx;
  ctx.inst = &inst;
  ctx.ng = build_ng_sets(inst, delta_ng);
  ctx.forward = build_ng_space(inst, ctx.ng, false);
  ctx.t_lower = total_time_lower_bound(inst);
  return ctx;
}

namespace {

// Route quantities shared by the NCF coefficients.
struct NcfColumn {
  double wbar = 0;  // w - Σ_F a_i s_i
  double sum_a_pi = 0;
};

NcfColumn ncf_column(const Instance& inst, const Route& r, const std::vector<double>& pi) {
  NcfColumn col;
  col.wbar = static_cast<double>(r.working_time);
  for (int v : r.customers()) {
    if (!inst.mandatory(v)) continue;
    col.wbar -= inst.service[v];
    col.sum_a_pi += pi[v];
  }
  return col;
}

}  // namespace

Theorem1Result theorem1_evaluate(const Instance& inst, const std::vector<double>& lambda,
                                 const std::vector<double>& pi, const std::vector<Route>& core) {
  const int nv = inst.n_vertices();
  const double beta = static_cast<double>(inst.beta());
  const double m = inst.m;
  double Lambda = 0, Pi = 0;
  for (int i = 1; i < nv; ++i) Lambda += lambda[i];
  for (int i = 1; i <= inst.n1; ++i) Pi += pi[i];

  std::vector<double> best(nv, kInf);
  std::vector<int> arg(nv, -1);
  double shared = kInf;  // routes with wbar > 0 belong to every R_i
  int shared_arg = -1;
  for (int l = 0; l < static_cast<int>(core.size()); ++l) {
    const Route& r = core[l];
    NcfColumn col = ncf_column(inst, r, pi);
    double sum_a_lambda = 0;
    for (int v : r.customers()) sum_a_lambda += lambda[v];
    double lam_r = beta * sum_a_lambda + col.wbar * Lambda;
    double bbar = beta + m * col.wbar;
    double pi_r = beta * col.sum_a_pi + col.wbar * Pi;
    if (pi_r <= 0) continue;
    double ratio = (static_cast<double>(r.cost) - lam_r - bbar * lambda[0]) / pi_r;
    if (col.wbar > 1e-12) {
      if (ratio < shared) {
        shared = ratio;
        shared_arg = l;
      }
    } else {
      for (int v : r.customers()) {
        if (inst.mandatory(v) && ratio < best[v]) {
          best[v] = ratio;
          arg[v] = l;
        }
      }
    }
  }

  Theorem1Result res;
  res.v.assign(nv, 0.0);
  res.argmin.assign(nv, -1);
  res.v[0] = lambda[0];
  res.value = m * lambda[0];
  for (int i = 1; i < nv; ++i) {
    if (inst.mandatory(i)) {
      double b = best[i];
      int a = arg[i];
      if (shared < b) {
        b = shared;
        a = shared_arg;
      }
      if (a < 0) throw InvalidInput("core does not cover mandatory customer " + std::to_string(i));
      res.v[i] = pi[i] * b + lambda[i];
      res.argmin[i] = a;
    } else {
      res.v[i] = lambda[i];
    }
    res.value += res.v[i];
  }
  return res;
}

DualSolution theorem2_transform(const Instance& inst, const std::vector<double>& v) {
  const int nv = inst.n_vertices();
  DualSolution d;
  d.v = v;
  d.beta = static_cast<double>(inst.beta());
  d.omega = inst.m * v[0];
  for (int i = 1; i < nv; ++i) d.omega += v[i];
  d.mu.assign(nv, 0.0);
  d.mu[0] = d.beta * v[0];
  for (int i = 1; i < nv; ++i) {
    d.mu[i] = d.beta * v[i];
    if (inst.mandatory(i)) d.mu[i] -= inst.service[i] * d.omega;
  }
  d.cbar0 = inst.m * d.mu[0];
  for (int i = 1; i < nv; ++i) d.cbar0 += d.mu[i];
  d.value = d.omega;
  return d;
}

MasterResult solve_ncf(const Instance& inst, const std::vector<Route>& routes) {
  const int nv = inst.n_vertices();
  const double beta = static_cast<double>(inst.beta());
  std::vector<double> pi(inst.service.begin(), inst.service.end());
  LinearProgram lp;
  lp.add_row(RowSense::Le, inst.m, "fleet");
  for (int i = 1; i < nv; ++i) lp.add_row(inst.mandatory(i) ? RowSense::Eq : RowSense::Le, 1.0);
  for (const Route& r : routes) {
    NcfColumn col = ncf_column(inst, r, pi);
    std::vector<int> rows{0};
    std::vector<double> vals{beta + inst.m * col.wbar};
    for (int i = 1; i < nv; ++i) {
      double a = beta * r.visits[i] + col.wbar;
      if (a != 0) {
        rows.push_back(i);
        vals.push_back(a);
      }
    }
    lp.add_column(static_cast<double>(r.cost), rows, vals);
  }
  LpResult res = solve_lp(lp);
  MasterResult out;
  out.feasible = res.status == LpStatus::Optimal;
  out.value = res.objective;
  out.duals = res.duals;
  return out;
}

MasterResult solve_ccf(const Instance& inst, const std::vector<Route>& routes) {
  const int nv = inst.n_vertices();
  LinearProgram lp;
  lp.add_row(RowSense::Le, 0.0, "fleet");
  for (int i = 1; i < nv; ++i) lp.add_row(inst.mandatory(i) ? RowSense::Eq : RowSense::Le, 0.0);
  const int wrow = lp.add_row(RowSense::Eq, 1.0, "time");
  {
    std::vector<int> rows{0};
    std::vector<double> vals{-static_cast<double>(inst.m)};
    for (int i = 1; i < nv; ++i) {
      rows.push_back(i);
      vals.push_back(-1.0);
    }
    lp.add_column(0.0, rows, vals, kInf, "u");
  }
  for (const Route& r : routes) {
    std::vector<int> rows{0};
    std::vector<double> vals{1.0};
    for (int i = 1; i < nv; ++i)
      if (r.visits[i]) {
        rows.push_back(i);
        vals.push_back(r.visits[i]);
      }
    rows.push_back(wrow);
    vals.push_back(static_cast<double>(r.working_time));
    lp.add_column(static_cast<double>(r.cost), rows, vals);
  }
  LpResult res = solve_lp(lp);
  MasterResult out;
  out.feasible = res.status == LpStatus::Optimal;
  out.value = res.objective;
  out.duals = res.duals;
  return out;
}

}  // namespace fracvrp
