#include <algorithm>
#include <chrono>
#include <cmath>
#include <set>

#include "fracvrp/bounds.hpp"
#include "fracvrp/error.hpp"
#include "fracvrp/heuristic.hpp"
#include "fracvrp/lp.hpp"

namespace fracvrp {

namespace {

double artificial_cost(const Instance& inst) {
  int max_d = 1, min_s = inst.service[1];
  for (int i = 0; i < inst.n_vertices(); ++i)
    for (int j = 0; j < inst.n_vertices(); ++j) max_d = std::max(max_d, std::abs(inst.d(i, j)));
  for (int i = 1; i < inst.n_vertices(); ++i) min_s = std::min(min_s, inst.service[i]);
  return 1e3 * (1.0 + 2.0 * max_d / std::max(1, min_s)) * inst.n_vertices();
}

std::vector<Route> seed_routes(const Instance& inst, const std::optional<Solution>& incumbent) {
  std::vector<Route> out;
  if (incumbent) out = incumbent->routes;
  for (int i = 1; i < inst.n_vertices(); ++i) {
    Route r = make_route(inst, {0, i, 0});
    if (r.working_time <= inst.T) out.push_back(std::move(r));
  }
  return out;
}

LinearProgram::Column ccf_column(const Instance& inst, const Route& r) {
  LinearProgram::Column col;
  col.cost = static_cast<double>(r.cost);
  col.rows.push_back(0);
  col.vals.push_back(1.0);
  for (int i = 1; i < inst.n_vertices(); ++i)
    if (r.visits[i]) {
      col.rows.push_back(i);
      col.vals.push_back(r.visits[i]);
    }
  col.rows.push_back(inst.n_vertices());
  col.vals.push_back(static_cast<double>(r.working_time));
  return col;
}

// Column of the parametric master min Σ(c - r w) x.
LinearProgram::Column cf_column(const Instance& inst, const Route& r, double ratio) {
  LinearProgram::Column col;
  col.cost = static_cast<double>(r.cost) - ratio * static_cast<double>(r.working_time);
  col.rows.push_back(0);
  col.vals.push_back(1.0);
  for (int i = 1; i < inst.n_vertices(); ++i)
    if (r.visits[i]) {
      col.rows.push_back(i);
      col.vals.push_back(r.visits[i]);
    }
  return col;
}

}  // namespace

BoundReport run_cg(BoundContext& ctx, const CgParams& params) {
  const auto t0 = std::chrono::steady_clock::now();
  const Instance& inst = *ctx.inst;
  const int nv = inst.n_vertices();
  BoundReport rep;
  rep.procedure = "CG";
  if (!ctx.incumbent) keep_best(ctx.incumbent, insertion_heuristic(inst));

  LinearProgram lp;
  lp.add_row(RowSense::Le, 0.0, "fleet");
  for (int i = 1; i < nv; ++i) lp.add_row(inst.mandatory(i) ? RowSense::Eq : RowSense::Le, 0.0);
  lp.add_row(RowSense::Eq, 1.0, "time");
  {
    std::vector<int> rows{0};
    std::vector<double> vals{-static_cast<double>(inst.m)};
    for (int i = 1; i < nv; ++i) {
      rows.push_back(i);
      vals.push_back(-1.0);
    }
    lp.add_column(0.0, rows, vals, kInf, "u");
  }
  const double big = artificial_cost(inst);
  for (int i = 1; i <= inst.n1; ++i) lp.add_column(big, {i, nv}, {1.0, static_cast<double>(inst.service[i])});
  const int n_fixed = lp.n_cols();

  std::vector<Route> pool;
  std::set<std::vector<int>> seen;
  for (Route& r : seed_routes(inst, ctx.incumbent))
    if (seen.insert(r.vertices).second) {
      auto col = ccf_column(inst, r);
      lp.add_column(col.cost, col.rows, col.vals);
      pool.push_back(std::move(r));
    }

  SimplexSolver solver(lp);
  LpResult res;
  for (int round = 0; round < params.max_rounds; ++round) {
    res = solver.solve();
    if (res.status != LpStatus::Optimal) throw Infeasible(std::string("CCF master: ") + to_string(res.status));
    rep.iterations = round + 1;
    CcfDuals duals;
    duals.mu.assign(res.duals.begin(), res.duals.begin() + nv);
    duals.omega = res.duals[nv];
    auto priced = price_ng_routes(inst, ctx.forward, duals, -1e-7 * (1 + std::fabs(res.objective)), params.price_limit);
    int added = 0;
    for (auto& pr : priced) {
      if (!seen.insert(pr.route.vertices).second) continue;
      solver.add_column(ccf_column(inst, pr.route));
      pool.push_back(std::move(pr.route));
      ++added;
    }
    if (added == 0) {
      DualSolution d;
      d.mu = duals.mu;
      d.omega = duals.omega;
      d.beta = static_cast<double>(inst.beta());
      d.cbar0 = inst.m * d.mu[0];
      for (int i = 1; i < nv; ++i) d.cbar0 += d.mu[i];
      d.value = res.objective;
      rep.duals = d;
      break;
    }
  }
  for (int i = 1; i <= inst.n1; ++i)
    if (res.x[i] > 1e-7) throw Infeasible("continuous relaxation is infeasible");
  rep.dual_bound = res.objective;
  rep.columns = static_cast<int>(pool.size());

  std::vector<std::pair<double, int>> order;
  for (int l = 0; l < static_cast<int>(pool.size()); ++l)
    if (pool[l].elementary && pool[l].working_time <= inst.T) order.emplace_back(-res.x[n_fixed + l], l);
  std::stable_sort(order.begin(), order.end());
  std::vector<Route> cand;
  for (const auto& [x, l] : order) cand.push_back(pool[l]);
  keep_best(ctx.incumbent, greedy_from_routes(inst, cand));
  rep.primal = ctx.incumbent;
  rep.elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

BoundReport run_dk(BoundContext& ctx, const CgParams& params) {
  const auto t0 = std::chrono::steady_clock::now();
  const Instance& inst = *ctx.inst;
  const int nv = inst.n_vertices();
  BoundReport rep;
  rep.procedure = "DK";
  if (!ctx.incumbent) keep_best(ctx.incumbent, insertion_heuristic(inst));
  if (!ctx.incumbent) throw Infeasible("no starting solution for the parametric iteration");

  const double big = artificial_cost(inst);
  std::vector<Route> pool;
  std::set<std::vector<int>> seen;
  for (Route& r : seed_routes(inst, ctx.incumbent))
    if (seen.insert(r.vertices).second) pool.push_back(std::move(r));

  double ratio = ctx.incumbent->value.value();
  for (int outer = 0; outer < 100; ++outer) {
    rep.iterations = outer + 1;
    LinearProgram lp;
    lp.add_row(RowSense::Le, inst.m, "fleet");
    for (int i = 1; i < nv; ++i) lp.add_row(inst.mandatory(i) ? RowSense::Eq : RowSense::Le, 1.0);
    for (int i = 1; i <= inst.n1; ++i) lp.add_column(big, {i}, {1.0});
    const int n_fixed = lp.n_cols();
    for (const Route& r : pool) {
      auto col = cf_column(inst, r, ratio);
      lp.add_column(col.cost, col.rows, col.vals);
    }
    SimplexSolver solver(lp);
    LpResult res;
    for (int round = 0; round < params.max_rounds; ++round) {
      res = solver.solve();
      if (res.status != LpStatus::Optimal) throw Infeasible(std::string("parametric master: ") + to_string(res.status));
      CcfDuals duals;
      duals.mu = res.duals;
      duals.omega = ratio;
      auto priced = price_ng_routes(inst, ctx.forward, duals, -1e-7 * (1 + std::fabs(res.objective)), params.price_limit);
      int added = 0;
      for (auto& pr : priced) {
        if (!seen.insert(pr.route.vertices).second) continue;
        solver.add_column(cf_column(inst, pr.route, ratio));
        pool.push_back(std::move(pr.route));
        ++added;
      }
      if (added == 0) break;
    }
    for (int i = 1; i <= inst.n1; ++i)
      if (res.x[i - 1] > 1e-7) throw Infeasible("continuous relaxation is infeasible");
    if (res.objective >= -1e-9 * (1 + std::fabs(ratio))) break;
    double num = 0, den = 0;
    for (int l = 0; l < static_cast<int>(pool.size()); ++l) {
      double x = res.x[n_fixed + l];
      num += x * static_cast<double>(pool[l].cost);
      den += x * static_cast<double>(pool[l].working_time);
    }
    ratio = num / den;
  }
  rep.dual_bound = ratio;
  rep.columns = static_cast<int>(pool.size());
  rep.primal = ctx.incumbent;
  rep.elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

}  // namespace fracvrp
