#include <algorithm>
#include <chrono>
#include <cmath>

#include "fracvrp/bounds.hpp"
#include "fracvrp/heuristic.hpp"

namespace fracvrp {

CbTables cb_g_recursion(const std::vector<std::vector<double>>& phi, int T, int m) {
  const int n = static_cast<int>(phi.size()) - 1;
  CbTables tab;
  tab.m = m;
  tab.horizon = m * T;
  const int H = tab.horizon;
  std::vector<std::vector<double>> g(m + 1, std::vector<double>(H + 1, kInf));
  g[0][0] = 0;
  tab.choice.assign(n + 1, {});
  std::vector<int> times;
  for (int i = 1; i <= n; ++i) {
    times.clear();
    for (int t = 1; t <= T && t < static_cast<int>(phi[i].size()); ++t)
      if (phi[i][t] < kInf) times.push_back(t);
    auto& ch = tab.choice[i];
    ch.assign(m + 1, std::vector<int>(H + 1, 0));
    // Descending k keeps g[k-1] at its value before customer i.
    for (int k = m; k >= 1; --k) {
      for (int t = H; t >= 1; --t) {
        double best = g[k][t];
        int arg = 0;
        for (int tp : times) {
          if (tp > t) break;
          double prev = g[k - 1][t - tp];
          if (prev == kInf) continue;
          double c = prev + phi[i][tp];
          if (c < best) {
            best = c;
            arg = tp;
          }
        }
        g[k][t] = best;
        ch[k][t] = arg;
      }
    }
  }
  tab.g = std::move(g);
  return tab;
}

std::vector<std::pair<int, int>> cb_backtrack(const CbTables& tab, int t, int k) {
  std::vector<std::pair<int, int>> out;
  for (int i = static_cast<int>(tab.choice.size()) - 1; i >= 1 && k > 0; --i) {
    int tp = tab.choice[i][k][t];
    if (tp == 0) continue;
    out.emplace_back(i, tp);
    t -= tp;
    --k;
  }
  std::reverse(out.begin(), out.end());
  return out;
}

BoundReport run_cb(BoundContext& ctx, const CbParams& params) {
  const auto t0 = std::chrono::steady_clock::now();
  const Instance& inst = *ctx.inst;
  const int nv = inst.n_vertices();
  const int m = inst.m;
  const int T = inst.T;
  const int H = m * T;
  BoundReport rep;
  rep.procedure = "CB";

  if (!ctx.incumbent) keep_best(ctx.incumbent, insertion_heuristic(inst));

  const int t_bar = static_cast<int>(std::ceil(ctx.t_lower - 1e-9));
  const int t_route_min = std::max(1, t_bar - (m - 1) * T);
  std::vector<double> lambda(nv, 0.0);
  std::vector<std::vector<double>> DB(m + 1, std::vector<double>(H + 1, -kInf));

  for (int it = 0; it < params.max_iterations; ++it) {
    rep.iterations = it + 1;
    SquareMatrix<double> arc(nv);
    for (int i = 0; i < nv; ++i)
      for (int j = 0; j < nv; ++j)
        if (i != j) arc(i, j) = inst.d(i, j) - (j > 0 ? lambda[j] : 0.0);
    NgLabelTable table = evaluate_ng(ctx.forward, arc);
    PhiTable ph = phi_table(inst, table, arc);
    for (int i = 1; i < nv; ++i)
      for (int t = 0; t < t_route_min && t <= T; ++t) ph.phi[i][t] = kInf;
    CbTables g = cb_g_recursion(ph.phi, T, m);

    double L = 0;
    for (int i = 1; i < nv; ++i) L += lambda[i];
    double zstar = kInf;
    int tstar = -1, mstar = -1;
    for (int mb = 1; mb <= m; ++mb)
      for (int tb = 1; tb <= H; ++tb) {
        double val = g.g[mb][tb] == kInf ? kInf : (g.g[mb][tb] + L) / tb;
        DB[mb][tb] = std::max(DB[mb][tb], val);
        if (tb < t_bar || (tb + T - 1) / T > mb) continue;
        if (DB[mb][tb] < zstar) {
          zstar = DB[mb][tb];
          tstar = tb;
          mstar = mb;
        }
      }
    if (zstar == kInf) {
      rep.dual_bound = kInf;
      break;
    }
    bool improved = zstar > rep.dual_bound;
    rep.dual_bound = std::max(rep.dual_bound, zstar);

    std::vector<int> theta(nv, 0);
    std::vector<Route> routes;
    if (g.g[mstar][tstar] < kInf) {
      for (auto [i, tp] : cb_backtrack(g, tstar, mstar)) {
        std::vector<int> seq = backtrack(table, ph.state[i][tp]);
        seq.push_back(0);
        Route r = make_route(inst, seq);
        for (int v : r.customers()) ++theta[v];
        routes.push_back(std::move(r));
      }
    }
    if (improved) {
      std::vector<Route> cand;
      for (const Route& r : routes)
        if (r.elementary && r.working_time <= T) cand.push_back(r);
      keep_best(ctx.incumbent, greedy_from_routes(inst, cand));
    }
    const double ub = ctx.incumbent ? ctx.incumbent->value.value() : kInf;
    if (rep.dual_bound >= ub - 1e-9 * (1 + std::fabs(ub))) break;

    double sq = 0;
    for (int i = 1; i < nv; ++i) sq += static_cast<double>(theta[i] - 1) * (theta[i] - 1);
    if (sq == 0) break;
    double num = std::fabs(0.2 * zstar);
    if (params.step_in_cost_units) num *= tstar;
    double gamma = num / sq;
    for (int i = 1; i < nv; ++i) {
      lambda[i] -= params.epsilon * gamma * (theta[i] - 1);
      if (inst.optional(i)) lambda[i] = std::min(0.0, lambda[i]);
    }
  }

  // Vehicle-count window: counts whose best cell can still match the incumbent.
  const int lo = std::max(1, (t_bar + T - 1) / T);
  if (ctx.incumbent) {
    const double ub = ctx.incumbent->value.value();
    const double tol = 1e-9 * (1 + std::fabs(ub));
    const int used = static_cast<int>(ctx.incumbent->routes.size());
    int mn = used, mx = used;
    for (int mb = lo; mb <= m; ++mb) {
      double best = kInf;
      for (int tb = std::max(1, t_bar); tb <= H; ++tb) best = std::min(best, DB[mb][tb]);
      if (best <= ub + tol) {
        mn = std::min(mn, mb);
        mx = std::max(mx, mb);
      }
    }
    rep.m_min = mn;
    rep.m_max = mx;
  } else {
    rep.m_min = lo;
    rep.m_max = m;
  }
  rep.primal = ctx.incumbent;
  rep.elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

}  // namespace fracvrp
