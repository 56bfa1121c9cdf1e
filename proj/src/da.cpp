#include <algorithm>
#include <chrono>
#include <cmath>
#include <set>

#include "fracvrp/bounds.hpp"
#include "fracvrp/heuristic.hpp"

namespace fracvrp {

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

BoundReport run_da(BoundContext& ctx, const DaParams& params) {
  const auto t0 = std::chrono::steady_clock::now();
  const Instance& inst = *ctx.inst;
  const int nv = inst.n_vertices();
  const double beta = static_cast<double>(inst.beta());
  const double m = inst.m;
  BoundReport rep;
  rep.procedure = "DA";

  if (!ctx.incumbent) keep_best(ctx.incumbent, insertion_heuristic(inst));

  std::vector<Route> core;
  std::set<std::vector<int>> seen;
  auto add = [&](Route r) {
    if (seen.insert(r.vertices).second) core.push_back(std::move(r));
  };
  for (int i = 1; i < nv; ++i) {
    Route r = make_route(inst, {0, i, 0});
    if (r.working_time <= inst.T) add(std::move(r));
  }
  if (ctx.incumbent)
    for (const Route& r : ctx.incumbent->routes) add(r);

  std::vector<double> pi(nv, 0.0);
  for (int i = 1; i <= inst.n1; ++i) pi[i] = inst.service[i];
  std::vector<double> lambda(nv, 0.0);
  double kappa = 1.0;
  int stall = 0;
  int last_heuristic = -1000;

  for (int it = 0; it < params.max_iterations; ++it) {
    if (seconds_since(t0) > params.time_limit) break;
    rep.iterations = it + 1;
    Theorem1Result th = theorem1_evaluate(inst, lambda, pi, core);
    DualSolution dual = theorem2_transform(inst, th.v);
    auto priced = price_ng_routes(inst, ctx.forward, dual.ccf(), -1e-9, params.price_limit);
    double cmin = priced.empty() ? 0.0 : std::min(0.0, priced.front().reduced_cost);
    double certified = dual.omega + m * cmin / ctx.t_lower;

    if (certified > rep.dual_bound + 1e-12) {
      dual.mu[0] += cmin;
      dual.cbar0 += m * cmin;
      dual.value = certified;
      rep.dual_bound = certified;
      rep.duals = dual;
      stall = 0;
      if (it - last_heuristic >= 10) {
        last_heuristic = it;
        std::vector<std::pair<double, int>> order;
        for (int l = 0; l < static_cast<int>(core.size()); ++l)
          if (core[l].elementary && core[l].working_time <= inst.T)
            order.emplace_back(reduced_cost(inst, core[l], dual.ccf()), l);
        std::sort(order.begin(), order.end());
        std::vector<Route> cand;
        for (const auto& [rc, l] : order) cand.push_back(core[l]);
        keep_best(ctx.incumbent, greedy_from_routes(inst, cand));
      }
    } else if (++stall >= params.stall) {
      kappa /= 2;
      stall = 0;
    }
    for (auto& pr : priced) add(std::move(pr.route));

    const double ub = ctx.incumbent ? ctx.incumbent->value.value() : th.value + 1.0;
    if (rep.dual_bound >= ub - 1e-9 * (1 + std::fabs(ub))) break;
    if (kappa < 1e-4) break;

    // Subgradient of z(DNCF(λ)) at the argmin routes.
    std::vector<double> g(nv, 1.0);
    g[0] = m;
    std::vector<double> f_hit(nv, 0.0);
    double W = 0;
    for (int i = 1; i <= inst.n1; ++i) {
      const Route& r = core[th.argmin[i]];
      double wbar = static_cast<double>(r.working_time), sum_a_pi = 0;
      for (int v : r.customers())
        if (inst.mandatory(v)) {
          wbar -= inst.service[v];
          sum_a_pi += pi[v];
        }
      double pi_r = beta * sum_a_pi;
      double Pi = beta;  // Σ_F π_i with π = s
      pi_r += wbar * Pi;
      double f = pi[i] / pi_r;
      W += f * wbar;
      for (int v : r.customers()) f_hit[v] += f * beta;
      g[0] -= f * (beta + m * wbar);
    }
    double norm2 = 0;
    for (int j = 1; j < nv; ++j) {
      g[j] -= W + f_hit[j];
      if (!inst.mandatory(j) && lambda[j] >= 0 && g[j] > 0) g[j] = 0;
    }
    if (lambda[0] >= 0 && g[0] > 0) g[0] = 0;
    for (int j = 0; j < nv; ++j) norm2 += g[j] * g[j];
    if (norm2 < 1e-18) {
      if (priced.empty()) break;
      continue;
    }
    double target = ub + 0.02 * std::fabs(ub);
    double step = kappa * std::max(target - th.value, 1e-6 * (1 + std::fabs(ub))) / norm2;
    for (int j = 0; j < nv; ++j) {
      lambda[j] += step * g[j];
      if (j == 0 || !inst.mandatory(j)) lambda[j] = std::min(0.0, lambda[j]);
    }
  }

  rep.columns = static_cast<int>(core.size());
  rep.primal = ctx.incumbent;
  rep.elapsed = seconds_since(t0);
  return rep;
}

}  // namespace fracvrp
