#include "fracvrp/exact.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <iomanip>
#include <map>
#include <ostream>

#include "fracvrp/error.hpp"
#include "fracvrp/heuristic.hpp"
#include "fracvrp/mip.hpp"

namespace fracvrp {

const char* to_string(ExactStatus s) {
  switch (s) {
    case ExactStatus::Optimal:
      return "Optimal";
    case ExactStatus::GapReached:
      return "GapReached";
    case ExactStatus::IterLimit:
      return "IterLimit";
  }
  return "?";
}

namespace {

using i128 = __int128;

[[noreturn]] void violation(const std::string& what) { throw CertificateViolation(what); }

// a - b as an unreduced fraction.
std::pair<i128, i128> diff(const Ratio& a, const Ratio& b) {
  return {static_cast<i128>(a.num()) * b.den() - static_cast<i128>(b.num()) * a.den(),
          static_cast<i128>(a.den()) * b.den()};
}

}  // namespace

DinkelbachResult dinkelbach_reduced(const Instance& inst, const std::vector<Route>& routes, const Solution& x0,
                                    int m_min, int m_max, double tlim) {
  std::map<std::vector<int>, int> index;
  for (int l = 0; l < static_cast<int>(routes.size()); ++l) index.emplace(routes[l].vertices, l);
  std::vector<int> x;
  for (const Route& r : x0.routes) {
    auto it = index.find(r.vertices);
    if (it == index.end()) throw InvalidInput("starting solution uses a route outside the route set");
    x.push_back(it->second);
  }
  auto value_of = [&](const std::vector<int>& sel) {
    long long n = 0, d = 0;
    for (int l : sel) {
      n += routes[l].cost;
      d += routes[l].working_time;
    }
    return std::pair{n, d};
  };

  DinkelbachResult out;
  auto [n0, d0] = value_of(x);
  Ratio r(n0, d0);
  std::vector<long long> cost(routes.size());
  while (true) {
    for (std::size_t l = 0; l < routes.size(); ++l)
      cost[l] = routes[l].cost * r.den() - r.num() * routes[l].working_time;
    MipResult mr = solve_fp(inst, routes, cost, m_min, m_max, x, tlim);
    if (!mr.feasible) throw Infeasible("parametric problem lost its incumbent");
    auto [n, d] = value_of(mr.x);
    const long long z = n * r.den() - r.num() * d;
    if (z != mr.objective) violation("parametric objective mismatch");
    DinkelbachStep step{r, z, d, mr.proven_optimal};
    if (!out.steps.empty()) {
      const DinkelbachStep& prev = out.steps.back();
      // d(x^i) >= d(x^{i+1}), strictly while the parametric value stays negative.
      if (prev.optimal && step.optimal && prev.z < 0) {
        if (d > prev.d || (z < 0 && d == prev.d))
          violation("working-time sequence is not decreasing: " + std::to_string(prev.d) + " -> " + std::to_string(d));
      }
    }
    out.steps.push_back(step);
    if (z < 0) {
      Ratio next(n, d);
      if (!(next < r)) violation("ratio sequence is not decreasing: " + r.str() + " -> " + next.str());
      r = next;
      x = mr.x;
      continue;
    }
    // Terminal parametric value must be exactly zero at the returned selection.
    if (parametric_sign(n, d, r) != 0 || z != 0) violation("terminal parametric value is not zero");
    out.fp_optimal = mr.proven_optimal;
    std::vector<Route> sel;
    for (int l : mr.x) sel.push_back(routes[l]);
    out.solution = make_solution(inst, std::move(sel));
    break;
  }

  // Superlinear contraction, checked once the limit is known.
  bool all_optimal = std::all_of(out.steps.begin(), out.steps.end(), [](const auto& s) { return s.optimal; });
  if (all_optimal) {
    const Ratio rbar = out.solution.value;
    long long dbar = 0;
    for (const Route& rt : out.solution.routes) dbar += rt.working_time;
    for (std::size_t i = 0; i + 1 < out.steps.size(); ++i) {
      const Ratio& ri = out.steps[i].r;
      if (ri == rbar) continue;
      const Ratio& rn = out.steps[i + 1].r;
      auto [an, ad] = diff(rbar, rn);  // A = an/ad <= 0
      auto [bn, bd] = diff(rbar, ri);  // B = bn/bd < 0
      const i128 di = out.steps[i].d;
      // A/B <= 1 - dbar/di  <=>  A di >= B (di - dbar)  since B < 0.
      i128 lhs = an * bd * di;
      i128 rhs = bn * ad * (di - dbar);
      if (lhs < rhs) violation("contraction bound fails at iteration " + std::to_string(i + 1));
    }
  }
  return out;
}

double solution_dual_gap_bound(const Instance& inst, const Solution& sol, const DualSolution& duals) {
  double sum_rc = 0, sum_w = 0;
  for (const Route& r : sol.routes) {
    sum_rc += reduced_cost(inst, r, duals.ccf());
    sum_w += static_cast<double>(r.working_time);
  }
  return duals.omega + (sum_rc + duals.cbar0) / sum_w;
}

namespace {

// Any feasible solution, from an unrestricted route set; used when the heuristics fail.
Solution first_feasible(const Instance& inst, const BoundContext& ctx, const NgStateSpace& backward,
                        const DualSolution& duals, const ExactParams& params) {
  GenrInput gin{&inst, &ctx.ng, &backward, duals, kInf, inst.m, ctx.t_lower};
  GenrParams gp;
  gp.delta_max = params.delta_max;
  gp.nstatb = params.nstatb;
  gp.dominance = false;
  gp.unbounded_gamma = true;
  ReducedSet rs = generate_reduced_set(gin, gp);
  std::vector<long long> cost;
  for (const Route& r : rs.routes) cost.push_back(r.cost);
  MipResult mr = solve_fp(inst, rs.routes, cost, 1, inst.m, std::nullopt, params.tlim);
  if (!mr.feasible) throw Infeasible("no feasible solution found");
  std::vector<Route> sel;
  for (int l : mr.x) sel.push_back(rs.routes[l]);
  return local_search(inst, make_solution(inst, std::move(sel)));
}

}  // namespace

ExactResult solve_exact(const Instance& inst, const ExactParams& params) {
  const auto t0 = std::chrono::steady_clock::now();
  auto elapsed = [&] { return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count(); };
  validate(inst);
  ExactResult res;

  BoundContext ctx = make_bound_context(inst, params.delta_ng);
  keep_best(ctx.incumbent, insertion_heuristic(inst));

  BoundReport cb = run_cb(ctx, params.cb);
  BoundReport da = run_da(ctx, params.da);
  res.db_cb = cb.dual_bound;
  res.db_da = da.dual_bound;
  res.duals = *da.duals;
  NgStateSpace backward = build_ng_space(inst, ctx.ng, true);
  if (!ctx.incumbent) ctx.incumbent = first_feasible(inst, ctx, backward, res.duals, params);
  Solution best = *ctx.incumbent;
  const int used = static_cast<int>(best.routes.size());
  int m_min = std::min(cb.m_min.value_or(1), used);
  int m_max = std::max(cb.m_max.value_or(inst.m), used);
  res.m_min = m_min;
  res.m_max = m_max;

  auto check_gap = [&](const Solution& s) {
    double lb = solution_dual_gap_bound(inst, s, res.duals);
    if (s.value.value() < lb - 1e-7 * (1 + std::fabs(lb))) violation("solution value below its dual gap bound");
  };
  check_gap(best);

  long long delta_max = params.delta_max;
  double tlim = params.tlim;
  res.dual_bound = std::max(cb.dual_bound, da.dual_bound);
  res.status = ExactStatus::IterLimit;

  for (int iter = 1; iter <= params.itermax; ++iter) {
    const auto it0 = std::chrono::steady_clock::now();
    GenrInput gin{&inst, &ctx.ng, &backward, res.duals, best.value.value(), m_max, ctx.t_lower};
    GenrParams gp;
    gp.delta_max = delta_max;
    gp.nstatb = params.nstatb;
    gp.dominance = params.dominance;
    ReducedSet rs = generate_reduced_set(gin, gp);

    std::vector<Route> routes = rs.routes;
    {
      std::map<std::vector<int>, int> have;
      for (int l = 0; l < static_cast<int>(routes.size()); ++l) have.emplace(routes[l].vertices, l);
      for (const Route& r : best.routes)
        if (!have.count(r.vertices)) routes.push_back(r);
    }
    DinkelbachResult dk = dinkelbach_reduced(inst, routes, best, m_min, m_max, tlim);
    check_gap(dk.solution);
    if (dk.solution.value < best.value) best = dk.solution;

    ExactIteration step;
    step.routes = static_cast<long long>(rs.routes.size());
    step.hit_delta_max = rs.hit_delta_max;
    step.hit_nstatb = rs.hit_nstatb;
    step.value = dk.solution.value;
    step.dinkelbach_iterations = static_cast<int>(dk.steps.size());
    step.db_new = rs.complete ? kInf : res.duals.omega + (rs.gapmin + res.duals.cbar0) / (static_cast<double>(m_max) * inst.T);
    step.reduced_optimal = rs.complete;
    step.fp_optimal = dk.fp_optimal;
    step.elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - it0).count();
    res.trace.push_back(step);
    if (params.keep_route_sets) res.route_sets.push_back(std::move(rs));

    const double z = best.value.value();
    if (dk.fp_optimal) res.dual_bound = std::max(res.dual_bound, std::min(step.db_new, z));
    if (dk.fp_optimal && (step.reduced_optimal || z <= step.db_new)) {
      res.status = ExactStatus::Optimal;
      res.dual_bound = z;
      break;
    }
    if (iter == params.itermax) {
      res.status = ExactStatus::IterLimit;
      break;
    }
    if ((z - res.dual_bound) / std::max(1e-12, std::fabs(z)) <= params.gapmax) {
      res.status = ExactStatus::GapReached;
      break;
    }
    delta_max = static_cast<long long>(std::min(9e18, static_cast<double>(delta_max) * params.eps1));
    tlim += params.eps2;
  }
  res.best = best;
  res.elapsed = elapsed();
  return res;
}

void write_trace_csv(std::ostream& out, const std::string& name, const ExactResult& res) {
  out << "name,iter,|R|,%z*,IP,Iter,%B,Time\n";
  const double z = res.best.value.value();
  int k = 0;
  for (const ExactIteration& it : res.trace) {
    out << name << ',' << ++k << ',' << it.routes;
    if (it.hit_nstatb) out << '*';
    if (it.hit_delta_max) out << '+';
    out << ',' << std::fixed << std::setprecision(1) << 100.0 * it.value.value() / z << ',' << (it.fp_optimal ? "" : "ip")
        << ',' << it.dinkelbach_iterations << ',';
    if (std::isfinite(it.db_new)) out << 100.0 * it.db_new / z;
    out << ',' << std::setprecision(2) << it.elapsed << '\n';
    out.unsetf(std::ios::floatfield);
  }
}

}  // namespace fracvrp
