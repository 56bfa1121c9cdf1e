#include "fracvrp/oracle.hpp"

#include <algorithm>
#include <limits>
#include <map>

#include "fracvrp/error.hpp"

namespace fracvrp {

std::vector<Route> enumerate_routes(const Instance& inst) {
  const int n = inst.n();
  std::vector<Route> out;
  std::vector<int> seq{0};
  std::vector<char> used(n + 1, 0);
  // Depth-first over sequences; working time only grows, so infeasible prefixes are cut.
  auto rec = [&](auto&& self, int last, long long time) -> void {
    for (int j = 1; j <= n; ++j) {
      if (used[j]) continue;
      long long t2 = time + inst.t(last, j) + inst.service[j];
      if (t2 > inst.T) continue;
      seq.push_back(j);
      used[j] = 1;
      if (t2 + inst.t(j, 0) <= inst.T) {
        seq.push_back(0);
        out.push_back(route_from_sequence(inst, seq));
        seq.pop_back();
      }
      self(self, j, t2);
      used[j] = 0;
      seq.pop_back();
    }
  };
  rec(rec, 0, 0);
  return out;
}

RouteSignature signature(const Route& r) { return {r.visited, r.cost, r.working_time}; }

namespace {

constexpr long long kBig = std::numeric_limits<long long>::max() / 4;

unsigned customer_mask(const Route& r) {
  unsigned mask = 0;
  for (int v : r.customers()) mask |= 1U << (v - 1);
  return mask;
}

}  // namespace

BruteForceResult brute_force(const Instance& inst) {
  const int n = inst.n();
  if (n > 16) throw InvalidInput("brute force is limited to 16 customers");
  const unsigned full = (1U << n) - 1;
  unsigned mand = 0;
  for (int i = 1; i <= inst.n1; ++i) mand |= 1U << (i - 1);

  const std::vector<Route> routes = enumerate_routes(inst);
  std::vector<std::vector<int>> by_mask(full + 1);
  for (int l = 0; l < static_cast<int>(routes.size()); ++l) by_mask[customer_mask(routes[l])].push_back(l);

  const int m = inst.m;
  std::vector<long long> best(full + 1);
  std::vector<int> best_route(full + 1);
  std::vector<std::vector<long long>> g(full + 1, std::vector<long long>(m + 1));

  // min over partitions of Σ (c D - N w); returns the selection of the best one.
  auto solve = [&](const Ratio& r, long long& value) {
    for (unsigned s = 0; s <= full; ++s) {
      best[s] = kBig;
      best_route[s] = -1;
      for (int l : by_mask[s]) {
        long long v = routes[l].cost * r.den() - r.num() * routes[l].working_time;
        if (v < best[s]) {
          best[s] = v;
          best_route[s] = l;
        }
      }
    }
    for (unsigned s = 0; s <= full; ++s)
      for (int k = 0; k <= m; ++k) g[s][k] = kBig;
    g[0][0] = 0;
    for (unsigned s = 1; s <= full; ++s) {
      const unsigned low = s & (~s + 1);
      for (unsigned sub = s; sub; sub = (sub - 1) & s) {
        if (!(sub & low) || best[sub] >= kBig) continue;
        for (int k = 1; k <= m; ++k)
          if (g[s ^ sub][k - 1] < kBig) g[s][k] = std::min(g[s][k], best[sub] + g[s ^ sub][k - 1]);
      }
    }
    value = kBig;
    unsigned arg_s = 0;
    int arg_k = 0;
    for (unsigned s = 0; s <= full; ++s) {
      if ((s & mand) != mand || s == 0) continue;
      for (int k = 1; k <= m; ++k)
        if (g[s][k] < value) {
          value = g[s][k];
          arg_s = s;
          arg_k = k;
        }
    }
    std::vector<Route> sel;
    if (value >= kBig) return sel;
    while (arg_s) {
      const unsigned low = arg_s & (~arg_s + 1);
      for (unsigned sub = arg_s; sub; sub = (sub - 1) & arg_s) {
        if (!(sub & low) || best[sub] >= kBig || g[arg_s ^ sub][arg_k - 1] >= kBig) continue;
        if (best[sub] + g[arg_s ^ sub][arg_k - 1] == g[arg_s][arg_k]) {
          sel.push_back(routes[best_route[sub]]);
          arg_s ^= sub;
          --arg_k;
          break;
        }
      }
    }
    return sel;
  };

  BruteForceResult out;
  long long value = 0;
  std::vector<Route> sel = solve(Ratio(0, 1), value);
  if (sel.empty()) return out;
  out.feasible = true;
  Solution cur = make_solution(inst, sel);
  while (true) {
    sel = solve(cur.value, value);
    if (value >= 0) break;
    cur = make_solution(inst, sel);
  }
  out.solution = cur;

  // Tables now hold the optimum ratio, where the minimum is exactly zero.
  for (unsigned s = 1; s <= full; ++s) {
    if (best[s] >= kBig) continue;
    bool in_opt = false;
    for (unsigned rest = 0; rest <= full && !in_opt; ++rest) {
      if ((rest & s) || ((rest | s) & mand) != mand) continue;
      for (int k = 0; k < m; ++k)
        if (g[rest][k] < kBig && best[s] + g[rest][k] == 0) {
          in_opt = true;
          break;
        }
    }
    if (!in_opt) continue;
    for (int l : by_mask[s])
      if (routes[l].cost * cur.value.den() - cur.value.num() * routes[l].working_time == best[s])
        out.optimal_routes.push_back(routes[l]);
  }
  return out;
}

Instance random_instance(std::mt19937_64& rng, const RandomSpec& spec) {
  auto uni = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  while (true) {
    const int n = uni(1, spec.n_max);
    Instance inst;
    inst.name = "random";
    inst.kind = spec.kind;
    inst.n1 = uni(1, n);
    inst.n2 = n - inst.n1;
    const int nv = n + 1;
    std::vector<Point> pts(nv);
    const int box = spec.kind == ObjectiveKind::CostOverLoad ? 20 : 8;
    for (Point& p : pts) p = {static_cast<double>(uni(0, box)), static_cast<double>(uni(0, box))};
    SquareMatrix<int> dist(nv, 0);
    for (int i = 0; i < nv; ++i)
      for (int j = 0; j < nv; ++j)
        if (i != j) dist(i, j) = euclid2d_cost(pts[i], pts[j]);
    inst.service.assign(nv, 0);
    if (spec.kind == ObjectiveKind::CostOverLoad) {
      for (int i = 1; i < nv; ++i) inst.service[i] = uni(1, 9);
      const int smax = *std::max_element(inst.service.begin(), inst.service.end());
      inst.T = uni(std::max(smax, std::min(10, spec.T_max)), std::max(smax, spec.T_max));
      inst.d = dist;
      inst.t = SquareMatrix<int>(nv, 0);
    } else {
      for (int i = 1; i < nv; ++i) inst.service[i] = uni(1, 4);
      inst.d = SquareMatrix<int>(nv, 0);
      for (int j = 1; j < nv; ++j) {
        const int profit = uni(1, 9);
        for (int i = 0; i < nv; ++i)
          if (i != j) inst.d(i, j) = -profit;
      }
      inst.t = dist;
      int need = 1;
      for (int i = 1; i <= inst.n1; ++i) need = std::max(need, inst.service[i] + dist(0, i) + dist(i, 0));
      if (need > spec.T_max) continue;
      inst.T = uni(need, spec.T_max);
    }
    inst.m = uni(1, inst.n1);
    validate(inst);
    while (!brute_force(inst).feasible) ++inst.m;
    return inst;
  }
}

}  // namespace fracvrp
