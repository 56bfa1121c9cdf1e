#include "fracvrp/mip.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <unordered_map>

#include "fracvrp/error.hpp"
#include "fracvrp/lp.hpp"

namespace fracvrp {

namespace {

struct BbNode {
  std::vector<int> in;   // fixed to one
  std::vector<int> out;  // fixed to zero
  double bound;
};

constexpr int kRestartEvery = 1000;

}  // namespace

MipResult solve_fp(const Instance& inst, const std::vector<Route>& routes, const std::vector<long long>& cost,
                   int m_min, int m_max, const std::optional<std::vector<int>>& warm, double tlim) {
  const auto t0 = std::chrono::steady_clock::now();
  auto elapsed = [&] { return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count(); };
  const int nv = inst.n_vertices();
  const int R = static_cast<int>(routes.size());
  MipResult res;

  // One representative per visited set: the cheapest, lowest index on ties.
  std::vector<int> cols;
  {
    std::unordered_map<VertexSet, int, VertexSetHash> best;
    for (int l = 0; l < R; ++l) {
      auto [it, fresh] = best.try_emplace(routes[l].visited, l);
      if (!fresh && cost[l] < cost[it->second]) it->second = l;
    }
    for (int l = 0; l < R; ++l)
      if (best[routes[l].visited] == l) cols.push_back(l);
  }

  long long incumbent = 0;
  auto accept = [&](std::vector<int> sel) {
    long long z = 0;
    for (int l : sel) z += cost[l];
    if (!res.feasible || z < incumbent) {
      res.feasible = true;
      incumbent = z;
      std::sort(sel.begin(), sel.end());
      res.x = std::move(sel);
      res.objective = z;
    }
  };
  if (warm) accept(*warm);

  // LP relaxation of a node; returns false when infeasible.
  auto relax = [&](const BbNode& node, double& bound, std::vector<std::pair<int, double>>& xs) {
    VertexSet covered;
    long long fixed = 0;
    for (int l : node.in) {
      covered |= routes[l].visited;
      fixed += cost[l];
    }
    const int k = static_cast<int>(node.in.size());
    if (k > m_max) return false;
    std::vector<char> banned(R, 0);
    for (int l : node.out) banned[l] = 1;
    LinearProgram lp;
    std::vector<int> row_of(nv, -1);
    for (int i = 1; i < nv; ++i)
      if (!covered.contains(i)) row_of[i] = lp.add_row(inst.mandatory(i) ? RowSense::Eq : RowSense::Le, 1.0);
    const int le = lp.add_row(RowSense::Le, m_max - k);
    const int ge = m_min - k > 0 ? lp.add_row(RowSense::Ge, m_min - k) : -1;
    std::vector<int> used;
    std::vector<char> has(nv, 0);
    for (int l : cols) {
      if (banned[l] || routes[l].visited.intersects(covered)) continue;
      if (std::find(node.in.begin(), node.in.end(), l) != node.in.end()) continue;
      std::vector<int> rows;
      std::vector<double> vals;
      for (int v : routes[l].visited.members()) {
        rows.push_back(row_of[v]);
        vals.push_back(1.0);
        has[v] = 1;
      }
      rows.push_back(le);
      vals.push_back(1.0);
      if (ge >= 0) {
        rows.push_back(ge);
        vals.push_back(1.0);
      }
      lp.add_column(static_cast<double>(cost[l]), rows, vals);
      used.push_back(l);
    }
    for (int i = 1; i <= inst.n1; ++i)
      if (!covered.contains(i) && !has[i]) return false;
    xs.clear();
    if (lp.n_rows() == 1 || used.empty()) {
      if (ge >= 0) return false;
      bound = static_cast<double>(fixed);
      return true;
    }
    LpResult r = solve_lp(lp);
    if (r.status != LpStatus::Optimal) return false;
    bound = r.objective + static_cast<double>(fixed);
    for (std::size_t c = 0; c < used.size(); ++c)
      if (r.x[c] > 1e-9) xs.emplace_back(used[c], r.x[c]);
    return true;
  };

  auto prunable = [&](double bound) {
    return res.feasible && std::ceil(bound - 1e-6 * (1 + std::fabs(bound))) >= static_cast<double>(incumbent);
  };

  std::vector<BbNode> open;
  open.push_back({{}, {}, -std::numeric_limits<double>::infinity()});
  bool first = true;
  bool timed_out = false;
  std::vector<std::pair<int, double>> xs;
  while (!open.empty()) {
    if (elapsed() > tlim) {
      timed_out = true;
      break;
    }
    if (res.nodes > 0 && res.nodes % kRestartEvery == 0) {
      auto it = std::min_element(open.begin(), open.end(),
                                 [](const BbNode& a, const BbNode& b) { return a.bound < b.bound; });
      std::iter_swap(it, open.end() - 1);
    }
    BbNode node = std::move(open.back());
    open.pop_back();
    ++res.nodes;
    if (prunable(node.bound)) continue;
    double bound = 0;
    bool ok = relax(node, bound, xs);
    if (first) {
      if (!ok) break;
      res.root_bound = bound;
      first = false;
    }
    if (!ok || prunable(bound)) continue;

    int branch = -1;
    double frac_best = 2;
    for (auto [l, v] : xs) {
      double f = std::fabs(v - 0.5);
      if (v > 1e-6 && v < 1 - 1e-6 && (f < frac_best - 1e-12 || (std::fabs(f - frac_best) <= 1e-12 && l < branch))) {
        frac_best = f;
        branch = l;
      }
    }
    if (branch < 0) {
      std::vector<int> sel = node.in;
      for (auto [l, v] : xs)
        if (v > 0.5) sel.push_back(l);
      accept(std::move(sel));
      continue;
    }
    BbNode zero{node.in, node.out, bound};
    zero.out.push_back(branch);
    BbNode one{node.in, node.out, bound};
    one.in.push_back(branch);
    open.push_back(std::move(zero));
    open.push_back(std::move(one));
  }
  if (first && !timed_out && !res.feasible) throw Infeasible("no feasible route selection");
  res.proven_optimal = res.feasible && !timed_out;
  res.elapsed = elapsed();
  return res;
}

}  // namespace fracvrp
