#include "fracvrp/ngpath.hpp"

#include <algorithm>
#include <numeric>
#include <unordered_map>

#include "fracvrp/error.hpp"

namespace fracvrp {

NgSets build_ng_sets(const Instance& inst, int delta, const SquareMatrix<double>& metric) {
  if (delta < 1) throw InvalidInput("ng set size must be at least 1");
  const int nv = inst.n_vertices();
  NgSets ng;
  ng.delta = delta;
  ng.members.resize(nv);
  ng.sets.resize(nv);
  for (int i = 1; i < nv; ++i) {
    std::vector<int> others;
    for (int j = 1; j < nv; ++j)
      if (j != i) others.push_back(j);
    std::stable_sort(others.begin(), others.end(),
                     [&](int a, int b) { return metric(i, a) < metric(i, b); });
    others.resize(std::min<std::size_t>(others.size(), delta - 1));
    others.push_back(i);
    std::sort(others.begin(), others.end());
    ng.members[i] = others;
    for (int j : others) ng.sets[i].insert(j);
  }
  return ng;
}

NgSets build_ng_sets(const Instance& inst, int delta) {
  const SquareMatrix<int>& base = inst.kind == ObjectiveKind::ProfitOverTime ? inst.t : inst.d;
  return build_ng_sets(inst, delta, base.cast<double>());
}

NgStateSpace build_ng_space(const Instance& inst, const NgSets& ng, bool backward) {
  const int nv = inst.n_vertices();
  const int T = inst.T;
  auto tt = [&](int a, int b) { return backward ? inst.t(b, a) : inst.t(a, b); };

  NgStateSpace sp;
  sp.backward = backward;
  sp.T = T;

  // Buckets keyed by (t, i) hold temporary ids for memory sets discovered so far.
  std::vector<std::unordered_map<VertexSet, int, VertexSetHash>> bucket(static_cast<std::size_t>(T + 1) * nv);
  std::vector<int> final_of_temp;
  std::vector<std::pair<int, int>> edges;  // (temp dst, final src)

  bucket[0][VertexSet{}] = 0;
  final_of_temp.push_back(-1);

  std::vector<std::pair<VertexSet, int>> here;
  for (int t = 0; t <= T; ++t) {
    for (int i = 0; i < nv; ++i) {
      auto& b = bucket[static_cast<std::size_t>(t) * nv + i];
      if (b.empty()) continue;
      here.assign(b.begin(), b.end());
      std::sort(here.begin(), here.end());
      for (const auto& [mem, temp] : here) {
        int src = sp.size();
        final_of_temp[temp] = src;
        sp.vertex.push_back(i);
        sp.time.push_back(t);
        sp.memory.push_back(mem);
        for (int j = 1; j < nv; ++j) {
          if (j == i || mem.contains(j)) continue;
          int t2 = t + tt(i, j) + inst.service[j];
          if (t2 + tt(j, 0) > T) continue;
          VertexSet mem2 = mem & ng.sets[j];
          mem2.insert(j);
          auto& target = bucket[static_cast<std::size_t>(t2) * nv + j];
          auto [it, fresh] = target.try_emplace(mem2, static_cast<int>(final_of_temp.size()));
          if (fresh) final_of_temp.push_back(-1);
          edges.emplace_back(it->second, src);
        }
      }
      std::unordered_map<VertexSet, int, VertexSetHash>().swap(b);
    }
  }

  // Edges were produced in increasing source order; a counting sort by target keeps that order.
  sp.in_begin.assign(sp.size() + 1, 0);
  for (auto& e : edges) {
    e.first = final_of_temp[e.first];
    ++sp.in_begin[e.first + 1];
  }
  std::partial_sum(sp.in_begin.begin(), sp.in_begin.end(), sp.in_begin.begin());
  sp.in_src.resize(edges.size());
  sp.in_vertex.resize(edges.size());
  std::vector<int> fill(sp.in_begin.begin(), sp.in_begin.end() - 1);
  for (const auto& e : edges) {
    int k = fill[e.first]++;
    sp.in_src[k] = e.second;
    sp.in_vertex[k] = sp.vertex[e.second];
  }
  return sp;
}

NgLabelTable evaluate_ng(const NgStateSpace& space, const SquareMatrix<double>& arc_cost) {
  NgLabelTable tab;
  tab.space = &space;
  const int S = space.size();
  tab.cost.assign(S, kInf);
  tab.pred.assign(S, -1);
  if (S == 0) return tab;
  tab.cost[0] = 0;
  // Column of the cost matrix entering each vertex, laid out by source vertex.
  SquareMatrix<double> into = space.backward ? arc_cost : arc_cost.transposed();
  for (int s = 1; s < S; ++s) {
    const double* row = &into(space.vertex[s], 0);
    double best = kInf;
    int arg = -1;
    for (int e = space.in_begin[s]; e < space.in_begin[s + 1]; ++e) {
      int p = space.in_src[e];
      double c = tab.cost[p] + row[space.in_vertex[e]];
      if (c < best) {
        best = c;
        arg = p;
      }
    }
    tab.cost[s] = best;
    tab.pred[s] = arg;
  }
  return tab;
}

NgLabelTable forward_ng_dp(const Instance& inst, const NgSets& ng, const SquareMatrix<double>& arc_cost,
                           NgStateSpace& storage) {
  storage = build_ng_space(inst, ng, false);
  return evaluate_ng(storage, arc_cost);
}

NgLabelTable backward_ng_dp(const Instance& inst, const NgSets& ng, const SquareMatrix<double>& arc_cost,
                            NgStateSpace& storage) {
  storage = build_ng_space(inst, ng, true);
  return evaluate_ng(storage, arc_cost);
}

std::vector<int> backtrack(const NgLabelTable& table, int state) {
  std::vector<int> path;
  for (int s = state; s != -1; s = table.pred[s]) path.push_back(table.space->vertex[s]);
  if (!table.space->backward) std::reverse(path.begin(), path.end());
  return path;
}

PhiTable phi_table(const Instance& inst, const NgLabelTable& forward, const SquareMatrix<double>& arc_cost) {
  const NgStateSpace& sp = *forward.space;
  const int nv = inst.n_vertices();
  PhiTable out;
  out.phi.assign(nv, std::vector<double>(inst.T + 1, kInf));
  out.state.assign(nv, std::vector<int>(inst.T + 1, -1));
  for (int s = 1; s < sp.size(); ++s) {
    int i = sp.vertex[s];
    int total = sp.time[s] + inst.t(i, 0);
    if (total > inst.T) continue;
    double c = forward.cost[s] + arc_cost(i, 0);
    if (c < out.phi[i][total]) {
      out.phi[i][total] = c;
      out.state[i][total] = s;
    }
  }
  return out;
}

SquareMatrix<double> reduced_arc_costs(const Instance& inst, const CcfDuals& duals) {
  const int nv = inst.n_vertices();
  SquareMatrix<double> out(nv);
  for (int i = 0; i < nv; ++i)
    for (int j = 0; j < nv; ++j) {
      if (i == j) continue;
      out(i, j) = inst.d(i, j) - duals.mu[j] - (inst.t(i, j) + inst.service[j]) * duals.omega;
    }
  return out;
}

double reduced_cost(const Instance& inst, const Route& r, const CcfDuals& duals) {
  double rc = static_cast<double>(r.cost) - duals.mu[0] - static_cast<double>(r.working_time) * duals.omega;
  for (int v : r.customers()) rc -= duals.mu[v];
  (void)inst;
  return rc;
}

std::vector<PricedRoute> price_ng_routes(const Instance& inst, const NgStateSpace& space, const CcfDuals& duals,
                                         double cutoff, int limit) {
  SquareMatrix<double> arc = reduced_arc_costs(inst, duals);
  NgLabelTable tab = evaluate_ng(space, arc);
  std::vector<std::pair<double, int>> cand;
  for (int s = 1; s < space.size(); ++s) {
    int i = space.vertex[s];
    double rc = tab.cost[s] + arc(i, 0);
    if (rc < cutoff) cand.emplace_back(rc, s);
  }
  std::sort(cand.begin(), cand.end());
  if (static_cast<int>(cand.size()) > limit) cand.resize(limit);
  std::vector<PricedRoute> out;
  out.reserve(cand.size());
  for (const auto& [rc, s] : cand) {
    std::vector<int> seq = backtrack(tab, s);
    seq.push_back(0);
    Route r = make_route(inst, seq);
    double exact_rc = reduced_cost(inst, r, duals);
    out.push_back({std::move(r), exact_rc});
  }
  return out;
}

}  // namespace fracvrp
