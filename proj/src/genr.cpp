#include "fracvrp/genr.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <queue>
#include <unordered_map>

namespace fracvrp {

CompletionBound::CompletionBound(const Instance& inst, const NgSets& ng, const NgStateSpace& backward,
                                 const SquareMatrix<double>& arc_cost)
    : inst_(&inst), ng_(&ng) {
  const int nv = inst.n_vertices();
  NgLabelTable f = evaluate_ng(backward, arc_cost);
  times_.assign(nv, {});
  table_.assign(nv, {});
  for (int s = 1; s < backward.size(); ++s) times_[backward.vertex[s]].push_back(backward.time[s]);
  for (int e = 1; e < nv; ++e) {
    auto& ts = times_[e];
    std::sort(ts.begin(), ts.end());
    ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
    const int bits = static_cast<int>(ng.members[e].size()) - 1;
    table_[e].assign((std::size_t{1} << bits) * ts.size(), kInf);
  }
  // Local bit of each member of N_e other than e.
  auto local_mask = [&](int e, const VertexSet& mem) {
    std::size_t mask = 0;
    int b = 0;
    for (int u : ng.members[e]) {
      if (u == e) continue;
      if (mem.contains(u)) mask |= std::size_t{1} << b;
      ++b;
    }
    return mask;
  };
  for (int s = 1; s < backward.size(); ++s) {
    if (f.cost[s] == kInf) continue;
    int e = backward.vertex[s];
    const auto& ts = times_[e];
    std::size_t ti = std::lower_bound(ts.begin(), ts.end(), backward.time[s]) - ts.begin();
    double& cell = table_[e][local_mask(e, backward.memory[s]) * ts.size() + ti];
    cell = std::min(cell, f.cost[s]);
  }
  for (int e = 1; e < nv; ++e) {
    const std::size_t nt = times_[e].size();
    if (nt == 0) continue;
    const int bits = static_cast<int>(ng.members[e].size()) - 1;
    auto& tab = table_[e];
    const std::size_t masks = std::size_t{1} << bits;
    for (int b = 0; b < bits; ++b)
      for (std::size_t mask = 0; mask < masks; ++mask)
        if (mask >> b & 1)
          for (std::size_t ti = 0; ti < nt; ++ti)
            tab[mask * nt + ti] = std::min(tab[mask * nt + ti], tab[(mask ^ (std::size_t{1} << b)) * nt + ti]);
    for (std::size_t mask = 0; mask < masks; ++mask)
      for (std::size_t ti = 1; ti < nt; ++ti)
        tab[mask * nt + ti] = std::min(tab[mask * nt + ti], tab[mask * nt + ti - 1]);
  }
}

double CompletionBound::operator()(int e, const VertexSet& visited, int t) const {
  const auto& ts = times_[e];
  const int limit = inst_->T - t + inst_->service[e];
  auto it = std::upper_bound(ts.begin(), ts.end(), limit);
  if (it == ts.begin()) return kInf;
  std::size_t ti = (it - ts.begin()) - 1;
  std::size_t mask = 0;
  int b = 0;
  for (int u : ng_->members[e]) {
    if (u == e) continue;
    if (!visited.contains(u)) mask |= std::size_t{1} << b;
    ++b;
  }
  return table_[e][mask * ts.size() + ti];
}

double db_of_path(const ForwardPath& p, const CompletionBound& completion) {
  if (p.end() == 0) return p.cost;
  return p.cost + completion(p.end(), p.visited, p.time);
}

double corollary1_threshold(double w, double z_star, double db, double cbar0, int m_max, int T) {
  double alpha = w + static_cast<double>(m_max - 1) * T;
  return alpha * z_star - (alpha * db + cbar0);
}

namespace {

struct Node {
  int parent;
  int vertex;
  int time;
  int len;
  long long raw;  // Σ d over the arcs
  double cost;    // Σ reduced arc costs
  double db;
  VertexSet visited;
  bool dead = false;
};

struct Key {
  VertexSet visited;
  int end;
  bool operator==(const Key&) const = default;
};

struct KeyHash {
  std::size_t operator()(const Key& k) const { return VertexSetHash{}(k.visited) * 31 + k.end; }
};

}  // namespace

ReducedSet generate_reduced_set(const GenrInput& in, const GenrParams& params) {
  const Instance& inst = *in.inst;
  const int nv = inst.n_vertices();
  const int T = inst.T;
  const SquareMatrix<double> arc = reduced_arc_costs(inst, in.duals.ccf());
  const CompletionBound completion(inst, *in.ng, *in.backward, arc);

  const double omega = in.duals.omega;
  const double gap = in.z_star - omega;
  const double cbar0 = in.duals.cbar0;
  const double tol = 1e-7 * (1 + std::fabs(in.z_star) * std::max(1, in.m_max) * T);
  auto route_gamma = [&](double w) {
    if (params.unbounded_gamma) return kInf;
    if (gap >= 0) return corollary1_threshold(w, in.z_star, omega, cbar0, in.m_max, T);
    return gap * std::max(w, in.t_lower) - cbar0;
  };
  const double path_gamma = params.unbounded_gamma ? kInf
                            : gap >= 0           ? static_cast<double>(in.m_max) * T * gap - cbar0
                                                 : gap * in.t_lower - cbar0;
  const double rho_lo = std::min(in.duals.value, in.z_star);
  const double rho_hi = in.z_star;

  ReducedSet out;
  std::vector<Node> nodes;
  nodes.push_back({-1, 0, 0, 0, 0, 0.0, 0.0, VertexSet{}});
  using Entry = std::tuple<double, int, int, int>;  // db, length, end vertex, node
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> frontier;
  frontier.emplace(0.0, 0, 0, 0);
  std::unordered_map<Key, std::vector<int>, KeyHash> labels;

  auto dominates = [&](const Node& a, long long raw, int time) {
    if (a.time > time) return false;
    if (a.raw == raw && a.time == time) return true;
    const double eps = 1e-9 * (1 + std::fabs(static_cast<double>(raw)));
    for (double rho : {rho_lo, rho_hi}) {
      if (!(a.raw - rho * a.time < raw - rho * time - eps)) return false;
    }
    return true;
  };

  auto emit = [&](int idx, double rc) {
    std::vector<int> seq{0};
    for (int k = idx; k > 0; k = nodes[k].parent) seq.push_back(nodes[k].vertex);
    std::reverse(seq.begin() + 1, seq.end());
    seq.push_back(0);
    out.routes.push_back(route_from_sequence(inst, seq));
    out.reduced_costs.push_back(rc);
  };

  while (!frontier.empty()) {
    auto [db, len, end, idx] = frontier.top();
    frontier.pop();
    if (nodes[idx].dead) continue;
    if (db > path_gamma + tol) break;
    const Node cur = nodes[idx];

    if (cur.vertex != 0) {
      double rc = cur.cost + arc(cur.vertex, 0);
      double w = cur.time + inst.t(cur.vertex, 0);
      if (rc <= route_gamma(w) + tol) {
        if (static_cast<long long>(out.routes.size()) >= params.delta_max) {
          out.complete = false;
          out.hit_delta_max = true;
          out.gapmin = cur.db;
          break;
        }
        emit(idx, rc);
      }
    }

    bool overflow = false;
    for (int j = 1; j < nv && !overflow; ++j) {
      if (cur.visited.contains(j)) continue;
      int t2 = cur.time + inst.t(cur.vertex, j) + inst.service[j];
      if (t2 + inst.t(j, 0) > T) continue;
      VertexSet v2 = cur.visited;
      v2.insert(j);
      double c2 = cur.cost + arc(cur.vertex, j);
      double db2 = c2 + completion(j, v2, t2);
      if (db2 == kInf || db2 > path_gamma + tol) continue;
      long long raw2 = cur.raw + inst.d(cur.vertex, j);
      std::vector<int>* bucket = nullptr;
      if (params.dominance) {
        bucket = &labels[Key{v2, j}];
        bool dominated = false;
        for (int o : *bucket)
          if (dominates(nodes[o], raw2, t2)) {
            dominated = true;
            break;
          }
        if (dominated) continue;
        std::erase_if(*bucket, [&](int o) {
          const Node& other = nodes[o];
          Node probe{};
          probe.raw = raw2;
          probe.time = t2;
          if (dominates(probe, other.raw, other.time)) {
            nodes[o].dead = true;
            return true;
          }
          return false;
        });
      }
      if (static_cast<long long>(nodes.size()) >= params.nstatb) {
        overflow = true;
        break;
      }
      const int id = static_cast<int>(nodes.size());
      nodes.push_back({idx, j, t2, cur.len + 1, raw2, c2, db2, v2});
      if (bucket) bucket->push_back(id);
      frontier.emplace(db2, cur.len + 1, j, id);
    }
    if (overflow) {
      out.complete = false;
      out.hit_nstatb = true;
      out.gapmin = cur.db;
      break;
    }
  }
  out.paths = static_cast<long long>(nodes.size());
  return out;
}

void write_route_dump(std::ostream& out, const ReducedSet& set) {
  for (std::size_t k = 0; k < set.routes.size(); ++k) {
    const Route& r = set.routes[k];
    out << set.reduced_costs[k] << ' ' << r.cost << ' ' << r.working_time << " :";
    for (int v : r.customers()) out << ' ' << v;
    out << '\n';
  }
}

}  // namespace fracvrp
