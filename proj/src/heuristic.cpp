#include "fracvrp/heuristic.hpp"

#include <algorithm>
#include <numeric>

#include "fracvrp/error.hpp"

namespace fracvrp {

namespace {

struct Plan {
  const Instance* inst;
  std::vector<std::vector<int>> routes;  // customer sequences
  std::vector<long long> c, w;
  long long N = 0, D = 0;

  std::pair<long long, long long> eval(const std::vector<int>& seq) const {
    long long cost = 0, time = 0;
    int prev = 0;
    for (int v : seq) {
      cost += inst->d(prev, v);
      time += inst->t(prev, v) + inst->service[v];
      prev = v;
    }
    cost += inst->d(prev, 0);
    time += inst->t(prev, 0);
    return {cost, time};
  }

  void add(std::vector<int> seq) {
    auto [cost, time] = eval(seq);
    routes.push_back(std::move(seq));
    c.push_back(cost);
    w.push_back(time);
    N += cost;
    D += time;
  }

  void set(int k, std::vector<int> seq) {
    auto [cost, time] = eval(seq);
    N += cost - c[k];
    D += time - w[k];
    routes[k] = std::move(seq);
    c[k] = cost;
    w[k] = time;
  }

  void drop_empty() {
    for (int k = static_cast<int>(routes.size()) - 1; k >= 0; --k) {
      if (!routes[k].empty()) continue;
      N -= c[k];
      D -= w[k];
      routes.erase(routes.begin() + k);
      c.erase(c.begin() + k);
      w.erase(w.begin() + k);
    }
  }

  std::vector<int> route_of() const {
    std::vector<int> out(inst->n_vertices(), -1);
    for (int k = 0; k < static_cast<int>(routes.size()); ++k)
      for (int v : routes[k]) out[v] = k;
    return out;
  }
};

bool improves(long long n2, long long d2, long long n, long long d) {
  if (d2 <= 0) return false;
  if (d <= 0) return true;
  return static_cast<__int128>(n2) * d < static_cast<__int128>(n) * d2;
}

// Value of the plan after replacing routes ka/kb (kb may be -1 or a new slot).
struct Change {
  int k;
  std::vector<int> seq;
  long long cost, time;
};

bool try_apply(Plan& p, std::vector<Change> changes) {
  long long n = p.N, d = p.D;
  const int T = p.inst->T;
  for (auto& ch : changes) {
    auto [cost, time] = p.eval(ch.seq);
    if (!ch.seq.empty() && time > T) return false;
    if (ch.seq.empty()) cost = time = 0;
    ch.cost = cost;
    ch.time = time;
    if (ch.k < static_cast<int>(p.routes.size())) {
      n += cost - p.c[ch.k];
      d += time - p.w[ch.k];
    } else {
      n += cost;
      d += time;
    }
  }
  if (!improves(n, d, p.N, p.D)) return false;
  for (auto& ch : changes) {
    if (ch.k < static_cast<int>(p.routes.size())) {
      p.set(ch.k, std::move(ch.seq));
    } else {
      p.add(std::move(ch.seq));
    }
  }
  p.drop_empty();
  return true;
}

bool pass(Plan& p) {
  const Instance& inst = *p.inst;
  const int nv = inst.n_vertices();
  const int m = inst.m;
  auto route_of = p.route_of();
  int R = static_cast<int>(p.routes.size());

  // Insert unrouted optional customers.
  for (int v = inst.n1 + 1; v < nv; ++v) {
    if (route_of[v] >= 0) continue;
    for (int k = 0; k <= R; ++k) {
      if (k == R && R >= m) break;
      const std::vector<int> base = k < R ? p.routes[k] : std::vector<int>{};
      for (std::size_t pos = 0; pos <= base.size(); ++pos) {
        auto seq = base;
        seq.insert(seq.begin() + pos, v);
        if (try_apply(p, {{k, seq, 0, 0}})) return true;
      }
    }
  }
  for (int k = 0; k < R; ++k) {
    for (std::size_t pos = 0; pos < p.routes[k].size(); ++pos) {
      int v = p.routes[k][pos];
      // Remove an optional customer.
      if (inst.optional(v)) {
        auto seq = p.routes[k];
        seq.erase(seq.begin() + pos);
        if (seq.empty() && R == 1) continue;
        if (try_apply(p, {{k, seq, 0, 0}})) return true;
      }
      // Relocate.
      auto without = p.routes[k];
      without.erase(without.begin() + pos);
      for (int k2 = 0; k2 <= R; ++k2) {
        if (k2 == R && R >= m) break;
        const std::vector<int>& base = k2 == k ? without : (k2 < R ? p.routes[k2] : std::vector<int>{});
        if (k2 == R && without.empty()) continue;
        for (std::size_t q = 0; q <= base.size(); ++q) {
          if (k2 == k && q == pos) continue;
          auto seq = base;
          seq.insert(seq.begin() + q, v);
          std::vector<Change> ch;
          if (k2 == k) {
            ch.push_back({k, seq, 0, 0});
          } else {
            ch.push_back({k, without, 0, 0});
            ch.push_back({k2, seq, 0, 0});
          }
          if (try_apply(p, ch)) return true;
        }
      }
      // Swap with an unrouted optional customer.
      if (inst.optional(v)) {
        for (int u = inst.n1 + 1; u < nv; ++u) {
          if (route_of[u] >= 0) continue;
          auto seq = p.routes[k];
          seq[pos] = u;
          if (try_apply(p, {{k, seq, 0, 0}})) return true;
        }
      }
      // Swap with a customer of a later route.
      for (int k2 = k + 1; k2 < R; ++k2) {
        for (std::size_t q = 0; q < p.routes[k2].size(); ++q) {
          auto a = p.routes[k];
          auto b = p.routes[k2];
          std::swap(a[pos], b[q]);
          if (try_apply(p, {{k, a, 0, 0}, {k2, b, 0, 0}})) return true;
        }
      }
    }
    // 2-opt.
    const std::size_t len = p.routes[k].size();
    for (std::size_t i = 0; i + 1 < len; ++i)
      for (std::size_t j = i + 1; j < len; ++j) {
        auto seq = p.routes[k];
        std::reverse(seq.begin() + i, seq.begin() + j + 1);
        if (try_apply(p, {{k, seq, 0, 0}})) return true;
      }
  }
  return false;
}

Plan to_plan(const Instance& inst, const Solution& s) {
  Plan p{&inst, {}, {}, {}, 0, 0};
  for (const Route& r : s.routes) p.add(r.customers());
  return p;
}

Solution to_solution(const Instance& inst, const Plan& p) {
  std::vector<Route> routes;
  for (const auto& seq : p.routes) {
    std::vector<int> full{0};
    full.insert(full.end(), seq.begin(), seq.end());
    full.push_back(0);
    routes.push_back(route_from_sequence(inst, full));
  }
  return make_solution(inst, std::move(routes));
}

// Cheapest insertion of every uncovered mandatory customer; false when one does not fit.
bool repair(const Instance& inst, Plan& p) {
  auto route_of = p.route_of();
  std::vector<int> missing;
  for (int i = 1; i <= inst.n1; ++i)
    if (route_of[i] < 0) missing.push_back(i);
  std::stable_sort(missing.begin(), missing.end(),
                   [&](int a, int b) { return inst.service[a] > inst.service[b]; });
  for (int v : missing) {
    long long best_dc = 0, best_dt = 0;
    int best_k = -1;
    std::size_t best_pos = 0;
    const int R = static_cast<int>(p.routes.size());
    for (int k = 0; k <= R; ++k) {
      if (k == R && R >= inst.m) break;
      const std::vector<int> base = k < R ? p.routes[k] : std::vector<int>{};
      long long c0 = k < R ? p.c[k] : 0, w0 = k < R ? p.w[k] : 0;
      for (std::size_t pos = 0; pos <= base.size(); ++pos) {
        auto seq = base;
        seq.insert(seq.begin() + pos, v);
        auto [c, w] = p.eval(seq);
        if (w > inst.T) continue;
        long long dc = c - c0, dt = w - w0;
        if (best_k < 0 || dc < best_dc || (dc == best_dc && dt < best_dt)) {
          best_k = k;
          best_pos = pos;
          best_dc = dc;
          best_dt = dt;
        }
      }
    }
    if (best_k < 0) return false;
    if (best_k == R) {
      p.add({v});
    } else {
      auto seq = p.routes[best_k];
      seq.insert(seq.begin() + best_pos, v);
      p.set(best_k, std::move(seq));
    }
  }
  return true;
}

}  // namespace

Solution local_search(const Instance& inst, const Solution& start) {
  Plan p = to_plan(inst, start);
  while (pass(p)) {
  }
  return to_solution(inst, p);
}

std::optional<Solution> greedy_from_routes(const Instance& inst, const std::vector<Route>& candidates) {
  Plan p{&inst, {}, {}, {}, 0, 0};
  VertexSet used;
  for (const Route& r : candidates) {
    if (static_cast<int>(p.routes.size()) >= inst.m) break;
    if (!r.elementary || r.working_time > inst.T || r.visited.intersects(used)) continue;
    p.add(r.customers());
    used |= r.visited;
  }
  if (!repair(inst, p)) return std::nullopt;
  // Routes holding only optional customers may be dropped by local search; none are required.
  return local_search(inst, to_solution(inst, p));
}

std::optional<Solution> insertion_heuristic(const Instance& inst) {
  Plan p{&inst, {}, {}, {}, 0, 0};
  if (!repair(inst, p)) return std::nullopt;
  return local_search(inst, to_solution(inst, p));
}

void keep_best(std::optional<Solution>& best, const std::optional<Solution>& cand) {
  if (cand && (!best || cand->value < best->value)) best = cand;
}

}  // namespace fracvrp
