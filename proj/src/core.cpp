#include "fracvrp/core.hpp"

#include <numeric>
#include <ostream>

#include "fracvrp/error.hpp"

namespace fracvrp {

Ratio::Ratio(std::int64_t num, std::int64_t den) {
  if (den == 0) throw InvalidInput("ratio with zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  std::int64_t g = std::gcd(num, den);
  if (g == 0) g = 1;
  num_ = num / g;
  den_ = den / g;
}

std::string Ratio::str() const { return std::to_string(num_) + "/" + std::to_string(den_); }

std::strong_ordering operator<=>(const Ratio& a, const Ratio& b) {
  __int128 lhs = static_cast<__int128>(a.num_) * b.den_;
  __int128 rhs = static_cast<__int128>(b.num_) * a.den_;
  if (lhs < rhs) return std::strong_ordering::less;
  if (lhs > rhs) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

int parametric_sign(std::int64_t num, std::int64_t den, const Ratio& r) {
  __int128 v = static_cast<__int128>(num) * r.den() - static_cast<__int128>(r.num()) * den;
  return (v > 0) - (v < 0);
}

Route make_route(const Instance& inst, const std::vector<int>& seq) {
  const int nv = inst.n_vertices();
  if (seq.size() < 3 || seq.front() != 0 || seq.back() != 0) {
    throw InvalidInput("route must start and end at the depot and visit a customer");
  }
  Route r;
  r.vertices = seq;
  r.visits.assign(nv, 0);
  for (std::size_t k = 0; k < seq.size(); ++k) {
    int v = seq[k];
    if (v < 0 || v >= nv) throw InvalidInput("vertex " + std::to_string(v) + " out of range");
    if (k > 0) {
      int u = seq[k - 1];
      r.cost += inst.d(u, v);
      r.working_time += inst.t(u, v) + inst.service[v];
    }
    if (k > 0 && k + 1 < seq.size()) {
      if (v == 0) throw InvalidInput("route passes through the depot");
      if (++r.visits[v] > 1) r.elementary = false;
      r.visited.insert(v);
    }
  }
  return r;
}

Route route_from_sequence(const Instance& inst, const std::vector<int>& seq) {
  Route r = make_route(inst, seq);
  if (r.working_time > inst.T) {
    throw RouteInfeasible("working time " + std::to_string(r.working_time) + " exceeds " +
                          std::to_string(inst.T));
  }
  return r;
}

Ratio solution_value(const Instance& inst, const std::vector<Route>& routes) {
  if (routes.empty()) throw Infeasible("empty solution");
  if (static_cast<int>(routes.size()) > inst.m) throw Infeasible("too many routes");
  std::vector<int> cover(inst.n_vertices(), 0);
  long long num = 0, den = 0;
  for (const Route& r : routes) {
    if (!r.elementary) throw Infeasible("non-elementary route in solution");
    if (r.working_time > inst.T) throw Infeasible("route exceeds working time");
    for (int v : r.customers()) ++cover[v];
    num += r.cost;
    den += r.working_time;
  }
  for (int i = 1; i < inst.n_vertices(); ++i) {
    if (inst.mandatory(i) && cover[i] != 1) {
      throw Infeasible("mandatory customer " + std::to_string(i) + " covered " + std::to_string(cover[i]) +
                       " times");
    }
    if (cover[i] > 1) throw Infeasible("optional customer " + std::to_string(i) + " covered twice");
  }
  if (den <= 0) throw Infeasible("solution has zero working time");
  return Ratio(num, den);
}

Solution make_solution(const Instance& inst, std::vector<Route> routes) {
  Solution s;
  s.value = solution_value(inst, routes);
  s.routes = std::move(routes);
  return s;
}

double reported_value(const Instance& inst, const Ratio& r) {
  return inst.kind == ObjectiveKind::ProfitOverTime ? -r.value() : r.value();
}

Ratio reported_ratio(const Instance& inst, const Ratio& r) {
  return inst.kind == ObjectiveKind::ProfitOverTime ? Ratio(-r.num(), r.den()) : r;
}

void write_solution(std::ostream& out, const Instance& inst, const Solution& sol) {
  for (const Route& r : sol.routes) {
    out << r.cost << ' ' << r.working_time << " :";
    for (int v : r.customers()) out << ' ' << v;
    out << '\n';
  }
  out << "VALUE " << reported_ratio(inst, sol.value).str() << '\n';
}

}  // namespace fracvrp
