#pragma once

#include <limits>
#include <vector>

#include "fracvrp/core.hpp"
#include "fracvrp/instance.hpp"
#include "fracvrp/matrix.hpp"
#include "fracvrp/vertex_set.hpp"

namespace fracvrp {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

struct NgSets {
  int delta = 0;
  std::vector<std::vector<int>> members;  // members[i] sorted, contains i; empty for the depot
  std::vector<VertexSet> sets;
};

// N_i = {i} plus the delta-1 customers nearest to i under `metric`, ties to the lower index.
NgSets build_ng_sets(const Instance& inst, int delta, const SquareMatrix<double>& metric);
NgSets build_ng_sets(const Instance& inst, int delta);

// Cost-independent state graph of the ng-path recursion. States are ordered by
// (time, vertex, memory); state 0 is the depot at time 0. A backward space runs
// on the transposed time matrix and represents paths from a vertex to the depot.
struct NgStateSpace {
  bool backward = false;
  int T = 0;
  std::vector<int> vertex;
  std::vector<int> time;
  std::vector<VertexSet> memory;
  std::vector<int> in_begin;  // incoming edges of state s: in_src[in_begin[s] .. in_begin[s+1])
  std::vector<int> in_src;
  std::vector<int> in_vertex;  // vertex of in_src[e]

  int size() const { return static_cast<int>(vertex.size()); }
};

NgStateSpace build_ng_space(const Instance& inst, const NgSets& ng, bool backward);

// f(NG,t,i) and predecessor links for every state of a space.
struct NgLabelTable {
  const NgStateSpace* space = nullptr;
  std::vector<double> cost;
  std::vector<int> pred;
};

// `arc_cost` is always given in forward orientation; backward spaces read it transposed.
NgLabelTable evaluate_ng(const NgStateSpace& space, const SquareMatrix<double>& arc_cost);

NgLabelTable forward_ng_dp(const Instance& inst, const NgSets& ng, const SquareMatrix<double>& arc_cost,
                           NgStateSpace& storage);
NgLabelTable backward_ng_dp(const Instance& inst, const NgSets& ng, const SquareMatrix<double>& arc_cost,
                            NgStateSpace& storage);

// Vertices of the best path into `state`, starting at the depot (forward) or
// ending at the depot (backward).
std::vector<int> backtrack(const NgLabelTable& table, int state);

// phi[i][t]: least modified cost of an ng-route whose last customer is i and whose
// total working time is t; +inf where none exists.
struct PhiTable {
  std::vector<std::vector<double>> phi;
  std::vector<std::vector<int>> state;  // argmin state, -1 if none
};

PhiTable phi_table(const Instance& inst, const NgLabelTable& forward, const SquareMatrix<double>& arc_cost);

// Duals of the Charnes-Cooper master: mu[0] is the fleet row, mu[i] the customer rows.
struct CcfDuals {
  std::vector<double> mu;
  double omega = 0;
};

// d_ij - mu_j - (t_ij + s_j) omega, with mu_0 charged on arcs into the depot.
SquareMatrix<double> reduced_arc_costs(const Instance& inst, const CcfDuals& duals);

double reduced_cost(const Instance& inst, const Route& r, const CcfDuals& duals);

struct PricedRoute {
  Route route;
  double reduced_cost = 0;
};

// Up to `limit` ng-routes with reduced cost below `cutoff`, cheapest first.
std::vector<PricedRoute> price_ng_routes(const Instance& inst, const NgStateSpace& space, const CcfDuals& duals,
                                         double cutoff, int limit);

}  // namespace fracvrp
