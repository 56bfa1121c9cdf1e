#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "fracvrp/core.hpp"
#include "fracvrp/instance.hpp"

namespace fracvrp {

// Every elementary route within the working-time limit, one per visiting sequence.
std::vector<Route> enumerate_routes(const Instance& inst);

struct BruteForceResult {
  bool feasible = false;
  Solution solution;                 // one optimal solution
  std::vector<Route> optimal_routes;  // every route that occurs in at least one optimal solution
};

// Exhaustive optimum over all route partitions; practical for n <= 10.
BruteForceResult brute_force(const Instance& inst);

struct RandomSpec {
  ObjectiveKind kind = ObjectiveKind::CostOverLoad;
  int n_max = 7;
  int T_max = 30;
};

// Small random instance in the style of class CA (cost over load) or PA (profit over time).
// Always feasible.
Instance random_instance(std::mt19937_64& rng, const RandomSpec& spec);

// Identity of a route up to its visiting order: (visited set, cost, working time).
struct RouteSignature {
  VertexSet visited;
  long long cost = 0;
  long long working_time = 0;
  friend auto operator<=>(const RouteSignature&, const RouteSignature&) = default;
};

RouteSignature signature(const Route& r);

}  // namespace fracvrp
