#pragma once

#include <optional>
#include <vector>

#include "fracvrp/core.hpp"
#include "fracvrp/instance.hpp"

namespace fracvrp {

// Picks disjoint routes from `candidates` in the given order, repairs uncovered
// mandatory customers by cheapest insertion and improves the result by local search.
std::optional<Solution> greedy_from_routes(const Instance& inst, const std::vector<Route>& candidates);

// Cheapest-insertion construction over mandatory customers followed by local search.
std::optional<Solution> insertion_heuristic(const Instance& inst);

// Relocate, swap, 2-opt and optional-customer insert/remove moves, accepted
// while the exact ratio strictly decreases.
Solution local_search(const Instance& inst, const Solution& start);

// Keeps the better of two optional solutions.
void keep_best(std::optional<Solution>& best, const std::optional<Solution>& cand);

}  // namespace fracvrp
