#pragma once

#include <optional>
#include <vector>

#include "fracvrp/core.hpp"
#include "fracvrp/instance.hpp"

namespace fracvrp {

struct MipResult {
  std::vector<int> x;  // indices of the selected routes
  long long objective = 0;
  bool feasible = false;
  bool proven_optimal = false;
  double root_bound = 0;
  double elapsed = 0;
  long long nodes = 0;
};

// min Σ cost_ℓ x_ℓ over binary x covering every mandatory customer exactly once,
// every optional customer at most once, with m_min <= Σ x <= m_max.
// `warm` is a feasible selection used as the first incumbent.
MipResult solve_fp(const Instance& inst, const std::vector<Route>& routes, const std::vector<long long>& cost,
                   int m_min, int m_max, const std::optional<std::vector<int>>& warm, double tlim);

}  // namespace fracvrp
