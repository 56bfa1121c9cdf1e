#pragma once

#include <iosfwd>
#include <limits>
#include <vector>

#include "fracvrp/bounds.hpp"
#include "fracvrp/core.hpp"
#include "fracvrp/instance.hpp"
#include "fracvrp/ngpath.hpp"

namespace fracvrp {

// Least reduced cost of a backward ng-completion from vertex e to the depot that
// avoids the vertices of a forward path and fits in its remaining time.
class CompletionBound {
 public:
  CompletionBound(const Instance& inst, const NgSets& ng, const NgStateSpace& backward,
                  const SquareMatrix<double>& arc_cost);

  // Forward path ending at e with visited set `visited` and time t (including s_e).
  double operator()(int e, const VertexSet& visited, int t) const;

 private:
  const Instance* inst_;
  const NgSets* ng_;
  std::vector<std::vector<int>> times_;     // per vertex, distinct backward state times
  std::vector<std::vector<double>> table_;  // per vertex, [subset][time index]
};

struct ForwardPath {
  std::vector<int> vertices;  // starts at the depot
  VertexSet visited;
  int time = 0;
  double cost = 0;  // reduced arc costs so far
  int end() const { return vertices.back(); }
};

double db_of_path(const ForwardPath& p, const CompletionBound& completion);

// γ_ℓ = α_ℓ z* - (α_ℓ DB + c̄_0), α_ℓ = w_ℓ + (m_max - 1) T.
double corollary1_threshold(double w, double z_star, double db, double cbar0, int m_max, int T);

struct GenrParams {
  long long delta_max = 300'000;
  long long nstatb = 200'000'000;
  bool dominance = true;
  bool unbounded_gamma = false;  // keep every feasible route
};

struct ReducedSet {
  std::vector<Route> routes;
  std::vector<double> reduced_costs;
  double gapmin = kInf;  // lower bound on the reduced cost of routes left out by truncation
  bool complete = true;  // no truncation by delta_max or nstatb
  bool hit_delta_max = false;
  bool hit_nstatb = false;
  long long paths = 0;
};

struct GenrInput {
  const Instance* inst = nullptr;
  const NgSets* ng = nullptr;
  const NgStateSpace* backward = nullptr;
  DualSolution duals;
  double z_star = 0;   // primal bound
  int m_max = 0;
  double t_lower = 0;  // lower bound on total working time
};

ReducedSet generate_reduced_set(const GenrInput& in, const GenrParams& params = {});

void write_route_dump(std::ostream& out, const ReducedSet& set);

}  // namespace fracvrp
