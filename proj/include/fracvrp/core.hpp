#pragma once

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "fracvrp/instance.hpp"
#include "fracvrp/vertex_set.hpp"

namespace fracvrp {

// Exact rational num/den with den > 0, kept in lowest terms.
class Ratio {
 public:
  Ratio() = default;
  Ratio(std::int64_t num, std::int64_t den);

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }
  double value() const { return static_cast<double>(num_) / static_cast<double>(den_); }
  std::string str() const;

  friend bool operator==(const Ratio&, const Ratio&) = default;
  friend std::strong_ordering operator<=>(const Ratio& a, const Ratio& b);

 private:
  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

// Sign of num - r * den, computed exactly.
int parametric_sign(std::int64_t num, std::int64_t den, const Ratio& r);

struct Route {
  std::vector<int> vertices;  // 0, i1, ..., ir, 0
  long long cost = 0;
  long long working_time = 0;
  std::vector<int> visits;  // per vertex, index 0 unused
  VertexSet visited;
  bool elementary = true;

  // Customers in visiting order.
  std::vector<int> customers() const { return {vertices.begin() + 1, vertices.end() - 1}; }
};

// Builds a route, checking the working-time limit.
Route route_from_sequence(const Instance& inst, const std::vector<int>& seq);
// Same without the working-time check; used for relaxed (ng) routes.
Route make_route(const Instance& inst, const std::vector<int>& seq);

struct Solution {
  std::vector<Route> routes;
  Ratio value;
};

// Exact Σc/Σw of a set of routes after checking coverage and fleet size.
Ratio solution_value(const Instance& inst, const std::vector<Route>& routes);
Solution make_solution(const Instance& inst, std::vector<Route> routes);

// Value in the natural orientation: cost/load, or profit/time for ProfitOverTime.
double reported_value(const Instance& inst, const Ratio& r);
Ratio reported_ratio(const Instance& inst, const Ratio& r);

void write_solution(std::ostream& out, const Instance& inst, const Solution& sol);

}  // namespace fracvrp
