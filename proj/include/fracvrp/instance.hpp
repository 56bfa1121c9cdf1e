#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "fracvrp/matrix.hpp"

namespace fracvrp {

struct Point {
  double x = 0;
  double y = 0;
};

// Capacitated VRP data as read from TSPLIB. Vertex 0 is the depot.
struct CvrpInstance {
  std::string name;
  int n_vertices = 0;
  std::vector<Point> coords;
  std::vector<int> demand;
  int capacity = 0;
  int n_vehicles = 0;
  SquareMatrix<int> cost;
};

enum class ObjectiveKind { CostOverLoad, ProfitOverTime };

const char* to_string(ObjectiveKind kind);

// Vertex 0 is the depot, 1..n1 are mandatory customers and n1+1..n1+n2 optional ones.
struct Instance {
  std::string name;
  int n1 = 0;
  int n2 = 0;
  int m = 0;
  int T = 0;
  ObjectiveKind kind = ObjectiveKind::CostOverLoad;
  std::vector<int> service;
  SquareMatrix<int> d;
  SquareMatrix<int> t;

  int n() const { return n1 + n2; }
  int n_vertices() const { return n1 + n2 + 1; }
  bool mandatory(int i) const { return i >= 1 && i <= n1; }
  bool optional(int i) const { return i > n1 && i <= n1 + n2; }
  // Sum of mandatory service times.
  long long beta() const;
};

// Largest vertex count supported by the bit-set based algorithms.
inline constexpr int kMaxVertices = 128;

CvrpInstance parse_tsplib(std::istream& in);
CvrpInstance load_tsplib(const std::filesystem::path& path);

int euclid2d_cost(Point p, Point q);

int bpp_min_bins(std::vector<int> weights, int capacity);

Instance make_class_ca(const CvrpInstance& cvrp, double alpha);
Instance make_class_pa(const CvrpInstance& cvrp, double alpha);

// Throws InvalidInput when a model invariant is violated.
void validate(const Instance& inst);

void write_vrpfo(std::ostream& out, const Instance& inst);
Instance read_vrpfo(std::istream& in, const std::string& name);
Instance load_vrpfo(const std::filesystem::path& path);

}  // namespace fracvrp
