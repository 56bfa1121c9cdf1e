#include "fracvrp/instance.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <istream>
#include <map>
#include <numeric>
#include <ostream>
#include <regex>
#include <sstream>

#include "fracvrp/error.hpp"

namespace fracvrp {

const char* to_string(ObjectiveKind kind) {
  return kind == ObjectiveKind::CostOverLoad ? "CostOverLoad" : "ProfitOverTime";
}

long long Instance::beta() const {
  long long b = 0;
  for (int i = 1; i <= n1; ++i) b += service[i];
  return b;
}

namespace {

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

long long parse_int(const std::string& tok, int line) {
  try {
    std::size_t pos = 0;
    long long v = std::stoll(tok, &pos);
    if (pos != tok.size()) throw ParseError("expected integer, got '" + tok + "'", line);
    return v;
  } catch (const std::logic_error&) {
    throw ParseError("expected integer, got '" + tok + "'", line);
  }
}

double parse_real(const std::string& tok, int line) {
  try {
    std::size_t pos = 0;
    double v = std::stod(tok, &pos);
    if (pos != tok.size()) throw ParseError("expected number, got '" + tok + "'", line);
    return v;
  } catch (const std::logic_error&) {
    throw ParseError("expected number, got '" + tok + "'", line);
  }
}

std::vector<std::string> split(const std::string& s) {
  std::istringstream is(s);
  std::vector<std::string> out;
  for (std::string tok; is >> tok;) out.push_back(tok);
  return out;
}

enum class Section { None, Coords, Demand, Depot };

}  // namespace

CvrpInstance parse_tsplib(std::istream& in) {
  std::map<std::string, std::string> header;
  std::map<int, Point> coords;
  std::map<int, int> demand;
  std::vector<int> depots;
  bool seen_coords = false, seen_demand = false, seen_depot = false;
  Section section = Section::None;

  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    std::string s = trim(raw);
    if (s.empty()) continue;
    if (s == "EOF") break;
    if (s.rfind("NODE_COORD_SECTION", 0) == 0) {
      section = Section::Coords;
      seen_coords = true;
      continue;
    }
    if (s.rfind("DEMAND_SECTION", 0) == 0) {
      section = Section::Demand;
      seen_demand = true;
      continue;
    }
    if (s.rfind("DEPOT_SECTION", 0) == 0) {
      section = Section::Depot;
      seen_depot = true;
      continue;
    }
    auto colon = s.find(':');
    if (colon != std::string::npos && section == Section::None) {
      header[trim(s.substr(0, colon))] = trim(s.substr(colon + 1));
      continue;
    }
    auto toks = split(s);
    switch (section) {
      case Section::Coords:
        if (toks.size() != 3) throw ParseError("coordinate line needs 3 fields", line);
        coords[static_cast<int>(parse_int(toks[0], line))] = {parse_real(toks[1], line),
                                                              parse_real(toks[2], line)};
        break;
      case Section::Demand:
        if (toks.size() != 2) throw ParseError("demand line needs 2 fields", line);
        demand[static_cast<int>(parse_int(toks[0], line))] =
            static_cast<int>(parse_int(toks[1], line));
        break;
      case Section::Depot: {
        long long v = parse_int(toks.at(0), line);
        if (v == -1) {
          section = Section::None;
        } else {
          depots.push_back(static_cast<int>(v));
        }
        break;
      }
      case Section::None:
        throw ParseError("unexpected line '" + s + "'", line);
    }
  }

  for (const char* key : {"NAME", "DIMENSION", "CAPACITY", "EDGE_WEIGHT_TYPE"}) {
    if (!header.count(key)) throw ParseError(std::string("missing ") + key, line);
  }
  if (header["EDGE_WEIGHT_TYPE"] != "EUC_2D") {
    throw UnsupportedFormat("EDGE_WEIGHT_TYPE " + header["EDGE_WEIGHT_TYPE"] +
                            " is not supported");
  }
  if (!seen_coords) throw ParseError("missing NODE_COORD_SECTION", line);
  if (!seen_demand) throw ParseError("missing DEMAND_SECTION", line);
  if (!seen_depot || depots.size() != 1) throw ParseError("DEPOT_SECTION must list one depot", line);

  CvrpInstance out;
  out.name = header["NAME"];
  int dim = static_cast<int>(parse_int(header["DIMENSION"], 0));
  out.capacity = static_cast<int>(parse_int(header["CAPACITY"], 0));
  if (dim < 2 || dim > kMaxVertices) throw ParseError("DIMENSION out of range", 0);
  if (out.capacity <= 0) throw ParseError("CAPACITY must be positive", 0);
  if (static_cast<int>(coords.size()) != dim || static_cast<int>(demand.size()) != dim) {
    throw ParseError("section sizes do not match DIMENSION", 0);
  }

  // File ids in order, depot first.
  std::vector<int> ids;
  ids.push_back(depots[0]);
  for (const auto& [id, p] : coords) {
    if (id != depots[0]) ids.push_back(id);
  }
  if (!coords.count(depots[0])) throw ParseError("depot has no coordinates", 0);

  out.n_vertices = dim;
  for (int id : ids) {
    if (!demand.count(id)) throw ParseError("node " + std::to_string(id) + " has no demand", 0);
    out.coords.push_back(coords[id]);
    out.demand.push_back(demand[id]);
  }
  out.demand[0] = 0;
  for (int q : out.demand) {
    if (q < 0) throw ParseError("negative demand", 0);
    if (q > out.capacity) throw ParseError("demand exceeds capacity", 0);
  }
  out.cost = SquareMatrix<int>(dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j)
      out.cost(i, j) = i == j ? 0 : euclid2d_cost(out.coords[i], out.coords[j]);

  std::smatch mk;
  static const std::regex kSuffix("-k([0-9]+)");
  if (std::regex_search(out.name, mk, kSuffix)) {
    out.n_vehicles = std::stoi(mk[1]);
  } else {
    out.n_vehicles = dim - 1;
  }
  return out;
}

CvrpInstance load_tsplib(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  try {
    return parse_tsplib(in);
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what(), e.line());
  }
}

int euclid2d_cost(Point p, Point q) {
  double dx = p.x - q.x, dy = p.y - q.y;
  return static_cast<int>(std::lround(std::sqrt(dx * dx + dy * dy)));
}

int bpp_min_bins(std::vector<int> weights, int capacity) {
  if (capacity <= 0) throw InvalidInput("capacity must be positive");
  for (int w : weights) {
    if (w > capacity) throw Infeasible("item weight exceeds bin capacity");
    if (w < 0) throw InvalidInput("negative item weight");
  }
  std::erase(weights, 0);
  if (weights.empty()) return 0;
  std::sort(weights.rbegin(), weights.rend());
  long long total = std::accumulate(weights.begin(), weights.end(), 0LL);
  int lower = static_cast<int>((total + capacity - 1) / capacity);

  std::vector<int> bins;
  for (int w : weights) {
    auto it = std::find_if(bins.begin(), bins.end(), [&](int r) { return r >= w; });
    if (it == bins.end()) {
      bins.push_back(capacity - w);
    } else {
      *it -= w;
    }
  }
  int best = static_cast<int>(bins.size());
  if (best == lower) return best;

  std::vector<long long> suffix(weights.size() + 1, 0);
  for (int k = static_cast<int>(weights.size()) - 1; k >= 0; --k) suffix[k] = suffix[k + 1] + weights[k];

  std::vector<int> residual;
  std::function<void(std::size_t, long long)> dfs = [&](std::size_t k, long long free) {
    if (best == lower) return;
    if (k == weights.size()) {
      best = static_cast<int>(residual.size());
      return;
    }
    long long excess = std::max(0LL, suffix[k] - free);
    int need = static_cast<int>(residual.size() + (excess + capacity - 1) / capacity);
    if (need >= best) return;
    int w = weights[k];
    for (std::size_t b = 0; b < residual.size(); ++b) {
      if (residual[b] < w) continue;
      bool repeat = false;
      for (std::size_t c = 0; c < b; ++c) repeat |= residual[c] == residual[b];
      if (repeat) continue;
      residual[b] -= w;
      dfs(k + 1, free - w);
      residual[b] += w;
    }
    if (static_cast<int>(residual.size()) + 1 < best) {
      residual.push_back(capacity - w);
      dfs(k + 1, free + capacity - w);
      residual.pop_back();
    }
  };
  dfs(0, 0);
  return best;
}

namespace {

int mandatory_count(const CvrpInstance& cvrp, double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw InvalidInput("alpha must lie in (0,1)");
  int n1 = static_cast<int>(std::floor(alpha * (cvrp.n_vertices - 1)));
  if (n1 < 1) throw InvalidInput("alpha yields no mandatory customer");
  return n1;
}

}  // namespace

Instance make_class_ca(const CvrpInstance& cvrp, double alpha) {
  Instance inst;
  inst.name = cvrp.name;
  inst.n1 = mandatory_count(cvrp, alpha);
  inst.n2 = cvrp.n_vertices - 1 - inst.n1;
  inst.kind = ObjectiveKind::CostOverLoad;
  inst.T = cvrp.capacity;
  inst.service = cvrp.demand;
  inst.service[0] = 0;
  for (int i = 1; i < cvrp.n_vertices; ++i) {
    if (cvrp.demand[i] <= 0) throw InvalidInput("customer " + std::to_string(i) + " has zero demand");
  }
  inst.d = cvrp.cost;
  inst.t = SquareMatrix<int>(cvrp.n_vertices, 0);
  std::vector<int> mandatory(cvrp.demand.begin() + 1, cvrp.demand.begin() + 1 + inst.n1);
  inst.m = std::min(bpp_min_bins(mandatory, cvrp.capacity) + 1, cvrp.n_vehicles);
  validate(inst);
  return inst;
}

Instance make_class_pa(const CvrpInstance& cvrp, double alpha) {
  Instance inst;
  inst.name = cvrp.name;
  inst.n1 = mandatory_count(cvrp, alpha);
  inst.n2 = cvrp.n_vertices - 1 - inst.n1;
  inst.kind = ObjectiveKind::ProfitOverTime;
  const int nv = cvrp.n_vertices;
  for (int i = 1; i < nv; ++i) {
    if (cvrp.demand[i] <= 0) throw InvalidInput("customer " + std::to_string(i) + " has zero demand");
  }
  inst.d = SquareMatrix<int>(nv, 0);
  for (int i = 0; i < nv; ++i)
    for (int j = 1; j < nv; ++j)
      if (i != j) inst.d(i, j) = -cvrp.demand[j];
  inst.t = cvrp.cost;
  inst.service.assign(nv, 0);
  for (int i = 1; i < nv; ++i) inst.service[i] = (cvrp.demand[i] + 1) / 2;

  // Sweep: customers by polar angle around the depot, cut when capacity is exceeded.
  std::vector<int> order(nv - 1);
  std::iota(order.begin(), order.end(), 1);
  std::vector<double> angle(nv);
  for (int i = 1; i < nv; ++i) {
    angle[i] = std::atan2(cvrp.coords[i].y - cvrp.coords[0].y, cvrp.coords[i].x - cvrp.coords[0].x);
  }
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return angle[a] < angle[b]; });
  std::vector<std::vector<int>> routes(1);
  int load = 0;
  for (int i : order) {
    if (load + cvrp.demand[i] > cvrp.capacity) {
      routes.emplace_back();
      load = 0;
    }
    routes.back().push_back(i);
    load += cvrp.demand[i];
  }
  long long longest = 0;
  for (const auto& r : routes) {
    long long dur = 0;
    int prev = 0;
    for (int i : r) {
      dur += inst.t(prev, i) + inst.service[i];
      prev = i;
    }
    dur += inst.t(prev, 0);
    longest = std::max(longest, dur);
  }
  inst.T = static_cast<int>((105 * longest + 99) / 100);
  for (int i = 1; i <= inst.n1; ++i) {
    inst.T = std::max(inst.T, inst.service[i] + inst.t(0, i) + inst.t(i, 0));
  }
  inst.m = static_cast<int>(routes.size());
  validate(inst);
  return inst;
}

void validate(const Instance& inst) {
  const int nv = inst.n_vertices();
  if (inst.n1 <= 0) throw InvalidInput("instance needs at least one mandatory customer");
  if (inst.n2 < 0) throw InvalidInput("negative optional customer count");
  if (nv > kMaxVertices) throw InvalidInput("too many vertices");
  if (inst.m <= 0) throw InvalidInput("fleet size must be positive");
  if (inst.T <= 0) throw InvalidInput("working time limit must be positive");
  if (static_cast<int>(inst.service.size()) != nv || inst.d.size() != nv || inst.t.size() != nv) {
    throw InvalidInput("dimension mismatch");
  }
  if (inst.service[0] != 0) throw InvalidInput("depot service time must be zero");
  for (int i = 1; i < nv; ++i) {
    if (inst.service[i] <= 0) throw InvalidInput("service time of " + std::to_string(i) + " must be positive");
  }
  for (int i = 0; i < nv; ++i)
    for (int j = 0; j < nv; ++j)
      if (inst.t(i, j) < 0) throw InvalidInput("negative travel time");
  for (int i = 1; i <= inst.n1; ++i) {
    if (inst.service[i] + inst.t(0, i) + inst.t(i, 0) > inst.T) {
      throw InvalidInput("mandatory customer " + std::to_string(i) + " cannot be served within T");
    }
  }
}

void write_vrpfo(std::ostream& out, const Instance& inst) {
  const int nv = inst.n_vertices();
  out << "VRPFO v1\n";
  out << inst.n1 << ' ' << inst.n2 << ' ' << inst.m << ' ' << inst.T << ' ' << to_string(inst.kind) << '\n';
  for (int i = 0; i < nv; ++i) out << i << ' ' << inst.service[i] << '\n';
  auto dump = [&](const char* label, const SquareMatrix<int>& mat) {
    out << label << '\n';
    for (int i = 0; i < nv; ++i) {
      for (int j = 0; j < nv; ++j) out << (j ? " " : "") << mat(i, j);
      out << '\n';
    }
  };
  dump("D", inst.d);
  dump("Tt", inst.t);
}

Instance read_vrpfo(std::istream& in, const std::string& name) {
  int line = 0;
  std::string raw;
  auto next = [&]() -> std::vector<std::string> {
    while (std::getline(in, raw)) {
      ++line;
      auto toks = split(raw);
      if (!toks.empty()) return toks;
    }
    throw ParseError("unexpected end of file", line);
  };
  auto num = [&](const std::string& tok) { return static_cast<int>(parse_int(tok, line)); };

  auto head = next();
  if (head.size() != 2 || head[0] != "VRPFO" || head[1] != "v1") throw ParseError("expected 'VRPFO v1'", line);
  auto dims = next();
  if (dims.size() != 5) throw ParseError("expected 'n1 n2 m T kind'", line);
  Instance inst;
  inst.name = name;
  inst.n1 = num(dims[0]);
  inst.n2 = num(dims[1]);
  inst.m = num(dims[2]);
  inst.T = num(dims[3]);
  if (dims[4] == "CostOverLoad") {
    inst.kind = ObjectiveKind::CostOverLoad;
  } else if (dims[4] == "ProfitOverTime") {
    inst.kind = ObjectiveKind::ProfitOverTime;
  } else {
    throw ParseError("unknown objective kind '" + dims[4] + "'", line);
  }
  const int nv = inst.n1 + inst.n2 + 1;
  if (inst.n1 < 0 || inst.n2 < 0 || nv > kMaxVertices) throw ParseError("bad customer counts", line);
  inst.service.assign(nv, 0);
  for (int i = 0; i < nv; ++i) {
    auto row = next();
    if (row.size() != 2 || num(row[0]) != i) throw ParseError("expected 'i s_i' for vertex " + std::to_string(i), line);
    inst.service[i] = num(row[1]);
  }
  auto matrix = [&](const char* label) {
    auto lab = next();
    if (lab.size() != 1 || lab[0] != label) throw ParseError(std::string("expected '") + label + "'", line);
    SquareMatrix<int> mat(nv);
    for (int i = 0; i < nv; ++i) {
      auto row = next();
      if (static_cast<int>(row.size()) != nv) throw ParseError("matrix row has wrong length", line);
      for (int j = 0; j < nv; ++j) mat(i, j) = num(row[j]);
    }
    return mat;
  };
  inst.d = matrix("D");
  inst.t = matrix("Tt");
  validate(inst);
  return inst;
}

Instance load_vrpfo(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  try {
    return read_vrpfo(in, path.stem().string());
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what(), e.line());
  }
}

}  // namespace fracvrp
