#include <gtest/gtest.h>

#include <sstream>

#include "fracvrp/error.hpp"
#include "fracvrp/instance.hpp"
#include "test_util.hpp"

using namespace fracvrp;

namespace {

const char* kTwoVertex =
    "NAME : tiny-n2-k1\n"
    "TYPE : CVRP\n"
    "DIMENSION : 2\n"
    "EDGE_WEIGHT_TYPE : EUC_2D\n"
    "CAPACITY : 10\n"
    "NODE_COORD_SECTION\n"
    "1 0 0\n"
    "2 3 4\n"
    "DEMAND_SECTION\n"
    "1 0\n"
    "2 7\n"
    "DEPOT_SECTION\n"
    "1\n"
    "-1\n"
    "EOF\n";

const char* kThreeVertex =
    "NAME : tri-n3-k2\n"
    "DIMENSION : 3\n"
    "EDGE_WEIGHT_TYPE : EUC_2D\n"
    "CAPACITY : 10\n"
    "NODE_COORD_SECTION\n"
    "1 0 0\n"
    "2 3 4\n"
    "3 6 8\n"
    "DEMAND_SECTION\n"
    "1 0\n"
    "2 4\n"
    "3 6\n"
    "DEPOT_SECTION\n"
    "1\n"
    "-1\n"
    "EOF\n";

CvrpInstance parse(const std::string& text) {
  std::istringstream in(text);
  return parse_tsplib(in);
}

}  // namespace

TEST(Tsplib, LoadsAn32k5) {
  CvrpInstance c = load_tsplib(test::data_file("A-n32-k5.vrp"));
  EXPECT_EQ(c.n_vertices, 32);
  EXPECT_EQ(c.n_vehicles, 5);
  EXPECT_EQ(c.capacity, 100);
  EXPECT_EQ(c.demand[0], 0);
}

TEST(Tsplib, TwoVertexFile) {
  CvrpInstance c = parse(kTwoVertex);
  ASSERT_EQ(c.n_vertices, 2);
  EXPECT_EQ(c.demand, (std::vector<int>{0, 7}));
  EXPECT_EQ(c.cost(0, 1), 5);
  EXPECT_EQ(c.cost(1, 0), 5);
}

TEST(Tsplib, MissingDemandSection) {
  std::string text = kTwoVertex;
  auto a = text.find("DEMAND_SECTION");
  auto b = text.find("DEPOT_SECTION");
  text.erase(a, b - a);
  EXPECT_THROW(parse(text), ParseError);
}

TEST(Tsplib, RejectsOtherEdgeWeightTypes) {
  std::string text = kTwoVertex;
  text.replace(text.find("EUC_2D"), 6, "GEO");
  EXPECT_THROW(parse(text), UnsupportedFormat);
}

TEST(Euclid, RoundsToNearest) {
  EXPECT_EQ(euclid2d_cost({0, 0}, {3, 4}), 5);
  EXPECT_EQ(euclid2d_cost({0, 0}, {1, 1}), 1);
  EXPECT_EQ(euclid2d_cost({0, 0}, {0, 0}), 0);
}

TEST(Euclid, SymmetricOnFileCoordinates) {
  CvrpInstance c = load_tsplib(test::data_file("A-n33-k6.vrp"));
  for (int i = 0; i < c.n_vertices; ++i)
    for (int j = 0; j < c.n_vertices; ++j) {
      EXPECT_EQ(c.cost(i, j), c.cost(j, i));
      EXPECT_GE(c.cost(i, j), 0);
    }
}

TEST(BinPacking, SmallCases) {
  EXPECT_EQ(bpp_min_bins({60, 60, 60}, 100), 3);
  EXPECT_EQ(bpp_min_bins({50, 50}, 100), 1);
  EXPECT_EQ(bpp_min_bins({}, 100), 0);
}

TEST(BinPacking, An32k5FleetSize) {
  CvrpInstance c = load_tsplib(test::data_file("A-n32-k5.vrp"));
  std::vector<int> mand(c.demand.begin() + 1, c.demand.begin() + 16);
  EXPECT_EQ(std::min(bpp_min_bins(mand, c.capacity) + 1, 5), 4);
}

TEST(ClassCA, An32k5) {
  CvrpInstance c = load_tsplib(test::data_file("A-n32-k5.vrp"));
  Instance a = make_class_ca(c, 0.5);
  EXPECT_EQ(a.n1, 15);
  EXPECT_EQ(a.n2, 16);
  EXPECT_EQ(a.m, 4);
  EXPECT_EQ(a.T, 100);
  EXPECT_EQ(a.kind, ObjectiveKind::CostOverLoad);
  for (int i = 0; i < a.n_vertices(); ++i)
    for (int j = 0; j < a.n_vertices(); ++j) EXPECT_EQ(a.t(i, j), 0);
  EXPECT_GE(static_cast<long long>(a.m) * a.T, a.beta());

  Instance b = make_class_ca(c, 0.75);
  EXPECT_EQ(b.n1, 23);
  EXPECT_EQ(b.n2, 8);
}

TEST(ClassCA, FloorArithmeticOnThreeVertices) {
  Instance a = make_class_ca(parse(kThreeVertex), 0.5);
  EXPECT_EQ(a.n1, 1);
  EXPECT_EQ(a.n2, 1);
}

TEST(ClassCA, Deterministic) {
  CvrpInstance c = load_tsplib(test::data_file("A-n33-k5.vrp"));
  std::ostringstream x, y;
  write_vrpfo(x, make_class_ca(c, 0.5));
  write_vrpfo(y, make_class_ca(c, 0.5));
  EXPECT_EQ(x.str(), y.str());
}

TEST(ClassPA, ProfitOnArcEntry) {
  Instance p = make_class_pa(parse(kThreeVertex), 0.5);
  EXPECT_EQ(p.kind, ObjectiveKind::ProfitOverTime);
  for (int i = 0; i < 3; ++i) {
    if (i != 1) EXPECT_EQ(p.d(i, 1), -4);
    if (i != 2) EXPECT_EQ(p.d(i, 2), -6);
    EXPECT_EQ(p.d(i, 0), 0);
  }
}

TEST(ClassPA, An32k5Structure) {
  CvrpInstance c = load_tsplib(test::data_file("A-n32-k5.vrp"));
  Instance p = make_class_pa(c, 0.5);
  EXPECT_EQ(p.n1, 15);
  EXPECT_EQ(p.n2, 16);
  EXPECT_EQ(p.t, c.cost);
}

TEST(Vrpfo, RoundTrip) {
  CvrpInstance c = load_tsplib(test::data_file("A-n32-k5.vrp"));
  for (Instance inst : {make_class_ca(c, 0.75), make_class_pa(c, 0.5)}) {
    std::ostringstream out;
    write_vrpfo(out, inst);
    std::istringstream in(out.str());
    Instance back = read_vrpfo(in, inst.name);
    EXPECT_EQ(back.n1, inst.n1);
    EXPECT_EQ(back.n2, inst.n2);
    EXPECT_EQ(back.m, inst.m);
    EXPECT_EQ(back.T, inst.T);
    EXPECT_EQ(back.kind, inst.kind);
    EXPECT_EQ(back.service, inst.service);
    EXPECT_EQ(back.d, inst.d);
    EXPECT_EQ(back.t, inst.t);
  }
}

TEST(Vrpfo, BadHeader) {
  std::istringstream in("VRPFO v2\n");
  EXPECT_THROW(read_vrpfo(in, "x"), ParseError);
}

TEST(Validate, MandatoryCustomerTooFar) {
  auto inst = test::tiny(1, 0, 1, 5, ObjectiveKind::CostOverLoad, {0, 3}, test::zeros(2), {{0, 2}, {2, 0}});
  EXPECT_THROW(validate(inst), InvalidInput);
}
