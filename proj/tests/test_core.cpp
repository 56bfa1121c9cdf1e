#include <gtest/gtest.h>

#include "fracvrp/core.hpp"
#include "fracvrp/error.hpp"
#include "fracvrp/instance.hpp"
#include "test_util.hpp"

using namespace fracvrp;

namespace {

Instance one_customer() {
  return test::tiny(1, 0, 1, 10, ObjectiveKind::CostOverLoad, {0, 7}, {{0, 10}, {10, 0}}, test::zeros(2));
}

Instance two_customers() {
  return test::tiny(2, 0, 1, 30, ObjectiveKind::CostOverLoad, {0, 2, 6}, {{0, 1, 1}, {1, 0, 1}, {1, 1, 0}},
                    {{0, 3, 9}, {9, 0, 4}, {5, 9, 0}});
}

}  // namespace

TEST(Ratio, CanonicalForm) {
  Ratio r(10, -4);
  EXPECT_EQ(r.num(), -5);
  EXPECT_EQ(r.den(), 2);
  EXPECT_EQ(Ratio(705, 386).str(), "705/386");
  EXPECT_THROW(Ratio(1, 0), InvalidInput);
}

TEST(Ratio, ExactOrdering) {
  EXPECT_LT(Ratio(705, 386), Ratio(734, 393));
  EXPECT_EQ(Ratio(444, 381), Ratio(148, 127));
  EXPECT_GT(Ratio(-1, 3), Ratio(-1, 2));
}

TEST(Ratio, ParametricSign) {
  EXPECT_EQ(parametric_sign(20, 7, Ratio(20, 7)), 0);
  EXPECT_EQ(parametric_sign(21, 7, Ratio(20, 7)), 1);
  EXPECT_EQ(parametric_sign(19, 7, Ratio(20, 7)), -1);
}

TEST(Route, CostAndWorkingTime) {
  Route r = route_from_sequence(one_customer(), {0, 1, 0});
  EXPECT_EQ(r.cost, 20);
  EXPECT_EQ(r.working_time, 7);
  EXPECT_TRUE(r.elementary);
  EXPECT_EQ(r.visits[1], 1);
}

TEST(Route, TravelAndServiceTimesAdd) {
  Route r = route_from_sequence(two_customers(), {0, 1, 2, 0});
  EXPECT_EQ(r.working_time, 20);
  EXPECT_EQ(r.cost, 3);
}

TEST(Route, WorkingTimeLimit) {
  Instance inst = two_customers();
  inst.T = 19;
  EXPECT_THROW(route_from_sequence(inst, {0, 1, 2, 0}), RouteInfeasible);
  EXPECT_NO_THROW(make_route(inst, {0, 1, 2, 0}));
}

TEST(Route, MalformedSequences) {
  Instance inst = two_customers();
  EXPECT_THROW(route_from_sequence(inst, {0, 0}), InvalidInput);
  EXPECT_THROW(route_from_sequence(inst, {1, 2, 0}), InvalidInput);
  EXPECT_THROW(route_from_sequence(inst, {0, 3, 0}), InvalidInput);
}

TEST(Route, RepeatedCustomerIsNotElementary) {
  Route r = make_route(two_customers(), {0, 1, 2, 1, 0});
  EXPECT_FALSE(r.elementary);
  EXPECT_EQ(r.visits[1], 2);
}

TEST(Solution, SingleRouteRatio) {
  Instance inst = one_customer();
  Solution s = make_solution(inst, {route_from_sequence(inst, {0, 1, 0})});
  EXPECT_EQ(s.value, Ratio(20, 7));
}

TEST(Solution, CoverageChecks) {
  Instance inst = two_customers();
  Route a = route_from_sequence(inst, {0, 1, 0});
  Route b = route_from_sequence(inst, {0, 2, 0});
  EXPECT_THROW(make_solution(inst, {a}), Infeasible);
  EXPECT_THROW(make_solution(inst, {a, b}), Infeasible);  // m = 1
  inst.m = 2;
  EXPECT_EQ(make_solution(inst, {a, b}).value, Ratio(a.cost + b.cost, a.working_time + b.working_time));
}

TEST(Solution, ProfitOrientation) {
  Instance inst = test::tiny(1, 0, 1, 20, ObjectiveKind::ProfitOverTime, {0, 2}, {{0, -9}, {0, 0}},
                             {{0, 3}, {3, 0}});
  Solution s = make_solution(inst, {route_from_sequence(inst, {0, 1, 0})});
  EXPECT_EQ(s.value, Ratio(-9, 8));
  EXPECT_EQ(reported_ratio(inst, s.value), Ratio(9, 8));
}
