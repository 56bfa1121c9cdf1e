#include <gtest/gtest.h>

#include <map>
#include <random>

#include "fracvrp/ngpath.hpp"
#include "fracvrp/oracle.hpp"
#include "test_util.hpp"

using namespace fracvrp;

namespace {

Instance with_n(std::mt19937_64& rng, ObjectiveKind kind, int n) {
  while (true) {
    Instance inst = random_instance(rng, {kind, n, 30});
    if (inst.n() == n) return inst;
  }
}

CcfDuals random_duals(std::mt19937_64& rng, const Instance& inst) {
  std::uniform_real_distribution<double> u(-6, 6);
  CcfDuals d;
  d.mu.resize(inst.n_vertices());
  for (double& x : d.mu) x = u(rng);
  d.omega = u(rng) / 4;
  return d;
}

// Least value per (vertex, time) over all memory sets.
std::map<std::pair<int, int>, double> by_vertex_time(const NgLabelTable& tab) {
  std::map<std::pair<int, int>, double> out;
  const NgStateSpace& sp = *tab.space;
  for (int s = 1; s < sp.size(); ++s) {
    auto key = std::make_pair(sp.vertex[s], sp.time[s]);
    auto it = out.find(key);
    if (it == out.end() || tab.cost[s] < it->second) out[key] = tab.cost[s];
  }
  return out;
}

double min_priced(const Instance& inst, int delta, const CcfDuals& duals) {
  NgSets ng = build_ng_sets(inst, delta);
  NgStateSpace sp = build_ng_space(inst, ng, false);
  auto priced = price_ng_routes(inst, sp, duals, kInf, 1);
  return priced.empty() ? kInf : priced[0].reduced_cost;
}

}  // namespace

TEST(NgSets, SizeOneIsSingleton) {
  std::mt19937_64 rng(1);
  Instance inst = with_n(rng, ObjectiveKind::CostOverLoad, 6);
  NgSets ng = build_ng_sets(inst, 1);
  for (int i = 1; i <= inst.n(); ++i) EXPECT_EQ(ng.members[i], std::vector<int>{i});
  EXPECT_TRUE(ng.members[0].empty());
}

TEST(NgSets, FullSizeHoldsEveryCustomer) {
  std::mt19937_64 rng(2);
  Instance inst = with_n(rng, ObjectiveKind::CostOverLoad, 6);
  NgSets ng = build_ng_sets(inst, inst.n());
  for (int i = 1; i <= inst.n(); ++i) EXPECT_EQ(static_cast<int>(ng.members[i].size()), inst.n());
}

TEST(NgSets, NearestFirstWithIndexTies) {
  Instance inst = test::tiny(3, 0, 3, 100, ObjectiveKind::CostOverLoad, {0, 1, 1, 1},
                             {{0, 5, 5, 5}, {5, 0, 2, 2}, {5, 2, 0, 9}, {5, 2, 9, 0}}, test::zeros(4));
  NgSets ng = build_ng_sets(inst, 2);
  EXPECT_EQ(ng.members[1], (std::vector<int>{1, 2}));
  EXPECT_EQ(ng.members[3], (std::vector<int>{1, 3}));
}

TEST(NgDp, OneCustomerLabels) {
  Instance inst = test::tiny(1, 0, 1, 20, ObjectiveKind::CostOverLoad, {0, 4}, {{0, 7}, {9, 0}},
                             {{0, 3}, {5, 0}});
  NgSets ng = build_ng_sets(inst, 1);
  SquareMatrix<double> arc = inst.d.cast<double>();
  NgStateSpace fs, bs;
  NgLabelTable f = forward_ng_dp(inst, ng, arc, fs);
  NgLabelTable b = backward_ng_dp(inst, ng, arc, bs);
  auto fv = by_vertex_time(f);
  auto bv = by_vertex_time(b);
  EXPECT_DOUBLE_EQ(fv.at({1, 4 + 3}), 7);
  EXPECT_DOUBLE_EQ(bv.at({1, 4 + 5}), 9);
  PhiTable ph = phi_table(inst, f, arc);
  EXPECT_DOUBLE_EQ(ph.phi[1][12], 16);
  for (int t = 0; t <= inst.T; ++t)
    if (t != 12) EXPECT_EQ(ph.phi[1][t], kInf);
}

TEST(NgDp, BackwardMirrorsForwardOnSymmetricData) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 10; ++trial) {
    Instance inst = with_n(rng, ObjectiveKind::CostOverLoad, 5);
    NgSets ng = build_ng_sets(inst, 3);
    SquareMatrix<double> arc = inst.d.cast<double>();
    NgStateSpace fs, bs;
    NgLabelTable f = forward_ng_dp(inst, ng, arc, fs);
    NgLabelTable b = backward_ng_dp(inst, ng, arc, bs);
    auto fv = by_vertex_time(f);
    auto bv = by_vertex_time(b);
    ASSERT_EQ(fv.size(), bv.size());
    for (auto& [k, v] : fv) EXPECT_NEAR(v, bv.at(k), 1e-9);
  }
}

TEST(NgDp, BackwardEqualsForwardOnTransposedData) {
  Instance inst = test::tiny(3, 0, 3, 60, ObjectiveKind::CostOverLoad, {0, 2, 3, 4},
                             {{0, 4, 8, 1}, {3, 0, 6, 2}, {9, 1, 0, 5}, {2, 7, 3, 0}},
                             {{0, 1, 2, 3}, {4, 0, 1, 2}, {3, 5, 0, 1}, {2, 3, 6, 0}});
  Instance tr = inst;
  tr.d = inst.d.transposed();
  tr.t = inst.t.transposed();
  NgSets ng = build_ng_sets(inst, 2);
  NgStateSpace fs, bs;
  NgLabelTable b = backward_ng_dp(inst, ng, inst.d.cast<double>(), bs);
  NgLabelTable f = forward_ng_dp(tr, ng, tr.d.cast<double>(), fs);
  auto fv = by_vertex_time(f);
  auto bv = by_vertex_time(b);
  ASSERT_EQ(fv.size(), bv.size());
  for (auto& [k, v] : fv) EXPECT_NEAR(v, bv.at(k), 1e-9);
}

TEST(NgDp, RelaxesElementaryRoutes) {
  std::mt19937_64 rng(4);
  for (auto kind : {ObjectiveKind::CostOverLoad, ObjectiveKind::ProfitOverTime})
    for (int trial = 0; trial < 20; ++trial) {
      Instance inst = with_n(rng, kind, 5);
      CcfDuals duals = random_duals(rng, inst);
      SquareMatrix<double> arc = reduced_arc_costs(inst, duals);
      for (int delta : {1, 3, 5}) {
        NgSets ng = build_ng_sets(inst, delta);
        NgStateSpace fs;
        NgLabelTable f = forward_ng_dp(inst, ng, arc, fs);
        PhiTable ph = phi_table(inst, f, arc);
        std::map<std::pair<int, int>, double> best;
        for (const Route& r : enumerate_routes(inst)) {
          auto key = std::make_pair(r.vertices[r.vertices.size() - 2], static_cast<int>(r.working_time));
          double rc = reduced_cost(inst, r, duals);
          EXPECT_LE(ph.phi[key.first][key.second], rc + 1e-9);
          auto it = best.find(key);
          if (it == best.end() || rc < it->second) best[key] = rc;
        }
        // With full memory the relaxation is exact.
        if (delta == 5)
          for (auto& [k, v] : best) EXPECT_NEAR(ph.phi[k.first][k.second], v, 1e-9);
      }
    }
}

TEST(NgDp, BacktrackRespectsMemory) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 10; ++trial) {
    Instance inst = with_n(rng, ObjectiveKind::CostOverLoad, 6);
    CcfDuals duals = random_duals(rng, inst);
    NgSets ng = build_ng_sets(inst, 3);
    NgStateSpace fs;
    NgLabelTable f = forward_ng_dp(inst, ng, reduced_arc_costs(inst, duals), fs);
    for (int s = 1; s < fs.size(); ++s) {
      std::vector<int> path = backtrack(f, s);
      ASSERT_EQ(path.front(), 0);
      ASSERT_EQ(path.back(), fs.vertex[s]);
      // Running memory: Π(P + j) = (Π(P) ∩ N_j) ∪ {j}.
      VertexSet memory;
      for (std::size_t k = 1; k < path.size(); ++k) {
        int j = path[k];
        EXPECT_FALSE(memory.contains(j));
        VertexSet next;
        for (int v : ng.members[j])
          if (memory.contains(v)) next.insert(v);
        next.insert(j);
        memory = next;
      }
      EXPECT_EQ(memory, fs.memory[s]);
    }
  }
}

TEST(Pricing, ZeroDualsGiveNothing) {
  std::mt19937_64 rng(6);
  Instance inst = with_n(rng, ObjectiveKind::CostOverLoad, 6);
  for (int i = 0; i < inst.n_vertices(); ++i)
    for (int j = 0; j < inst.n_vertices(); ++j)
      if (i != j) inst.d(i, j) += 1;
  CcfDuals zero{std::vector<double>(inst.n_vertices(), 0.0), 0.0};
  NgStateSpace sp = build_ng_space(inst, build_ng_sets(inst, 3), false);
  EXPECT_TRUE(price_ng_routes(inst, sp, zero, 0.0, 100).empty());
}

TEST(Pricing, ProfitableCustomerComesFirst) {
  std::mt19937_64 rng(7);
  Instance inst = with_n(rng, ObjectiveKind::CostOverLoad, 6);
  CcfDuals duals{std::vector<double>(inst.n_vertices(), 0.0), 0.0};
  duals.mu[4] = 1e4;
  NgStateSpace sp = build_ng_space(inst, build_ng_sets(inst, 3), false);
  auto priced = price_ng_routes(inst, sp, duals, 0.0, 10);
  ASSERT_FALSE(priced.empty());
  EXPECT_GE(priced[0].route.visits[4], 1);
  for (std::size_t k = 1; k < priced.size(); ++k) EXPECT_LE(priced[k - 1].reduced_cost, priced[k].reduced_cost);
}

TEST(Pricing, MinimumMatchesEnumeration) {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 20; ++trial) {
    Instance inst = with_n(rng, trial % 2 ? ObjectiveKind::ProfitOverTime : ObjectiveKind::CostOverLoad, 5);
    CcfDuals duals = random_duals(rng, inst);
    double brute = kInf;
    for (const Route& r : enumerate_routes(inst)) brute = std::min(brute, reduced_cost(inst, r, duals));
    EXPECT_NEAR(min_priced(inst, 5, duals), brute, 1e-9);
    // Larger memory never lowers the pricing minimum.
    EXPECT_LE(min_priced(inst, 1, duals), min_priced(inst, 3, duals) + 1e-9);
    EXPECT_LE(min_priced(inst, 3, duals), min_priced(inst, 5, duals) + 1e-9);
  }
}
