#include <gtest/gtest.h>

#include <random>

#include "seg/agreement.hpp"
#include "support/support.hpp"

using namespace seg;

TEST(SetAgreement, OverlapOfOne) {
  std::set<std::string> s1{"a", "b"}, s2{"b", "c"};
  auto s = set_agreement(s1, s2);
  EXPECT_EQ(s.precision, 0.5);
  EXPECT_EQ(s.recall, 0.5);
  EXPECT_EQ(s.f1, 0.5);
}

TEST(SetAgreement, IdenticalAndEmpty) {
  std::set<std::string> a{"x", "y", "z"}, none;
  auto same = set_agreement(a, a);
  EXPECT_EQ(same.precision, 1.0);
  EXPECT_EQ(same.recall, 1.0);
  EXPECT_EQ(same.f1, 1.0);
  std::set<std::string> one{"a"};
  auto s = set_agreement(one, none);
  EXPECT_EQ(s.precision, 0.0);
  EXPECT_EQ(s.recall, 0.0);
  EXPECT_EQ(s.f1, 0.0);
  auto both = set_agreement(none, none);
  EXPECT_EQ(both.f1, 1.0);
}

TEST(SetAgreement, FormulasOnRandomSets) {
  std::mt19937 rng(1);
  for (int t = 0; t < 200; ++t) {
    std::set<int> s1, s2;
    for (int k = 0; k < 10; ++k) {
      if (rng() % 2) s1.insert(k);
      if (rng() % 3 == 0) s2.insert(k);
    }
    if (s1.empty() || s2.empty()) continue;
    double common = 0;
    for (int v : s1) common += s2.count(v);
    auto s = set_agreement(s1, s2);
    EXPECT_DOUBLE_EQ(s.precision, common / s1.size());
    EXPECT_DOUBLE_EQ(s.recall, common / s2.size());
    EXPECT_DOUBLE_EQ(s.f1, 2 * common / (s1.size() + s2.size()));
    if (s.precision + s.recall > 0) {
      EXPECT_NEAR(s.f1, 2 * s.precision * s.recall / (s.precision + s.recall), 1e-12);
    }
    auto swapped = set_agreement(s2, s1);
    EXPECT_DOUBLE_EQ(swapped.precision, s.recall);
    EXPECT_DOUBLE_EQ(swapped.f1, s.f1);
  }
}

TEST(BundleAgreement, EventsAndTriplets) {
  auto nodes = segtest::events({"A", "B", "C"});
  EventGraphBundle a("d", RelationGraph(RelationType::hierarchical, nodes, {segtest::edge("A", "B")}),
                     RelationGraph(RelationType::temporal, nodes, {segtest::edge("A", "B", RelationType::temporal)}),
                     RelationGraph(RelationType::causal, nodes, {}));
  auto other = segtest::events({"a", "B", "D"});
  EventGraphBundle b("d", RelationGraph(RelationType::hierarchical, other, {segtest::edge("a", "B")}),
                     RelationGraph(RelationType::temporal, other, {}),
                     RelationGraph(RelationType::causal, other, {segtest::edge("B", "D", RelationType::causal)}));
  auto ev = set_agreement(event_set(a), event_set(b));
  EXPECT_DOUBLE_EQ(ev.f1, 2.0 * 2 / 6);
  auto tr = set_agreement(relation_triplets(a), relation_triplets(b));
  EXPECT_DOUBLE_EQ(tr.precision, 0.5);
  EXPECT_DOUBLE_EQ(tr.recall, 0.5);
  EXPECT_TRUE(relation_triplets(a).count({"a", "is_subevent_of", "b"}));
}
