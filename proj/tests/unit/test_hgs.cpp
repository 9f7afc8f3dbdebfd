#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "oracles/assignment.hpp"
#include "oracles/cosine.hpp"
#include "seg/error.hpp"
#include "seg/hgs.hpp"
#include "seg/llm/provider.hpp"
#include "support/support.hpp"

using namespace seg;
using llm::EmbeddingVector;
using segtest::edge;
using segtest::ev;

namespace {

double raw_cos_dist(const std::vector<double>& a, const std::vector<double>& b) {
  double dot = 0, na = 0, nb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  return std::clamp(1.0 - dot / std::sqrt(na * nb), 0.0, 1.0);
}

struct Fixture {
  std::vector<Event> nodes;
  std::map<std::string, std::vector<double>> vec;
  EmbeddingCache cache;

  static std::unique_ptr<Fixture> random(std::mt19937& rng, std::size_t n = 6) {
    auto f = std::make_unique<Fixture>();
    std::normal_distribution<double> nd;
    for (std::size_t i = 0; i < n; ++i) {
      Event e("event " + std::to_string(i));
      std::vector<double> v(4);
      for (auto& x : v) x = nd(rng);
      f->nodes.push_back(e);
      f->vec[e.key()] = v;
      f->cache.insert(e, EmbeddingVector{v});
    }
    return f;
  }

  std::vector<RelationEdge> random_edges(std::mt19937& rng, std::size_t count) {
    std::vector<RelationEdge> out;
    std::set<std::pair<std::size_t, std::size_t>> used;
    while (out.size() < count) {
      std::size_t a = rng() % nodes.size(), b = rng() % nodes.size();
      if (a >= b || !used.insert({a, b}).second) continue;  // a < b keeps it acyclic
      out.emplace_back(nodes[a], nodes[b], RelationType::temporal);
    }
    return out;
  }

  double oracle_edge_distance(const RelationEdge& x, const RelationEdge& y) {
    double h = x.head == y.head ? 0.0 : raw_cos_dist(vec[x.head.key()], vec[y.head.key()]);
    double t = x.tail == y.tail ? 0.0 : raw_cos_dist(vec[x.tail.key()], vec[y.tail.key()]);
    return std::max(h, t);
  }

  CostMatrix oracle_matrix(const std::vector<RelationEdge>& g, const std::vector<RelationEdge>& p) {
    CostMatrix m(g.size(), p.size());
    for (std::size_t i = 0; i < g.size(); ++i) {
      for (std::size_t j = 0; j < p.size(); ++j) m(i, j) = oracle_edge_distance(g[i], p[j]);
    }
    return m;
  }
};

}  // namespace

TEST(EdgeDistance, IdenticalEdgesAreZero) {
  EmbeddingCache c;
  EXPECT_EQ(edge_distance(edge("A", "B"), edge("a", "B"), c), 0.0);
}

TEST(EdgeDistance, OrthogonalTailGivesOne) {
  EmbeddingCache c;
  c.insert(ev("A"), {{1, 0, 0}});
  c.insert(ev("B"), {{0, 1, 0}});
  c.insert(ev("C"), {{0, 0, 1}});
  EXPECT_NEAR(edge_distance(edge("A", "B"), edge("A", "C"), c), 1.0, 1e-12);
  EXPECT_THROW(edge_distance(edge("A", "B"), edge("A", "B", RelationType::causal), c), InvalidArgument);
}

TEST(EdgeDistance, OppositeVectorsClampToOne) {
  EmbeddingCache c;
  c.insert(ev("A"), {{1, 0}});
  c.insert(ev("B"), {{-1, 0}});
  c.insert(ev("C"), {{0, 1}});
  EXPECT_DOUBLE_EQ(edge_distance(edge("A", "C"), edge("B", "C"), c), 1.0);
}

TEST(EdgeDistance, MissingEmbeddingWithoutGateway) {
  EmbeddingCache c;
  EXPECT_THROW(edge_distance(edge("A", "B"), edge("A", "C"), c), InvalidArgument);
}

TEST(EdgeDistance, HashedEmbedderMatchesDirectCosine) {
  auto embedder = std::make_shared<llm::HashedEmbedder>();
  llm::Gateway g(nullptr, embedder, segtest::fast_options());
  EmbeddingCache c(&g);
  std::vector<std::pair<RelationEdge, RelationEdge>> cases = {
      {edge("council voted budget", "mayor resigned"), edge("council met budget", "mayor quit")},
      {edge("storm hit coast", "power failed"), edge("storm hit town", "power failed widely")},
      {edge("prices rose", "wages fell"), edge("prices rose sharply", "unions protested wages")}};
  for (const auto& [a, b] : cases) {
    std::set<std::string> tokens;
    std::set<std::size_t> buckets;
    for (const auto& text : {a.head.text(), a.tail.text(), b.head.text(), b.tail.text()}) {
      for (const auto& [t, _] : oracle::token_counts(text)) {
        tokens.insert(t);
        buckets.insert(embedder->bucket(t));
      }
    }
    ASSERT_EQ(tokens.size(), buckets.size());
    double want = std::max(std::clamp(oracle::bow_cosine_distance(a.head.text(), b.head.text()), 0.0, 1.0),
                           std::clamp(oracle::bow_cosine_distance(a.tail.text(), b.tail.text()), 0.0, 1.0));
    EXPECT_NEAR(edge_distance(a, b, c), want, 1e-12);
  }
}

TEST(Hgs, HandCases) {
  EmbeddingCache c;
  c.insert(ev("A"), {{1, 0, 0}});
  c.insert(ev("B"), {{0, 1, 0}});
  c.insert(ev("C"), {{0, 0, 1}});
  std::vector<RelationEdge> gold{edge("A", "B"), edge("B", "C")};
  std::vector<RelationEdge> pred{edge("A", "B")};
  auto s = score_edges(gold, pred, c);
  EXPECT_DOUBLE_EQ(s.hgs, 0.5);
  EXPECT_DOUBLE_EQ(s.phgs, 1.0);
  EXPECT_DOUBLE_EQ(s.rhgs, 0.5);
  ASSERT_EQ(s.matches.size(), 1u);
  EXPECT_EQ(s.matches[0].gold_index, 0u);

  auto same = score_edges(gold, gold, c);
  EXPECT_DOUBLE_EQ(same.hgs, 1.0);
  EXPECT_DOUBLE_EQ(same.phgs, 1.0);
  EXPECT_DOUBLE_EQ(same.rhgs, 1.0);

  std::vector<RelationEdge> none;
  auto both_empty = score_edges(none, none, c);
  EXPECT_EQ(both_empty.hgs, 1.0);
  EXPECT_EQ(both_empty.phgs, 1.0);
  EXPECT_EQ(both_empty.rhgs, 1.0);
  auto pred_empty = score_edges(gold, none, c);
  EXPECT_EQ(pred_empty.hgs, 0.0);
  EXPECT_EQ(pred_empty.phgs, 0.0);
  EXPECT_EQ(pred_empty.rhgs, 0.0);
  EXPECT_EQ(score_edges(none, gold, c).hgs, 0.0);
}

TEST(Hgs, HandCaseEqualsEnumeratedAssignments) {
  // gold {A->B, B->C}, pred {A->B}: padded rows [0, 1] and [1, 1]
  CostMatrix padded = CostMatrix::from_rows({{0.0, 1.0}, {1.0, 1.0}});
  auto best = oracle::brute_force_assignment(padded);
  EXPECT_DOUBLE_EQ(1.0 - best.cost / 2.0, 0.5);
}

TEST(Hgs, ThreeGoldTwoPredMatchesInjectionOracle) {
  std::mt19937 rng(3);
  auto f = Fixture::random(rng);
  for (int trial = 0; trial < 50; ++trial) {
    auto gold = f->random_edges(rng, 3);
    auto pred = f->random_edges(rng, 2);
    auto s = score_edges(gold, pred, f->cache);
    auto m = f->oracle_matrix(gold, pred);
    double sim = 2.0 - oracle::brute_force_rectangular(m);
    EXPECT_NEAR(s.phgs, sim / 2.0, 1e-9);
    EXPECT_NEAR(s.rhgs, sim / 3.0, 1e-9);
    CostMatrix padded(3, 3, 1.0);
    for (std::size_t i = 0; i < 3; ++i) {
      for (std::size_t j = 0; j < 2; ++j) padded(i, j) = m(i, j);
    }
    EXPECT_NEAR(s.hgs, 1.0 - oracle::brute_force_assignment(padded).cost / 3.0, 1e-9);
  }
}

TEST(Hgs, RandomIdentityAndBounds) {
  std::mt19937 rng(11);
  for (int trial = 0; trial < 100; ++trial) {
    auto f = Fixture::random(rng);
    auto gold = f->random_edges(rng, 1 + rng() % 6);
    auto pred = f->random_edges(rng, 1 + rng() % 6);
    RelationGraph g(RelationType::temporal, f->nodes, gold);
    RelationGraph p(RelationType::temporal, f->nodes, pred);
    EXPECT_NEAR(hgs(g, g, f->cache), 1.0, 1e-9);
    auto s = score_edges(gold, pred, f->cache);
    for (double v : {s.hgs, s.phgs, s.rhgs}) {
      EXPECT_GE(v, 0.0);
      EXPECT_LE(v, 1.0);
    }
    if (gold.size() == pred.size()) {
      EXPECT_NEAR(s.phgs, s.rhgs, 1e-12);
    }
    auto back = score_edges(pred, gold, f->cache);
    EXPECT_NEAR(s.hgs, back.hgs, 1e-9);
    EXPECT_NEAR(s.phgs, back.rhgs, 1e-9);
  }
}

TEST(Hgs, ClosureOption) {
  EmbeddingCache c;
  c.insert(ev("A"), {{1, 0, 0}});
  c.insert(ev("B"), {{0, 1, 0}});
  c.insert(ev("C"), {{0, 0, 1}});
  auto nodes = segtest::events({"A", "B", "C"});
  RelationGraph gold_h(RelationType::hierarchical, nodes, {edge("A", "B"), edge("B", "C")});
  RelationGraph pred_h(RelationType::hierarchical, nodes, {edge("A", "B"), edge("B", "C"), edge("A", "C")});
  EventGraphBundle gold("d", gold_h, RelationGraph(RelationType::temporal, nodes, {}),
                        RelationGraph(RelationType::causal, nodes, {}));
  EventGraphBundle pred("d", pred_h, RelationGraph(RelationType::temporal, nodes, {}),
                        RelationGraph(RelationType::causal, nodes, {}));
  auto closed = evaluate_bundle(gold, pred, c);
  EXPECT_DOUBLE_EQ(closed.at(RelationType::hierarchical).hgs, 1.0);
  EXPECT_EQ(closed.at(RelationType::hierarchical).gold_edges, 3u);
  EXPECT_DOUBLE_EQ(closed.at(RelationType::temporal).hgs, 1.0);
  auto open = evaluate_bundle(gold, pred, c, EvalOptions{false});
  EXPECT_EQ(open.at(RelationType::hierarchical).gold_edges, 2u);
  EXPECT_NEAR(open.at(RelationType::hierarchical).hgs, 1.0 - 1.0 / 3.0, 1e-12);
}

TEST(CorpusHgs, WeightsByGoldEdges) {
  DocumentHgs a, b, c;
  a.document_id = "a";
  b.document_id = "b";
  c.document_id = "c";
  auto& ah = a.relations[0];
  ah.hgs = ah.phgs = ah.rhgs = 1.0;
  ah.gold_edges = 3;
  auto& bh = b.relations[0];
  bh.hgs = bh.phgs = bh.rhgs = 0.0;
  bh.gold_edges = 1;
  auto& ch = c.relations[0];
  ch.hgs = 0.0;
  ch.pred_edges = 4;
  std::vector<DocumentHgs> docs{a, b, c};
  auto corpus = corpus_hgs(docs);
  EXPECT_EQ(*corpus.at(RelationType::hierarchical).hgs, 0.75);
  EXPECT_EQ(corpus.at(RelationType::hierarchical).gold_weight, 4u);
  EXPECT_EQ(corpus.at(RelationType::hierarchical).documents, 2u);
  EXPECT_EQ(corpus.zero_weight_documents[0], (std::vector<std::string>{"c"}));
  EXPECT_FALSE(corpus.at(RelationType::temporal).hgs.has_value());
  EXPECT_EQ(*corpus.overall.hgs, 0.75);

  std::vector<DocumentHgs> single{a};
  EXPECT_EQ(*corpus_hgs(single).at(RelationType::hierarchical).hgs, 1.0);
  auto report = hgs_report_json(corpus, docs);
  EXPECT_TRUE(report["corpus"]["temporal"]["hgs"].is_null());
  EXPECT_FALSE(report["corpus"]["temporal"]["defined"].get<bool>());
  EXPECT_NE(hgs_report_table(corpus).find("n/a"), std::string::npos);
}
