#include <benchmark/benchmark.h>

#include <memory>
#include <string>

#include "seg/hgs.hpp"
#include "seg/llm/provider.hpp"

namespace {

// Chain-shaped graphs over n events; pred shares every other event text with gold.
struct Pair {
  std::vector<seg::RelationEdge> gold, pred;
  std::vector<seg::Event> events;
};

Pair make_pair(int n) {
  Pair p;
  for (int i = 0; i < n; ++i) p.events.emplace_back("council votes on measure " + std::to_string(i));
  for (int i = 0; i < n; ++i) p.events.emplace_back("residents protest decision " + std::to_string(i));
  for (int i = 0; i + 1 < n; ++i) {
    p.gold.emplace_back(p.events[i], p.events[i + 1], seg::RelationType::temporal);
    const auto& tail = i % 2 ? p.events[n + i + 1] : p.events[i + 1];
    p.pred.emplace_back(p.events[i], tail, seg::RelationType::temporal);
  }
  return p;
}

void BM_ScoreEdges(benchmark::State& state) {
  auto p = make_pair(static_cast<int>(state.range(0)));
  seg::llm::Gateway gateway(nullptr, std::make_shared<seg::llm::HashedEmbedder>(), {});
  seg::EmbeddingCache cache(&gateway);
  cache.prefetch(p.events);
  for (auto _ : state) benchmark::DoNotOptimize(seg::score_edges(p.gold, p.pred, cache).hgs);
}
BENCHMARK(BM_ScoreEdges)->RangeMultiplier(2)->Range(8, 128);

void BM_HashedEmbedding(benchmark::State& state) {
  seg::llm::HashedEmbedder e;
  std::vector<std::string> texts;
  for (int i = 0; i < state.range(0); ++i) texts.push_back("the government will impose a spending freeze " + std::to_string(i));
  for (auto _ : state) benchmark::DoNotOptimize(e.embed(texts).size());
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_HashedEmbedding)->Arg(64)->Arg(1024);

}  // namespace
