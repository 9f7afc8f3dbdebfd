#include <benchmark/benchmark.h>

#include <string>

#include "seg/prompt/parse.hpp"

namespace {

void BM_ParseGraphResponse(benchmark::State& state) {
  std::vector<seg::Event> events;
  for (int i = 0; i < 30; ++i) events.emplace_back("event number " + std::to_string(i));
  std::string response = "Here is the completed code:\n\n```python\ntemporal_graph = nx.DiGraph()\n";
  for (int i = 0; i < state.range(0); ++i) {
    response += "temporal_graph.add_edge(\"event number " + std::to_string(i % 30) + "\", 'event number " +
                std::to_string((i * 7 + 3) % 30) + "')  # because\n";
  }
  response += "```\nThe edges above follow the article.";
  for (auto _ : state) benchmark::DoNotOptimize(seg::prompt::parse_graph_response(response, events).edges.size());
  state.SetBytesProcessed(state.iterations() * static_cast<int64_t>(response.size()));
}
BENCHMARK(BM_ParseGraphResponse)->Arg(10)->Arg(100)->Arg(1000);

void BM_ParseEventList(benchmark::State& state) {
  std::string response = "Here are the events:\n\n";
  for (int i = 0; i < state.range(0); ++i) {
    response += std::to_string(i + 1) + ". (The council " + std::to_string(i) + "; approved; the budget)\n\n";
  }
  for (auto _ : state) benchmark::DoNotOptimize(seg::prompt::parse_event_list(response).size());
}
BENCHMARK(BM_ParseEventList)->Arg(10)->Arg(100);

}  // namespace
BENCHMARK_MAIN();
