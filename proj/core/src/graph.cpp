#include "seg/graph.hpp"

#include <algorithm>
#include <deque>
#include <unordered_set>

namespace seg {

RelationEdge::RelationEdge(Event h, Event t, RelationType r)
    : head(std::move(h)), tail(std::move(t)), relation(r) {
  if (head == tail) throw InvalidArgument("self-loop on event \"" + head.text() + "\"");
}

std::size_t RelationEdgeHash::operator()(const RelationEdge& e) const noexcept {
  std::size_t h = std::hash<std::string>{}(e.head.key());
  h ^= std::hash<std::string>{}(e.tail.key()) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  return h ^ static_cast<std::size_t>(e.relation);
}

std::string_view merge_rejection_name(MergeRejection r) noexcept {
  switch (r) {
    case MergeRejection::duplicate: return "duplicate";
    case MergeRejection::cycle: return "cycle";
    case MergeRejection::unknown_endpoint: return "unknown_endpoint";
    case MergeRejection::wrong_relation: return "wrong_relation";
  }
  return {};
}

namespace {

// Dense index over a candidate graph.
struct Indexed {
  std::vector<Event> nodes;
  std::unordered_map<std::string, std::size_t> index;
  std::vector<std::vector<std::size_t>> succ;

  std::size_t intern(const Event& e) {
    auto [it, inserted] = index.try_emplace(e.key(), nodes.size());
    if (inserted) {
      nodes.push_back(e);
      succ.emplace_back();
    }
    return it->second;
  }
};

Indexed index_candidate(std::span<const Event> nodes, std::span<const RelationEdge> edges) {
  Indexed g;
  for (const auto& n : nodes) g.intern(n);
  for (const auto& e : edges) {
    std::size_t h = g.intern(e.head);
    std::size_t t = g.intern(e.tail);
    g.succ[h].push_back(t);
  }
  return g;
}

std::optional<std::vector<std::size_t>> find_cycle(const std::vector<std::vector<std::size_t>>& succ) {
  enum : char { white, grey, black };
  const std::size_t n = succ.size();
  std::vector<char> colour(n, white);
  std::vector<std::size_t> stack;  // current DFS path
  std::vector<std::size_t> cursor(n, 0);

  for (std::size_t root = 0; root < n; ++root) {
    if (colour[root] != white) continue;
    stack.push_back(root);
    colour[root] = grey;
    while (!stack.empty()) {
      std::size_t u = stack.back();
      if (cursor[u] < succ[u].size()) {
        std::size_t v = succ[u][cursor[u]++];
        if (colour[v] == grey) {
          auto from = std::find(stack.begin(), stack.end(), v);
          return std::vector<std::size_t>(from, stack.end());
        }
        if (colour[v] == white) {
          colour[v] = grey;
          stack.push_back(v);
        }
      } else {
        colour[u] = black;
        stack.pop_back();
      }
    }
  }
  return std::nullopt;
}

std::vector<std::vector<char>> reachability(const std::vector<std::vector<std::size_t>>& succ) {
  const std::size_t n = succ.size();
  std::vector<std::vector<char>> reach(n, std::vector<char>(n, 0));
  for (std::size_t s = 0; s < n; ++s) {
    std::deque<std::size_t> queue(succ[s].begin(), succ[s].end());
    while (!queue.empty()) {
      std::size_t u = queue.front();
      queue.pop_front();
      if (reach[s][u]) continue;
      reach[s][u] = 1;
      for (std::size_t v : succ[u]) {
        if (!reach[s][v]) queue.push_back(v);
      }
    }
  }
  return reach;
}

std::vector<Event> to_events(const Indexed& g, const std::vector<std::size_t>& ids) {
  std::vector<Event> out;
  out.reserve(ids.size());
  for (auto i : ids) out.push_back(g.nodes[i]);
  return out;
}

std::string describe_cycle(const std::vector<Event>& cycle) {
  std::string s;
  for (const auto& e : cycle) s += "\"" + e.text() + "\" -> ";
  if (!cycle.empty()) s += "\"" + cycle.front().text() + "\"";
  return s;
}

}  // namespace

std::optional<std::vector<Event>> detect_cycle(std::span<const Event> nodes,
                                               std::span<const RelationEdge> edges) {
  Indexed g = index_candidate(nodes, edges);
  auto ids = find_cycle(g.succ);
  if (!ids) return std::nullopt;
  return to_events(g, *ids);
}

std::vector<RelationEdge> transitive_closure_edges(std::span<const Event> nodes,
                                                   std::span<const RelationEdge> edges,
                                                   RelationType relation) {
  Indexed g = index_candidate(nodes, edges);
  if (auto ids = find_cycle(g.succ)) {
    auto cycle = to_events(g, *ids);
    throw CycleError("transitive closure of a cyclic graph: " + describe_cycle(cycle), cycle);
  }
  auto reach = reachability(g.succ);
  std::vector<RelationEdge> out;
  for (std::size_t u = 0; u < g.nodes.size(); ++u) {
    for (std::size_t v = 0; v < g.nodes.size(); ++v) {
      if (reach[u][v]) out.emplace_back(g.nodes[u], g.nodes[v], relation);
    }
  }
  return out;
}

struct GraphBuilder {
  static void add_node(RelationGraph& g, const Event& e) {
    auto [it, inserted] = g.index_.try_emplace(e.key(), g.nodes_.size());
    if (!inserted) throw InvalidArgument("duplicate node \"" + e.text() + "\"");
    g.nodes_.push_back(e);
    g.successors_.emplace_back();
  }
  static void add_edge(RelationGraph& g, const RelationEdge& e) {
    g.successors_[g.position(e.head)].push_back(g.position(e.tail));
    g.edges_.push_back(e);
  }
};

RelationGraph::RelationGraph(RelationType relation, std::vector<Event> nodes,
                             std::vector<RelationEdge> edges)
    : relation_(relation) {
  for (const auto& n : nodes) GraphBuilder::add_node(*this, n);
  std::unordered_set<RelationEdge, RelationEdgeHash> seen;
  for (const auto& e : edges) {
    if (e.relation != relation_) {
      throw InvalidArgument("edge relation " + std::string(relation_name(e.relation)) +
                            " in a " + std::string(relation_name(relation_)) + " graph");
    }
    if (!has_node(e.head) || !has_node(e.tail)) {
      throw InvalidArgument("edge endpoint not in node set: \"" + e.head.text() + "\" -> \"" +
                            e.tail.text() + "\"");
    }
    if (!seen.insert(e).second) {
      throw InvalidArgument("duplicate edge \"" + e.head.text() + "\" -> \"" + e.tail.text() + "\"");
    }
    GraphBuilder::add_edge(*this, e);
  }
  if (auto ids = find_cycle(successors_)) {
    std::vector<Event> cycle;
    for (auto i : *ids) cycle.push_back(nodes_[i]);
    throw CycleError("relation graph contains a cycle: " + describe_cycle(cycle), cycle);
  }
}

std::size_t RelationGraph::position(const Event& e) const {
  auto it = index_.find(e.key());
  if (it == index_.end()) throw InvalidArgument("unknown event \"" + e.text() + "\"");
  return it->second;
}

bool RelationGraph::has_edge(const Event& head, const Event& tail) const {
  auto h = index_.find(head.key());
  auto t = index_.find(tail.key());
  if (h == index_.end() || t == index_.end()) return false;
  const auto& s = successors_[h->second];
  return std::find(s.begin(), s.end(), t->second) != s.end();
}

bool RelationGraph::reachable(const Event& from, const Event& to) const {
  auto f = index_.find(from.key());
  auto t = index_.find(to.key());
  if (f == index_.end() || t == index_.end()) return false;
  std::vector<char> seen(nodes_.size(), 0);
  std::vector<std::size_t> stack(successors_[f->second].begin(), successors_[f->second].end());
  while (!stack.empty()) {
    std::size_t u = stack.back();
    stack.pop_back();
    if (u == t->second) return true;
    if (seen[u]) continue;
    seen[u] = 1;
    stack.insert(stack.end(), successors_[u].begin(), successors_[u].end());
  }
  return false;
}

RelationGraph transitive_closure(const RelationGraph& graph) {
  return RelationGraph(graph.relation(), graph.nodes(),
                       transitive_closure_edges(graph.nodes(), graph.edges(), graph.relation()));
}

MergeResult merge_edges(const RelationGraph& graph, std::span<const RelationEdge> new_edges) {
  MergeResult result{graph, {}};
  RelationGraph& g = result.graph;
  for (const auto& e : new_edges) {
    MergeRejection reason;
    if (e.relation != g.relation()) {
      reason = MergeRejection::wrong_relation;
    } else if (!g.has_node(e.head) || !g.has_node(e.tail)) {
      reason = MergeRejection::unknown_endpoint;
    } else if (g.has_edge(e.head, e.tail)) {
      reason = MergeRejection::duplicate;
    } else if (g.reachable(e.tail, e.head)) {
      reason = MergeRejection::cycle;
    } else {
      GraphBuilder::add_edge(g, e);
      continue;
    }
    result.rejected.push_back({e, reason});
  }
  return result;
}

}  // namespace seg
