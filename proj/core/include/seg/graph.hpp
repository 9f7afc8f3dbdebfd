#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <string>
#include <unordered_map>
#include <vector>

#include "seg/error.hpp"
#include "seg/event.hpp"
#include "seg/relation.hpp"

namespace seg {

struct RelationEdge {
  Event head;
  Event tail;
  RelationType relation;

  /// Throws InvalidArgument on a self-loop.
  RelationEdge(Event head, Event tail, RelationType relation);

  friend bool operator==(const RelationEdge&, const RelationEdge&) = default;
};

struct RelationEdgeHash {
  std::size_t operator()(const RelationEdge& e) const noexcept;
};

class CycleError : public Error {
 public:
  CycleError(const std::string& what, std::vector<Event> cycle)
      : Error(what), cycle_(std::move(cycle)) {}
  const std::vector<Event>& cycle() const noexcept { return cycle_; }

 private:
  std::vector<Event> cycle_;
};

/// Looks for a directed cycle in a candidate edge set. Endpoints missing from
/// `nodes` are treated as extra nodes appended in first-seen order.
///
/// The witness lists each vertex of the cycle once, starting at the vertex the
/// depth-first search re-entered; for A->B->A it is [A, B]. The search visits
/// roots in node order and successors in edge order, so the result is a pure
/// function of the input ordering.
std::optional<std::vector<Event>> detect_cycle(std::span<const Event> nodes,
                                               std::span<const RelationEdge> edges);

/// Reachability closure of a candidate edge set. Throws CycleError if cyclic.
/// Edges are ordered by (source position, target position) in node order.
std::vector<RelationEdge> transitive_closure_edges(std::span<const Event> nodes,
                                                   std::span<const RelationEdge> edges,
                                                   RelationType relation);

/// A DAG over events for a single relation type. Immutable once built.
class RelationGraph {
 public:
  explicit RelationGraph(RelationType relation) : relation_(relation) {}

  /// Validates endpoints, duplicates, relation tags and acyclicity.
  /// Throws InvalidArgument or CycleError.
  RelationGraph(RelationType relation, std::vector<Event> nodes, std::vector<RelationEdge> edges);

  RelationType relation() const noexcept { return relation_; }
  const std::vector<Event>& nodes() const noexcept { return nodes_; }
  const std::vector<RelationEdge>& edges() const noexcept { return edges_; }
  bool empty() const noexcept { return edges_.empty(); }

  bool has_node(const Event& e) const { return index_.contains(e.key()); }
  bool has_edge(const Event& head, const Event& tail) const;
  /// True when a directed path head ~> tail exists (length >= 1).
  bool reachable(const Event& from, const Event& to) const;

  friend bool operator==(const RelationGraph& a, const RelationGraph& b) {
    return a.relation_ == b.relation_ && a.nodes_ == b.nodes_ && a.edges_ == b.edges_;
  }

 private:
  friend struct GraphBuilder;

  std::size_t position(const Event& e) const;

  RelationType relation_;
  std::vector<Event> nodes_;
  std::vector<RelationEdge> edges_;
  std::unordered_map<std::string, std::size_t> index_;
  std::vector<std::vector<std::size_t>> successors_;
};

RelationGraph transitive_closure(const RelationGraph& graph);

enum class MergeRejection { duplicate, cycle, unknown_endpoint, wrong_relation };

std::string_view merge_rejection_name(MergeRejection r) noexcept;

struct RejectedEdge {
  RelationEdge edge;
  MergeRejection reason;
};

struct MergeResult {
  RelationGraph graph;
  std::vector<RejectedEdge> rejected;
};

/// Adds edges one at a time in the given order, skipping any edge that would
/// duplicate an existing one or close a cycle.
MergeResult merge_edges(const RelationGraph& graph, std::span<const RelationEdge> new_edges);

}  // namespace seg
