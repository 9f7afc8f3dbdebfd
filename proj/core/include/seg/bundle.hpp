#pragma once

#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "seg/graph.hpp"

namespace seg {

/// The three relation graphs generated for one document, over one node set.
class EventGraphBundle {
 public:
  /// Empty graphs over `events`.
  EventGraphBundle(std::string document_id, std::vector<Event> events);

  /// Throws InvalidArgument if the graphs disagree on the node set.
  EventGraphBundle(std::string document_id, RelationGraph hierarchical, RelationGraph temporal,
                   RelationGraph causal);

  const std::string& document_id() const noexcept { return document_id_; }
  const std::vector<Event>& events() const noexcept { return hierarchical_.nodes(); }
  const RelationGraph& graph(RelationType r) const noexcept;

  /// Returns a copy with graph `r` replaced. Throws InvalidArgument on a node-set mismatch.
  EventGraphBundle with_graph(RelationGraph g) const;

  friend bool operator==(const EventGraphBundle&, const EventGraphBundle&) = default;

 private:
  std::string document_id_;
  RelationGraph hierarchical_;
  RelationGraph temporal_;
  RelationGraph causal_;
};

/// {"document_id", "events": [...sorted], "relations": [{"head","relation","tail"}...sorted]}
nlohmann::ordered_json bundle_to_json(const EventGraphBundle& bundle);

/// Pretty-printed canonical form, newline-terminated. Byte-stable.
std::string canonical_bundle_json(const EventGraphBundle& bundle);

/// Parses and validates a bundle. Throws InvalidArgument on schema errors and
/// CycleError on a cyclic relation list.
EventGraphBundle bundle_from_json(const nlohmann::json& j);

struct BundleIssue {
  std::string code;  // "schema", "unknown_event", "self_loop", "duplicate_edge", "cycle"
  std::string message;
  std::vector<std::string> cycle;
};

/// Full validation report without throwing; empty means valid.
std::vector<BundleIssue> validate_bundle_json(const nlohmann::json& j);

}  // namespace seg
