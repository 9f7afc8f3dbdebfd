#include "seg/bundle.hpp"

#include <algorithm>
#include <tuple>
#include <unordered_set>

namespace seg {

EventGraphBundle::EventGraphBundle(std::string document_id, std::vector<Event> events)
    : document_id_(std::move(document_id)),
      hierarchical_(RelationType::hierarchical, events, {}),
      temporal_(RelationType::temporal, events, {}),
      causal_(RelationType::causal, std::move(events), {}) {}

EventGraphBundle::EventGraphBundle(std::string document_id, RelationGraph hierarchical,
                                   RelationGraph temporal, RelationGraph causal)
    : document_id_(std::move(document_id)),
      hierarchical_(std::move(hierarchical)),
      temporal_(std::move(temporal)),
      causal_(std::move(causal)) {
  if (hierarchical_.relation() != RelationType::hierarchical ||
      temporal_.relation() != RelationType::temporal || causal_.relation() != RelationType::causal) {
    throw InvalidArgument("bundle graphs passed in the wrong slots");
  }
  if (hierarchical_.nodes() != temporal_.nodes() || hierarchical_.nodes() != causal_.nodes()) {
    throw InvalidArgument("bundle graphs do not share one node set");
  }
}

const RelationGraph& EventGraphBundle::graph(RelationType r) const noexcept {
  switch (r) {
    case RelationType::hierarchical: return hierarchical_;
    case RelationType::temporal: return temporal_;
    case RelationType::causal: break;
  }
  return causal_;
}

EventGraphBundle EventGraphBundle::with_graph(RelationGraph g) const {
  if (g.nodes() != events()) throw InvalidArgument("replacement graph has a different node set");
  EventGraphBundle copy = *this;
  switch (g.relation()) {
    case RelationType::hierarchical: copy.hierarchical_ = std::move(g); break;
    case RelationType::temporal: copy.temporal_ = std::move(g); break;
    case RelationType::causal: copy.causal_ = std::move(g); break;
  }
  return copy;
}

nlohmann::ordered_json bundle_to_json(const EventGraphBundle& bundle) {
  std::vector<std::string> events;
  for (const auto& e : bundle.events()) events.push_back(e.text());
  std::sort(events.begin(), events.end());

  using Row = std::tuple<std::string, std::string, std::string>;  // relation, head, tail
  std::vector<Row> rows;
  for (auto r : kRelationOrder) {
    for (const auto& e : bundle.graph(r).edges()) {
      rows.emplace_back(std::string(relation_name(r)), e.head.text(), e.tail.text());
    }
  }
  std::sort(rows.begin(), rows.end());

  nlohmann::ordered_json j;
  j["document_id"] = bundle.document_id();
  j["events"] = events;
  auto relations = nlohmann::ordered_json::array();
  for (const auto& [rel, head, tail] : rows) {
    nlohmann::ordered_json edge;
    edge["head"] = head;
    edge["relation"] = rel;
    edge["tail"] = tail;
    relations.push_back(std::move(edge));
  }
  j["relations"] = std::move(relations);
  return j;
}

std::string canonical_bundle_json(const EventGraphBundle& bundle) {
  return bundle_to_json(bundle).dump(2) + "\n";
}

namespace {

struct RawEdge {
  std::string head, tail;
  RelationType relation;
};

struct RawBundle {
  std::string document_id;
  std::vector<Event> events;
  std::vector<RawEdge> edges;
};

// Schema-level checks only; graph invariants are checked by the callers.
RawBundle read_raw(const nlohmann::json& j, std::vector<BundleIssue>& issues) {
  RawBundle raw;
  auto schema = [&](std::string msg) { issues.push_back({"schema", std::move(msg), {}}); };
  if (!j.is_object()) {
    schema("bundle must be a JSON object");
    return raw;
  }
  if (!j.contains("document_id") || !j["document_id"].is_string()) {
    schema("\"document_id\" must be a string");
  } else {
    raw.document_id = j["document_id"].get<std::string>();
  }
  if (!j.contains("events") || !j["events"].is_array()) {
    schema("\"events\" must be an array of strings");
  } else {
    std::unordered_set<std::string> seen;
    for (const auto& e : j["events"]) {
      if (!e.is_string() || normalize_whitespace(e.get<std::string>()).empty()) {
        schema("every event must be a non-empty string");
        continue;
      }
      Event ev(e.get<std::string>());
      if (!seen.insert(ev.key()).second) {
        issues.push_back({"duplicate_event", "event listed twice: \"" + ev.text() + "\"", {}});
        continue;
      }
      raw.events.push_back(std::move(ev));
    }
  }
  if (!j.contains("relations") || !j["relations"].is_array()) {
    schema("\"relations\" must be an array");
  } else {
    for (const auto& r : j["relations"]) {
      if (!r.is_object() || !r.contains("head") || !r.contains("tail") || !r.contains("relation") ||
          !r["head"].is_string() || !r["tail"].is_string() || !r["relation"].is_string()) {
        schema("every relation needs string \"head\", \"relation\" and \"tail\"");
        continue;
      }
      auto rel = parse_relation(r["relation"].get<std::string>());
      if (!rel) {
        schema("unknown relation \"" + r["relation"].get<std::string>() + "\"");
        continue;
      }
      raw.edges.push_back({r["head"].get<std::string>(), r["tail"].get<std::string>(), *rel});
    }
  }
  return raw;
}

}  // namespace

std::vector<BundleIssue> validate_bundle_json(const nlohmann::json& j) {
  std::vector<BundleIssue> issues;
  RawBundle raw = read_raw(j, issues);

  std::unordered_set<std::string> known;
  for (const auto& e : raw.events) known.insert(e.key());

  for (auto r : kRelationOrder) {
    std::vector<RelationEdge> edges;
    std::unordered_set<RelationEdge, RelationEdgeHash> seen;
    for (const auto& raw_edge : raw.edges) {
      if (raw_edge.relation != r) continue;
      bool ok = true;
      for (const auto* endpoint : {&raw_edge.head, &raw_edge.tail}) {
        if (!known.contains(event_key(*endpoint))) {
          issues.push_back({"unknown_event",
                            "relation endpoint not in events: \"" + *endpoint + "\"", {}});
          ok = false;
        }
      }
      if (!ok) continue;
      if (event_key(raw_edge.head) == event_key(raw_edge.tail)) {
        issues.push_back({"self_loop", "self-loop on \"" + raw_edge.head + "\"", {}});
        continue;
      }
      RelationEdge edge(Event(raw_edge.head), Event(raw_edge.tail), r);
      if (!seen.insert(edge).second) {
        issues.push_back({"duplicate_edge",
                          std::string(relation_name(r)) + " edge listed twice: \"" +
                              raw_edge.head + "\" -> \"" + raw_edge.tail + "\"",
                          {}});
        continue;
      }
      edges.push_back(std::move(edge));
    }
    if (auto cycle = detect_cycle(raw.events, edges)) {
      BundleIssue issue{"cycle", std::string(relation_name(r)) + " relations contain a cycle: ", {}};
      for (const auto& e : *cycle) {
        issue.message += "\"" + e.text() + "\" -> ";
        issue.cycle.push_back(e.text());
      }
      issue.message += "\"" + cycle->front().text() + "\"";
      issues.push_back(std::move(issue));
    }
  }
  return issues;
}

EventGraphBundle bundle_from_json(const nlohmann::json& j) {
  std::vector<BundleIssue> issues;
  RawBundle raw = read_raw(j, issues);
  if (!issues.empty()) throw InvalidArgument("invalid bundle: " + issues.front().message);

  auto build = [&](RelationType r) {
    std::vector<RelationEdge> edges;
    for (const auto& e : raw.edges) {
      if (e.relation == r) edges.emplace_back(Event(e.head), Event(e.tail), r);
    }
    // Canonicalize endpoints to the spelling used in the events list.
    for (auto& e : edges) {
      for (Event* endpoint : {&e.head, &e.tail}) {
        auto it = std::find(raw.events.begin(), raw.events.end(), *endpoint);
        if (it == raw.events.end()) {
          throw InvalidArgument("relation endpoint not in events: \"" + endpoint->text() + "\"");
        }
        *endpoint = *it;
      }
    }
    return RelationGraph(r, raw.events, std::move(edges));
  };
  return EventGraphBundle(raw.document_id, build(RelationType::hierarchical),
                          build(RelationType::temporal), build(RelationType::causal));
}

}  // namespace seg
