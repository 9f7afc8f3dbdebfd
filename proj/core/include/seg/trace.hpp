#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "seg/graph.hpp"
#include "seg/prompt/parse.hpp"

namespace seg {

struct GradedEdge {
  RelationEdge edge;
  prompt::Verdict verdict;
  /// Verdict reused from an earlier round of the same relation run.
  bool cached = false;
  /// The grader reply had no yes/no token; recorded as "no".
  bool grader_parse_error = false;
  std::string explanation;
};

struct RoundTrace {
  int round = 0;
  prompt::ParseStatus parse_status = prompt::ParseStatus::ok;
  /// Edges already retained and re-inserted into this round's prompt.
  std::vector<RelationEdge> input_edges;
  /// Edges parsed from the response whose endpoints are known events.
  std::vector<RelationEdge> generated;
  std::vector<prompt::DroppedEdge> dropped;
  std::vector<GradedEdge> graded;
  /// Edges added to the graph this round; a subset of `generated`.
  std::vector<RelationEdge> retained;
  std::vector<RelationEdge> cycle_rejected;
};

struct RelationTrace {
  RelationType relation = RelationType::hierarchical;
  std::vector<RoundTrace> rounds;
  bool early_stopped = false;
};

struct PipelineTrace {
  std::string document_id;
  std::string summary;
  std::vector<std::string> events;
  std::vector<RelationTrace> relations;
  std::optional<std::string> error;
};

/// True when the round's raw program, re-inserted edges plus parsed ones,
/// defines a cyclic graph.
bool round_has_raw_cycle(const RoundTrace& round);

nlohmann::ordered_json trace_to_json(const PipelineTrace& trace);
/// Throws InvalidArgument on malformed input.
PipelineTrace trace_from_json(const nlohmann::json& j);
/// One trace per non-blank line.
std::vector<PipelineTrace> read_traces_jsonl(const std::filesystem::path& path);

}  // namespace seg
