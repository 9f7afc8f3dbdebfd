#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "seg/trace.hpp"

namespace seg {

struct StatCount {
  std::size_t count = 0;
  /// count / documents * 100.
  double percent = 0.0;
};

struct RelationFormatStats {
  StatCount format_error;
  StatCount cycle;
  /// Edges refused at merge time because they would close a cycle.
  std::size_t cycle_rejected_edges = 0;
};

struct FormatStats {
  std::size_t documents = 0;
  StatCount format_error;
  StatCount cycle;
  std::array<RelationFormatStats, 3> relations{};
};

/// A document counts once per category: format_error when any round of any
/// relation failed to parse, cycle when any round's raw edge set (re-inserted
/// plus parsed, before DAG enforcement) is cyclic. Traces are deduplicated by
/// document id, the last one winning. Throws InvalidArgument on no traces.
FormatStats compute_format_stats(std::span<const PipelineTrace> traces);

/// Mean of each count and percentage over several runs. Throws on no runs.
FormatStats average_format_stats(std::span<const FormatStats> runs);

nlohmann::ordered_json format_stats_json(const FormatStats& s);
std::string format_stats_table(const FormatStats& s);

}  // namespace seg
