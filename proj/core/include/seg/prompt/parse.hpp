#pragma once

#include <cstddef>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "seg/error.hpp"
#include "seg/event.hpp"

namespace seg::prompt {

/// The response could not be read as the requested structure.
class FormatError : public Error {
 public:
  using Error::Error;
};

class GraderParseError : public Error {
 public:
  using Error::Error;
};

/// Numbered tuple lines such as `1. (actor; trigger; object)`. Components are
/// joined with single spaces; a missing object gives "actor trigger".
/// Duplicates are dropped keeping the first. Throws FormatError if no tuple is
/// found.
std::vector<Event> parse_event_list(std::string_view response);

enum class ParseStatus { ok, format_error };

std::string_view parse_status_name(ParseStatus s) noexcept;

struct DroppedEdge {
  enum class Reason { unknown_endpoint, self_loop };
  std::string head;
  std::string tail;
  Reason reason;
};

std::string_view dropped_reason_name(DroppedEdge::Reason r) noexcept;

struct ParsedGraphResponse {
  /// Endpoints are the matching members of the allowed set.
  std::vector<std::pair<Event, Event>> edges;
  std::vector<DroppedEdge> dropped;
  bool had_code_block = false;
  bool had_graph_declaration = false;
  std::size_t add_edge_calls = 0;
  ParseStatus parse_status = ParseStatus::ok;
  std::string raw_response;
};

/// Collects `.add_edge("head", "tail")` calls from a model response. Handles
/// code fences, comments, either quote style, prefixes such as r"..", triple
/// quotes and calls split over lines; other code is ignored. The response is a
/// format error when it has neither an add_edge call nor a graph declaration
/// (`name = nx.DiGraph(...)`). Repeated edges are kept once.
ParsedGraphResponse parse_graph_response(std::string_view response, std::span<const Event> allowed);

enum class Verdict { yes, no };

struct GraderVerdict {
  Verdict verdict;
  std::string explanation;
};

/// First standalone "yes"/"no" (any case), searched after "Score:" when that
/// marker is present. Throws GraderParseError if neither appears.
GraderVerdict parse_grader(std::string_view response);

/// Outermost balanced (...) groups, trimmed, in order of appearance.
std::vector<std::string> extract_parenthesized(std::string_view response);

/// Maps parenthesized extractions to sentence indices. An extraction matches a
/// sentence when, after lower-casing and reducing punctuation to spaces, they
/// are equal, the sentence contains it (extractions of at least three words),
/// or it contains the whole sentence (again at least three words). Unmatched extractions are discarded.
std::set<std::size_t> parse_mentions(std::span<const std::string> responses,
                                     std::span<const std::string> sentences);

}  // namespace seg::prompt
