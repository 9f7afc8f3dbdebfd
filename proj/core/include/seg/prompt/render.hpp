#pragma once

#include <span>
#include <string>
#include <string_view>

#include "seg/document.hpp"
#include "seg/graph.hpp"
#include "seg/prompt/template.hpp"

namespace seg::prompt {

/// Python string literal with double quotes, JSON-style escapes.
std::string python_string_literal(std::string_view s);

/// Escapes runs of three double quotes (and a trailing quote) so the text can
/// sit inside a """-delimited block without closing it.
std::string escape_triple_quotes(std::string_view s);

/// Variable the code prompt declares for a relation, e.g. "temporal_graph".
std::string graph_variable(RelationType r);

/// `<var>.add_edge("head", "tail")` lines, one per edge.
std::string render_add_edge_calls(std::string_view variable, std::span<const RelationEdge> edges);

/// Throws TemplateError when the body is blank.
std::string render_summary_prompt(const PromptLibrary& lib, const DocumentRecord& doc);

/// Throws TemplateError when the summary is blank.
std::string render_event_prompt(const PromptLibrary& lib, std::string_view summary);

/// Code-completion prompt for one relation.
///
/// `priors` are the finished graphs of earlier relations (none for
/// hierarchical, hierarchical for temporal, both for causal) and are rendered
/// as completed code blocks. `existing` are edges retained from earlier
/// refinement rounds; they appear as already-written add_edge calls at the
/// completion point. Throws TemplateError when `events` is empty.
std::string render_graph_prompt(const PromptLibrary& lib, const DocumentRecord& doc,
                                std::span<const Event> events, RelationType relation,
                                std::span<const RelationGraph> priors,
                                std::span<const RelationEdge> existing);

/// `Event "H" is a subevent of event "T".` and the temporal/causal equivalents.
std::string edge_statement(const RelationEdge& edge);

std::string render_grader_prompt(const PromptLibrary& lib, const DocumentRecord& doc,
                                 const RelationEdge& edge);

struct MentionPrompts {
  std::string initial;
  std::string followup;
};

MentionPrompts render_mention_prompts(const PromptLibrary& lib, const DocumentRecord& doc,
                                      const Event& event);

}  // namespace seg::prompt
