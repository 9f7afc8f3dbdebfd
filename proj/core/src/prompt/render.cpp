#include "seg/prompt/render.hpp"

#include <nlohmann/json.hpp>

namespace seg::prompt {

std::string python_string_literal(std::string_view s) { return nlohmann::json(std::string(s)).dump(); }

std::string escape_triple_quotes(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  std::size_t i = 0;
  while (i < s.size()) {
    if (s.compare(i, 3, R"(""")") == 0) {
      out += R"(\"\"\")";
      i += 3;
    } else {
      out.push_back(s[i++]);
    }
  }
  if (!out.empty() && out.back() == '"' && (out.size() < 2 || out[out.size() - 2] != '\\')) {
    out.insert(out.size() - 1, "\\");
  }
  return out;
}

std::string graph_variable(RelationType r) { return std::string(relation_label(r)) + "_graph"; }

std::string render_add_edge_calls(std::string_view variable, std::span<const RelationEdge> edges) {
  std::string out;
  for (const auto& e : edges) {
    out += std::string(variable) + ".add_edge(" + python_string_literal(e.head.text()) + ", " +
           python_string_literal(e.tail.text()) + ")\n";
  }
  return out;
}

std::string render_summary_prompt(const PromptLibrary& lib, const DocumentRecord& doc) {
  if (normalize_whitespace(doc.body).empty()) throw TemplateError("summary prompt: document body is empty");
  return lib.get(TemplateId::summary).render({{"document", escape_triple_quotes(doc.body)}});
}

std::string render_event_prompt(const PromptLibrary& lib, std::string_view summary) {
  if (normalize_whitespace(summary).empty()) throw TemplateError("event prompt: summary is empty");
  return lib.get(TemplateId::events).render({{"summary", escape_triple_quotes(summary)}});
}

namespace {

TemplateId graph_template(RelationType r) {
  switch (r) {
    case RelationType::hierarchical: return TemplateId::graph_hierarchical;
    case RelationType::temporal: return TemplateId::graph_temporal;
    case RelationType::causal: break;
  }
  return TemplateId::graph_causal;
}

std::string_view edge_meaning(RelationType r) {
  switch (r) {
    case RelationType::hierarchical: return "the head event is a subevent of the tail event";
    case RelationType::temporal: return "the head event happened before the tail event";
    case RelationType::causal: break;
  }
  return "the head event is caused by the tail event";
}

std::string render_prior(const RelationGraph& g) {
  auto var = graph_variable(g.relation());
  auto label = std::string(relation_label(g.relation()));
  std::string out;
  out += "# This is the completed graph representing the " + label +
         " relation between the events in the document\n";
  out += "# An edge means " + std::string(edge_meaning(g.relation())) + ".\n";
  out += var + " = nx.DiGraph()\n";
  out += "for event in event_list:\n";
  out += "    " + var + ".add_node(event)\n";
  if (g.edges().empty()) {
    out += "# No " + label + " relations were found between the events\n";
  } else {
    out += render_add_edge_calls(var, g.edges());
  }
  return out;
}

}  // namespace

std::string render_graph_prompt(const PromptLibrary& lib, const DocumentRecord& doc,
                                std::span<const Event> events, RelationType relation,
                                std::span<const RelationGraph> priors,
                                std::span<const RelationEdge> existing) {
  if (events.empty()) throw TemplateError("graph prompt: event list is empty");
  std::string event_list = "[";
  for (std::size_t i = 0; i < events.size(); ++i) {
    if (i) event_list += ", ";
    event_list += python_string_literal(events[i].text());
  }
  event_list += "]";

  std::string prior_block;
  for (const auto& g : priors) {
    prior_block += render_prior(g);
    prior_block += "\n";
  }
  if (!prior_block.empty()) prior_block.pop_back();

  std::string existing_block = render_add_edge_calls(graph_variable(relation), existing);
  if (!existing_block.empty()) existing_block.pop_back();

  // The document is a Python triple-quoted literal; escaping every quote and
  // backslash keeps it well formed whatever the body holds.
  std::string literal = "\"\"\"";
  for (char c : doc.body) {
    if (c == '\\' || c == '"') literal.push_back('\\');
    literal.push_back(c);
  }
  literal += "\"\"\"";

  return lib.get(graph_template(relation))
      .render({{"document", literal},
               {"event_list", event_list},
               {"prior_graphs", prior_block},
               {"existing_edges", existing_block}});
}

std::string edge_statement(const RelationEdge& edge) {
  std::string_view verb;
  switch (edge.relation) {
    case RelationType::hierarchical: verb = "is a subevent of"; break;
    case RelationType::temporal: verb = "happened before"; break;
    case RelationType::causal: verb = "is caused by"; break;
  }
  return "Event \"" + edge.head.text() + "\" " + std::string(verb) + " event \"" + edge.tail.text() + "\".";
}

std::string render_grader_prompt(const PromptLibrary& lib, const DocumentRecord& doc,
                                 const RelationEdge& edge) {
  return lib.get(TemplateId::grader).render({{"document", doc.body}, {"edge_statement", edge_statement(edge)}});
}

MentionPrompts render_mention_prompts(const PromptLibrary& lib, const DocumentRecord& doc,
                                      const Event& event) {
  Bindings b{{"event", event.text()}, {"document", escape_triple_quotes(doc.body)}};
  return {lib.get(TemplateId::mention_initial).render(b), lib.get(TemplateId::mention_followup).render(b)};
}

}  // namespace seg::prompt
