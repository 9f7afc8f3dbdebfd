#include "seg/pipeline.hpp"

#include <algorithm>
#include <unordered_map>

#include "seg/llm/errors.hpp"
#include "seg/prompt/parse.hpp"
#include "seg/prompt/render.hpp"

namespace seg {

bool LengthFilter::accepts(const DocumentRecord& doc) const {
  auto n = word_count(doc.body);
  return n >= min_words && n <= max_words;
}

void PipelineConfig::validate() const {
  if (max_rounds < 1) throw InvalidArgument("max_rounds must be at least 1");
  if (length_filter.min_words >= length_filter.max_words) throw InvalidArgument("filter needs min_words < max_words");
}

CascadePipeline::CascadePipeline(llm::Gateway& gateway, const prompt::PromptLibrary& prompts, PipelineConfig config)
    : gateway_(gateway), prompts_(prompts), config_(std::move(config)) {
  config_.validate();
}

std::string CascadePipeline::complete(const DocumentRecord& doc, const std::string& where, llm::Stage stage,
                                      std::string prompt) const {
  try {
    return gateway_.complete(llm::make_request(stage, std::move(prompt), config_.stage_params));
  } catch (const llm::LlmError& e) {
    throw PipelineError(doc.id, where, e.what());
  }
}

std::vector<Event> CascadePipeline::generate_salient_events(const DocumentRecord& doc, PipelineTrace* trace) const {
  std::string summary = complete(doc, "summary", llm::Stage::summary, prompt::render_summary_prompt(prompts_, doc));
  if (trace) trace->summary = summary;
  if (normalize_whitespace(summary).empty()) throw DocumentSkipped(doc.id + ": empty summary");
  std::string response = complete(doc, "events", llm::Stage::events, prompt::render_event_prompt(prompts_, summary));
  try {
    auto events = prompt::parse_event_list(response);
    if (trace) {
      trace->events.clear();
      for (const auto& e : events) trace->events.push_back(e.text());
    }
    return events;
  } catch (const prompt::FormatError& e) {
    throw DocumentSkipped(doc.id + ": " + e.what());
  }
}

namespace {

std::vector<RelationType> required_priors(RelationType r) {
  auto pos = std::find(kRelationOrder.begin(), kRelationOrder.end(), r);
  return {kRelationOrder.begin(), pos};
}

}  // namespace

RelationResult CascadePipeline::generate_relation_graph(const DocumentRecord& doc, std::span<const Event> events,
                                                        RelationType relation,
                                                        std::span<const RelationGraph> priors) const {
  if (events.empty()) throw InvalidArgument("generate_relation_graph needs at least one event");
  auto needed = required_priors(relation);
  if (priors.size() != needed.size()) {
    throw InvalidArgument(std::string(relation_label(relation)) + " generation needs " +
                          std::to_string(needed.size()) + " prior graph(s)");
  }
  for (std::size_t i = 0; i < needed.size(); ++i) {
    if (priors[i].relation() != needed[i]) throw InvalidArgument("prior graphs out of order");
  }

  RelationResult result{RelationGraph(relation, {events.begin(), events.end()}, {}), {relation, {}, false}};
  std::unordered_map<RelationEdge, GradedEdge, RelationEdgeHash> verdicts;

  for (int round = 1; round <= config_.max_rounds; ++round) {
    const std::string where = std::string(relation_label(relation)) + " round " + std::to_string(round);
    RoundTrace rt;
    rt.round = round;
    rt.input_edges = result.graph.edges();

    auto prompt = prompt::render_graph_prompt(prompts_, doc, events, relation, priors, result.graph.edges());
    auto response = complete(doc, where, llm::Stage::graph, std::move(prompt));
    auto parsed = prompt::parse_graph_response(response, events);
    rt.parse_status = parsed.parse_status;
    rt.dropped = std::move(parsed.dropped);

    std::vector<RelationEdge> accepted;
    for (auto& [head, tail] : parsed.edges) {
      RelationEdge edge(head, tail, relation);
      rt.generated.push_back(edge);
      if (result.graph.has_edge(edge.head, edge.tail)) continue;

      if (auto it = verdicts.find(edge); it != verdicts.end()) {
        GradedEdge g = it->second;
        g.cached = true;
        rt.graded.push_back(g);
      } else {
        auto reply = complete(doc, where + " grader", llm::Stage::grader,
                              prompt::render_grader_prompt(prompts_, doc, edge));
        GradedEdge g{edge, prompt::Verdict::no, false, false, {}};
        try {
          auto v = prompt::parse_grader(reply);
          g.verdict = v.verdict;
          g.explanation = std::move(v.explanation);
        } catch (const prompt::GraderParseError&) {
          g.grader_parse_error = true;
          g.explanation = reply;
        }
        verdicts.emplace(edge, g);
        rt.graded.push_back(std::move(g));
      }
      if (rt.graded.back().verdict == prompt::Verdict::yes) accepted.push_back(edge);
    }

    auto merged = merge_edges(result.graph, accepted);
    for (const auto& rej : merged.rejected) {
      if (rej.reason == MergeRejection::cycle) rt.cycle_rejected.push_back(rej.edge);
    }
    for (const auto& e : accepted) {
      bool refused = std::any_of(merged.rejected.begin(), merged.rejected.end(),
                                 [&](const RejectedEdge& r) { return r.edge == e; });
      if (!refused) rt.retained.push_back(e);
    }
    result.graph = std::move(merged.graph);
    bool nothing_new = rt.retained.empty();
    result.trace.rounds.push_back(std::move(rt));
    if (nothing_new && config_.early_stop_on_no_new_edges) {
      result.trace.early_stopped = true;
      break;
    }
  }
  return result;
}

DocumentResult CascadePipeline::run_document(const DocumentRecord& doc) const {
  if (normalize_whitespace(doc.body).empty()) throw DocumentSkipped(doc.id + ": empty document");
  if (!config_.length_filter.accepts(doc)) {
    throw DocumentSkipped(doc.id + ": " + std::to_string(word_count(doc.body)) + " words is outside [" +
                          std::to_string(config_.length_filter.min_words) + ", " +
                          std::to_string(config_.length_filter.max_words) + "]");
  }
  PipelineTrace trace;
  trace.document_id = doc.id;
  auto events = generate_salient_events(doc, &trace);

  std::vector<RelationGraph> finished;
  for (auto r : kRelationOrder) {
    bool selected = std::find(config_.relations.begin(), config_.relations.end(), r) != config_.relations.end();
    if (!selected) {
      finished.emplace_back(r, events, std::vector<RelationEdge>{});
      continue;
    }
    auto rel = generate_relation_graph(doc, events, r, finished);
    trace.relations.push_back(std::move(rel.trace));
    finished.push_back(std::move(rel.graph));
  }
  EventGraphBundle bundle(doc.id, std::move(finished[0]), std::move(finished[1]), std::move(finished[2]));
  return {std::move(bundle), std::move(trace)};
}

}  // namespace seg
