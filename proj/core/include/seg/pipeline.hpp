#pragma once

#include <span>
#include <string>
#include <vector>

#include "seg/bundle.hpp"
#include "seg/document.hpp"
#include "seg/llm/gateway.hpp"
#include "seg/prompt/template.hpp"
#include "seg/trace.hpp"

namespace seg {

/// Keeps documents with min_words <= word_count(body) <= max_words.
struct LengthFilter {
  std::size_t min_words = 100;
  std::size_t max_words = 8500;

  bool accepts(const DocumentRecord& doc) const;
};

struct PipelineConfig {
  int max_rounds = 5;
  bool early_stop_on_no_new_edges = true;
  llm::StageParams stage_params;
  /// Relations to generate; always run in hierarchical, temporal, causal order.
  /// A skipped relation contributes an empty graph to later prompts.
  std::vector<RelationType> relations{kRelationOrder.begin(), kRelationOrder.end()};
  LengthFilter length_filter;

  /// Throws InvalidArgument on max_rounds < 1 or bad filter bounds.
  void validate() const;
};

/// The document was not eligible or produced no events.
class DocumentSkipped : public Error {
 public:
  using Error::Error;
};

/// A provider call failed; names the document, stage and round.
class PipelineError : public Error {
 public:
  PipelineError(const std::string& document_id, const std::string& where, const std::string& cause)
      : Error(document_id + ": " + where + ": " + cause), document_id_(document_id) {}
  const std::string& document_id() const noexcept { return document_id_; }

 private:
  std::string document_id_;
};

struct RelationResult {
  RelationGraph graph;
  RelationTrace trace;
};

struct DocumentResult {
  EventGraphBundle bundle;
  PipelineTrace trace;
};

/// Summary -> salient events -> per-relation code-completion rounds with
/// hallucination grading.
///
/// Each relation run repeats up to max_rounds: render the code prompt with
/// the finished prior graphs and the edges retained so far, parse the
/// completion, grade every edge not yet in the graph (a verdict is reused if
/// the same edge comes back in a later round), and merge the "yes" edges,
/// refusing any that would close a cycle. With early stopping the run ends
/// after the first round that retains nothing new.
///
/// Safe to share across threads when the gateway is.
class CascadePipeline {
 public:
  CascadePipeline(llm::Gateway& gateway, const prompt::PromptLibrary& prompts, PipelineConfig config);

  const PipelineConfig& config() const noexcept { return config_; }

  /// Throws DocumentSkipped when no events can be parsed, PipelineError on provider failure.
  std::vector<Event> generate_salient_events(const DocumentRecord& doc, PipelineTrace* trace = nullptr) const;

  /// `priors` must be exactly the graphs preceding `relation` in generation
  /// order. Throws InvalidArgument otherwise.
  RelationResult generate_relation_graph(const DocumentRecord& doc, std::span<const Event> events,
                                         RelationType relation, std::span<const RelationGraph> priors) const;

  /// Throws DocumentSkipped for a document outside the length bounds.
  DocumentResult run_document(const DocumentRecord& doc) const;

 private:
  std::string complete(const DocumentRecord& doc, const std::string& where, llm::Stage stage,
                       std::string prompt) const;

  llm::Gateway& gateway_;
  const prompt::PromptLibrary& prompts_;
  PipelineConfig config_;
};

}  // namespace seg
