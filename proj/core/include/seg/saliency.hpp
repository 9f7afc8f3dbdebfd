#pragma once

#include <cstddef>
#include <memory>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "seg/document.hpp"
#include "seg/event.hpp"
#include "seg/llm/gateway.hpp"
#include "seg/prompt/template.hpp"

namespace seg {

class Lemmatizer {
 public:
  virtual ~Lemmatizer() = default;
  virtual std::vector<std::string> lemmatize(std::string_view text) const = 0;
};

/// Lower-cases, splits on anything but ASCII letters, digits and apostrophes,
/// then strips one inflectional suffix ("ing", "ed", "es" after sibilants,
/// "s") and a trailing silent "e", so race/races/raced/racing share a stem.
class SuffixLemmatizer final : public Lemmatizer {
 public:
  std::vector<std::string> lemmatize(std::string_view text) const override;
  static std::string stem(std::string word);
};

/// Sentences s_0..s_n of a document and their lemma sequences.
class SentenceDoc {
 public:
  /// Throws InvalidArgument when `sentences` is empty.
  SentenceDoc(std::string document_id, std::vector<std::string> sentences, const Lemmatizer& lemmatizer);
  static SentenceDoc from_document(const DocumentRecord& doc, const Lemmatizer& lemmatizer);

  const std::string& document_id() const noexcept { return document_id_; }
  const std::vector<std::string>& sentences() const noexcept { return sentences_; }
  const std::vector<std::vector<std::string>>& lemmas() const noexcept { return lemmas_; }
  /// Index of the last sentence.
  std::size_t last_index() const noexcept { return sentences_.size() - 1; }

 private:
  std::string document_id_;
  std::vector<std::string> sentences_;
  std::vector<std::vector<std::string>> lemmas_;
};

struct MentionSet {
  Event event;
  std::set<std::size_t> indices;
};

/// Sentence i mentions the event iff the event's lemma sequence occurs
/// contiguously in sentence i's lemma sequence.
MentionSet detect_mentions_exact(const SentenceDoc& doc, const Event& event, const Lemmatizer& lemmatizer);

struct LlmMentionOptions {
  std::size_t max_followups = 5;
};

/// Asks which sentence mentions the event, then keeps asking for other
/// sentences until a followup adds nothing new or the followup cap is hit.
MentionSet detect_mentions_llm(const DocumentRecord& doc, const SentenceDoc& sentences, const Event& event,
                               llm::Gateway& gateway, const prompt::PromptLibrary& prompts,
                               const llm::StageParams& params, const LlmMentionOptions& options = {});

struct SaliencyScores {
  double frequency = 0.0;
  double first_appearance = 1.0;
  double stretch_size = 0.0;
  bool no_mention = false;
};

/// frequency = |M| / (n + 1), first_appearance = i / n, stretch = (k - i) / n
/// with i, k the first and last mentioning sentence. A one-sentence document
/// (n = 0) gets first_appearance = stretch = 0. No mentions gives (0, 1, 0)
/// with the no_mention flag set.
SaliencyScores saliency_scores(const SentenceDoc& doc, const MentionSet& mentions);

struct DocumentSaliency {
  std::string document_id;
  std::vector<SaliencyScores> events;
};

struct CorpusSaliency {
  double frequency = 0.0;
  double first_appearance = 0.0;
  double stretch_size = 0.0;
  double mean_events_per_document = 0.0;
  std::size_t documents = 0;  // documents that entered the feature averages
  std::vector<std::string> excluded;  // documents with no events
  std::size_t no_mention_events = 0;
};

/// Means over events within each document, then an unweighted mean over
/// documents. The event-count mean covers every document given.
CorpusSaliency corpus_saliency(std::span<const DocumentSaliency> documents);

nlohmann::ordered_json saliency_report_json(const CorpusSaliency& corpus, std::span<const DocumentSaliency> documents);
/// Features as percentages, one aligned row per document plus the corpus row.
std::string saliency_report_table(const CorpusSaliency& corpus, std::span<const DocumentSaliency> documents);

}  // namespace seg
