#include "seg/saliency.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <sstream>

#include "seg/prompt/parse.hpp"
#include "seg/prompt/render.hpp"

namespace seg {

namespace {
bool ends_with(const std::string& s, std::string_view suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}
}  // namespace

std::string SuffixLemmatizer::stem(std::string w) {
  if (w.size() > 4 && ends_with(w, "ing")) {
    w.resize(w.size() - 3);
  } else if (w.size() > 3 && ends_with(w, "ed")) {
    w.resize(w.size() - 2);
  } else if (w.size() > 3 && ends_with(w, "es") &&
             (ends_with(w, "ses") || ends_with(w, "xes") || ends_with(w, "zes") || ends_with(w, "ches") ||
              ends_with(w, "shes"))) {
    w.resize(w.size() - 2);
  } else if (w.size() > 3 && ends_with(w, "s") && !ends_with(w, "ss") && !ends_with(w, "'s")) {
    w.resize(w.size() - 1);
  }
  if (ends_with(w, "'s")) w.resize(w.size() - 2);
  if (w.size() > 3 && ends_with(w, "e")) w.pop_back();
  return w;
}

std::vector<std::string> SuffixLemmatizer::lemmatize(std::string_view text) const {
  std::vector<std::string> out;
  std::string word;
  auto flush = [&] {
    while (!word.empty() && word.back() == '\'') word.pop_back();
    while (!word.empty() && word.front() == '\'') word.erase(word.begin());
    if (!word.empty()) out.push_back(stem(std::move(word)));
    word.clear();
  };
  for (char c : text) {
    auto u = static_cast<unsigned char>(c);
    if (std::isalnum(u) || c == '\'' || u >= 0x80) {
      word.push_back(static_cast<char>(std::tolower(u)));
    } else {
      flush();
    }
  }
  flush();
  return out;
}

SentenceDoc::SentenceDoc(std::string document_id, std::vector<std::string> sentences, const Lemmatizer& lemmatizer)
    : document_id_(std::move(document_id)), sentences_(std::move(sentences)) {
  if (sentences_.empty()) throw InvalidArgument("document " + document_id_ + " has no sentences");
  lemmas_.reserve(sentences_.size());
  for (const auto& s : sentences_) lemmas_.push_back(lemmatizer.lemmatize(s));
}

SentenceDoc SentenceDoc::from_document(const DocumentRecord& doc, const Lemmatizer& lemmatizer) {
  auto sentences = doc.sentences.empty() ? split_sentences(doc.body) : doc.sentences;
  return SentenceDoc(doc.id, std::move(sentences), lemmatizer);
}

MentionSet detect_mentions_exact(const SentenceDoc& doc, const Event& event, const Lemmatizer& lemmatizer) {
  MentionSet m{event, {}};
  auto needle = lemmatizer.lemmatize(event.text());
  if (needle.empty()) return m;
  for (std::size_t i = 0; i < doc.lemmas().size(); ++i) {
    const auto& hay = doc.lemmas()[i];
    if (std::search(hay.begin(), hay.end(), needle.begin(), needle.end()) != hay.end()) m.indices.insert(i);
  }
  return m;
}

MentionSet detect_mentions_llm(const DocumentRecord& doc, const SentenceDoc& sentences, const Event& event,
                               llm::Gateway& gateway, const prompt::PromptLibrary& prompts,
                               const llm::StageParams& params, const LlmMentionOptions& options) {
  MentionSet m{event, {}};
  auto rendered = prompt::render_mention_prompts(prompts, doc, event);
  std::vector<llm::ChatTurn> history;

  auto ask = [&](const std::string& text) {
    auto request = llm::make_request(llm::Stage::mention, text, params, history);
    std::string response = gateway.complete(request);
    history.push_back({llm::ChatTurn::Role::user, text});
    history.push_back({llm::ChatTurn::Role::assistant, response});
    auto found = prompt::parse_mentions(std::span<const std::string>(&response, 1), sentences.sentences());
    std::size_t before = m.indices.size();
    m.indices.insert(found.begin(), found.end());
    return m.indices.size() > before;
  };

  if (!ask(rendered.initial)) return m;
  for (std::size_t i = 0; i < options.max_followups; ++i) {
    if (!ask(rendered.followup)) break;
  }
  return m;
}

SaliencyScores saliency_scores(const SentenceDoc& doc, const MentionSet& mentions) {
  SaliencyScores s;
  if (mentions.indices.empty()) {
    s.no_mention = true;
    return s;
  }
  const std::size_t n = doc.last_index();
  std::size_t first = *mentions.indices.begin();
  std::size_t last = *mentions.indices.rbegin();
  if (last > n) throw InvalidArgument("mention index beyond the last sentence");
  s.frequency = static_cast<double>(mentions.indices.size()) / static_cast<double>(n + 1);
  if (n == 0) {
    s.first_appearance = 0.0;
    s.stretch_size = 0.0;
  } else {
    s.first_appearance = static_cast<double>(first) / static_cast<double>(n);
    s.stretch_size = static_cast<double>(last - first) / static_cast<double>(n);
  }
  return s;
}

CorpusSaliency corpus_saliency(std::span<const DocumentSaliency> documents) {
  CorpusSaliency c;
  std::size_t total_events = 0;
  for (const auto& d : documents) {
    total_events += d.events.size();
    if (d.events.empty()) {
      c.excluded.push_back(d.document_id);
      continue;
    }
    double f = 0, a = 0, s = 0;
    for (const auto& e : d.events) {
      f += e.frequency;
      a += e.first_appearance;
      s += e.stretch_size;
      if (e.no_mention) ++c.no_mention_events;
    }
    auto k = static_cast<double>(d.events.size());
    c.frequency += f / k;
    c.first_appearance += a / k;
    c.stretch_size += s / k;
    ++c.documents;
  }
  if (c.documents > 0) {
    auto n = static_cast<double>(c.documents);
    c.frequency /= n;
    c.first_appearance /= n;
    c.stretch_size /= n;
  }
  if (!documents.empty()) {
    c.mean_events_per_document = static_cast<double>(total_events) / static_cast<double>(documents.size());
  }
  return c;
}

namespace {

struct Means {
  double frequency = 0, first = 0, stretch = 0;
};

Means document_means(const DocumentSaliency& d) {
  Means m;
  for (const auto& e : d.events) {
    m.frequency += e.frequency;
    m.first += e.first_appearance;
    m.stretch += e.stretch_size;
  }
  if (!d.events.empty()) {
    auto k = static_cast<double>(d.events.size());
    m.frequency /= k;
    m.first /= k;
    m.stretch /= k;
  }
  return m;
}

}  // namespace

nlohmann::ordered_json saliency_report_json(const CorpusSaliency& corpus, std::span<const DocumentSaliency> documents) {
  nlohmann::ordered_json j;
  j["corpus"] = {
      {"events_per_document", corpus.mean_events_per_document},
      {"frequency", corpus.frequency},
      {"first_appearance", corpus.first_appearance},
      {"stretch_size", corpus.stretch_size},
      {"documents", corpus.documents},
      {"excluded_documents", corpus.excluded},
      {"no_mention_events", corpus.no_mention_events},
  };
  auto docs = nlohmann::ordered_json::array();
  for (const auto& d : documents) {
    auto m = document_means(d);
    nlohmann::ordered_json dj;
    dj["document_id"] = d.document_id;
    dj["events"] = d.events.size();
    dj["frequency"] = m.frequency;
    dj["first_appearance"] = m.first;
    dj["stretch_size"] = m.stretch;
    docs.push_back(std::move(dj));
  }
  j["documents"] = std::move(docs);
  return j;
}

std::string saliency_report_table(const CorpusSaliency& corpus, std::span<const DocumentSaliency> documents) {
  std::ostringstream out;
  char line[256];
  std::snprintf(line, sizeof line, "%-24s %8s %10s %10s %10s\n", "document", "events", "frequency", "first", "stretch");
  out << line;
  for (const auto& d : documents) {
    auto m = document_means(d);
    std::snprintf(line, sizeof line, "%-24.24s %8zu %9.2f%% %9.2f%% %9.2f%%\n", d.document_id.c_str(), d.events.size(),
                  m.frequency * 100, m.first * 100, m.stretch * 100);
    out << line;
  }
  std::snprintf(line, sizeof line, "%-24s %8.2f %9.2f%% %9.2f%% %9.2f%%\n", "corpus", corpus.mean_events_per_document,
                corpus.frequency * 100, corpus.first_appearance * 100, corpus.stretch_size * 100);
  out << line;
  return out.str();
}

}  // namespace seg
