#include <gtest/gtest.h>

#include "seg/llm/gateway.hpp"
#include "seg/prompt/render.hpp"
#include "seg/saliency.hpp"
#include "support/support.hpp"

using namespace seg;

namespace {
const SuffixLemmatizer lem;

SentenceDoc sentences(std::size_t n) {
  std::vector<std::string> s;
  for (std::size_t i = 0; i < n; ++i) s.push_back("Sentence number " + std::to_string(i) + ".");
  return SentenceDoc("d", s, lem);
}

MentionSet mentions(std::set<std::size_t> idx) { return {Event("e"), std::move(idx)}; }
}  // namespace

TEST(Lemmatizer, SharesStems) {
  EXPECT_EQ(lem.lemmatize("race races raced racing"), (std::vector<std::string>(4, SuffixLemmatizer::stem("race"))));
  EXPECT_EQ(lem.lemmatize("He WINS, the 'race'!"), (std::vector<std::string>{"he", "win", "the", "rac"}));
  EXPECT_EQ(SuffixLemmatizer::stem("boxes"), SuffixLemmatizer::stem("box"));
  EXPECT_EQ(SuffixLemmatizer::stem("glass"), "glass");
  EXPECT_EQ(SuffixLemmatizer::stem("Campbell's"), SuffixLemmatizer::stem("Campbell's"));
  EXPECT_EQ(lem.lemmatize("campbell's"), (std::vector<std::string>{"campbell"}));
}

TEST(ExactMentions, ContiguousLemmaSequence) {
  SentenceDoc doc("d", {"He wins the race today.", "He won the race.", "He will win race again", "Racing is fun"}, lem);
  auto m = detect_mentions_exact(doc, Event("win race"), lem);
  EXPECT_EQ(m.indices, (std::set<std::size_t>{2}));
  SentenceDoc doc2("d", {"He win race today"}, lem);
  EXPECT_EQ(detect_mentions_exact(doc2, Event("win race"), lem).indices, (std::set<std::size_t>{0}));
  SentenceDoc doc3("d", {"he win the race"}, lem);
  EXPECT_TRUE(detect_mentions_exact(doc3, Event("win race"), lem).indices.empty());
}

TEST(ExactMentions, SentencesZeroAndThree) {
  SentenceDoc doc("d", {"The vote passed.", "Rain fell.", "Nothing else.", "After the vote passed, people left.", "End."},
                  lem);
  EXPECT_EQ(detect_mentions_exact(doc, Event("vote passed"), lem).indices, (std::set<std::size_t>{0, 3}));
}

TEST(SaliencyScores, Substitution) {
  auto a = saliency_scores(sentences(10), mentions({0, 4, 9}));
  EXPECT_DOUBLE_EQ(a.frequency, 0.3);
  EXPECT_DOUBLE_EQ(a.first_appearance, 0.0);
  EXPECT_DOUBLE_EQ(a.stretch_size, 1.0);
  auto b = saliency_scores(sentences(10), mentions({3}));
  EXPECT_DOUBLE_EQ(b.frequency, 0.1);
  EXPECT_DOUBLE_EQ(b.first_appearance, 3.0 / 9.0);
  EXPECT_DOUBLE_EQ(b.stretch_size, 0.0);
  auto c = saliency_scores(sentences(1), mentions({0}));
  EXPECT_DOUBLE_EQ(c.frequency, 1.0);
  EXPECT_DOUBLE_EQ(c.first_appearance, 0.0);
  EXPECT_DOUBLE_EQ(c.stretch_size, 0.0);
}

TEST(SaliencyScores, NoMentionIsWorstCase) {
  auto s = saliency_scores(sentences(4), mentions({}));
  EXPECT_TRUE(s.no_mention);
  EXPECT_EQ(s.frequency, 0.0);
  EXPECT_EQ(s.first_appearance, 1.0);
  EXPECT_EQ(s.stretch_size, 0.0);
  EXPECT_THROW(saliency_scores(sentences(4), mentions({4})), InvalidArgument);
  EXPECT_THROW(SentenceDoc("d", {}, lem), InvalidArgument);
}

TEST(SaliencyScores, RangeProperty) {
  for (std::size_t n = 1; n <= 8; ++n) {
    for (unsigned mask = 1; mask < (1u << n); ++mask) {
      std::set<std::size_t> idx;
      for (std::size_t i = 0; i < n; ++i) {
        if (mask & (1u << i)) idx.insert(i);
      }
      auto s = saliency_scores(sentences(n), mentions(idx));
      EXPECT_GT(s.frequency, 0.0);
      EXPECT_LE(s.frequency, 1.0);
      EXPECT_GE(s.first_appearance, 0.0);
      EXPECT_LE(s.first_appearance + s.stretch_size, 1.0 + 1e-12);
    }
  }
}

namespace {

struct MentionScript {
  std::shared_ptr<llm::ScriptedProvider> provider = std::make_shared<llm::ScriptedProvider>();
  prompt::PromptLibrary lib;
  llm::StageParams params;
  DocumentRecord doc{"d", "", "S0 is here. S1 is here. S2 is here. S3 is here. S4 is here.", {}};
  Event event{"the thing"};
  std::vector<llm::ChatTurn> history;

  void turn(const std::string& prompt, const std::string& response) {
    provider->add(llm::Stage::mention, prompt, response, history);
    history.push_back({llm::ChatTurn::Role::user, prompt});
    history.push_back({llm::ChatTurn::Role::assistant, response});
  }
};

}  // namespace

TEST(LlmMentions, FollowsUpUntilNothingNew) {
  MentionScript s;
  auto p = prompt::render_mention_prompts(s.lib, s.doc, s.event);
  s.turn(p.initial, "It is (S1 is here.)");
  s.turn(p.followup, "Yes: (S4 is here.)");
  s.turn(p.followup, "No other sentence.");
  llm::Gateway g(s.provider, nullptr, segtest::fast_options());
  SentenceDoc sd = SentenceDoc::from_document(s.doc, lem);
  ASSERT_EQ(sd.sentences().size(), 5u);
  auto m = detect_mentions_llm(s.doc, sd, s.event, g, s.lib, s.params);
  EXPECT_EQ(m.indices, (std::set<std::size_t>{1, 4}));
  EXPECT_EQ(g.metrics().provider_calls, 3u);
}

TEST(LlmMentions, EmptyFirstAnswerStops) {
  MentionScript s;
  auto p = prompt::render_mention_prompts(s.lib, s.doc, s.event);
  s.turn(p.initial, "(A sentence that is not in the document at all.)");
  llm::Gateway g(s.provider, nullptr, segtest::fast_options());
  SentenceDoc sd = SentenceDoc::from_document(s.doc, lem);
  EXPECT_TRUE(detect_mentions_llm(s.doc, sd, s.event, g, s.lib, s.params).indices.empty());
  EXPECT_EQ(g.metrics().provider_calls, 1u);
}

TEST(LlmMentions, FollowupCap) {
  MentionScript s;
  auto p = prompt::render_mention_prompts(s.lib, s.doc, s.event);
  s.turn(p.initial, "(S0 is here.)");
  s.turn(p.followup, "(S1 is here.)");
  s.turn(p.followup, "(S2 is here.)");
  llm::Gateway g(s.provider, nullptr, segtest::fast_options());
  SentenceDoc sd = SentenceDoc::from_document(s.doc, lem);
  auto m = detect_mentions_llm(s.doc, sd, s.event, g, s.lib, s.params, LlmMentionOptions{2});
  EXPECT_EQ(m.indices, (std::set<std::size_t>{0, 1, 2}));
  EXPECT_EQ(g.metrics().provider_calls, 3u);
}

TEST(CorpusSaliency, MeansAndExclusions) {
  DocumentSaliency a{"a", {{0.2, 0.0, 0.5, false}}};
  DocumentSaliency b{"b", {{0.3, 0.5, 0.0, false}, {0.5, 0.5, 0.0, false}}};
  DocumentSaliency empty{"z", {}};
  std::vector<DocumentSaliency> docs{a, b, empty};
  auto c = corpus_saliency(docs);
  EXPECT_DOUBLE_EQ(c.frequency, 0.3);
  EXPECT_DOUBLE_EQ(c.first_appearance, 0.25);
  EXPECT_EQ(c.documents, 2u);
  EXPECT_EQ(c.excluded, (std::vector<std::string>{"z"}));
  EXPECT_DOUBLE_EQ(c.mean_events_per_document, 1.0);
  std::vector<DocumentSaliency> one{b};
  EXPECT_DOUBLE_EQ(corpus_saliency(one).frequency, 0.4);
  auto j = saliency_report_json(c, docs);
  EXPECT_EQ(j["corpus"]["excluded_documents"][0], "z");
  EXPECT_FALSE(saliency_report_table(c, docs).empty());
}
