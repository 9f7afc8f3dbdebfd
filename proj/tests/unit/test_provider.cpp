#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "oracles/cosine.hpp"
#include "seg/error.hpp"
#include "seg/hash.hpp"
#include "seg/llm/errors.hpp"
#include "seg/llm/provider.hpp"
#include "support/support.hpp"

using namespace seg::llm;

TEST(ScriptedProvider, ReturnsFixtureVerbatim) {
  ScriptedProvider p;
  p.add(Stage::summary, "Write it.", "  exact text\n with spacing ");
  auto r = make_request(Stage::summary, "Write it.", StageParams{});
  EXPECT_EQ(p.complete(r), "  exact text\n with spacing ");
  EXPECT_EQ(p.complete(r), p.complete(r));
}

TEST(ScriptedProvider, KeyIncludesStage) {
  ScriptedProvider p;
  p.add(Stage::summary, "same", "a");
  EXPECT_THROW(p.complete(make_request(Stage::events, "same", StageParams{})), FixtureMissing);
}

TEST(ScriptedProvider, MissingFixtureIsDeterministic) {
  ScriptedProvider p;
  auto r = make_request(Stage::graph, "unknown prompt", StageParams{});
  std::string first, second;
  try {
    p.complete(r);
  } catch (const FixtureMissing& e) {
    first = e.what();
  }
  try {
    p.complete(r);
  } catch (const FixtureMissing& e) {
    second = e.what();
  }
  EXPECT_EQ(first, second);
  EXPECT_EQ(first, "fixture missing for stage graph prompt_hash " + prompt_hash(r));
}

TEST(ScriptedProvider, LoadsJsonlWithPromptOrHash) {
  segtest::TempDir dir;
  auto r = make_request(Stage::grader, "grade this", StageParams{});
  nlohmann::json a = {{"stage", "grader"}, {"prompt_hash", prompt_hash(r)}, {"response", "Score: yes"}};
  nlohmann::json b = {{"stage", "summary"}, {"prompt", "sum"}, {"response", "S"}};
  segtest::write_file(dir / "f.jsonl", a.dump() + "\n\n" + b.dump() + "\n");
  auto p = ScriptedProvider::from_file(dir / "f.jsonl");
  EXPECT_EQ(p->size(), 2u);
  EXPECT_EQ(p->complete(r), "Score: yes");
  EXPECT_EQ(p->complete(make_request(Stage::summary, "sum", StageParams{})), "S");
  segtest::write_file(dir / "bad.jsonl", "{\"stage\":\"nope\",\"prompt\":\"x\",\"response\":\"y\"}\n");
  EXPECT_THROW(ScriptedProvider::from_file(dir / "bad.jsonl"), seg::InvalidArgument);
}

TEST(ScriptedProvider, HistoryChangesKey) {
  ScriptedProvider p;
  std::vector<ChatTurn> h{{ChatTurn::Role::user, "q1"}, {ChatTurn::Role::assistant, "a1"}};
  p.add(Stage::mention, "q2", "with history", h);
  p.add(Stage::mention, "q2", "fresh");
  EXPECT_EQ(p.complete(make_request(Stage::mention, "q2", StageParams{}, h)), "with history");
  EXPECT_EQ(p.complete(make_request(Stage::mention, "q2", StageParams{})), "fresh");
}

TEST(RecordingProvider, WritesReplayableFixtures) {
  segtest::TempDir dir;
  auto inner = std::make_shared<CallbackProvider>([](const GenerationRequest& r) { return "echo:" + r.prompt; });
  RecordingProvider rec(inner);
  rec.complete(make_request(Stage::graph, "b", StageParams{}));
  rec.complete(make_request(Stage::summary, "a", StageParams{}));
  rec.complete(make_request(Stage::summary, "a", StageParams{}));
  EXPECT_EQ(rec.exchanges().size(), 3u);
  rec.write_fixtures(dir / "rec.jsonl");
  auto replay = ScriptedProvider::from_file(dir / "rec.jsonl");
  EXPECT_EQ(replay->size(), 2u);
  EXPECT_EQ(replay->complete(make_request(Stage::summary, "a", StageParams{})), "echo:a");
  EXPECT_EQ(replay->complete(make_request(Stage::graph, "b", StageParams{})), "echo:b");
}

TEST(HashedEmbedder, DeterministicUnitVectors) {
  HashedEmbedder e;
  auto a = e.embed_one("The mayor resigned");
  auto b = e.embed_one("The mayor resigned");
  EXPECT_EQ(a.values, b.values);
  EXPECT_EQ(a.dimension(), 256u);
  EXPECT_NEAR(a.norm(), 1.0, 1e-12);
  EXPECT_NEAR(cosine_distance(e.embed_one("a b c"), e.embed_one("a b c")), 0.0, 1e-12);
  EXPECT_EQ(e.embed_one("The MAYOR, resigned!").values, a.values);
}

TEST(HashedEmbedder, BucketIsFnvModDimension) {
  HashedEmbedder e(256);
  EXPECT_EQ(e.bucket("mayor"), seg::fnv1a64("mayor") % 256);
}

TEST(HashedEmbedder, DisjointVocabularyIsOrthogonal) {
  HashedEmbedder e;
  std::string a = "council voted budget", b = "mayor resigned suddenly";
  std::set<std::size_t> buckets;
  for (const auto& t : {"council", "voted", "budget", "mayor", "resigned", "suddenly"}) buckets.insert(e.bucket(t));
  ASSERT_EQ(buckets.size(), 6u) << "test vocabulary must not collide";
  EXPECT_NEAR(cosine_distance(e.embed_one(a), e.embed_one(b)), 1.0, 1e-9);
}

TEST(HashedEmbedder, MatchesDirectBagOfWordsCosine) {
  HashedEmbedder e;
  std::vector<std::pair<std::string, std::string>> cases = {
      {"the council voted", "the council met"},
      {"voted voted budget", "budget council"},
      {"mayor resigned after vote", "the mayor resigned"}};
  for (const auto& [a, b] : cases) {
    std::set<std::size_t> buckets;
    std::set<std::string> toks;
    for (const auto& [t, _] : oracle::token_counts(a + " " + b)) {
      toks.insert(t);
      buckets.insert(e.bucket(t));
    }
    ASSERT_EQ(buckets.size(), toks.size());
    EXPECT_NEAR(cosine_distance(e.embed_one(a), e.embed_one(b)), oracle::bow_cosine_distance(a, b), 1e-12);
  }
}

TEST(Embedding, CosineRejectsBadInput) {
  EmbeddingVector a{{1, 0}}, z{{0, 0}}, c{{1, 0, 0}};
  EXPECT_THROW(cosine_distance(a, z), seg::InvalidArgument);
  EXPECT_THROW(cosine_distance(a, c), seg::InvalidArgument);
  EXPECT_NEAR(cosine_distance(a, EmbeddingVector{{-1, 0}}), 2.0, 1e-12);
}
