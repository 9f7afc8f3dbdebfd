#include <gtest/gtest.h>

#include "seg/error.hpp"
#include "seg/llm/request.hpp"

using namespace seg::llm;

TEST(StageParams, Defaults) {
  StageParams p;
  EXPECT_DOUBLE_EQ(p.get(Stage::summary).temperature, 0.8);
  EXPECT_DOUBLE_EQ(p.get(Stage::events).temperature, 0.5);
  EXPECT_DOUBLE_EQ(p.get(Stage::graph).temperature, 0.5);
  EXPECT_DOUBLE_EQ(p.get(Stage::grader).temperature, 0.0);
  EXPECT_DOUBLE_EQ(p.get(Stage::mention).temperature, 0.0);
  for (auto s : kStages) EXPECT_DOUBLE_EQ(p.get(s).top_p, 0.9);
}

TEST(StageParams, Validation) {
  StageParams p;
  EXPECT_THROW(p.set(Stage::graph, {2.1, 0.9}), seg::InvalidArgument);
  EXPECT_THROW(p.set(Stage::graph, {-0.1, 0.9}), seg::InvalidArgument);
  EXPECT_THROW(p.set(Stage::graph, {0.5, 0.0}), seg::InvalidArgument);
  EXPECT_THROW(p.set(Stage::graph, {0.5, 1.01}), seg::InvalidArgument);
  p.set(Stage::graph, {2.0, 1.0});
  EXPECT_DOUBLE_EQ(p.get(Stage::graph).temperature, 2.0);
}

TEST(Request, MaxTokensDefaults) {
  EXPECT_EQ(default_max_tokens(Stage::graph), 4096);
  EXPECT_EQ(default_max_tokens(Stage::summary), 1024);
  EXPECT_EQ(default_max_tokens(Stage::grader), 1024);
  auto r = make_request(Stage::graph, "p", StageParams{});
  EXPECT_EQ(r.max_tokens, 4096);
  EXPECT_DOUBLE_EQ(r.temperature, 0.5);
}

TEST(Request, ValidateRejectsBadFields) {
  auto r = make_request(Stage::summary, "p", StageParams{});
  r.max_tokens = 0;
  EXPECT_THROW(r.validate(), seg::InvalidArgument);
  r.max_tokens = 5;
  r.top_p = 0;
  EXPECT_THROW(r.validate(), seg::InvalidArgument);
}

TEST(Request, StageNames) {
  for (auto s : kStages) EXPECT_EQ(parse_stage(stage_name(s)), s);
  EXPECT_FALSE(parse_stage("nope"));
}

TEST(Request, HashesAndFingerprints) {
  auto a = make_request(Stage::summary, "prompt", StageParams{});
  auto b = a;
  EXPECT_EQ(prompt_hash(a), prompt_hash(b));
  EXPECT_EQ(request_fingerprint(a, "p1"), request_fingerprint(b, "p1"));
  EXPECT_NE(request_fingerprint(a, "p1"), request_fingerprint(a, "p2"));
  b.temperature = 0.3;
  EXPECT_EQ(prompt_hash(a), prompt_hash(b));
  EXPECT_NE(request_fingerprint(a, "p1"), request_fingerprint(b, "p1"));
  auto c = make_request(Stage::mention, "prompt", StageParams{}, {{ChatTurn::Role::user, "q"}});
  EXPECT_NE(prompt_hash(a), prompt_hash(c));
}
