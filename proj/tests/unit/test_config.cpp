#include <gtest/gtest.h>

#include "seg/config.hpp"
#include "seg/llm/http.hpp"
#include "support/support.hpp"

using namespace seg;
using nlohmann::json;

namespace {

EnvLookup env_of(std::map<std::string, std::string> vars) {
  return [vars](const std::string& k) -> std::optional<std::string> {
    auto it = vars.find(k);
    if (it == vars.end()) return std::nullopt;
    return it->second;
  };
}

const EnvLookup no_env = env_of({});

}  // namespace

TEST(Config, Defaults) {
  auto c = resolve_config(std::nullopt, no_env, {});
  EXPECT_EQ(c.provider.kind, "scripted");
  EXPECT_EQ(c.pipeline.max_rounds, 5);
  EXPECT_TRUE(c.pipeline.early_stop_on_no_new_edges);
  EXPECT_EQ(c.pipeline.relations.size(), 3u);
  EXPECT_EQ(c.pipeline.length_filter.min_words, 100u);
  EXPECT_EQ(c.pipeline.length_filter.max_words, 8500u);
  EXPECT_DOUBLE_EQ(c.pipeline.stage_params.get(llm::Stage::summary).temperature, 0.8);
  EXPECT_DOUBLE_EQ(c.pipeline.stage_params.get(llm::Stage::grader).temperature, 0.0);
  EXPECT_EQ(c.max_retries, 3);
  EXPECT_EQ(c.max_in_flight, 4u);
  EXPECT_EQ(config_to_json(c).dump(), config_to_json(resolve_config(default_config_json(), no_env, {})).dump());
}

TEST(Config, PrecedenceDefaultsFileEnvFlags) {
  json file = {{"pipeline", {{"max_rounds", 4}}}, {"parallelism", 2}, {"paths", {{"out_dir", "from-file"}}}};
  auto env = env_of({{"SEG_MAX_ROUNDS", "3"}, {"SEG_PARALLELISM", "6"}});
  std::vector<std::pair<std::string, json>> flags{{"pipeline.max_rounds", 2}};

  EXPECT_EQ(resolve_config(std::nullopt, no_env, {}).pipeline.max_rounds, 5);
  EXPECT_EQ(resolve_config(file, no_env, {}).pipeline.max_rounds, 4);
  EXPECT_EQ(resolve_config(file, env, {}).pipeline.max_rounds, 3);
  EXPECT_EQ(resolve_config(std::nullopt, env, {}).pipeline.max_rounds, 3);
  auto all = resolve_config(file, env, flags);
  EXPECT_EQ(all.pipeline.max_rounds, 2);
  EXPECT_EQ(all.parallelism, 6u);
  EXPECT_EQ(all.out_dir, "from-file");
  EXPECT_EQ(resolve_config(std::nullopt, no_env, flags).pipeline.max_rounds, 2);
}

TEST(Config, RejectsBadInput) {
  EXPECT_THROW(resolve_config(json{{"pipline", json::object()}}, no_env, {}), ConfigError);
  EXPECT_THROW(resolve_config(json{{"pipeline", {{"max_rounds", "five"}}}}, no_env, {}), ConfigError);
  EXPECT_THROW(resolve_config(json{{"pipeline", {{"max_rounds", 1.5}}}}, no_env, {}), ConfigError);
  EXPECT_THROW(resolve_config(std::nullopt, no_env, {{"pipeline.max_rounds", 0}}), ConfigError);
  EXPECT_THROW(resolve_config(std::nullopt, no_env, {{"nope.key", 1}}), ConfigError);
  EXPECT_THROW(resolve_config(std::nullopt, env_of({{"SEG_MAX_ROUNDS", "x"}}), {}), ConfigError);
  EXPECT_THROW(resolve_config(json{{"filter", {{"min_words", 900}, {"max_words", 800}}}}, no_env, {}), ConfigError);
  EXPECT_THROW(resolve_config(json{{"pipeline", {{"relations", json::array()}}}}, no_env, {}), ConfigError);
  EXPECT_THROW(resolve_config(json{{"pipeline", {{"relations", {"is_friend_of"}}}}}, no_env, {}), ConfigError);
  EXPECT_THROW(resolve_config(json{{"provider", {{"kind", "http"}}}}, no_env, {}), ConfigError);
  EXPECT_THROW(resolve_config(json{{"stage_params", {{"graph", {{"temperature", 5.0}}}}}}, no_env, {}), ConfigError);
}

TEST(Config, RelationSubsetAndStageParams) {
  json file = {{"pipeline", {{"relations", {"caused_by", "is_subevent_of"}}}},
               {"stage_params", {{"graph", {{"temperature", 0.2}, {"top_p", 0.5}}}}}};
  auto c = resolve_config(file, no_env, {});
  EXPECT_EQ(c.pipeline.relations, (std::vector<RelationType>{RelationType::causal, RelationType::hierarchical}));
  EXPECT_DOUBLE_EQ(c.pipeline.stage_params.get(llm::Stage::graph).top_p, 0.5);
  EXPECT_DOUBLE_EQ(c.pipeline.stage_params.get(llm::Stage::events).temperature, 0.5);
}

TEST(Config, LoadsFile) {
  segtest::TempDir dir;
  segtest::write_file(dir / "c.json", R"({"parallelism": 3})");
  EXPECT_EQ(resolve_config(load_config_file(dir / "c.json"), no_env, {}).parallelism, 3u);
  segtest::write_file(dir / "bad.json", "{parallelism: 3");
  EXPECT_THROW(load_config_file(dir / "bad.json"), ConfigError);
  EXPECT_THROW(load_config_file(dir / "none.json"), ConfigError);
}

TEST(Config, ProvidersFromSettings) {
  auto c = resolve_config(std::nullopt, no_env, {});
  EXPECT_THROW(make_text_provider(c, no_env), ConfigError);
  EXPECT_EQ(make_embedder(c, no_env)->id(), "hashed-bow-256");

  auto http = resolve_config(json{{"provider", {{"kind", "http"}, {"endpoint", "http://127.0.0.1:9/v1"}, {"model", "m"}}}},
                             no_env, {});
  auto p = make_text_provider(http, env_of({{"SEG_API_KEY", "k"}}));
  EXPECT_EQ(p->id(), "http-chat:m@http://127.0.0.1:9/v1");

  auto opts = make_gateway_options(c);
  EXPECT_EQ(opts.retry.max_retries, 3);
  EXPECT_EQ(opts.retry.initial_backoff.count(), 1000);
  EXPECT_EQ(opts.max_in_flight, 4u);
}
