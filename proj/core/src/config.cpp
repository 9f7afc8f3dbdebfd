#include "seg/config.hpp"

#include <cstdlib>
#include <fstream>

#include "seg/llm/http.hpp"
#include "seg/llm/provider.hpp"

namespace seg {

using nlohmann::json;

std::optional<std::string> process_env(const std::string& name) {
  const char* v = std::getenv(name.c_str());
  if (!v) return std::nullopt;
  return std::string(v);
}

json default_config_json() {
  json stages = json::object();
  llm::StageParams defaults;
  for (auto s : llm::kStages) {
    stages[std::string(llm::stage_name(s))] = {{"temperature", defaults.get(s).temperature},
                                               {"top_p", defaults.get(s).top_p}};
  }
  json relations = json::array();
  for (auto r : kRelationOrder) relations.push_back(relation_name(r));
  return {
      {"provider",
       {{"kind", "scripted"}, {"endpoint", ""}, {"model", ""}, {"api_key_env", "SEG_API_KEY"}, {"fixtures", ""},
        {"timeout_seconds", 120}}},
      {"embedding", {{"kind", "hashed"}, {"endpoint", ""}, {"model", ""}, {"dimension", 256}}},
      {"stage_params", std::move(stages)},
      {"pipeline", {{"max_rounds", 5}, {"early_stop", true}, {"relations", std::move(relations)}}},
      {"filter", {{"min_words", 100}, {"max_words", 8500}}},
      {"paths",
       {{"corpus", ""}, {"out_dir", "out"}, {"cache_dir", ""}, {"manifest", ""}, {"templates_dir", ""}, {"trace", ""}}},
      {"parallelism", 1},
      {"gateway", {{"max_in_flight", 4}, {"max_retries", 3}, {"initial_backoff_ms", 1000}}},
  };
}

const std::vector<std::pair<std::string, std::string>>& env_overrides() {
  static const std::vector<std::pair<std::string, std::string>> table = {
      {"SEG_PROVIDER", "provider.kind"},        {"SEG_ENDPOINT", "provider.endpoint"},
      {"SEG_MODEL", "provider.model"},          {"SEG_FIXTURES", "provider.fixtures"},
      {"SEG_EMBED_ENDPOINT", "embedding.endpoint"}, {"SEG_EMBED_MODEL", "embedding.model"},
      {"SEG_CACHE_DIR", "paths.cache_dir"},     {"SEG_TEMPLATES_DIR", "paths.templates_dir"},
      {"SEG_PARALLELISM", "parallelism"},       {"SEG_MAX_ROUNDS", "pipeline.max_rounds"},
  };
  return table;
}

namespace {

json::json_pointer pointer_for(const std::string& dotted) {
  std::string p;
  std::size_t start = 0;
  while (true) {
    auto dot = dotted.find('.', start);
    p += "/" + dotted.substr(start, dot - start);
    if (dot == std::string::npos) break;
    start = dot + 1;
  }
  return json::json_pointer(p);
}

// Values from the environment arrive as strings; coerce them to the type the
// default tree holds at that key.
json coerce(const json& like, const std::string& key, const std::string& text) {
  try {
    if (like.is_number_integer()) {
      std::size_t used = 0;
      long long v = std::stoll(text, &used);
      if (used != text.size()) throw std::invalid_argument(text);
      return v;
    }
    if (like.is_number_float()) {
      std::size_t used = 0;
      double v = std::stod(text, &used);
      if (used != text.size()) throw std::invalid_argument(text);
      return v;
    }
    if (like.is_boolean()) {
      if (text == "1" || text == "true") return true;
      if (text == "0" || text == "false") return false;
      throw std::invalid_argument(text);
    }
  } catch (const std::exception&) {
    throw ConfigError("invalid value '" + text + "' for " + key);
  }
  return text;
}

void check_shape(const json& defaults, const json& given, const std::string& prefix) {
  if (!given.is_object()) throw ConfigError("config section " + (prefix.empty() ? "root" : prefix) + " must be an object");
  for (const auto& [k, v] : given.items()) {
    std::string key = prefix.empty() ? k : prefix + "." + k;
    if (!defaults.contains(k)) throw ConfigError("unknown config key " + key);
    const auto& d = defaults[k];
    if (d.is_object()) {
      check_shape(d, v, key);
    } else if (d.is_number()) {
      if (!v.is_number()) throw ConfigError(key + " must be a number");
      if (d.is_number_integer() && !v.is_number_integer()) throw ConfigError(key + " must be an integer");
    } else if (d.type() != v.type()) {
      throw ConfigError(key + " has the wrong type");
    }
  }
}

void apply(json& tree, const json& defaults, const std::string& key, const json& value) {
  auto ptr = pointer_for(key);
  if (!defaults.contains(ptr) || defaults[ptr].is_object()) throw ConfigError("unknown config key " + key);
  json patch = json::object();
  patch[ptr] = value;
  check_shape(defaults, patch, "");
  tree[ptr] = value;
}

template <class T>
T positive(const json& tree, const char* pointer, const char* name) {
  auto v = tree.at(json::json_pointer(pointer)).get<long long>();
  if (v < 1) throw ConfigError(std::string(name) + " must be at least 1");
  return static_cast<T>(v);
}

}  // namespace

RunConfig resolve_config(const std::optional<json>& file, const EnvLookup& env,
                         const std::vector<std::pair<std::string, json>>& flags) {
  const json defaults = default_config_json();
  json tree = defaults;
  if (file) {
    check_shape(defaults, *file, "");
    tree.merge_patch(*file);
  }
  for (const auto& [var, key] : env_overrides()) {
    if (auto v = env(var)) apply(tree, defaults, key, coerce(defaults[pointer_for(key)], var, *v));
  }
  for (const auto& [key, value] : flags) apply(tree, defaults, key, value);

  RunConfig c;
  const auto& p = tree["provider"];
  c.provider.kind = p["kind"];
  c.provider.endpoint = p["endpoint"];
  c.provider.model = p["model"];
  c.provider.api_key_env = p["api_key_env"];
  c.provider.fixtures = p["fixtures"];
  c.provider.timeout_seconds = positive<int>(tree, "/provider/timeout_seconds", "provider.timeout_seconds");
  if (c.provider.kind != "scripted" && c.provider.kind != "http") {
    throw ConfigError("provider.kind must be scripted or http, got " + c.provider.kind);
  }
  if (c.provider.kind == "http" && (c.provider.endpoint.empty() || c.provider.model.empty())) {
    throw ConfigError("http provider needs provider.endpoint and provider.model");
  }
  const auto& e = tree["embedding"];
  c.embedding.kind = e["kind"];
  c.embedding.endpoint = e["endpoint"];
  c.embedding.model = e["model"];
  c.embedding.dimension = positive<std::size_t>(tree, "/embedding/dimension", "embedding.dimension");
  if (c.embedding.kind != "hashed" && c.embedding.kind != "http") {
    throw ConfigError("embedding.kind must be hashed or http, got " + c.embedding.kind);
  }
  if (c.embedding.kind == "http" && (c.embedding.endpoint.empty() || c.embedding.model.empty())) {
    throw ConfigError("http embedding needs embedding.endpoint and embedding.model");
  }

  for (const auto& [name, sp] : tree["stage_params"].items()) {
    auto stage = llm::parse_stage(name);
    if (!stage) throw ConfigError("unknown stage " + name);
    try {
      c.pipeline.stage_params.set(*stage, {sp.value("temperature", 0.0), sp.value("top_p", 1.0)});
    } catch (const InvalidArgument& ex) {
      throw ConfigError("stage_params." + name + ": " + ex.what());
    }
  }
  c.pipeline.max_rounds = positive<int>(tree, "/pipeline/max_rounds", "pipeline.max_rounds");
  c.pipeline.early_stop_on_no_new_edges = tree["pipeline"]["early_stop"];
  c.pipeline.relations.clear();
  for (const auto& r : tree["pipeline"]["relations"]) {
    if (!r.is_string()) throw ConfigError("pipeline.relations must list relation names");
    auto rel = parse_relation(r.get<std::string>());
    if (!rel) throw ConfigError("unknown relation " + r.get<std::string>());
    c.pipeline.relations.push_back(*rel);
  }
  if (c.pipeline.relations.empty()) throw ConfigError("pipeline.relations must not be empty");
  auto min_words = tree["filter"]["min_words"].get<long long>();
  auto max_words = tree["filter"]["max_words"].get<long long>();
  if (min_words < 0 || max_words < 0) throw ConfigError("filter bounds must be non-negative");
  if (min_words >= max_words) throw ConfigError("filter.min_words must be below filter.max_words");
  c.pipeline.length_filter = {static_cast<std::size_t>(min_words), static_cast<std::size_t>(max_words)};

  const auto& paths = tree["paths"];
  c.corpus = paths["corpus"];
  c.out_dir = paths["out_dir"];
  c.cache_dir = paths["cache_dir"];
  c.manifest = paths["manifest"];
  c.templates_dir = paths["templates_dir"];
  c.trace = paths["trace"];
  c.parallelism = positive<std::size_t>(tree, "/parallelism", "parallelism");
  c.max_in_flight = positive<std::size_t>(tree, "/gateway/max_in_flight", "gateway.max_in_flight");
  c.max_retries = tree["gateway"]["max_retries"].get<int>();
  c.initial_backoff_ms = tree["gateway"]["initial_backoff_ms"].get<int>();
  if (c.max_retries < 0 || c.initial_backoff_ms < 0) throw ConfigError("gateway retry settings must be non-negative");
  return c;
}

json load_config_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  try {
    return json::parse(in);
  } catch (const json::exception& ex) {
    throw ConfigError("config file " + path.string() + " is not valid JSON: " + ex.what());
  }
}

nlohmann::ordered_json config_to_json(const RunConfig& c) {
  nlohmann::ordered_json j;
  j["provider"] = {{"kind", c.provider.kind},
                   {"endpoint", c.provider.endpoint},
                   {"model", c.provider.model},
                   {"api_key_env", c.provider.api_key_env},
                   {"fixtures", c.provider.fixtures},
                   {"timeout_seconds", c.provider.timeout_seconds}};
  j["embedding"] = {{"kind", c.embedding.kind},
                    {"endpoint", c.embedding.endpoint},
                    {"model", c.embedding.model},
                    {"dimension", c.embedding.dimension}};
  nlohmann::ordered_json stages;
  for (auto s : llm::kStages) {
    const auto& sp = c.pipeline.stage_params.get(s);
    stages[std::string(llm::stage_name(s))] = {{"temperature", sp.temperature}, {"top_p", sp.top_p}};
  }
  j["stage_params"] = std::move(stages);
  auto rels = nlohmann::ordered_json::array();
  for (auto r : c.pipeline.relations) rels.push_back(relation_name(r));
  j["pipeline"] = {{"max_rounds", c.pipeline.max_rounds},
                   {"early_stop", c.pipeline.early_stop_on_no_new_edges},
                   {"relations", std::move(rels)}};
  j["filter"] = {{"min_words", c.pipeline.length_filter.min_words}, {"max_words", c.pipeline.length_filter.max_words}};
  j["paths"] = {{"corpus", c.corpus},       {"out_dir", c.out_dir},
                {"cache_dir", c.cache_dir}, {"manifest", c.manifest},
                {"templates_dir", c.templates_dir}, {"trace", c.trace}};
  j["parallelism"] = c.parallelism;
  j["gateway"] = {{"max_in_flight", c.max_in_flight},
                  {"max_retries", c.max_retries},
                  {"initial_backoff_ms", c.initial_backoff_ms}};
  return j;
}

std::shared_ptr<llm::TextProvider> make_text_provider(const RunConfig& c, const EnvLookup& env) {
  if (c.provider.kind == "scripted") {
    if (c.provider.fixtures.empty()) throw ConfigError("scripted provider needs provider.fixtures");
    return llm::ScriptedProvider::from_file(c.provider.fixtures);
  }
  llm::HttpEndpoint ep;
  ep.base_url = c.provider.endpoint;
  ep.model = c.provider.model;
  ep.api_key = env(c.provider.api_key_env).value_or("");
  ep.timeout = std::chrono::seconds(c.provider.timeout_seconds);
  return std::make_shared<llm::HttpChatProvider>(std::move(ep));
}

std::shared_ptr<llm::EmbeddingProvider> make_embedder(const RunConfig& c, const EnvLookup& env) {
  if (c.embedding.kind == "hashed") return std::make_shared<llm::HashedEmbedder>(c.embedding.dimension);
  llm::HttpEndpoint ep;
  ep.base_url = c.embedding.endpoint;
  ep.model = c.embedding.model;
  ep.api_key = env(c.provider.api_key_env).value_or("");
  ep.timeout = std::chrono::seconds(c.provider.timeout_seconds);
  return std::make_shared<llm::HttpEmbeddingProvider>(std::move(ep));
}

llm::GatewayOptions make_gateway_options(const RunConfig& c) {
  llm::GatewayOptions o;
  o.retry.max_retries = c.max_retries;
  o.retry.initial_backoff = std::chrono::milliseconds(c.initial_backoff_ms);
  o.max_in_flight = c.max_in_flight;
  if (!c.cache_dir.empty()) o.cache_dir = c.cache_dir;
  return o;
}

}  // namespace seg
