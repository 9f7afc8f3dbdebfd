#pragma once

#include <cstddef>
#include <filesystem>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "seg/error.hpp"
#include "seg/llm/gateway.hpp"
#include "seg/pipeline.hpp"

namespace seg {

class ConfigError : public Error {
 public:
  using Error::Error;
};

struct ProviderSettings {
  /// "scripted" or "http".
  std::string kind = "scripted";
  std::string endpoint;
  std::string model;
  /// Name of the environment variable holding the API key.
  std::string api_key_env = "SEG_API_KEY";
  std::string fixtures;
  int timeout_seconds = 120;
};

struct EmbeddingSettings {
  /// "hashed" or "http".
  std::string kind = "hashed";
  std::string endpoint;
  std::string model;
  std::size_t dimension = 256;
};

struct RunConfig {
  ProviderSettings provider;
  EmbeddingSettings embedding;
  PipelineConfig pipeline;
  std::string corpus;
  std::string out_dir = "out";
  std::string cache_dir;
  std::string manifest;
  std::string templates_dir;
  std::string trace;
  std::size_t parallelism = 1;
  std::size_t max_in_flight = 4;
  int max_retries = 3;
  int initial_backoff_ms = 1000;
};

using EnvLookup = std::function<std::optional<std::string>(const std::string&)>;

/// Reads the process environment.
std::optional<std::string> process_env(const std::string& name);

/// The full key tree with default values; also the documented file format.
nlohmann::json default_config_json();

/// Environment variables recognised as overrides, as (variable, dotted key).
const std::vector<std::pair<std::string, std::string>>& env_overrides();

/// Layers defaults < file < environment < flags. `flags` are dotted keys such
/// as "pipeline.max_rounds" with JSON values. Unknown keys, wrong types and
/// out-of-range values raise ConfigError; nothing touches the network.
RunConfig resolve_config(const std::optional<nlohmann::json>& file, const EnvLookup& env,
                         const std::vector<std::pair<std::string, nlohmann::json>>& flags);

/// Loads a JSON config file. Throws ConfigError.
nlohmann::json load_config_file(const std::filesystem::path& path);

nlohmann::ordered_json config_to_json(const RunConfig& config);

/// The API key comes only from the environment variable named in the config.
std::shared_ptr<llm::TextProvider> make_text_provider(const RunConfig& config, const EnvLookup& env);
std::shared_ptr<llm::EmbeddingProvider> make_embedder(const RunConfig& config, const EnvLookup& env);
llm::GatewayOptions make_gateway_options(const RunConfig& config);

}  // namespace seg
