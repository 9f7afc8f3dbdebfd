#pragma once

#include <chrono>
#include <span>
#include <string>
#include <vector>

#include "seg/llm/provider.hpp"

namespace seg::llm {

struct HttpEndpoint {
  /// Base URL such as "http://localhost:8000/v1"; "/chat/completions" or
  /// "/embeddings" is appended.
  std::string base_url;
  std::string model;
  std::string api_key;  // sent as a bearer token when non-empty
  std::chrono::milliseconds timeout{std::chrono::seconds(120)};
};

/// Chat-completion style JSON over HTTP:
///   POST {base}/chat/completions
///   {"model", "messages": [{"role", "content"}...], "temperature", "top_p", "max_tokens"}
/// and reads choices[0].message.content.
class HttpChatProvider final : public TextProvider {
 public:
  explicit HttpChatProvider(HttpEndpoint endpoint);

  std::string complete(const GenerationRequest& request) override;
  std::string id() const override;

 private:
  HttpEndpoint endpoint_;
};

/// POST {base}/embeddings {"model", "input": [...]}; reads data[].embedding
/// ordered by data[].index.
class HttpEmbeddingProvider final : public EmbeddingProvider {
 public:
  explicit HttpEmbeddingProvider(HttpEndpoint endpoint);

  std::vector<EmbeddingVector> embed(std::span<const std::string> texts) override;
  std::string id() const override;

 private:
  HttpEndpoint endpoint_;
};

}  // namespace seg::llm
