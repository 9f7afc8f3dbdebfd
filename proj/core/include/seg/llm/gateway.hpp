#pragma once

#include <atomic>
#include <chrono>
#include <cstddef>
#include <filesystem>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <semaphore>
#include <span>
#include <string>
#include <vector>

#include "seg/llm/embedding.hpp"
#include "seg/llm/errors.hpp"
#include "seg/llm/provider.hpp"
#include "seg/llm/request.hpp"

namespace seg::llm {

struct RetryPolicy {
  /// Retries after the first failed attempt; only retryable errors are retried.
  int max_retries = 3;
  /// Delay before retry k (1-based) is initial_backoff * 2^(k-1): 1s, 2s, 4s.
  std::chrono::milliseconds initial_backoff{1000};
};

/// One JSON file per request fingerprint. Safe for concurrent use; writes are
/// atomic renames so an interrupted run never leaves a torn entry.
class ResponseCache {
 public:
  explicit ResponseCache(std::filesystem::path dir);

  std::optional<std::string> get(const std::string& key) const;
  void put(const std::string& key, const std::string& stage, const std::string& response);
  const std::filesystem::path& dir() const noexcept { return dir_; }

 private:
  std::filesystem::path dir_;
  mutable std::mutex mu_;
};

struct GatewayMetrics {
  std::atomic<std::size_t> requests{0};
  std::atomic<std::size_t> provider_calls{0};
  std::atomic<std::size_t> cache_hits{0};
  std::atomic<std::size_t> retries{0};
  std::atomic<std::size_t> failures{0};
  std::atomic<std::size_t> prompt_chars{0};
  std::atomic<std::size_t> response_chars{0};
  std::atomic<std::size_t> embedded_texts{0};
};

struct GatewayOptions {
  RetryPolicy retry;
  std::size_t max_in_flight = 4;
  std::size_t embed_batch = 32;
  std::optional<std::filesystem::path> cache_dir;
  /// Replaceable so tests do not sleep through backoff.
  std::function<void(std::chrono::milliseconds)> sleep;
};

/// Front door to the text and embedding backends: validation, retries with
/// exponential backoff, a bound on in-flight requests, and an optional
/// on-disk response cache.
class Gateway {
 public:
  Gateway(std::shared_ptr<TextProvider> text, std::shared_ptr<EmbeddingProvider> embedder,
          GatewayOptions options = {});

  /// Throws InvalidArgument for a malformed request and the provider's
  /// LlmError subclass once retries are exhausted.
  std::string complete(const GenerationRequest& request);

  /// One vector per input, in input order. Requests are split into batches of
  /// at most `embed_batch` texts.
  std::vector<EmbeddingVector> embed(std::span<const std::string> texts);

  const GatewayMetrics& metrics() const noexcept { return metrics_; }
  bool has_text_provider() const noexcept { return text_ != nullptr; }
  bool has_embedder() const noexcept { return embedder_ != nullptr; }

 private:
  template <class Fn>
  auto with_retries(Fn&& fn) -> decltype(fn());

  std::shared_ptr<TextProvider> text_;
  std::shared_ptr<EmbeddingProvider> embedder_;
  GatewayOptions options_;
  std::optional<ResponseCache> cache_;
  std::counting_semaphore<1024> in_flight_;
  GatewayMetrics metrics_;
  std::mutex dim_mu_;
  std::optional<std::size_t> dimension_;
};

}  // namespace seg::llm
