#pragma once

#include <cstddef>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "seg/llm/embedding.hpp"
#include "seg/llm/request.hpp"

namespace seg::llm {

class TextProvider {
 public:
  virtual ~TextProvider() = default;
  virtual std::string complete(const GenerationRequest& request) = 0;
  /// Stable identity; part of the response-cache key.
  virtual std::string id() const = 0;
};

class EmbeddingProvider {
 public:
  virtual ~EmbeddingProvider() = default;
  virtual std::vector<EmbeddingVector> embed(std::span<const std::string> texts) = 0;
  virtual std::string id() const = 0;
};

/// Replays recorded responses keyed by (stage, prompt_hash).
///
/// Fixture files are JSON lines: {"stage": "graph", "prompt_hash": "<hex>",
/// "response": "..."}. A line may give "prompt" (and optionally "history")
/// instead of "prompt_hash"; the hash is computed on load.
class ScriptedProvider final : public TextProvider {
 public:
  ScriptedProvider() = default;
  static std::shared_ptr<ScriptedProvider> from_file(const std::filesystem::path& path);
  /// Adds every fixture in a file; later entries win.
  void load_file(const std::filesystem::path& path);

  void add(Stage stage, std::string_view prompt, std::string response,
           const std::vector<ChatTurn>& history = {});
  void add_hashed(Stage stage, std::string hash, std::string response);
  std::size_t size() const;

  std::string complete(const GenerationRequest& request) override;
  std::string id() const override { return "scripted"; }

 private:
  mutable std::mutex mu_;
  std::map<std::pair<Stage, std::string>, std::string> fixtures_;
};

/// Delegates to a callable. Used for rule-driven test transcripts.
class CallbackProvider final : public TextProvider {
 public:
  using Fn = std::function<std::string(const GenerationRequest&)>;
  explicit CallbackProvider(Fn fn, std::string id = "callback") : fn_(std::move(fn)), id_(std::move(id)) {}

  std::string complete(const GenerationRequest& request) override { return fn_(request); }
  std::string id() const override { return id_; }

 private:
  Fn fn_;
  std::string id_;
};

/// Passes requests through and keeps every exchange so it can be written out
/// as a ScriptedProvider fixture file.
class RecordingProvider final : public TextProvider {
 public:
  struct Exchange {
    Stage stage;
    std::string prompt_hash;
    std::string prompt;
    std::string response;
  };

  explicit RecordingProvider(std::shared_ptr<TextProvider> inner) : inner_(std::move(inner)) {}

  std::string complete(const GenerationRequest& request) override;
  std::string id() const override { return inner_->id(); }

  std::vector<Exchange> exchanges() const;
  /// Writes fixtures sorted by (stage, hash), one per unique key.
  void write_fixtures(const std::filesystem::path& path) const;

 private:
  std::shared_ptr<TextProvider> inner_;
  mutable std::mutex mu_;
  std::vector<Exchange> exchanges_;
};

/// L2-normalized hashed bag of words. Tokens are maximal runs of ASCII
/// alphanumerics, lower-cased, hashed with FNV-1a into `dimension` buckets.
class HashedEmbedder final : public EmbeddingProvider {
 public:
  explicit HashedEmbedder(std::size_t dimension = 256);

  std::vector<EmbeddingVector> embed(std::span<const std::string> texts) override;
  std::string id() const override;

  EmbeddingVector embed_one(std::string_view text) const;
  std::size_t bucket(std::string_view token) const noexcept;

 private:
  std::size_t dimension_;
};

}  // namespace seg::llm
