#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "seg/llm/gateway.hpp"

namespace segcli {

/// Writes every prompt it receives to a file. Answers from the response cache
/// when it can and otherwise stops the document, so no request leaves the
/// process.
class DryRunProvider final : public seg::llm::TextProvider {
 public:
  DryRunProvider(std::string provider_id, std::optional<std::filesystem::path> cache_dir);

  /// Subsequent prompts go to `dir` as NN-<stage>.txt.
  void begin_document(std::filesystem::path dir);
  const std::vector<std::filesystem::path>& written() const noexcept { return written_; }

  std::string complete(const seg::llm::GenerationRequest& request) override;
  std::string id() const override { return id_; }

 private:
  std::string id_;
  std::optional<seg::llm::ResponseCache> cache_;
  std::filesystem::path dir_;
  std::vector<std::filesystem::path> written_;
};

/// Thrown when a prompt has no cached answer.
class DryRunHalt : public seg::llm::LlmError {
 public:
  explicit DryRunHalt(const std::string& stage) : LlmError("dry run stops before uncached " + stage + " call", false) {}
};

}  // namespace segcli
