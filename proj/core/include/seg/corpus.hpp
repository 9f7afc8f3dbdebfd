#pragma once

#include <cstddef>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "seg/document.hpp"
#include "seg/pipeline.hpp"

namespace seg {

struct ExcludedDocument {
  std::string id;
  std::size_t words = 0;
  /// "too_short", "too_long" or "not_selected".
  std::string reason;
};

struct FilterResult {
  std::vector<DocumentRecord> kept;
  std::vector<ExcludedDocument> excluded;
};

/// Length filter plus an optional id allow-list for externally pre-selected
/// documents. Input order is preserved.
FilterResult filter_documents(std::span<const DocumentRecord> records, const LengthFilter& filter,
                              const std::optional<std::set<std::string>>& allow_ids = std::nullopt);

struct ManifestEntry {
  std::string id;
  /// "ok", "skipped" or "error".
  std::string status;
  /// Keyed by relation name; only relations that ran.
  std::map<std::string, int> rounds_used;
  std::string bundle;
  std::string error;
};

nlohmann::ordered_json manifest_entry_to_json(const ManifestEntry& e);
ManifestEntry manifest_entry_from_json(const nlohmann::json& j);
/// Missing file reads as empty. Later lines for the same id win.
std::vector<ManifestEntry> read_manifest(const std::filesystem::path& path);
void write_manifest(const std::filesystem::path& path, std::span<const ManifestEntry> entries);

/// File name for a document's bundle: the id with anything outside
/// [A-Za-z0-9._-] replaced, plus a short hash when that changed the id.
std::string bundle_file_name(const std::string& document_id);

/// Writes through a temporary file and a rename.
void write_file_atomic(const std::filesystem::path& path, const std::string& contents);

struct CorpusOptions {
  std::filesystem::path out_dir;
  /// Defaults to out_dir / "manifest.jsonl".
  std::optional<std::filesystem::path> manifest;
  std::optional<std::filesystem::path> trace;
  std::size_t parallelism = 1;
  /// Skip documents the manifest already lists as ok with a bundle on disk.
  bool resume = true;
  /// Called once per document as it finishes, from a worker thread, serialized.
  std::function<void(const ManifestEntry&)> on_result;
};

struct CorpusReport {
  /// In input order.
  std::vector<ManifestEntry> entries;
  std::size_t ok = 0;
  std::size_t skipped = 0;
  std::size_t errors = 0;
  std::size_t resumed = 0;

  std::filesystem::path manifest_path;
};

/// Runs every document independently with up to `parallelism` workers. A
/// failing document is recorded and the run continues.
CorpusReport run_corpus(const CascadePipeline& pipeline, std::span<const DocumentRecord> documents,
                        const CorpusOptions& options);

nlohmann::ordered_json corpus_report_json(const CorpusReport& report);

}  // namespace seg
