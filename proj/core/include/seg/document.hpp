#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

namespace seg {

struct DocumentRecord {
  std::string id;
  std::string title;
  std::string body;
  /// Sentence segmentation of `body`; filled by split_sentences when absent.
  std::vector<std::string> sentences;
};

/// Whitespace-delimited token count.
std::size_t word_count(std::string_view text);

/// Rule-based segmentation: breaks after '.', '!' or '?' (optionally followed
/// by closing quotes or brackets) when the next token starts with an upper-case
/// letter, a digit or an opening quote, and at blank lines. Common
/// abbreviations ("Mr.", "Jan.", single initials) do not end a sentence.
std::vector<std::string> split_sentences(std::string_view text);

/// {"id", "title", "body"} with optional "sentences".
DocumentRecord document_from_json(const nlohmann::json& j);
nlohmann::ordered_json document_to_json(const DocumentRecord& doc);

/// One record per non-blank line. Throws InvalidArgument naming the line on error.
std::vector<DocumentRecord> read_documents_jsonl(const std::filesystem::path& path);

}  // namespace seg
