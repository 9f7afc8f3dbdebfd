#include "seg/document.hpp"

#include <array>
#include <cctype>
#include <fstream>

#include "seg/error.hpp"
#include "seg/event.hpp"

namespace seg {

std::size_t word_count(std::string_view text) {
  std::size_t n = 0;
  bool in_word = false;
  for (char c : text) {
    bool space = std::isspace(static_cast<unsigned char>(c)) != 0;
    if (!space && !in_word) ++n;
    in_word = !space;
  }
  return n;
}

namespace {

constexpr std::array<std::string_view, 36> kAbbreviations = {
    "mr", "mrs", "ms", "dr", "prof", "sr", "jr", "st", "jan", "feb", "mar", "apr",
    "jun", "jul", "aug", "sep", "sept", "oct", "nov", "dec", "gov", "sen", "rep", "gen",
    "col", "lt", "sgt", "capt", "co", "corp", "inc", "ltd", "no", "vs", "etc", "mt"};

bool is_closer(char c) { return c == '"' || c == '\'' || c == ')' || c == ']'; }

bool is_abbreviation(std::string_view text, std::size_t dot) {
  std::size_t b = dot;
  while (b > 0 && (std::isalpha(static_cast<unsigned char>(text[b - 1])) || text[b - 1] == '.')) --b;
  std::string word;
  for (std::size_t i = b; i < dot; ++i) {
    if (text[i] != '.') word.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(text[i]))));
  }
  if (word.size() == 1) return true;  // initials, "U.S." style acronyms reduce to letters
  if (text.substr(b, dot - b).find('.') != std::string_view::npos) return true;
  for (auto a : kAbbreviations) {
    if (word == a) return true;
  }
  return false;
}

// UTF-8 curly quotes start with 0xE2; treat any multi-byte lead as a plausible opener.
bool starts_sentence(char c) {
  auto u = static_cast<unsigned char>(c);
  return std::isupper(u) || std::isdigit(u) || c == '"' || c == '\'' || c == '(' || c == '[' || u == 0xE2;
}

}  // namespace

std::vector<std::string> split_sentences(std::string_view text) {
  std::vector<std::string> out;
  std::size_t start = 0;
  auto emit = [&](std::size_t end) {
    auto s = normalize_whitespace(text.substr(start, end - start));
    if (!s.empty()) out.push_back(std::move(s));
    start = end;
  };
  for (std::size_t i = 0; i < text.size(); ++i) {
    char c = text[i];
    if (c == '\n') {
      std::size_t j = i + 1;
      while (j < text.size() && (text[j] == ' ' || text[j] == '\t' || text[j] == '\r')) ++j;
      if (j < text.size() && text[j] == '\n') {
        emit(i);
        i = j;
      }
      continue;
    }
    if (c != '.' && c != '!' && c != '?') continue;
    std::size_t j = i + 1;
    while (j < text.size() && (text[j] == '.' || text[j] == '!' || text[j] == '?')) ++j;
    while (j < text.size() && is_closer(text[j])) ++j;
    if (j < text.size() && !std::isspace(static_cast<unsigned char>(text[j]))) continue;
    std::size_t k = j;
    while (k < text.size() && std::isspace(static_cast<unsigned char>(text[k]))) ++k;
    if (k < text.size() && !starts_sentence(text[k])) continue;
    if (c == '.' && is_abbreviation(text, i)) continue;
    emit(j);
    i = j - 1;
  }
  emit(text.size());
  return out;
}

DocumentRecord document_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw InvalidArgument("document record must be a JSON object");
  DocumentRecord doc;
  auto str = [&](const char* key, bool required) -> std::string {
    if (!j.contains(key)) {
      if (required) throw InvalidArgument(std::string("document record lacks \"") + key + "\"");
      return {};
    }
    const auto& v = j[key];
    if (v.is_string()) return v.get<std::string>();
    if (v.is_number_integer() && std::string_view(key) == "id") return std::to_string(v.get<long long>());
    throw InvalidArgument(std::string("document field \"") + key + "\" must be a string");
  };
  doc.id = str("id", true);
  if (doc.id.empty()) throw InvalidArgument("document id is empty");
  doc.title = str("title", false);
  doc.body = str("body", true);
  if (j.contains("sentences")) {
    doc.sentences = j["sentences"].get<std::vector<std::string>>();
  } else {
    doc.sentences = split_sentences(doc.body);
  }
  return doc;
}

nlohmann::ordered_json document_to_json(const DocumentRecord& doc) {
  nlohmann::ordered_json j;
  j["id"] = doc.id;
  j["title"] = doc.title;
  j["body"] = doc.body;
  j["sentences"] = doc.sentences;
  return j;
}

std::vector<DocumentRecord> read_documents_jsonl(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidArgument("cannot open corpus " + path.string());
  std::vector<DocumentRecord> docs;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      docs.push_back(document_from_json(nlohmann::json::parse(line)));
    } catch (const std::exception& e) {
      throw InvalidArgument(path.string() + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
  return docs;
}

}  // namespace seg
