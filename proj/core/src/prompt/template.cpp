#include "seg/prompt/template.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "builtin_templates.hpp"

namespace seg::prompt {

namespace {

bool is_slot_char(char c) { return (c >= 'a' && c <= 'z') || c == '_'; }

// Length of the slot starting at text[pos] ('{'), or 0 if none starts there.
std::size_t slot_length(std::string_view text, std::size_t pos) {
  std::size_t i = pos + 1;
  while (i < text.size() && is_slot_char(text[i])) ++i;
  if (i == pos + 1 || i >= text.size() || text[i] != '}') return 0;
  return i - pos + 1;
}

}  // namespace

PromptTemplate::PromptTemplate(std::string name, std::string text)
    : name_(std::move(name)), text_(std::move(text)) {}

std::vector<std::string> PromptTemplate::slots() const {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < text_.size(); ++i) {
    if (text_[i] != '{') continue;
    if (auto len = slot_length(text_, i)) {
      std::string name = text_.substr(i + 1, len - 2);
      if (std::find(out.begin(), out.end(), name) == out.end()) out.push_back(std::move(name));
      i += len - 1;
    }
  }
  return out;
}

std::string PromptTemplate::render(const Bindings& bindings) const {
  std::string out;
  out.reserve(text_.size());
  std::string_view text = text_;
  std::size_t line_start = 0;
  while (line_start < text.size()) {
    std::size_t eol = text.find('\n', line_start);
    bool has_newline = eol != std::string_view::npos;
    std::string_view line = text.substr(line_start, has_newline ? eol - line_start : std::string_view::npos);

    std::string rendered;
    bool only_empty_slot = false;
    if (!line.empty() && line.front() == '{' && slot_length(line, 0) == line.size()) {
      auto name = line.substr(1, line.size() - 2);
      auto it = bindings.find(name);
      if (it == bindings.end()) throw TemplateError(name_ + ": unbound slot {" + std::string(name) + "}");
      only_empty_slot = it->second.empty();
      rendered = it->second;
    } else {
      for (std::size_t i = 0; i < line.size(); ++i) {
        std::size_t len = line[i] == '{' ? slot_length(line, i) : 0;
        if (len == 0) {
          rendered.push_back(line[i]);
          continue;
        }
        auto name = line.substr(i + 1, len - 2);
        auto it = bindings.find(name);
        if (it == bindings.end()) throw TemplateError(name_ + ": unbound slot {" + std::string(name) + "}");
        rendered += it->second;
        i += len - 1;
      }
    }
    if (!only_empty_slot) {
      out += rendered;
      if (has_newline) out.push_back('\n');
    }
    if (!has_newline) break;
    line_start = eol + 1;
  }
  return out;
}

std::string_view template_file_stem(TemplateId id) noexcept {
  switch (id) {
    case TemplateId::summary: return "summary";
    case TemplateId::events: return "events";
    case TemplateId::graph_hierarchical: return "graph_hierarchical";
    case TemplateId::graph_temporal: return "graph_temporal";
    case TemplateId::graph_causal: return "graph_causal";
    case TemplateId::grader: return "grader";
    case TemplateId::mention_initial: return "mention_initial";
    case TemplateId::mention_followup: return "mention_followup";
  }
  return {};
}

std::string_view builtin_template(TemplateId id) noexcept {
  switch (id) {
    case TemplateId::summary: return builtin::summary;
    case TemplateId::events: return builtin::events;
    case TemplateId::graph_hierarchical: return builtin::graph_hierarchical;
    case TemplateId::graph_temporal: return builtin::graph_temporal;
    case TemplateId::graph_causal: return builtin::graph_causal;
    case TemplateId::grader: return builtin::grader;
    case TemplateId::mention_initial: return builtin::mention_initial;
    case TemplateId::mention_followup: return builtin::mention_followup;
  }
  return {};
}

namespace {
constexpr TemplateId kAllTemplates[] = {
    TemplateId::summary,        TemplateId::events,       TemplateId::graph_hierarchical,
    TemplateId::graph_temporal, TemplateId::graph_causal, TemplateId::grader,
    TemplateId::mention_initial, TemplateId::mention_followup,
};
}  // namespace

PromptLibrary::PromptLibrary() {
  for (auto id : kAllTemplates) {
    templates_.emplace(id, PromptTemplate(std::string(template_file_stem(id)),
                                          std::string(builtin_template(id))));
  }
}

PromptLibrary PromptLibrary::with_overrides(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) {
    throw TemplateError("templates directory not found: " + dir.string());
  }
  PromptLibrary lib;
  for (auto id : kAllTemplates) {
    auto path = dir / (std::string(template_file_stem(id)) + ".txt");
    if (!std::filesystem::exists(path)) continue;
    std::ifstream in(path, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    PromptTemplate t(std::string(template_file_stem(id)), ss.str());
    auto known = lib.get(id).slots();
    for (const auto& slot : t.slots()) {
      if (std::find(known.begin(), known.end(), slot) == known.end()) {
        throw TemplateError(path.string() + ": unknown slot {" + slot + "}");
      }
    }
    lib.templates_.insert_or_assign(id, std::move(t));
  }
  return lib;
}

const PromptTemplate& PromptLibrary::get(TemplateId id) const { return templates_.at(id); }

void PromptLibrary::set(TemplateId id, std::string text) {
  templates_.insert_or_assign(id, PromptTemplate(std::string(template_file_stem(id)), std::move(text)));
}

}  // namespace seg::prompt
