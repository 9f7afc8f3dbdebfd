#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "seg/error.hpp"

namespace seg::prompt {

class TemplateError : public Error {
 public:
  using Error::Error;
};

using Bindings = std::map<std::string, std::string, std::less<>>;

/// Plain text with named slots written `{name}` (name: [a-z_]+). Braces that
/// do not form a slot are literal. Substituted values are not rescanned. A
/// line holding nothing but a slot bound to "" is dropped entirely.
class PromptTemplate {
 public:
  PromptTemplate(std::string name, std::string text);

  const std::string& name() const noexcept { return name_; }
  const std::string& text() const noexcept { return text_; }
  /// Slot names in order of first appearance.
  std::vector<std::string> slots() const;

  /// Throws TemplateError naming the first unbound slot.
  std::string render(const Bindings& bindings) const;

 private:
  std::string name_;
  std::string text_;
};

enum class TemplateId {
  summary,
  events,
  graph_hierarchical,
  graph_temporal,
  graph_causal,
  grader,
  mention_initial,
  mention_followup,
};

/// File stem used for overrides, e.g. "graph_temporal" -> graph_temporal.txt.
std::string_view template_file_stem(TemplateId id) noexcept;

/// The prompt set. Starts from the built-in templates; a templates directory
/// may replace any of them by file name.
class PromptLibrary {
 public:
  PromptLibrary();

  /// Loads every `<stem>.txt` present in `dir`; unknown files are ignored.
  /// Throws TemplateError if `dir` is not a directory or an override uses a
  /// slot its built-in template does not have.
  static PromptLibrary with_overrides(const std::filesystem::path& dir);

  const PromptTemplate& get(TemplateId id) const;
  void set(TemplateId id, std::string text);

 private:
  std::map<TemplateId, PromptTemplate> templates_;
};

/// The text compiled into the library for `id`.
std::string_view builtin_template(TemplateId id) noexcept;

}  // namespace seg::prompt
