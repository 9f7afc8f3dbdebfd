#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <string_view>

#include "seg/error.hpp"

namespace seg {

enum class EventSource { llm, human, external };

/// Trims and collapses every run of ASCII whitespace to a single space.
std::string normalize_whitespace(std::string_view text);

/// Normalized text with ASCII letters lower-cased. Identity key for events.
std::string event_key(std::string_view text);

/// A salient event rendered as a short natural-language string.
///
/// Events compare equal iff their case-folded normalized texts match; the
/// displayed text keeps the casing of the first spelling.
class Event {
 public:
  /// Throws InvalidArgument when the text is blank after normalization.
  explicit Event(std::string_view text, std::optional<EventSource> source = std::nullopt);

  const std::string& text() const noexcept { return text_; }
  const std::string& key() const noexcept { return key_; }
  std::optional<EventSource> source() const noexcept { return source_; }

  friend bool operator==(const Event& a, const Event& b) noexcept { return a.key_ == b.key_; }
  friend auto operator<=>(const Event& a, const Event& b) noexcept { return a.key_ <=> b.key_; }

 private:
  std::string text_;
  std::string key_;
  std::optional<EventSource> source_;
};

struct EventHash {
  std::size_t operator()(const Event& e) const noexcept { return std::hash<std::string>{}(e.key()); }
};

}  // namespace seg
