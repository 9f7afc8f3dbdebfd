#include "seg/event.hpp"

#include <cctype>

namespace seg {

namespace {
bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }
}  // namespace

std::string normalize_whitespace(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  bool pending_space = false;
  for (char c : text) {
    if (is_space(c)) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) out.push_back(' ');
    pending_space = false;
    out.push_back(c);
  }
  return out;
}

std::string event_key(std::string_view text) {
  std::string out = normalize_whitespace(text);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

Event::Event(std::string_view text, std::optional<EventSource> source)
    : text_(normalize_whitespace(text)), source_(source) {
  if (text_.empty()) throw InvalidArgument("event text is empty");
  key_ = event_key(text_);
}

}  // namespace seg
