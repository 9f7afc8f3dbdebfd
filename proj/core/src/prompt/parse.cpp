#include "seg/prompt/parse.hpp"

#include <algorithm>
#include <cctype>
#include <optional>
#include <regex>
#include <unordered_map>
#include <unordered_set>

namespace seg::prompt {

namespace {

bool is_ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool is_ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }
bool is_alnum(char c) { return std::isalnum(static_cast<unsigned char>(c)) != 0; }

std::string lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

std::string trim(std::string_view s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

}  // namespace

// ---------------------------------------------------------------- event lists

std::vector<Event> parse_event_list(std::string_view response) {
  std::vector<Event> events;
  std::unordered_set<std::string> seen;
  std::size_t i = 0;
  while (i < response.size()) {
    // A tuple starts with digits, '.' or ')', optional spaces, then '('.
    if (!std::isdigit(static_cast<unsigned char>(response[i])) ||
        (i > 0 && is_alnum(response[i - 1]))) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < response.size() && std::isdigit(static_cast<unsigned char>(response[j]))) ++j;
    if (j >= response.size() || (response[j] != '.' && response[j] != ')')) {
      i = j;
      continue;
    }
    ++j;
    while (j < response.size() && (response[j] == ' ' || response[j] == '\t')) ++j;
    if (j >= response.size() || response[j] != '(') {
      i = j;
      continue;
    }
    // Balanced group on the same line.
    std::size_t depth = 0, k = j;
    for (; k < response.size() && response[k] != '\n'; ++k) {
      if (response[k] == '(') ++depth;
      if (response[k] == ')' && --depth == 0) break;
    }
    if (k >= response.size() || response[k] != ')') {
      i = j + 1;
      continue;
    }
    std::string_view inner = response.substr(j + 1, k - j - 1);
    std::string flat;
    std::size_t start = 0;
    while (start <= inner.size()) {
      auto semi = inner.find(';', start);
      auto part = normalize_whitespace(inner.substr(start, semi == std::string_view::npos ? semi : semi - start));
      if (!part.empty()) {
        if (!flat.empty()) flat.push_back(' ');
        flat += part;
      }
      if (semi == std::string_view::npos) break;
      start = semi + 1;
    }
    if (!flat.empty()) {
      Event e(flat, EventSource::llm);
      if (seen.insert(e.key()).second) events.push_back(std::move(e));
    }
    i = k + 1;
  }
  if (events.empty()) throw FormatError("no numbered event tuples found in response");
  return events;
}

// -------------------------------------------------------------- graph responses

std::string_view parse_status_name(ParseStatus s) noexcept {
  return s == ParseStatus::ok ? "ok" : "format_error";
}

std::string_view dropped_reason_name(DroppedEdge::Reason r) noexcept {
  return r == DroppedEdge::Reason::self_loop ? "self_loop" : "unknown_endpoint";
}

namespace {

struct Token {
  enum class Kind { ident, string, punct };
  Kind kind;
  std::string text;  // decoded value for strings
};

void append_utf8(std::string& out, unsigned long cp) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

// Decodes the Python escapes models actually emit; unknown escapes are kept verbatim.
std::string decode_escapes(std::string_view raw) {
  std::string out;
  for (std::size_t i = 0; i < raw.size(); ++i) {
    if (raw[i] != '\\' || i + 1 >= raw.size()) {
      out.push_back(raw[i]);
      continue;
    }
    char c = raw[++i];
    switch (c) {
      case 'n': out.push_back('\n'); break;
      case 't': out.push_back('\t'); break;
      case 'r': out.push_back('\r'); break;
      case '\\': out.push_back('\\'); break;
      case '\'': out.push_back('\''); break;
      case '"': out.push_back('"'); break;
      case '\n': break;  // line continuation
      case 'x':
      case 'u':
      case 'U': {
        std::size_t width = c == 'x' ? 2 : (c == 'u' ? 4 : 8);
        if (i + width < raw.size()) {
          std::string hex(raw.substr(i + 1, width));
          bool ok = hex.size() == width &&
                    std::all_of(hex.begin(), hex.end(), [](char h) { return std::isxdigit(static_cast<unsigned char>(h)); });
          if (ok) {
            append_utf8(out, std::stoul(hex, nullptr, 16));
            i += width;
            break;
          }
        }
        out.push_back('\\');
        out.push_back(c);
        break;
      }
      default:
        out.push_back('\\');
        out.push_back(c);
    }
  }
  return out;
}

// A forgiving Python-ish lexer: comments are skipped, and an unterminated
// single-line string (an apostrophe in prose) is discarded up to the newline.
std::vector<Token> lex(std::string_view s) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < s.size()) {
    char c = s[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    if (c == '#') {
      while (i < s.size() && s[i] != '\n') ++i;
      continue;
    }
    bool raw = false;
    std::size_t q = i;
    if (is_ident_start(c)) {
      std::size_t j = i;
      while (j < s.size() && is_ident_char(s[j])) ++j;
      std::string_view word = s.substr(i, j - i);
      bool prefix = word.size() <= 2 && j < s.size() && (s[j] == '"' || s[j] == '\'') &&
                    word.find_first_not_of("rRuUbBfF") == std::string_view::npos;
      if (!prefix) {
        out.push_back({Token::Kind::ident, std::string(word)});
        i = j;
        continue;
      }
      raw = word.find_first_of("rR") != std::string_view::npos;
      q = j;
    }
    if (s[q] == '"' || s[q] == '\'') {
      char quote = s[q];
      bool triple = q + 2 < s.size() && s[q + 1] == quote && s[q + 2] == quote;
      std::size_t body = q + (triple ? 3 : 1);
      std::size_t j = body;
      bool closed = false;
      while (j < s.size()) {
        if (s[j] == '\\') {
          j += 2;
          continue;
        }
        if (!triple && s[j] == '\n') break;
        if (s[j] == quote && (!triple || (j + 2 < s.size() && s[j + 1] == quote && s[j + 2] == quote))) {
          closed = true;
          break;
        }
        ++j;
      }
      if (!closed) {
        // Skip to the end of the line and carry on lexing.
        while (i < s.size() && s[i] != '\n') ++i;
        continue;
      }
      std::string_view content = s.substr(body, j - body);
      out.push_back({Token::Kind::string, raw ? std::string(content) : decode_escapes(content)});
      i = j + (triple ? 3 : 1);
      continue;
    }
    out.push_back({Token::Kind::punct, std::string(1, c)});
    ++i;
  }
  return out;
}

bool is_punct(const std::vector<Token>& t, std::size_t i, char c) {
  return i < t.size() && t[i].kind == Token::Kind::punct && t[i].text[0] == c;
}
bool is_string(const std::vector<Token>& t, std::size_t i) {
  return i < t.size() && t[i].kind == Token::Kind::string;
}

const std::regex& declaration_pattern() {
  static const std::regex re(R"([A-Za-z_]\w*\s*=\s*(nx|networkx)\s*\.\s*(Multi)?(Di)?Graph\s*\()");
  return re;
}

}  // namespace

ParsedGraphResponse parse_graph_response(std::string_view response, std::span<const Event> allowed) {
  ParsedGraphResponse out;
  out.raw_response = std::string(response);
  out.had_code_block = response.find("```") != std::string_view::npos;
  out.had_graph_declaration =
      std::regex_search(out.raw_response.begin(), out.raw_response.end(), declaration_pattern());

  std::unordered_map<std::string, const Event*> by_key;
  for (const auto& e : allowed) by_key.emplace(e.key(), &e);

  auto tokens = lex(response);
  std::unordered_set<std::string> seen_edges;
  for (std::size_t i = 1; i < tokens.size(); ++i) {
    if (tokens[i].kind != Token::Kind::ident || tokens[i].text != "add_edge" || !is_punct(tokens, i - 1, '.')) {
      continue;
    }
    if (!is_punct(tokens, i + 1, '(') || !is_string(tokens, i + 2) || !is_punct(tokens, i + 3, ',') ||
        !is_string(tokens, i + 4) || !(is_punct(tokens, i + 5, ')') || is_punct(tokens, i + 5, ','))) {
      continue;
    }
    ++out.add_edge_calls;
    const std::string& head = tokens[i + 2].text;
    const std::string& tail = tokens[i + 4].text;
    auto h = by_key.find(event_key(head));
    auto t = by_key.find(event_key(tail));
    if (h == by_key.end() || t == by_key.end()) {
      out.dropped.push_back({head, tail, DroppedEdge::Reason::unknown_endpoint});
    } else if (h->second == t->second) {
      out.dropped.push_back({head, tail, DroppedEdge::Reason::self_loop});
    } else if (seen_edges.insert(h->first + '\x1f' + t->first).second) {
      out.edges.emplace_back(*h->second, *t->second);
    }
    i += 4;
  }
  if (out.add_edge_calls == 0 && !out.had_graph_declaration) out.parse_status = ParseStatus::format_error;
  return out;
}

// --------------------------------------------------------------------- grader

GraderVerdict parse_grader(std::string_view response) {
  std::string low = lower(response);
  std::size_t from = 0;
  if (auto m = low.find("score:"); m != std::string::npos) from = m + 6;
  for (std::size_t i = from; i < low.size(); ++i) {
    if (!std::isalpha(static_cast<unsigned char>(low[i])) || (i > 0 && is_alnum(low[i - 1]))) continue;
    std::size_t j = i;
    while (j < low.size() && is_alnum(low[j])) ++j;
    std::string_view word = std::string_view(low).substr(i, j - i);
    if (word == "yes" || word == "no") {
      GraderVerdict v{word == "yes" ? Verdict::yes : Verdict::no, {}};
      std::string_view rest = response.substr(j);
      if (auto e = lower(rest).find("explanation:"); e != std::string::npos) rest = rest.substr(e + 12);
      v.explanation = trim(rest);
      if (!v.explanation.empty() && (v.explanation.front() == '.' || v.explanation.front() == ',')) {
        v.explanation = trim(std::string_view(v.explanation).substr(1));
      }
      return v;
    }
    i = j;
  }
  throw GraderParseError("grader response has no yes/no verdict");
}

// ------------------------------------------------------------------- mentions

std::vector<std::string> extract_parenthesized(std::string_view response) {
  std::vector<std::string> out;
  std::size_t depth = 0, start = 0;
  for (std::size_t i = 0; i < response.size(); ++i) {
    if (response[i] == '(') {
      if (depth++ == 0) start = i + 1;
    } else if (response[i] == ')' && depth > 0) {
      if (--depth == 0) {
        auto s = trim(response.substr(start, i - start));
        if (!s.empty()) out.push_back(std::move(s));
      }
    }
  }
  return out;
}

namespace {

// Lower-case words with punctuation removed, space separated.
std::string match_form(std::string_view s) {
  std::string out;
  bool space = false;
  for (char c : s) {
    if (is_alnum(c) || (static_cast<unsigned char>(c) & 0x80)) {
      if (space && !out.empty()) out.push_back(' ');
      space = false;
      out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    } else {
      space = true;
    }
  }
  return out;
}

std::size_t words(std::string_view s) {
  return s.empty() ? 0 : static_cast<std::size_t>(std::count(s.begin(), s.end(), ' ')) + 1;
}

bool contains_words(std::string_view hay, std::string_view needle) {
  for (auto pos = hay.find(needle); pos != std::string_view::npos; pos = hay.find(needle, pos + 1)) {
    bool left = pos == 0 || hay[pos - 1] == ' ';
    bool right = pos + needle.size() == hay.size() || hay[pos + needle.size()] == ' ';
    if (left && right) return true;
  }
  return false;
}

}  // namespace

std::set<std::size_t> parse_mentions(std::span<const std::string> responses,
                                     std::span<const std::string> sentences) {
  std::vector<std::string> forms;
  forms.reserve(sentences.size());
  for (const auto& s : sentences) forms.push_back(match_form(s));

  std::set<std::size_t> out;
  for (const auto& response : responses) {
    for (const auto& extraction : extract_parenthesized(response)) {
      auto x = match_form(extraction);
      if (x.empty()) continue;
      for (std::size_t i = 0; i < forms.size(); ++i) {
        const auto& f = forms[i];
        if (f.empty()) continue;
        if (f == x || (words(x) >= 3 && contains_words(f, x)) || (words(f) >= 3 && contains_words(x, f))) {
          out.insert(i);
        }
      }
    }
  }
  return out;
}

}  // namespace seg::prompt
