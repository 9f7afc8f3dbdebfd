#include "support/support.hpp"

#include <atomic>
#include <cstdlib>
#include <fstream>
#include <random>
#include <sstream>
#include <sys/wait.h>

#include "seg/prompt/render.hpp"

namespace segtest {

namespace fs = std::filesystem;

fs::path fixture_path(const std::string& relative) { return fs::path(SEG_TEST_FIXTURES) / relative; }

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << text;
}

namespace {

std::string shell_quote(const std::string& s) {
  std::string out = "'";
  for (char c : s) {
    if (c == '\'') out += "'\\''";
    else out += c;
  }
  return out + "'";
}

}  // namespace

CommandResult run_command(const std::vector<std::string>& args, const std::map<std::string, std::string>& env) {
  TempDir scratch;
  std::string cmd;
  for (const auto& [k, v] : env) cmd += k + "=" + shell_quote(v) + " ";
  for (const auto& a : args) cmd += shell_quote(a) + " ";
  cmd += ">" + shell_quote((scratch / "out").string()) + " 2>" + shell_quote((scratch / "err").string());
  int status = std::system(cmd.c_str());
  CommandResult r;
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = read_file(scratch / "out");
  r.err = read_file(scratch / "err");
  return r;
}

TempDir::TempDir() {
  static std::atomic<int> counter{0};
  std::random_device rd;
  path_ = fs::temp_directory_path() /
          ("seg-test-" + std::to_string(rd()) + "-" + std::to_string(counter++));
  fs::create_directories(path_);
}

TempDir::~TempDir() {
  std::error_code ec;
  fs::remove_all(path_, ec);
}

seg::llm::GatewayOptions fast_options() {
  seg::llm::GatewayOptions o;
  o.sleep = [](std::chrono::milliseconds) {};
  return o;
}

seg::Event ev(const std::string& text) { return seg::Event(text); }

seg::RelationEdge edge(const std::string& head, const std::string& tail, seg::RelationType r) {
  return seg::RelationEdge(seg::Event(head), seg::Event(tail), r);
}

std::vector<seg::Event> events(const std::vector<std::string>& texts) {
  std::vector<seg::Event> out;
  for (const auto& t : texts) out.emplace_back(t);
  return out;
}

seg::DocumentRecord document_with_words(const std::string& id, std::size_t words) {
  static const char* vocab[] = {"the", "council", "met", "on", "monday", "and", "voted", "budget", "after",
                                "long", "debate", "residents", "said"};
  std::string body;
  for (std::size_t i = 0; i < words; ++i) {
    if (i) body += (i % 12 == 0) ? ". " : " ";
    body += vocab[i % 13];
  }
  body += ".";
  seg::DocumentRecord d;
  d.id = id;
  d.title = "Document " + id;
  d.body = body;
  d.sentences = seg::split_sentences(body);
  return d;
}

seg::DocumentRecord example_document() {
  seg::DocumentRecord d;
  d.id = "nyt-bc-taxes";
  d.title = "British Columbia tax cuts";
  d.body = read_file(fixture_path("example/document.txt"));
  while (!d.body.empty() && d.body.back() == '\n') d.body.pop_back();
  d.sentences = seg::split_sentences(d.body);
  return d;
}

std::vector<std::string> example_expected_events() {
  std::istringstream in(read_file(fixture_path("example/expected_events.txt")));
  std::vector<std::string> out;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty()) out.push_back(line);
  }
  return out;
}

ScriptBuilder::ScriptBuilder(const seg::prompt::PromptLibrary& prompts)
    : prompts_(prompts), provider_(std::make_shared<seg::llm::ScriptedProvider>()) {}

const seg::prompt::PromptLibrary& ScriptBuilder::default_prompts() {
  static const seg::prompt::PromptLibrary lib;
  return lib;
}

ScriptBuilder& ScriptBuilder::summary(const seg::DocumentRecord& doc, std::string response) {
  provider_->add(seg::llm::Stage::summary, seg::prompt::render_summary_prompt(prompts_, doc), std::move(response));
  return *this;
}

ScriptBuilder& ScriptBuilder::events(const std::string& summary, std::string response) {
  provider_->add(seg::llm::Stage::events, seg::prompt::render_event_prompt(prompts_, summary), std::move(response));
  return *this;
}

ScriptBuilder& ScriptBuilder::graph(const seg::DocumentRecord& doc, const std::vector<seg::Event>& evs,
                                    seg::RelationType relation, const std::vector<seg::RelationGraph>& priors,
                                    const std::vector<seg::RelationEdge>& existing, std::string response) {
  provider_->add(seg::llm::Stage::graph,
                 seg::prompt::render_graph_prompt(prompts_, doc, evs, relation, priors, existing),
                 std::move(response));
  return *this;
}

ScriptBuilder& ScriptBuilder::grader(const seg::DocumentRecord& doc, const seg::RelationEdge& e,
                                     std::string response) {
  provider_->add(seg::llm::Stage::grader, seg::prompt::render_grader_prompt(prompts_, doc, e), std::move(response));
  return *this;
}

std::string add_edge_code(const std::string& variable,
                          const std::vector<std::pair<std::string, std::string>>& pairs) {
  std::string out;
  for (const auto& [h, t] : pairs) {
    out += variable + ".add_edge(" + seg::prompt::python_string_literal(h) + ", " +
           seg::prompt::python_string_literal(t) + ")\n";
  }
  return out;
}

}  // namespace segtest
