#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "seg/document.hpp"
#include "seg/graph.hpp"
#include "seg/llm/gateway.hpp"
#include "seg/llm/provider.hpp"
#include "seg/prompt/template.hpp"

namespace segtest {

std::filesystem::path fixture_path(const std::string& relative);
std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, const std::string& text);

struct CommandResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

/// Runs `args` through the shell with extra environment variables set.
CommandResult run_command(const std::vector<std::string>& args, const std::map<std::string, std::string>& env = {});

/// Self-deleting scratch directory.
class TempDir {
 public:
  TempDir();
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const noexcept { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

/// Options with retries that never sleep.
seg::llm::GatewayOptions fast_options();

seg::Event ev(const std::string& text);
seg::RelationEdge edge(const std::string& head, const std::string& tail,
                       seg::RelationType r = seg::RelationType::hierarchical);
std::vector<seg::Event> events(const std::vector<std::string>& texts);

/// A document of exactly `words` whitespace tokens.
seg::DocumentRecord document_with_words(const std::string& id, std::size_t words);

/// The news article shown with the summary prompt example.
seg::DocumentRecord example_document();
std::vector<std::string> example_expected_events();

/// Fills a ScriptedProvider by rendering the exact prompts the pipeline will
/// send, so fixtures stay in step with the templates.
class ScriptBuilder {
 public:
  explicit ScriptBuilder(const seg::prompt::PromptLibrary& prompts = default_prompts());

  static const seg::prompt::PromptLibrary& default_prompts();

  ScriptBuilder& summary(const seg::DocumentRecord& doc, std::string response);
  ScriptBuilder& events(const std::string& summary, std::string response);
  ScriptBuilder& graph(const seg::DocumentRecord& doc, const std::vector<seg::Event>& events,
                       seg::RelationType relation, const std::vector<seg::RelationGraph>& priors,
                       const std::vector<seg::RelationEdge>& existing, std::string response);
  ScriptBuilder& grader(const seg::DocumentRecord& doc, const seg::RelationEdge& edge, std::string response);

  std::shared_ptr<seg::llm::ScriptedProvider> provider() const { return provider_; }

 private:
  const seg::prompt::PromptLibrary& prompts_;
  std::shared_ptr<seg::llm::ScriptedProvider> provider_;
};

/// add_edge calls for `pairs` on `variable`, one per line.
std::string add_edge_code(const std::string& variable,
                          const std::vector<std::pair<std::string, std::string>>& pairs);

}  // namespace segtest
