#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace seg::llm {

enum class Stage { summary, events, graph, grader, mention };

inline constexpr std::array<Stage, 5> kStages = {Stage::summary, Stage::events, Stage::graph,
                                                 Stage::grader, Stage::mention};

std::string_view stage_name(Stage s) noexcept;
std::optional<Stage> parse_stage(std::string_view s) noexcept;

struct SamplingParams {
  double temperature = 0.0;
  double top_p = 1.0;
};

/// Per-stage sampling. Defaults: summary (0.8, 0.9); events and graph
/// (0.5, 0.9); grader and mention detection (0.0, 0.9).
class StageParams {
 public:
  StageParams();

  const SamplingParams& get(Stage s) const noexcept { return params_[static_cast<std::size_t>(s)]; }
  /// Throws InvalidArgument when temperature is outside [0,2] or top_p outside (0,1].
  void set(Stage s, SamplingParams p);

 private:
  std::array<SamplingParams, kStages.size()> params_;
};

/// Token budget used when a request does not specify one.
int default_max_tokens(Stage s) noexcept;

struct ChatTurn {
  enum class Role { user, assistant };
  Role role;
  std::string content;

  friend bool operator==(const ChatTurn&, const ChatTurn&) = default;
};

struct GenerationRequest {
  std::string prompt;
  double temperature = 0.0;
  double top_p = 1.0;
  int max_tokens = 1024;
  Stage stage = Stage::summary;
  /// Earlier turns of a multi-turn exchange, oldest first. `prompt` is the
  /// newest user message.
  std::vector<ChatTurn> history;

  /// Throws InvalidArgument when a field is out of range.
  void validate() const;
};

GenerationRequest make_request(Stage stage, std::string prompt, const StageParams& params,
                               std::vector<ChatTurn> history = {});

/// SHA-256 over the conversation text (history then prompt). Scripted
/// fixtures are keyed by (stage, this hash).
std::string prompt_hash(const GenerationRequest& request);

/// SHA-256 over every field that influences the response, plus the provider identity.
std::string request_fingerprint(const GenerationRequest& request, std::string_view provider_id);

}  // namespace seg::llm
