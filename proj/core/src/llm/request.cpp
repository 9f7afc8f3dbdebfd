#include "seg/llm/request.hpp"

#include <cmath>

#include <nlohmann/json.hpp>

#include "seg/error.hpp"
#include "seg/hash.hpp"

namespace seg::llm {

std::string_view stage_name(Stage s) noexcept {
  switch (s) {
    case Stage::summary: return "summary";
    case Stage::events: return "events";
    case Stage::graph: return "graph";
    case Stage::grader: return "grader";
    case Stage::mention: return "mention";
  }
  return {};
}

std::optional<Stage> parse_stage(std::string_view s) noexcept {
  for (auto stage : kStages) {
    if (stage_name(stage) == s) return stage;
  }
  return std::nullopt;
}

namespace {
void check_sampling(const SamplingParams& p) {
  if (!std::isfinite(p.temperature) || p.temperature < 0.0 || p.temperature > 2.0) {
    throw InvalidArgument("temperature must lie in [0, 2]");
  }
  if (!std::isfinite(p.top_p) || p.top_p <= 0.0 || p.top_p > 1.0) {
    throw InvalidArgument("top_p must lie in (0, 1]");
  }
}
}  // namespace

StageParams::StageParams() {
  params_[static_cast<std::size_t>(Stage::summary)] = {0.8, 0.9};
  params_[static_cast<std::size_t>(Stage::events)] = {0.5, 0.9};
  params_[static_cast<std::size_t>(Stage::graph)] = {0.5, 0.9};
  params_[static_cast<std::size_t>(Stage::grader)] = {0.0, 0.9};
  params_[static_cast<std::size_t>(Stage::mention)] = {0.0, 0.9};
}

void StageParams::set(Stage s, SamplingParams p) {
  check_sampling(p);
  params_[static_cast<std::size_t>(s)] = p;
}

int default_max_tokens(Stage s) noexcept { return s == Stage::graph ? 4096 : 1024; }

void GenerationRequest::validate() const {
  check_sampling({temperature, top_p});
  if (max_tokens <= 0) throw InvalidArgument("max_tokens must be positive");
  if (prompt.empty()) throw InvalidArgument("prompt is empty");
}

GenerationRequest make_request(Stage stage, std::string prompt, const StageParams& params,
                               std::vector<ChatTurn> history) {
  const auto& p = params.get(stage);
  GenerationRequest r;
  r.prompt = std::move(prompt);
  r.temperature = p.temperature;
  r.top_p = p.top_p;
  r.max_tokens = default_max_tokens(stage);
  r.stage = stage;
  r.history = std::move(history);
  return r;
}

namespace {
nlohmann::json conversation(const GenerationRequest& request) {
  auto messages = nlohmann::json::array();
  for (const auto& turn : request.history) {
    messages.push_back({{"role", turn.role == ChatTurn::Role::user ? "user" : "assistant"},
                        {"content", turn.content}});
  }
  messages.push_back({{"role", "user"}, {"content", request.prompt}});
  return messages;
}
}  // namespace

std::string prompt_hash(const GenerationRequest& request) {
  if (request.history.empty()) return sha256_hex(request.prompt);
  return sha256_hex(conversation(request).dump());
}

std::string request_fingerprint(const GenerationRequest& request, std::string_view provider_id) {
  nlohmann::json j = {
      {"provider", provider_id},
      {"stage", stage_name(request.stage)},
      {"temperature", request.temperature},
      {"top_p", request.top_p},
      {"max_tokens", request.max_tokens},
      {"messages", conversation(request)},
  };
  return sha256_hex(j.dump());
}

}  // namespace seg::llm
