#include "seg/llm/provider.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <tuple>

#include <nlohmann/json.hpp>

#include "seg/error.hpp"
#include "seg/hash.hpp"
#include "seg/llm/errors.hpp"

namespace seg::llm {

namespace {

std::vector<ChatTurn> history_from_json(const nlohmann::json& j) {
  std::vector<ChatTurn> out;
  for (const auto& t : j) {
    auto role = t.at("role").get<std::string>();
    out.push_back({role == "assistant" ? ChatTurn::Role::assistant : ChatTurn::Role::user,
                   t.at("content").get<std::string>()});
  }
  return out;
}

}  // namespace

std::shared_ptr<ScriptedProvider> ScriptedProvider::from_file(const std::filesystem::path& path) {
  auto p = std::make_shared<ScriptedProvider>();
  p->load_file(path);
  return p;
}

void ScriptedProvider::load_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open fixture file " + path.string());
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      auto j = nlohmann::json::parse(line);
      auto stage = parse_stage(j.at("stage").get<std::string>());
      if (!stage) throw InvalidArgument("unknown stage");
      auto response = j.at("response").get<std::string>();
      if (j.contains("prompt_hash")) {
        add_hashed(*stage, j["prompt_hash"].get<std::string>(), std::move(response));
      } else {
        std::vector<ChatTurn> history;
        if (j.contains("history")) history = history_from_json(j["history"]);
        add(*stage, j.at("prompt").get<std::string>(), std::move(response), history);
      }
    } catch (const std::exception& e) {
      throw InvalidArgument(path.string() + ":" + std::to_string(lineno) + ": bad fixture: " + e.what());
    }
  }
}

void ScriptedProvider::add(Stage stage, std::string_view prompt, std::string response,
                           const std::vector<ChatTurn>& history) {
  GenerationRequest r;
  r.prompt = std::string(prompt);
  r.history = history;
  add_hashed(stage, prompt_hash(r), std::move(response));
}

void ScriptedProvider::add_hashed(Stage stage, std::string hash, std::string response) {
  std::lock_guard lock(mu_);
  fixtures_[{stage, std::move(hash)}] = std::move(response);
}

std::size_t ScriptedProvider::size() const {
  std::lock_guard lock(mu_);
  return fixtures_.size();
}

std::string ScriptedProvider::complete(const GenerationRequest& request) {
  auto hash = prompt_hash(request);
  std::lock_guard lock(mu_);
  auto it = fixtures_.find({request.stage, hash});
  if (it == fixtures_.end()) {
    throw FixtureMissing("fixture missing for stage " + std::string(stage_name(request.stage)) +
                         " prompt_hash " + hash);
  }
  return it->second;
}

std::string RecordingProvider::complete(const GenerationRequest& request) {
  std::string response = inner_->complete(request);
  std::lock_guard lock(mu_);
  exchanges_.push_back({request.stage, prompt_hash(request), request.prompt, response});
  return response;
}

std::vector<RecordingProvider::Exchange> RecordingProvider::exchanges() const {
  std::lock_guard lock(mu_);
  return exchanges_;
}

void RecordingProvider::write_fixtures(const std::filesystem::path& path) const {
  auto all = exchanges();
  std::sort(all.begin(), all.end(), [](const Exchange& a, const Exchange& b) {
    return std::tie(a.stage, a.prompt_hash) < std::tie(b.stage, b.prompt_hash);
  });
  all.erase(std::unique(all.begin(), all.end(),
                        [](const Exchange& a, const Exchange& b) {
                          return a.stage == b.stage && a.prompt_hash == b.prompt_hash;
                        }),
            all.end());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidArgument("cannot write fixture file " + path.string());
  for (const auto& x : all) {
    nlohmann::ordered_json j;
    j["stage"] = stage_name(x.stage);
    j["prompt_hash"] = x.prompt_hash;
    j["response"] = x.response;
    out << j.dump() << '\n';
  }
}

HashedEmbedder::HashedEmbedder(std::size_t dimension) : dimension_(dimension) {
  if (dimension == 0) throw InvalidArgument("embedding dimension must be positive");
}

std::string HashedEmbedder::id() const { return "hashed-bow-" + std::to_string(dimension_); }

std::size_t HashedEmbedder::bucket(std::string_view token) const noexcept {
  return static_cast<std::size_t>(fnv1a64(token) % dimension_);
}

EmbeddingVector HashedEmbedder::embed_one(std::string_view text) const {
  EmbeddingVector v{std::vector<double>(dimension_, 0.0)};
  std::string token;
  auto flush = [&] {
    if (!token.empty()) v.values[bucket(token)] += 1.0;
    token.clear();
  };
  for (char c : text) {
    if (std::isalnum(static_cast<unsigned char>(c))) {
      token.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    } else {
      flush();
    }
  }
  flush();
  double n = v.norm();
  if (n > 0.0) {
    for (double& x : v.values) x /= n;
  }
  return v;
}

std::vector<EmbeddingVector> HashedEmbedder::embed(std::span<const std::string> texts) {
  std::vector<EmbeddingVector> out;
  out.reserve(texts.size());
  for (const auto& t : texts) out.push_back(embed_one(t));
  return out;
}

}  // namespace seg::llm
