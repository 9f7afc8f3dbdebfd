#include "seg/llm/gateway.hpp"

#include <fstream>
#include <random>
#include <sstream>
#include <thread>

#include <nlohmann/json.hpp>

#include "seg/error.hpp"

namespace seg::llm {

ResponseCache::ResponseCache(std::filesystem::path dir) : dir_(std::move(dir)) {
  std::filesystem::create_directories(dir_);
}

std::optional<std::string> ResponseCache::get(const std::string& key) const {
  std::lock_guard lock(mu_);
  std::ifstream in(dir_ / (key + ".json"), std::ios::binary);
  if (!in) return std::nullopt;
  std::stringstream ss;
  ss << in.rdbuf();
  auto j = nlohmann::json::parse(ss.str(), nullptr, false);
  if (j.is_discarded() || !j.contains("response") || !j["response"].is_string()) return std::nullopt;
  return j["response"].get<std::string>();
}

void ResponseCache::put(const std::string& key, const std::string& stage, const std::string& response) {
  nlohmann::ordered_json j;
  j["stage"] = stage;
  j["response"] = response;
  std::lock_guard lock(mu_);
  auto final_path = dir_ / (key + ".json");
  auto tmp = dir_ / (key + ".json.tmp");
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write cache entry " + tmp.string());
    out << j.dump() << '\n';
  }
  std::filesystem::rename(tmp, final_path);
}

Gateway::Gateway(std::shared_ptr<TextProvider> text, std::shared_ptr<EmbeddingProvider> embedder,
                 GatewayOptions options)
    : text_(std::move(text)),
      embedder_(std::move(embedder)),
      options_(std::move(options)),
      in_flight_(static_cast<std::ptrdiff_t>(options_.max_in_flight)) {
  if (options_.max_in_flight == 0 || options_.max_in_flight > 1024) {
    throw InvalidArgument("max_in_flight must lie in [1, 1024]");
  }
  if (options_.embed_batch == 0) throw InvalidArgument("embed_batch must be positive");
  if (options_.retry.max_retries < 0) throw InvalidArgument("max_retries must be >= 0");
  if (!options_.sleep) {
    options_.sleep = [](std::chrono::milliseconds d) { std::this_thread::sleep_for(d); };
  }
  if (options_.cache_dir) cache_.emplace(*options_.cache_dir);
}

template <class Fn>
auto Gateway::with_retries(Fn&& fn) -> decltype(fn()) {
  for (int attempt = 0;; ++attempt) {
    try {
      in_flight_.acquire();
      struct Release {
        std::counting_semaphore<1024>& s;
        ~Release() { s.release(); }
      } release{in_flight_};
      metrics_.provider_calls++;
      return fn();
    } catch (const LlmError& e) {
      if (!e.retryable() || attempt >= options_.retry.max_retries) {
        metrics_.failures++;
        throw;
      }
      metrics_.retries++;
      options_.sleep(options_.retry.initial_backoff * (1LL << attempt));
    }
  }
}

std::string Gateway::complete(const GenerationRequest& request) {
  if (!text_) throw InvalidArgument("no text provider configured");
  request.validate();
  metrics_.requests++;
  metrics_.prompt_chars += request.prompt.size();

  std::string key;
  if (cache_) {
    key = request_fingerprint(request, text_->id());
    if (auto hit = cache_->get(key)) {
      metrics_.cache_hits++;
      metrics_.response_chars += hit->size();
      return *hit;
    }
  }
  std::string response = with_retries([&] { return text_->complete(request); });
  metrics_.response_chars += response.size();
  if (cache_) cache_->put(key, std::string(stage_name(request.stage)), response);
  return response;
}

std::vector<EmbeddingVector> Gateway::embed(std::span<const std::string> texts) {
  if (!embedder_) throw InvalidArgument("no embedding provider configured");
  if (texts.empty()) throw InvalidArgument("embed called with no texts");
  for (const auto& t : texts) {
    if (t.empty()) throw InvalidArgument("embed called with an empty text");
  }
  std::vector<EmbeddingVector> out;
  out.reserve(texts.size());
  for (std::size_t start = 0; start < texts.size(); start += options_.embed_batch) {
    auto batch = texts.subspan(start, std::min(options_.embed_batch, texts.size() - start));
    auto vectors = with_retries([&] { return embedder_->embed(batch); });
    if (vectors.size() != batch.size()) {
      throw ProviderError("embedding provider returned " + std::to_string(vectors.size()) +
                              " vectors for " + std::to_string(batch.size()) + " texts",
                          0, false);
    }
    std::lock_guard lock(dim_mu_);
    for (auto& v : vectors) {
      if (v.dimension() == 0) throw ProviderError("empty embedding vector", 0, false);
      if (!dimension_) dimension_ = v.dimension();
      if (*dimension_ != v.dimension()) {
        throw ProviderError("embedding dimension changed from " + std::to_string(*dimension_) +
                                " to " + std::to_string(v.dimension()),
                            0, false);
      }
      out.push_back(std::move(v));
    }
  }
  metrics_.embedded_texts += texts.size();
  return out;
}

}  // namespace seg::llm
