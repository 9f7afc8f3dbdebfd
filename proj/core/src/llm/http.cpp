#define CPPHTTPLIB_OPENSSL_SUPPORT
#include "httplib.h"

#include "seg/llm/http.hpp"

#include <algorithm>

#include <nlohmann/json.hpp>

#include "seg/error.hpp"
#include "seg/llm/errors.hpp"

namespace seg::llm {

namespace {

struct SplitUrl {
  std::string origin;  // scheme://host[:port]
  std::string path;    // no trailing slash
};

SplitUrl split_url(const std::string& url) {
  auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos) throw InvalidArgument("endpoint URL lacks a scheme: " + url);
  auto path_start = url.find('/', scheme_end + 3);
  SplitUrl out;
  out.origin = url.substr(0, path_start);
  out.path = path_start == std::string::npos ? "" : url.substr(path_start);
  while (!out.path.empty() && out.path.back() == '/') out.path.pop_back();
  return out;
}

nlohmann::json post_json(const HttpEndpoint& ep, const std::string& suffix, const nlohmann::json& body) {
  auto url = split_url(ep.base_url);
  httplib::Client client(url.origin);
  auto secs = std::chrono::duration_cast<std::chrono::seconds>(ep.timeout);
  auto usecs = std::chrono::duration_cast<std::chrono::microseconds>(ep.timeout - secs);
  client.set_connection_timeout(secs.count(), usecs.count());
  client.set_read_timeout(secs.count(), usecs.count());
  client.set_write_timeout(secs.count(), usecs.count());

  httplib::Headers headers;
  if (!ep.api_key.empty()) headers.emplace("Authorization", "Bearer " + ep.api_key);

  auto started = std::chrono::steady_clock::now();
  auto res = client.Post(url.path + suffix, headers, body.dump(), "application/json");
  if (!res) {
    auto err = res.error();
    auto elapsed = std::chrono::steady_clock::now() - started;
    std::string what = ep.base_url + suffix + ": " + httplib::to_string(err);
    if (err == httplib::Error::ConnectionTimeout ||
        (err == httplib::Error::Read && elapsed >= ep.timeout * 9 / 10)) {
      throw TimeoutError(what);
    }
    throw TransportError(what);
  }

  nlohmann::json payload = nlohmann::json::parse(res->body, nullptr, false);
  if (res->status != 200) {
    std::string message = "HTTP " + std::to_string(res->status);
    if (payload.is_object() && payload.contains("error")) {
      const auto& e = payload["error"];
      message += ": " + (e.is_object() && e.contains("message") ? e["message"].dump() : e.dump());
    }
    bool retryable = res->status == 429 || res->status >= 500;
    throw ProviderError(message, res->status, retryable);
  }
  if (payload.is_discarded()) throw ProviderError("response body is not JSON", res->status, false);
  if (payload.is_object() && payload.contains("error")) {
    throw ProviderError("provider error: " + payload["error"].dump(), res->status, false);
  }
  return payload;
}

}  // namespace

HttpChatProvider::HttpChatProvider(HttpEndpoint endpoint) : endpoint_(std::move(endpoint)) {
  split_url(endpoint_.base_url);
}

std::string HttpChatProvider::id() const { return "http-chat:" + endpoint_.model + "@" + endpoint_.base_url; }

std::string HttpChatProvider::complete(const GenerationRequest& request) {
  auto messages = nlohmann::json::array();
  for (const auto& turn : request.history) {
    messages.push_back({{"role", turn.role == ChatTurn::Role::user ? "user" : "assistant"},
                        {"content", turn.content}});
  }
  messages.push_back({{"role", "user"}, {"content", request.prompt}});
  nlohmann::json body = {
      {"model", endpoint_.model},       {"messages", messages},
      {"temperature", request.temperature}, {"top_p", request.top_p},
      {"max_tokens", request.max_tokens},
  };
  auto payload = post_json(endpoint_, "/chat/completions", body);
  try {
    return payload.at("choices").at(0).at("message").at("content").get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    throw ProviderError(std::string("malformed chat completion: ") + e.what(), 200, false);
  }
}

HttpEmbeddingProvider::HttpEmbeddingProvider(HttpEndpoint endpoint) : endpoint_(std::move(endpoint)) {
  split_url(endpoint_.base_url);
}

std::string HttpEmbeddingProvider::id() const {
  return "http-embed:" + endpoint_.model + "@" + endpoint_.base_url;
}

std::vector<EmbeddingVector> HttpEmbeddingProvider::embed(std::span<const std::string> texts) {
  nlohmann::json body = {{"model", endpoint_.model},
                         {"input", std::vector<std::string>(texts.begin(), texts.end())}};
  auto payload = post_json(endpoint_, "/embeddings", body);
  try {
    const auto& data = payload.at("data");
    if (data.size() != texts.size()) {
      throw ProviderError("embedding count mismatch", 200, false);
    }
    std::vector<EmbeddingVector> out(texts.size());
    for (std::size_t i = 0; i < data.size(); ++i) {
      std::size_t index = data[i].contains("index") ? data[i]["index"].get<std::size_t>() : i;
      if (index >= out.size()) throw ProviderError("embedding index out of range", 200, false);
      out[index].values = data[i].at("embedding").get<std::vector<double>>();
    }
    return out;
  } catch (const nlohmann::json::exception& e) {
    throw ProviderError(std::string("malformed embedding response: ") + e.what(), 200, false);
  }
}

}  // namespace seg::llm
