// Copyright 2026 The alignaudit Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// HTTP clients for the live chat and embedding backends.

#include <cmath>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "alignaudit/error.hpp"
#include "alignaudit/gateway.hpp"
#include "alignaudit/retrieval.hpp"

namespace alignaudit {
namespace {

nlohmann::json post_json(const std::string& endpoint, const std::string& path, const std::string& api_key,
                         std::chrono::seconds timeout, const nlohmann::json& body) {
  httplib::Client client(endpoint);
  if (!client.is_valid()) throw Error(ErrorCode::InvalidConfig, "bad endpoint " + endpoint);
  client.set_connection_timeout(timeout);
  client.set_read_timeout(timeout);
  client.set_write_timeout(timeout);
  httplib::Headers headers;
  if (!api_key.empty()) headers.emplace("Authorization", "Bearer " + api_key);

  auto res = client.Post(path, headers, body.dump(), "application/json");
  if (!res) throw Error(ErrorCode::Transport, endpoint + path + ": " + httplib::to_string(res.error()));

  const int status = res->status;
  auto snippet = res->body.substr(0, 200);
  if (status == 429) throw Error(ErrorCode::RateLimited, "HTTP 429: " + snippet);
  if (status == 401 || status == 403) throw Error(ErrorCode::Auth, "HTTP " + std::to_string(status) + ": " + snippet);
  if (status >= 500) throw Error(ErrorCode::Transport, "HTTP " + std::to_string(status) + ": " + snippet);
  if (status != 200) {
    throw Error(ErrorCode::MalformedResponse, "HTTP " + std::to_string(status) + ": " + snippet);
  }
  try {
    return nlohmann::json::parse(res->body);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::MalformedResponse, std::string("response is not JSON: ") + e.what());
  }
}

}  // namespace

OpenAiChatBackend::OpenAiChatBackend(ChatEndpointConfig config) : config_(std::move(config)) {
  if (config_.endpoint.empty()) throw Error(ErrorCode::InvalidConfig, "chat endpoint is empty");
}

ModelResponse OpenAiChatBackend::complete(const ModelRequest& request) {
  nlohmann::json body = {{"model", request.model_id},
                         {"messages", {{{"role", "user"}, {"content", request.prompt}}}},
                         {"temperature", request.temperature},
                         {"max_tokens", request.max_output_tokens}};
  auto j = post_json(config_.endpoint, config_.path, config_.api_key, config_.timeout, body);

  ModelResponse out;
  out.source = ResponseSource::Live;
  try {
    const auto& msg = j.at("choices").at(0).at("message");
    out.raw_text = msg.at("content").is_null() ? std::string() : msg.at("content").get<std::string>();
    if (j.contains("usage")) {
      out.usage.input = j["usage"].value("prompt_tokens", std::int64_t{0});
      out.usage.output = j["usage"].value("completion_tokens", std::int64_t{0});
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::MalformedResponse, std::string("unexpected completion shape: ") + e.what());
  }
  return out;
}

RemoteEmbedder::RemoteEmbedder(RemoteEmbedderConfig config) : config_(std::move(config)) {
  if (config_.endpoint.empty()) throw Error(ErrorCode::InvalidConfig, "embedding endpoint is empty");
  if (config_.dimension == 0) throw Error(ErrorCode::InvalidConfig, "embedding dimension must be positive");
}

std::string RemoteEmbedder::id() const { return "remote:" + config_.model + ":d=" + std::to_string(config_.dimension); }

EmbeddingVector RemoteEmbedder::embed(std::string_view text) {
  if (text.find_first_not_of(" \t\r\n") == std::string_view::npos) {
    throw Error(ErrorCode::EmptyText, "cannot embed empty text");
  }
  nlohmann::json body = {{"model", config_.model}, {"input", std::string(text)}};
  nlohmann::json j;
  try {
    j = post_json(config_.endpoint, config_.path, config_.api_key, config_.timeout, body);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::InvalidConfig) throw;
    throw Error(ErrorCode::ProviderUnavailable, e.what());
  }

  EmbeddingVector v{{}, id()};
  try {
    v.components = j.at("data").at(0).at("embedding").get<std::vector<double>>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ProviderUnavailable, std::string("unexpected embedding shape: ") + e.what());
  }
  if (v.components.size() != config_.dimension) {
    throw Error(ErrorCode::DimensionMismatch, "expected " + std::to_string(config_.dimension) + " components, got " +
                                                  std::to_string(v.components.size()));
  }
  for (double c : v.components) {
    if (!std::isfinite(c)) throw Error(ErrorCode::ProviderUnavailable, "embedding has a non-finite component");
  }
  return v;
}

}  // namespace alignaudit
