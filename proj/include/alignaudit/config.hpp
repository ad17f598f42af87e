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

// Tool settings from a JSON file. Command-line flags override the file;
// the environment may supply credentials only:
//   OPENAI_API_KEY, ALIGNAUDIT_API_KEY (the latter wins), and
//   ALIGNAUDIT_EMBEDDING_API_KEY for the embedding endpoint.

#pragma once

#include <filesystem>
#include <functional>
#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "alignaudit/gateway.hpp"
#include "alignaudit/retrieval.hpp"

namespace alignaudit {

struct EmbeddingSettings {
  std::string provider = "hash";  // hash | remote
  size_t dimension = 256;         // hash provider
  std::uint64_t seed = 0;         // hash provider
  RemoteEmbedderConfig remote;
};

struct AppConfig {
  std::string model_id = "gpt-4o-mini";
  std::optional<double> temperature;
  int max_output_tokens = 64;
  size_t concurrency = 4;
  int requests_per_minute = 0;
  RetryPolicy retry;
  ChatEndpointConfig chat;
  EmbeddingSettings embedding;
  PriceTable prices;  // never built in; supply per deployment
};

/// Unknown keys are rejected so typos surface. Throws InvalidConfig.
AppConfig app_config_from_json(const nlohmann::json& j);
AppConfig load_app_config(const std::filesystem::path& path);

using EnvLookup = std::function<const char*(const char*)>;
/// Fills API keys from the environment.
void apply_env(AppConfig& config, const EnvLookup& getenv_fn);

}  // namespace alignaudit
