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

#include "alignaudit/config.hpp"

#include <set>

#include "alignaudit/error.hpp"
#include "alignaudit/table_io.hpp"

namespace alignaudit {
namespace {

using nlohmann::json;

void check_keys(const json& j, const std::set<std::string>& allowed, const std::string& where) {
  if (!j.is_object()) throw Error(ErrorCode::InvalidConfig, where + " must be an object");
  for (const auto& [k, v] : j.items()) {
    if (!allowed.count(k)) throw Error(ErrorCode::InvalidConfig, "unknown key " + where + "." + k);
  }
}

}  // namespace

AppConfig app_config_from_json(const json& j) {
  AppConfig c;
  try {
    check_keys(j,
               {"model_id", "temperature", "max_output_tokens", "concurrency", "requests_per_minute", "retry", "chat",
                "embedding", "prices"},
               "config");
    c.model_id = j.value("model_id", c.model_id);
    if (j.contains("temperature") && !j["temperature"].is_null()) c.temperature = j["temperature"].get<double>();
    c.max_output_tokens = j.value("max_output_tokens", c.max_output_tokens);
    c.concurrency = j.value("concurrency", c.concurrency);
    c.requests_per_minute = j.value("requests_per_minute", c.requests_per_minute);
    if (j.contains("retry")) {
      const auto& r = j["retry"];
      check_keys(r, {"max_retries", "base_delay_ms", "multiplier", "max_delay_ms"}, "retry");
      c.retry.max_retries = r.value("max_retries", c.retry.max_retries);
      c.retry.base_delay = std::chrono::milliseconds(r.value("base_delay_ms", c.retry.base_delay.count()));
      c.retry.multiplier = r.value("multiplier", c.retry.multiplier);
      c.retry.max_delay = std::chrono::milliseconds(r.value("max_delay_ms", c.retry.max_delay.count()));
    }
    if (j.contains("chat")) {
      const auto& h = j["chat"];
      check_keys(h, {"endpoint", "path", "timeout_s", "api_key"}, "chat");
      c.chat.endpoint = h.value("endpoint", c.chat.endpoint);
      c.chat.path = h.value("path", c.chat.path);
      c.chat.timeout = std::chrono::seconds(h.value("timeout_s", c.chat.timeout.count()));
      c.chat.api_key = h.value("api_key", c.chat.api_key);
    }
    if (j.contains("embedding")) {
      const auto& e = j["embedding"];
      check_keys(e, {"provider", "dimension", "seed", "endpoint", "path", "model", "timeout_s", "api_key"},
                 "embedding");
      c.embedding.provider = e.value("provider", c.embedding.provider);
      c.embedding.seed = e.value("seed", c.embedding.seed);
      auto& r = c.embedding.remote;
      r.endpoint = e.value("endpoint", r.endpoint);
      r.path = e.value("path", r.path);
      r.model = e.value("model", r.model);
      r.timeout = std::chrono::seconds(e.value("timeout_s", r.timeout.count()));
      r.api_key = e.value("api_key", r.api_key);
      if (e.contains("dimension")) {
        c.embedding.dimension = e["dimension"].get<size_t>();
        r.dimension = c.embedding.dimension;
      }
      if (c.embedding.provider != "hash" && c.embedding.provider != "remote") {
        throw Error(ErrorCode::InvalidConfig, "embedding.provider must be hash or remote");
      }
    }
    if (j.contains("prices")) {
      for (const auto& [model, p] : j["prices"].items()) {
        check_keys(p, {"input_per_million", "output_per_million"}, "prices." + model);
        c.prices[model] = {p.value("input_per_million", 0.0), p.value("output_per_million", 0.0)};
      }
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::InvalidConfig, std::string("config: ") + e.what());
  }
  return c;
}

AppConfig load_app_config(const std::filesystem::path& path) {
  try {
    return app_config_from_json(json::parse(read_file(path)));
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::InvalidConfig, path.string() + ": " + e.what());
  }
}

void apply_env(AppConfig& config, const EnvLookup& getenv_fn) {
  for (const char* name : {"OPENAI_API_KEY", "ALIGNAUDIT_API_KEY"}) {
    if (const char* v = getenv_fn(name); v && *v) config.chat.api_key = v;
  }
  if (const char* v = getenv_fn("ALIGNAUDIT_EMBEDDING_API_KEY"); v && *v) {
    config.embedding.remote.api_key = v;
  } else if (config.embedding.remote.api_key.empty()) {
    config.embedding.remote.api_key = config.chat.api_key;
  }
}

}  // namespace alignaudit
