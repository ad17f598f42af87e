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

// Chat-completion access: backends, a content-addressed response cache,
// retry with exponential backoff, and an append-only transcript.

#pragma once

#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <deque>
#include <filesystem>
#include <fstream>
#include <functional>
#include <future>
#include <map>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "alignaudit/error.hpp"

namespace alignaudit {

struct ModelRequest {
  std::string model_id;
  std::string prompt;
  double temperature = 0.0;
  int max_output_tokens = 64;
  std::string request_tag;  // correlation only, never part of the cache key
  // Separates deliberate resamples of one prompt (ensemble repeats, re-asks).
  // Part of the cache key when non-empty.
  std::string sample_tag;
};

/// Throws InvalidConfig for an empty prompt or model, a temperature outside
/// [0, 2] or a non-positive token budget.
void validate(const ModelRequest& request);

struct TokenUsage {
  std::int64_t input = 0;
  std::int64_t output = 0;

  TokenUsage& operator+=(const TokenUsage& o) {
    input += o.input;
    output += o.output;
    return *this;
  }
};

enum class ResponseSource { Live, Cache, Mock };
std::string_view to_string(ResponseSource s);

struct ModelResponse {
  std::string raw_text;
  TokenUsage usage;
  std::chrono::milliseconds latency{0};
  ResponseSource source = ResponseSource::Live;
};

/// SHA-256 hex over
///   "v1\n" model "\n" temperature "\n" max_output_tokens "\n" prompt
/// followed by "\nsample=" sample_tag when a sample tag is set. Temperature
/// is printed in shortest round-trip form.
std::string cache_key(const ModelRequest& request);

class ChatBackend {
 public:
  virtual ~ChatBackend() = default;
  /// Throws Error with a backend code (Transport, RateLimited, Auth,
  /// MalformedResponse, ProviderUnavailable).
  virtual ModelResponse complete(const ModelRequest& request) = 0;
  virtual std::string id() const = 0;
};

/// Canned responses from a JSON fixture:
///   {"keys": {"<cache_key>": "text"},
///    "rules": [{"contains": ["a", "b"], "response": "text"}],
///    "default": "text"}
/// Exact keys win, then the first rule whose substrings all occur in the
/// prompt, then the default. No match throws ProviderUnavailable.
class MockBackend final : public ChatBackend {
 public:
  struct Rule {
    std::vector<std::string> contains;
    std::string response;
  };

  MockBackend() = default;
  static MockBackend from_json(const nlohmann::json& j);
  static MockBackend from_file(const std::filesystem::path& path);

  void add_key(std::string key, std::string response) { keys_[std::move(key)] = std::move(response); }
  void add_rule(Rule rule) { rules_.push_back(std::move(rule)); }
  void set_default(std::string response) { default_ = std::move(response); }
  nlohmann::json to_json() const;

  ModelResponse complete(const ModelRequest& request) override;
  std::string id() const override { return "mock"; }

 private:
  std::map<std::string, std::string> keys_;
  std::vector<Rule> rules_;
  std::optional<std::string> default_;
};

/// Mock whose reply is computed from the request.
class FunctionBackend final : public ChatBackend {
 public:
  using Fn = std::function<std::string(const ModelRequest&)>;
  explicit FunctionBackend(Fn fn, std::string id = "function") : fn_(std::move(fn)), id_(std::move(id)) {}

  ModelResponse complete(const ModelRequest& request) override;
  std::string id() const override { return id_; }

 private:
  Fn fn_;
  std::string id_;
};

/// Plays a fixed sequence of failures and replies, then defers to a fallback
/// backend. Thread-safe; steps are consumed in call order.
class ScriptedBackend final : public ChatBackend {
 public:
  using Step = std::variant<ErrorCode, std::string>;

  ScriptedBackend(std::vector<Step> steps, ChatBackend* fallback = nullptr)
      : steps_(steps.begin(), steps.end()), fallback_(fallback) {}

  ModelResponse complete(const ModelRequest& request) override;
  std::string id() const override { return "scripted"; }
  size_t calls() const;

 private:
  mutable std::mutex mu_;
  std::deque<Step> steps_;
  ChatBackend* fallback_;
  size_t calls_ = 0;
};

/// Stands in for the live backend during replay: every call fails.
class OfflineBackend final : public ChatBackend {
 public:
  ModelResponse complete(const ModelRequest& request) override;
  std::string id() const override { return "offline"; }
};

struct ChatEndpointConfig {
  std::string endpoint = "https://api.openai.com";  // scheme://host[:port]
  std::string path = "/v1/chat/completions";
  std::string api_key;
  std::chrono::seconds timeout{60};
};

/// OpenAI-compatible chat completions over HTTP(S).
/// 429 -> RateLimited, 401/403 -> Auth, 5xx and socket errors -> Transport,
/// unreadable bodies -> MalformedResponse.
class OpenAiChatBackend final : public ChatBackend {
 public:
  explicit OpenAiChatBackend(ChatEndpointConfig config);

  ModelResponse complete(const ModelRequest& request) override;
  std::string id() const override { return "openai:" + config_.endpoint; }

 private:
  ChatEndpointConfig config_;
};

struct TranscriptRecord {
  std::string cache_key;
  ModelRequest request;
  std::optional<ModelResponse> response;  // empty when the call failed
  std::optional<ErrorCode> error;
  std::string error_message;
  int attempts = 1;
  std::string timestamp;  // UTC, ISO 8601
};

nlohmann::json to_json(const TranscriptRecord& r);
TranscriptRecord transcript_record_from_json(const nlohmann::json& j);
/// Throws Io or MalformedResponse (with the line number).
std::vector<TranscriptRecord> read_transcript(const std::filesystem::path& path);

struct RetryPolicy {
  int max_retries = 4;
  std::chrono::milliseconds base_delay{500};
  double multiplier = 2.0;
  std::chrono::milliseconds max_delay{30000};

  /// Wait before retry number `retry` (1-based).
  std::chrono::milliseconds delay(int retry) const;
};

struct GatewayOptions {
  RetryPolicy retry;
  bool use_cache = true;
  size_t max_in_flight = 4;
  int requests_per_minute = 0;  // 0: unlimited
  std::filesystem::path transcript_path;  // empty: keep records in memory only
  std::function<void(std::chrono::milliseconds)> sleeper;  // defaults to this_thread::sleep_for
};

struct GatewayStats {
  size_t requests = 0;
  size_t upstream_calls = 0;
  size_t cache_hits = 0;
  size_t retries = 0;
  size_t failures = 0;
  TokenUsage usage;  // upstream calls only
};

class Gateway {
 public:
  Gateway(ChatBackend& backend, GatewayOptions options = {});
  Gateway(const Gateway&) = delete;
  Gateway& operator=(const Gateway&) = delete;

  /// Cache, then upstream with retries for transient failures. Concurrent
  /// identical requests share one upstream call. Thread-safe.
  ModelResponse complete(const ModelRequest& request);

  /// Seeds the cache from recorded calls; failed calls replay as the same
  /// error. Preloaded entries are not written to the transcript again.
  void preload(std::span<const TranscriptRecord> records);

  GatewayStats stats() const;
  std::vector<TranscriptRecord> transcript() const;
  const std::string& backend_id() const { return backend_id_; }

 private:
  using Outcome = std::variant<ModelResponse, Error>;

  Outcome call_upstream(const ModelRequest& request, int& attempts);
  void throttle();
  void record(TranscriptRecord rec);

  ChatBackend& backend_;
  std::string backend_id_;
  GatewayOptions options_;

  mutable std::mutex mu_;
  std::condition_variable slots_cv_;
  size_t in_flight_ = 0;
  std::unordered_map<std::string, ModelResponse> cache_;
  std::unordered_map<std::string, Error> replayed_errors_;
  std::unordered_map<std::string, std::shared_future<Outcome>> pending_;
  std::deque<std::chrono::steady_clock::time_point> window_;
  GatewayStats stats_;

  mutable std::mutex transcript_mu_;
  std::vector<TranscriptRecord> transcript_;
  std::ofstream transcript_out_;
};

struct ModelPrice {
  double input_per_million = 0.0;
  double output_per_million = 0.0;
};
using PriceTable = std::map<std::string, ModelPrice, std::less<>>;

/// Dollar cost of a usage total, or nothing if the model has no price entry.
std::optional<double> estimate_cost(const TokenUsage& usage, std::string_view model_id, const PriceTable& prices);

}  // namespace alignaudit
