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

#include "alignaudit/gateway.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <ctime>
#include <sstream>
#include <thread>

#include <spdlog/spdlog.h>

#include "alignaudit/table_io.hpp"

namespace alignaudit {
namespace {

using Clock = std::chrono::steady_clock;

std::string shortest(double v) {
  char buf[32];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, end);
}

std::int64_t word_count(std::string_view s) {
  std::int64_t n = 0;
  bool in_word = false;
  for (char c : s) {
    bool space = std::isspace(static_cast<unsigned char>(c));
    if (!space && !in_word) ++n;
    in_word = !space;
  }
  return n;
}

ModelResponse mock_response(const ModelRequest& request, std::string text) {
  ModelResponse r;
  r.usage = {word_count(request.prompt), word_count(text)};
  r.raw_text = std::move(text);
  r.source = ResponseSource::Mock;
  return r;
}

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(now.time_since_epoch()).count() % 1000;
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[40];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%S", &tm);
  char out[48];
  std::snprintf(out, sizeof out, "%s.%03dZ", buf, static_cast<int>(ms));
  return out;
}

std::optional<ResponseSource> parse_source(std::string_view s) {
  if (s == "live") return ResponseSource::Live;
  if (s == "cache") return ResponseSource::Cache;
  if (s == "mock") return ResponseSource::Mock;
  return std::nullopt;
}

}  // namespace

void validate(const ModelRequest& request) {
  if (request.model_id.empty()) throw Error(ErrorCode::InvalidConfig, "model_id is empty");
  if (trim(request.prompt).empty()) throw Error(ErrorCode::InvalidConfig, "prompt is empty");
  if (!std::isfinite(request.temperature) || request.temperature < 0.0 || request.temperature > 2.0) {
    throw Error(ErrorCode::InvalidConfig, "temperature must lie in [0, 2]");
  }
  if (request.max_output_tokens <= 0) throw Error(ErrorCode::InvalidConfig, "max_output_tokens must be positive");
}

std::string_view to_string(ResponseSource s) {
  switch (s) {
    case ResponseSource::Live: return "live";
    case ResponseSource::Cache: return "cache";
    case ResponseSource::Mock: return "mock";
  }
  return "?";
}

std::string cache_key(const ModelRequest& request) {
  std::string material = "v1\n";
  material += request.model_id;
  material += '\n';
  material += shortest(request.temperature);
  material += '\n';
  material += std::to_string(request.max_output_tokens);
  material += '\n';
  material += request.prompt;
  if (!request.sample_tag.empty()) {
    material += "\nsample=";
    material += request.sample_tag;
  }
  return sha256_hex(material);
}

// --- mock backends ---------------------------------------------------------

MockBackend MockBackend::from_json(const nlohmann::json& j) {
  MockBackend m;
  try {
    if (j.contains("keys")) {
      for (const auto& [k, v] : j.at("keys").items()) m.add_key(k, v.get<std::string>());
    }
    if (j.contains("rules")) {
      for (const auto& r : j.at("rules")) {
        m.add_rule({r.at("contains").get<std::vector<std::string>>(), r.at("response").get<std::string>()});
      }
    }
    if (j.contains("default") && !j.at("default").is_null()) m.set_default(j.at("default").get<std::string>());
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::InvalidConfig, std::string("mock map: ") + e.what());
  }
  return m;
}

MockBackend MockBackend::from_file(const std::filesystem::path& path) {
  try {
    return from_json(nlohmann::json::parse(read_file(path)));
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::InvalidConfig, path.string() + ": " + e.what());
  }
}

nlohmann::json MockBackend::to_json() const {
  nlohmann::json j;
  j["keys"] = keys_;
  j["rules"] = nlohmann::json::array();
  for (const auto& r : rules_) j["rules"].push_back({{"contains", r.contains}, {"response", r.response}});
  j["default"] = default_ ? nlohmann::json(*default_) : nlohmann::json();
  return j;
}

ModelResponse MockBackend::complete(const ModelRequest& request) {
  if (auto it = keys_.find(cache_key(request)); it != keys_.end()) return mock_response(request, it->second);
  for (const auto& rule : rules_) {
    bool all = std::all_of(rule.contains.begin(), rule.contains.end(),
                           [&](const std::string& s) { return request.prompt.find(s) != std::string::npos; });
    if (all) return mock_response(request, rule.response);
  }
  if (default_) return mock_response(request, *default_);
  throw Error(ErrorCode::ProviderUnavailable, "mock map has no entry for request " + request.request_tag);
}

ModelResponse FunctionBackend::complete(const ModelRequest& request) { return mock_response(request, fn_(request)); }

ModelResponse ScriptedBackend::complete(const ModelRequest& request) {
  std::optional<Step> step;
  {
    std::lock_guard lock(mu_);
    ++calls_;
    if (!steps_.empty()) {
      step = std::move(steps_.front());
      steps_.pop_front();
    }
  }
  if (!step) {
    if (!fallback_) throw Error(ErrorCode::ProviderUnavailable, "script exhausted");
    return fallback_->complete(request);
  }
  if (auto* code = std::get_if<ErrorCode>(&*step)) throw Error(*code, "scripted failure");
  return mock_response(request, std::get<std::string>(*step));
}

size_t ScriptedBackend::calls() const {
  std::lock_guard lock(mu_);
  return calls_;
}

ModelResponse OfflineBackend::complete(const ModelRequest& request) {
  throw Error(ErrorCode::ProviderUnavailable,
              "live backend disabled; no recorded response for request " + request.request_tag);
}

// --- transcript ------------------------------------------------------------

nlohmann::json to_json(const TranscriptRecord& r) {
  nlohmann::json j;
  j["cache_key"] = r.cache_key;
  j["request"] = {{"model_id", r.request.model_id},
                  {"prompt", r.request.prompt},
                  {"temperature", r.request.temperature},
                  {"max_output_tokens", r.request.max_output_tokens},
                  {"request_tag", r.request.request_tag},
                  {"sample_tag", r.request.sample_tag}};
  if (r.response) {
    j["response"] = {{"raw_text", r.response->raw_text},
                     {"usage", {{"input", r.response->usage.input}, {"output", r.response->usage.output}}},
                     {"latency_ms", r.response->latency.count()},
                     {"source", to_string(r.response->source)}};
  }
  if (r.error) j["error"] = {{"code", to_string(*r.error)}, {"message", r.error_message}};
  j["attempts"] = r.attempts;
  j["timestamp"] = r.timestamp;
  return j;
}

TranscriptRecord transcript_record_from_json(const nlohmann::json& j) {
  TranscriptRecord r;
  r.cache_key = j.at("cache_key").get<std::string>();
  const auto& q = j.at("request");
  r.request.model_id = q.at("model_id").get<std::string>();
  r.request.prompt = q.at("prompt").get<std::string>();
  r.request.temperature = q.at("temperature").get<double>();
  r.request.max_output_tokens = q.at("max_output_tokens").get<int>();
  r.request.request_tag = q.value("request_tag", "");
  r.request.sample_tag = q.value("sample_tag", "");
  if (j.contains("response")) {
    const auto& p = j.at("response");
    ModelResponse resp;
    resp.raw_text = p.at("raw_text").get<std::string>();
    resp.usage = {p.at("usage").value("input", std::int64_t{0}), p.at("usage").value("output", std::int64_t{0})};
    resp.latency = std::chrono::milliseconds(p.value("latency_ms", std::int64_t{0}));
    resp.source = parse_source(p.value("source", "live")).value_or(ResponseSource::Live);
    r.response = std::move(resp);
  }
  if (j.contains("error")) {
    auto code = parse_error_code(j.at("error").at("code").get<std::string>());
    if (!code) throw Error(ErrorCode::MalformedResponse, "unknown error code in transcript");
    r.error = *code;
    r.error_message = j.at("error").value("message", "");
  }
  if (!r.response && !r.error) throw Error(ErrorCode::MalformedResponse, "record has neither response nor error");
  r.attempts = j.value("attempts", 1);
  r.timestamp = j.value("timestamp", "");
  return r;
}

std::vector<TranscriptRecord> read_transcript(const std::filesystem::path& path) {
  std::istringstream in(read_file(path));
  std::vector<TranscriptRecord> out;
  std::string line;
  size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (trim(line).empty()) continue;
    try {
      out.push_back(transcript_record_from_json(nlohmann::json::parse(line)));
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::MalformedResponse, path.string() + ":" + std::to_string(n) + ": " + e.what());
    } catch (const Error& e) {
      throw Error(ErrorCode::MalformedResponse, path.string() + ":" + std::to_string(n) + ": " + e.detail());
    }
  }
  return out;
}

// --- gateway ---------------------------------------------------------------

std::chrono::milliseconds RetryPolicy::delay(int retry) const {
  double ms = static_cast<double>(base_delay.count()) * std::pow(multiplier, retry - 1);
  ms = std::min(ms, static_cast<double>(max_delay.count()));
  return std::chrono::milliseconds(static_cast<std::int64_t>(ms));
}

Gateway::Gateway(ChatBackend& backend, GatewayOptions options)
    : backend_(backend), backend_id_(backend.id()), options_(std::move(options)) {
  if (options_.max_in_flight == 0) options_.max_in_flight = 1;
  if (!options_.sleeper) options_.sleeper = [](std::chrono::milliseconds d) { std::this_thread::sleep_for(d); };
  if (!options_.transcript_path.empty()) {
    if (options_.transcript_path.has_parent_path()) {
      std::filesystem::create_directories(options_.transcript_path.parent_path());
    }
    transcript_out_.open(options_.transcript_path, std::ios::app | std::ios::binary);
    if (!transcript_out_) throw Error(ErrorCode::Io, "cannot open transcript " + options_.transcript_path.string());
  }
}

void Gateway::preload(std::span<const TranscriptRecord> records) {
  std::lock_guard lock(mu_);
  for (const auto& r : records) {
    if (r.response) {
      cache_[r.cache_key] = *r.response;
    } else if (r.error) {
      replayed_errors_.insert_or_assign(r.cache_key, Error(*r.error, r.error_message));
    }
  }
}

GatewayStats Gateway::stats() const {
  std::lock_guard lock(mu_);
  return stats_;
}

std::vector<TranscriptRecord> Gateway::transcript() const {
  std::lock_guard lock(transcript_mu_);
  return transcript_;
}

void Gateway::record(TranscriptRecord rec) {
  std::lock_guard lock(transcript_mu_);
  if (transcript_out_.is_open()) {
    transcript_out_ << to_json(rec).dump() << '\n';
    transcript_out_.flush();
  }
  transcript_.push_back(std::move(rec));
}

void Gateway::throttle() {
  if (options_.requests_per_minute <= 0) return;
  for (;;) {
    std::chrono::milliseconds wait{0};
    {
      std::lock_guard lock(mu_);
      const auto now = Clock::now();
      while (!window_.empty() && now - window_.front() >= std::chrono::minutes(1)) window_.pop_front();
      if (window_.size() < static_cast<size_t>(options_.requests_per_minute)) {
        window_.push_back(now);
        return;
      }
      wait = std::chrono::duration_cast<std::chrono::milliseconds>(window_.front() + std::chrono::minutes(1) - now) +
             std::chrono::milliseconds(1);
    }
    options_.sleeper(wait);
  }
}

Gateway::Outcome Gateway::call_upstream(const ModelRequest& request, int& attempts) {
  for (int retry = 0;; ++retry) {
    throttle();
    ++attempts;
    const auto start = Clock::now();
    try {
      ModelResponse resp = backend_.complete(request);
      resp.latency = std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() - start);
      std::lock_guard lock(mu_);
      ++stats_.upstream_calls;
      stats_.usage += resp.usage;
      return resp;
    } catch (const Error& e) {
      {
        std::lock_guard lock(mu_);
        ++stats_.upstream_calls;
      }
      if (!is_transient(e.code()) || retry >= options_.retry.max_retries) return e;
      const auto d = options_.retry.delay(retry + 1);
      spdlog::warn("request {}: {} (retry {}/{} in {} ms)", request.request_tag, e.what(), retry + 1,
                   options_.retry.max_retries, d.count());
      {
        std::lock_guard lock(mu_);
        ++stats_.retries;
      }
      options_.sleeper(d);
    } catch (const std::exception& e) {
      {
        std::lock_guard lock(mu_);
        ++stats_.upstream_calls;
      }
      return Error(ErrorCode::ProviderUnavailable, e.what());
    }
  }
}

ModelResponse Gateway::complete(const ModelRequest& request) {
  validate(request);
  const std::string key = cache_key(request);

  std::promise<Outcome> promise;
  std::shared_future<Outcome> shared;
  bool owner = false;
  {
    std::unique_lock lock(mu_);
    ++stats_.requests;
    if (options_.use_cache) {
      if (auto it = cache_.find(key); it != cache_.end()) {
        ++stats_.cache_hits;
        ModelResponse r = it->second;
        r.source = ResponseSource::Cache;
        return r;
      }
      if (auto it = replayed_errors_.find(key); it != replayed_errors_.end()) {
        ++stats_.cache_hits;
        ++stats_.failures;
        throw it->second;
      }
      if (auto it = pending_.find(key); it != pending_.end()) shared = it->second;
    }
    if (!shared.valid()) {
      owner = true;
      shared = promise.get_future().share();
      if (options_.use_cache) pending_.emplace(key, shared);
    }
  }

  if (!owner) {
    Outcome out = shared.get();
    std::lock_guard lock(mu_);
    ++stats_.cache_hits;
    if (auto* e = std::get_if<Error>(&out)) throw *e;
    ModelResponse r = std::get<ModelResponse>(out);
    r.source = ResponseSource::Cache;
    return r;
  }

  {
    std::unique_lock lock(mu_);
    slots_cv_.wait(lock, [&] { return in_flight_ < options_.max_in_flight; });
    ++in_flight_;
  }
  int attempts = 0;
  Outcome out = call_upstream(request, attempts);
  {
    std::lock_guard lock(mu_);
    --in_flight_;
  }
  slots_cv_.notify_one();

  TranscriptRecord rec{key, request, std::nullopt, std::nullopt, {}, attempts, utc_timestamp()};
  if (auto* e = std::get_if<Error>(&out)) {
    rec.error = e->code();
    rec.error_message = e->detail();
  } else {
    rec.response = std::get<ModelResponse>(out);
  }
  record(std::move(rec));

  {
    std::lock_guard lock(mu_);
    if (auto* r = std::get_if<ModelResponse>(&out); r && options_.use_cache) cache_.emplace(key, *r);
    if (std::holds_alternative<Error>(out)) ++stats_.failures;
    pending_.erase(key);
  }
  promise.set_value(out);
  if (auto* e = std::get_if<Error>(&out)) throw *e;
  return std::get<ModelResponse>(std::move(out));
}

std::optional<double> estimate_cost(const TokenUsage& usage, std::string_view model_id, const PriceTable& prices) {
  auto it = prices.find(model_id);
  if (it == prices.end()) return std::nullopt;
  return (static_cast<double>(usage.input) * it->second.input_per_million +
          static_cast<double>(usage.output) * it->second.output_per_million) /
         1e6;
}

}  // namespace alignaudit
