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

#include <atomic>
#include <thread>

#include <gtest/gtest.h>
#include <httplib.h>

#include "alignaudit/retrieval.hpp"
#include "alignaudit/table_io.hpp"
#include "test_support.hpp"

namespace alignaudit {
namespace {

using namespace std::chrono_literals;

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::Io;
}

ModelRequest request(std::string prompt, std::string sample_tag = {}) {
  ModelRequest r;
  r.model_id = "gpt-4o-mini";
  r.prompt = std::move(prompt);
  r.temperature = 1.0;
  r.max_output_tokens = 64;
  r.request_tag = "tag";
  r.sample_tag = std::move(sample_tag);
  return r;
}

struct RecordingSleeper {
  std::shared_ptr<std::vector<std::chrono::milliseconds>> waits = std::make_shared<std::vector<std::chrono::milliseconds>>();
  void operator()(std::chrono::milliseconds d) const { waits->push_back(d); }
};

TEST(CacheKey, PinnedDigests) {
  EXPECT_EQ(cache_key(request("hello")), "3fed8fcc3eebf3cd9b9146c1835b09ff94e84d9832ae655c0467085b9f4546e0");
  ModelRequest r = request("hello", "repeat=2");
  r.temperature = 0.7;
  r.max_output_tokens = 32;
  EXPECT_EQ(cache_key(r), "bc57fc42b271f80bfa548f87c9656f2d231bc83d3dd99f3eaae7a5c50ab70722");
}

TEST(CacheKey, SensitiveToEveryField) {
  const auto base = cache_key(request("p"));
  auto r = request("p");
  r.request_tag = "other";
  EXPECT_EQ(cache_key(r), base);
  r = request("p");
  r.temperature = 0.0;
  EXPECT_NE(cache_key(r), base);
  r = request("p");
  r.model_id = "gpt-4o";
  EXPECT_NE(cache_key(r), base);
  r = request("p");
  r.max_output_tokens = 65;
  EXPECT_NE(cache_key(r), base);
  EXPECT_NE(cache_key(request("p", "repeat=1")), base);
  EXPECT_NE(cache_key(request("p ")), base);
}

TEST(Validate, RejectsBadRequests) {
  auto r = request("");
  EXPECT_EQ(code_of([&] { validate(r); }), ErrorCode::InvalidConfig);
  r = request("p");
  r.temperature = 2.5;
  EXPECT_EQ(code_of([&] { validate(r); }), ErrorCode::InvalidConfig);
  r = request("p");
  r.max_output_tokens = 0;
  EXPECT_EQ(code_of([&] { validate(r); }), ErrorCode::InvalidConfig);
}

TEST(RetryPolicy, ExponentialWithCap) {
  RetryPolicy p;
  EXPECT_EQ(p.delay(1), 500ms);
  EXPECT_EQ(p.delay(2), 1000ms);
  EXPECT_EQ(p.delay(4), 4000ms);
  EXPECT_EQ(p.delay(10), 30000ms);
}

TEST(Gateway, RetriesRateLimitsThenSucceeds) {
  ScriptedBackend backend({ErrorCode::RateLimited, ErrorCode::RateLimited, std::string("aligned")});
  RecordingSleeper sleeper;
  GatewayOptions opts;
  opts.sleeper = sleeper;
  Gateway gw(backend, opts);
  const auto resp = gw.complete(request("p"));
  EXPECT_EQ(resp.raw_text, "aligned");
  EXPECT_EQ(backend.calls(), 3u);
  EXPECT_EQ(*sleeper.waits, (std::vector<std::chrono::milliseconds>{500ms, 1000ms}));
  const auto st = gw.stats();
  EXPECT_EQ(st.retries, 2u);
  EXPECT_EQ(st.upstream_calls, 3u);
  ASSERT_EQ(gw.transcript().size(), 1u);
  EXPECT_EQ(gw.transcript()[0].attempts, 3);
}

TEST(Gateway, GivesUpAfterMaxRetries) {
  ScriptedBackend backend(std::vector<ScriptedBackend::Step>(10, ErrorCode::Transport));
  RecordingSleeper sleeper;
  GatewayOptions opts;
  opts.sleeper = sleeper;
  opts.retry.max_retries = 2;
  Gateway gw(backend, opts);
  EXPECT_EQ(code_of([&] { gw.complete(request("p")); }), ErrorCode::Transport);
  EXPECT_EQ(backend.calls(), 3u);
  EXPECT_EQ(gw.stats().failures, 1u);
  ASSERT_EQ(gw.transcript().size(), 1u);
  EXPECT_EQ(gw.transcript()[0].error, ErrorCode::Transport);
}

TEST(Gateway, PermanentErrorsAreNotRetried) {
  ScriptedBackend backend({ErrorCode::Auth});
  RecordingSleeper sleeper;
  GatewayOptions opts;
  opts.sleeper = sleeper;
  Gateway gw(backend, opts);
  EXPECT_EQ(code_of([&] { gw.complete(request("p")); }), ErrorCode::Auth);
  EXPECT_EQ(backend.calls(), 1u);
  EXPECT_TRUE(sleeper.waits->empty());
}

TEST(Gateway, NonErrorExceptionsBecomeProviderUnavailable) {
  FunctionBackend backend([](const ModelRequest&) -> std::string { throw std::runtime_error("boom"); });
  Gateway gw(backend);
  EXPECT_EQ(code_of([&] { gw.complete(request("p")); }), ErrorCode::ProviderUnavailable);
}

TEST(Gateway, CacheHitSkipsBackend) {
  std::atomic<int> calls{0};
  FunctionBackend backend([&](const ModelRequest&) {
    ++calls;
    return std::string("misaligned");
  });
  Gateway gw(backend);
  const auto first = gw.complete(request("p"));
  const auto second = gw.complete(request("p"));
  EXPECT_EQ(first.raw_text, second.raw_text);
  EXPECT_EQ(second.source, ResponseSource::Cache);
  EXPECT_EQ(calls.load(), 1);
  gw.complete(request("p", "repeat=1"));
  EXPECT_EQ(calls.load(), 2);
  EXPECT_EQ(gw.stats().cache_hits, 1u);
  EXPECT_EQ(gw.transcript().size(), 2u);
}

TEST(Gateway, CacheCanBeDisabled) {
  std::atomic<int> calls{0};
  FunctionBackend backend([&](const ModelRequest&) {
    ++calls;
    return std::string("x");
  });
  GatewayOptions opts;
  opts.use_cache = false;
  Gateway gw(backend, opts);
  gw.complete(request("p"));
  gw.complete(request("p"));
  EXPECT_EQ(calls.load(), 2);
}

TEST(Gateway, ConcurrentIdenticalRequestsShareOneCall) {
  std::atomic<int> calls{0};
  std::atomic<bool> release{false};
  FunctionBackend backend([&](const ModelRequest&) {
    ++calls;
    while (!release.load()) std::this_thread::sleep_for(1ms);
    return std::string("aligned");
  });
  Gateway gw(backend);
  std::vector<std::thread> threads;
  std::atomic<int> ok{0};
  for (int i = 0; i < 8; ++i) {
    threads.emplace_back([&] {
      if (gw.complete(request("same")).raw_text == "aligned") ++ok;
    });
  }
  while (gw.stats().requests < 8) std::this_thread::sleep_for(1ms);
  release = true;
  for (auto& t : threads) t.join();
  EXPECT_EQ(calls.load(), 1);
  EXPECT_EQ(ok.load(), 8);
}

TEST(Gateway, BoundsCallsInFlight) {
  std::atomic<int> now{0};
  std::atomic<int> peak{0};
  FunctionBackend backend([&](const ModelRequest&) {
    const int n = ++now;
    int p = peak.load();
    while (n > p && !peak.compare_exchange_weak(p, n)) {
    }
    std::this_thread::sleep_for(5ms);
    --now;
    return std::string("aligned");
  });
  GatewayOptions opts;
  opts.max_in_flight = 2;
  Gateway gw(backend, opts);
  std::vector<std::thread> threads;
  for (int i = 0; i < 8; ++i) threads.emplace_back([&, i] { gw.complete(request("p" + std::to_string(i))); });
  for (auto& t : threads) t.join();
  EXPECT_LE(peak.load(), 2);
  EXPECT_GE(peak.load(), 1);
}

TEST(Gateway, ThrottleWaitsOnceBudgetIsSpent) {
  FunctionBackend backend([](const ModelRequest&) { return std::string("x"); });
  std::atomic<int> waits{0};
  GatewayOptions opts;
  opts.requests_per_minute = 2;
  // the first wait ends the test by raising the budget out of reach
  opts.sleeper = [&](std::chrono::milliseconds d) {
    ++waits;
    EXPECT_GT(d, 50000ms);
    throw std::runtime_error("throttled");
  };
  Gateway gw(backend, opts);
  gw.complete(request("a"));
  gw.complete(request("b"));
  EXPECT_THROW(gw.complete(request("c")), std::runtime_error);
  EXPECT_EQ(waits.load(), 1);
}

TEST(Transcript, RoundTripsAndReplays) {
  testing::TempDir dir;
  const auto path = dir / "t.jsonl";
  {
    ScriptedBackend backend({std::string("aligned"), ErrorCode::Auth});
    GatewayOptions opts;
    opts.transcript_path = path;
    Gateway gw(backend, opts);
    gw.complete(request("one"));
    EXPECT_THROW(gw.complete(request("two")), Error);
  }
  const auto records = read_transcript(path);
  ASSERT_EQ(records.size(), 2u);
  EXPECT_EQ(records[0].cache_key, cache_key(request("one")));
  EXPECT_EQ(records[0].request.prompt, "one");
  EXPECT_EQ(records[0].response->raw_text, "aligned");
  EXPECT_FALSE(records[0].timestamp.empty());
  EXPECT_EQ(records[1].error, ErrorCode::Auth);
  EXPECT_EQ(to_json(transcript_record_from_json(to_json(records[1]))), to_json(records[1]));

  OfflineBackend offline;
  Gateway replay(offline);
  replay.preload(records);
  EXPECT_EQ(replay.complete(request("one")).raw_text, "aligned");
  EXPECT_EQ(code_of([&] { replay.complete(request("two")); }), ErrorCode::Auth);
  EXPECT_EQ(code_of([&] { replay.complete(request("three")); }), ErrorCode::ProviderUnavailable);
  EXPECT_EQ(replay.transcript().size(), 1u);  // only the live miss is recorded
}

TEST(Transcript, MalformedLinesNameTheLine) {
  testing::TempDir dir;
  write_file(dir / "t.jsonl", "{\"cache_key\":\"k\"}\n");
  try {
    read_transcript(dir / "t.jsonl");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::MalformedResponse);
    EXPECT_NE(std::string(e.what()).find(":1:"), std::string::npos);
  }
}

TEST(MockBackend, KeysThenRulesThenDefault) {
  auto j = nlohmann::json::parse(R"({
    "keys": {")" + cache_key(request("exact prompt")) + R"(": "from key"},
    "rules": [{"contains": ["alpha", "beta"], "response": "both"}, {"contains": ["alpha"], "response": "alpha only"}],
    "default": "fallback"})");
  auto mock = MockBackend::from_json(j);
  EXPECT_EQ(mock.complete(request("exact prompt")).raw_text, "from key");
  EXPECT_EQ(mock.complete(request("beta then alpha")).raw_text, "both");
  EXPECT_EQ(mock.complete(request("alpha")).raw_text, "alpha only");
  EXPECT_EQ(mock.complete(request("nothing")).raw_text, "fallback");
  EXPECT_EQ(MockBackend::from_json(mock.to_json()).to_json(), mock.to_json());
  MockBackend empty;
  EXPECT_EQ(code_of([&] { empty.complete(request("x")); }), ErrorCode::ProviderUnavailable);
}

TEST(EstimateCost, PerMillionTokens) {
  PriceTable prices = {{"m", {0.15, 0.60}}};
  EXPECT_NEAR(*estimate_cost({1000000, 500000}, "m", prices), 0.45, 1e-12);
  EXPECT_FALSE(estimate_cost({1, 1}, "other", prices));
}

// In-process OpenAI-compatible server; the path picks the behavior.
class LocalServer {
 public:
  LocalServer() {
    server_.Post("/ok", [this](const httplib::Request& req, httplib::Response& res) {
      last_auth_ = req.get_header_value("Authorization");
      last_body_ = req.body;
      res.set_content(R"({"choices":[{"message":{"content":"misaligned"}}],"usage":{"prompt_tokens":12,"completion_tokens":1}})",
                      "application/json");
    });
    server_.Post("/embed", [](const httplib::Request&, httplib::Response& res) {
      res.set_content(R"({"data":[{"embedding":[0.5,-1.0,2.0]}]})", "application/json");
    });
    for (int status : {400, 401, 403, 429, 500, 503}) {
      server_.Post("/" + std::to_string(status), [status](const httplib::Request&, httplib::Response& res) {
        res.status = status;
        res.set_content("{}", "application/json");
      });
    }
    server_.Post("/garbage", [](const httplib::Request&, httplib::Response& res) {
      res.set_content("<html>", "text/html");
    });
    server_.Post("/shape", [](const httplib::Request&, httplib::Response& res) {
      res.set_content(R"({"choices":[]})", "application/json");
    });
    port_ = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }
  ~LocalServer() {
    server_.stop();
    thread_.join();
  }
  std::string endpoint() const { return "http://127.0.0.1:" + std::to_string(port_); }

  std::string last_auth_;
  std::string last_body_;

 private:
  httplib::Server server_;
  int port_ = 0;
  std::thread thread_;
};

ChatEndpointConfig chat_config(const LocalServer& s, std::string path) {
  ChatEndpointConfig c;
  c.endpoint = s.endpoint();
  c.path = std::move(path);
  c.api_key = "sk-test";
  c.timeout = std::chrono::seconds(5);
  return c;
}

TEST(OpenAiChatBackend, ParsesCompletion) {
  LocalServer server;
  OpenAiChatBackend backend(chat_config(server, "/ok"));
  const auto resp = backend.complete(request("hello"));
  EXPECT_EQ(resp.raw_text, "misaligned");
  EXPECT_EQ(resp.usage.input, 12);
  EXPECT_EQ(resp.usage.output, 1);
  EXPECT_EQ(server.last_auth_, "Bearer sk-test");
  const auto body = nlohmann::json::parse(server.last_body_);
  EXPECT_EQ(body["model"], "gpt-4o-mini");
  EXPECT_EQ(body["messages"][0]["content"], "hello");
  EXPECT_EQ(body["max_tokens"], 64);
}

TEST(OpenAiChatBackend, MapsStatusCodes) {
  LocalServer server;
  const std::pair<const char*, ErrorCode> cases[] = {
      {"/429", ErrorCode::RateLimited},     {"/401", ErrorCode::Auth},
      {"/403", ErrorCode::Auth},            {"/500", ErrorCode::Transport},
      {"/503", ErrorCode::Transport},       {"/400", ErrorCode::MalformedResponse},
      {"/garbage", ErrorCode::MalformedResponse}, {"/shape", ErrorCode::MalformedResponse},
  };
  for (const auto& [path, code] : cases) {
    OpenAiChatBackend backend(chat_config(server, path));
    EXPECT_EQ(code_of([&] { backend.complete(request("p")); }), code) << path;
  }
}

TEST(OpenAiChatBackend, UnreachableHostIsTransport) {
  ChatEndpointConfig c;
  c.endpoint = "http://127.0.0.1:1";
  c.timeout = std::chrono::seconds(2);
  OpenAiChatBackend backend(c);
  EXPECT_EQ(code_of([&] { backend.complete(request("p")); }), ErrorCode::Transport);
}

TEST(OpenAiChatBackend, GatewayRetriesServerErrors) {
  LocalServer server;
  OpenAiChatBackend backend(chat_config(server, "/503"));
  RecordingSleeper sleeper;
  GatewayOptions opts;
  opts.sleeper = sleeper;
  opts.retry.max_retries = 3;
  Gateway gw(backend, opts);
  EXPECT_EQ(code_of([&] { gw.complete(request("p")); }), ErrorCode::Transport);
  EXPECT_EQ(sleeper.waits->size(), 3u);
  EXPECT_EQ(gw.stats().upstream_calls, 4u);
}

TEST(RemoteEmbedder, ReadsVectorAndChecksDimension) {
  LocalServer server;
  RemoteEmbedderConfig c;
  c.endpoint = server.endpoint();
  c.path = "/embed";
  c.dimension = 3;
  RemoteEmbedder e(c);
  EXPECT_EQ(e.embed("text").components, (std::vector<double>{0.5, -1.0, 2.0}));
  EXPECT_EQ(e.id(), "remote:all-MiniLM-L6-v2:d=3");
  c.dimension = 4;
  RemoteEmbedder wrong(c);
  EXPECT_EQ(code_of([&] { wrong.embed("text"); }), ErrorCode::DimensionMismatch);
  c.path = "/500";
  RemoteEmbedder failing(c);
  EXPECT_EQ(code_of([&] { failing.embed("text"); }), ErrorCode::ProviderUnavailable);
  EXPECT_EQ(code_of([&] { e.embed(" "); }), ErrorCode::EmptyText);
}

}  // namespace
}  // namespace alignaudit
