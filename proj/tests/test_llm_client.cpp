#include "termweaver/llm_client.hpp"

#include <atomic>
#include <functional>
#include <map>
#include <mutex>
#include <random>
#include <thread>

#include "doctest.h"
#include "httplib.h"
#include "termweaver/errors.hpp"

using namespace termweaver;

namespace {

// Scriptable chat-completions endpoint with an in-flight gauge.
class MockEndpoint {
 public:
  // handler(call_number_for_this_prompt, prompt) -> (status, content)
  using Handler = std::function<std::pair<int, std::string>(int, const std::string&)>;

  explicit MockEndpoint(Handler handler) : handler_(std::move(handler)) {
    server_.Post("/v1/chat/completions", [this](const httplib::Request& req,
                                                httplib::Response& res) {
      const int now = ++in_flight_;
      {
        std::lock_guard<std::mutex> lock(mu_);
        max_in_flight_ = std::max(max_in_flight_, now);
      }
      std::this_thread::sleep_for(std::chrono::milliseconds(5));

      auto body = nlohmann::json::parse(req.body);
      const std::string prompt =
          body.at("messages").back().at("content").get<std::string>();
      int call;
      {
        std::lock_guard<std::mutex> lock(mu_);
        call = ++calls_[prompt];
      }
      auto [status, content] = handler_(call, prompt);
      res.status = status;
      if (status == 200) {
        nlohmann::json out{
            {"choices", {{{"message", {{"role", "assistant"}, {"content", content}}}}}}};
        res.set_content(out.dump(), "application/json");
      } else {
        res.set_content("{\"error\":\"injected\"}", "application/json");
      }
      --in_flight_;
    });
    port_ = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }

  ~MockEndpoint() {
    server_.stop();
    thread_.join();
  }

  GenerationConfig config() const {
    GenerationConfig c;
    c.endpoint_url = "http://127.0.0.1:" + std::to_string(port_) + "/v1";
    c.model_name = "mock-model";
    c.backoff_base = std::chrono::milliseconds(1);
    c.timeout = std::chrono::milliseconds(5000);
    return c;
  }

  int max_in_flight() const { return max_in_flight_; }

 private:
  Handler handler_;
  httplib::Server server_;
  std::thread thread_;
  int port_ = 0;
  std::atomic<int> in_flight_{0};
  std::mutex mu_;
  int max_in_flight_ = 0;
  std::map<std::string, int> calls_;
};

std::vector<ChatMessage> prompt(const std::string& text) {
  return {{Role::system, "sys"}, {Role::user, text}};
}

}  // namespace

TEST_CASE("complete returns the endpoint's content") {
  MockEndpoint mock([](int, const std::string&) { return std::make_pair(200, "번역 결과"); });
  CHECK(complete(prompt("hello"), mock.config()) == "번역 결과");
}

TEST_CASE("complete retries through transient failures") {
  MockEndpoint mock([](int call, const std::string&) {
    if (call <= 2) return std::make_pair(call == 1 ? 500 : 429, std::string());
    return std::make_pair(200, std::string("ok"));
  });
  auto cfg = mock.config();
  cfg.max_retries = 3;
  int attempts = 0;
  CHECK(complete(prompt("p"), cfg, &attempts) == "ok");
  CHECK(attempts == 3);
}

TEST_CASE("complete raises AuthError without retrying") {
  MockEndpoint mock([](int, const std::string&) { return std::make_pair(401, std::string()); });
  auto cfg = mock.config();
  cfg.max_retries = 3;
  int attempts = 0;
  CHECK_THROWS_AS(complete(prompt("p"), cfg, &attempts), AuthError);
  CHECK(attempts == 1);
}

TEST_CASE("persistent 429 exhausts the budget and raises RateLimited") {
  MockEndpoint mock([](int, const std::string&) { return std::make_pair(429, std::string()); });
  auto cfg = mock.config();
  cfg.max_retries = 2;
  int attempts = 0;
  CHECK_THROWS_AS(complete(prompt("p"), cfg, &attempts), RateLimited);
  CHECK(attempts == 3);
}

TEST_CASE("malformed payload raises MalformedResponse") {
  httplib::Server server;
  server.Post("/v1/chat/completions", [](const httplib::Request&, httplib::Response& res) {
    res.set_content("{\"nonsense\": true}", "application/json");
  });
  const int port = server.bind_to_any_port("127.0.0.1");
  std::thread t([&] { server.listen_after_bind(); });
  server.wait_until_ready();
  GenerationConfig cfg;
  cfg.endpoint_url = "http://127.0.0.1:" + std::to_string(port) + "/v1";
  cfg.model_name = "mock";
  CHECK_THROWS_AS(complete(prompt("p"), cfg), MalformedResponse);
  server.stop();
  t.join();
}

TEST_CASE("config validation") {
  GenerationConfig c;
  c.endpoint_url = "http://x";
  c.model_name = "m";
  c.temperature = 3.0;
  CHECK_THROWS_AS(c.validate(), ValidationError);
  c.temperature = 0.1;
  c.max_retries = -1;
  CHECK_THROWS_AS(c.validate(), ValidationError);
}

TEST_CASE("run_batch preserves order and bounds concurrency") {
  MockEndpoint mock([](int call, const std::string& p) {
    // every 10th job fails permanently with a retryable status
    const int idx = std::stoi(p);
    if (idx % 10 == 9) return std::make_pair(500, std::string());
    return std::make_pair(200, "out-" + p);
  });
  auto cfg = mock.config();
  cfg.max_retries = 1;

  std::vector<TranslationJob> jobs;
  for (int i = 0; i < 50; ++i) jobs.push_back({std::to_string(i), prompt(std::to_string(i))});
  auto results = run_batch(jobs, cfg, 4);
  REQUIRE(results.size() == 50);
  CHECK(mock.max_in_flight() <= 4);
  for (int i = 0; i < 50; ++i) {
    CHECK(results[i].id == std::to_string(i));
    CHECK(results[i].attempts >= 1);
    CHECK(results[i].attempts <= cfg.max_retries + 1);
    if (i % 10 == 9) {
      CHECK(results[i].status == JobStatus::failed);
      CHECK(results[i].error.has_value());
      CHECK_FALSE(results[i].output.has_value());
    } else {
      REQUIRE(results[i].status == JobStatus::ok);
      CHECK(*results[i].output == "out-" + std::to_string(i));
    }
  }
}

TEST_CASE("run_batch with zero jobs") {
  MockEndpoint mock([](int, const std::string&) { return std::make_pair(200, "x"); });
  CHECK(run_batch({}, mock.config(), 4).empty());
}

TEST_CASE("run_batch at concurrency 1 is sequential") {
  MockEndpoint mock([](int, const std::string& p) { return std::make_pair(200, p); });
  std::vector<TranslationJob> jobs;
  for (int i = 0; i < 8; ++i) jobs.push_back({std::to_string(i), prompt(std::to_string(i))});
  auto results = run_batch(jobs, mock.config(), 1);
  CHECK(results.size() == 8);
  CHECK(mock.max_in_flight() == 1);
}

TEST_CASE("postprocess_translation rules") {
  CHECK(postprocess_translation("안녕하세요\n") == "안녕하세요");
  CHECK(postprocess_translation("```\n결과 문장\n```") == "결과 문장");
  CHECK(postprocess_translation("```text\n결과 문장\n```") == "결과 문장");
  CHECK(postprocess_translation("줄1\n줄2") == "줄1 줄2");
  CHECK(postprocess_translation("\"quoted output\"") == "quoted output");
  CHECK(postprocess_translation("  plain  ") == "plain");
  CHECK_THROWS_AS(postprocess_translation("   \n\n  "), EmptyOutput);
  CHECK_THROWS_AS(postprocess_translation("\"\""), EmptyOutput);
}

TEST_CASE("postprocess_translation is idempotent") {
  std::mt19937_64 rng(77);
  const std::string pieces[] = {"단어", "\n", "\"", "'", "```", " ", "a", "結果", "\r\n"};
  for (int trial = 0; trial < 500; ++trial) {
    std::string s;
    const int n = static_cast<int>(rng() % 12);
    for (int i = 0; i < n; ++i) s += pieces[rng() % std::size(pieces)];
    std::string once;
    try {
      once = postprocess_translation(s);
    } catch (const EmptyOutput&) {
      continue;
    }
    CHECK(postprocess_translation(once) == once);
    CHECK(once.find('\n') == std::string::npos);
  }
}
