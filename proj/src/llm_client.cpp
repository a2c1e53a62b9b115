#include "termweaver/llm_client.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <random>
#include <thread>

#include "httplib.h"
#include "termweaver/errors.hpp"
#include "termweaver/unicode.hpp"

namespace termweaver {

void GenerationConfig::validate() const {
  if (endpoint_url.empty()) throw ValidationError("endpoint_url is empty");
  if (model_name.empty()) throw ValidationError("model_name is empty");
  if (temperature < 0.0 || temperature > 2.0)
    throw ValidationError("temperature must be in [0, 2]");
  if (max_retries < 0) throw ValidationError("max_retries must be >= 0");
  if (timeout.count() <= 0) throw ValidationError("timeout must be positive");
}

namespace {

struct ParsedUrl {
  std::string origin;     // scheme://host[:port]
  std::string base_path;  // possibly empty, no trailing slash
};

ParsedUrl parse_url(const std::string& url) {
  auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos) throw ValidationError("endpoint_url needs a scheme: " + url);
  auto path_start = url.find('/', scheme_end + 3);
  ParsedUrl p;
  if (path_start == std::string::npos) {
    p.origin = url;
  } else {
    p.origin = url.substr(0, path_start);
    p.base_path = url.substr(path_start);
    while (!p.base_path.empty() && p.base_path.back() == '/') p.base_path.pop_back();
  }
  return p;
}

std::chrono::milliseconds backoff_delay(const GenerationConfig& config, int attempt,
                                        std::mt19937_64& rng) {
  double ms = static_cast<double>(config.backoff_base.count()) *
              static_cast<double>(1u << std::min(attempt - 1, 20));
  std::uniform_real_distribution<double> jitter(0.75, 1.25);
  ms *= jitter(rng);
  ms = std::min(ms, 30000.0);
  return std::chrono::milliseconds(static_cast<long long>(ms));
}

bool retryable_status(int status) {
  return status == 429 || (status >= 500 && status < 600);
}

}  // namespace

std::string complete(const std::vector<ChatMessage>& messages,
                     const GenerationConfig& config, int* attempts_out) {
  config.validate();
  if (messages.empty()) throw ValidationError("no messages");
  int local_attempts = 0;
  if (!attempts_out) attempts_out = &local_attempts;
  *attempts_out = 0;

  const ParsedUrl url = parse_url(config.endpoint_url);
  nlohmann::ordered_json body{{"model", config.model_name},
                              {"messages", messages_to_json(messages)},
                              {"temperature", config.temperature}};
  if (config.max_output_tokens) body["max_tokens"] = *config.max_output_tokens;
  const std::string payload = body.dump();

  httplib::Client client(url.origin);
  client.set_connection_timeout(std::chrono::duration_cast<std::chrono::seconds>(config.timeout));
  client.set_read_timeout(std::chrono::duration_cast<std::chrono::seconds>(config.timeout));
  httplib::Headers headers;
  if (const char* key = std::getenv("TERMWEAVER_API_KEY"))
    headers.emplace("Authorization", std::string("Bearer ") + key);

  std::mt19937_64 rng(std::random_device{}());
  std::string last_error;
  for (int attempt = 1; attempt <= config.max_retries + 1; ++attempt) {
    *attempts_out = attempt;
    auto res = client.Post(url.base_path + "/chat/completions", headers, payload,
                           "application/json");
    if (!res) {
      last_error = "transport: " + httplib::to_string(res.error());
    } else if (res->status == 401 || res->status == 403) {
      throw AuthError("authentication failed (HTTP " + std::to_string(res->status) + ")");
    } else if (res->status == 200) {
      try {
        auto doc = nlohmann::json::parse(res->body);
        return doc.at("choices").at(0).at("message").at("content").get<std::string>();
      } catch (const nlohmann::json::exception& e) {
        throw MalformedResponse(std::string("bad completion payload: ") + e.what());
      }
    } else if (retryable_status(res->status)) {
      last_error = "HTTP " + std::to_string(res->status);
    } else {
      throw TransportError("HTTP " + std::to_string(res->status));
    }
    if (attempt <= config.max_retries)
      std::this_thread::sleep_for(backoff_delay(config, attempt, rng));
  }
  if (last_error.substr(0, 8) == "HTTP 429")
    throw RateLimited("rate limited after " + std::to_string(config.max_retries + 1) +
                      " attempts");
  throw TransportError(last_error + " after " + std::to_string(config.max_retries + 1) +
                       " attempts");
}

std::vector<JobResult> run_batch(const std::vector<TranslationJob>& jobs,
                                 const GenerationConfig& config,
                                 std::size_t concurrency_limit) {
  config.validate();
  if (concurrency_limit < 1) throw ValidationError("concurrency_limit must be >= 1");
  std::vector<JobResult> results(jobs.size());
  if (jobs.empty()) return results;

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    while (true) {
      const std::size_t i = next.fetch_add(1);
      if (i >= jobs.size()) return;
      JobResult r;
      r.id = jobs[i].id;
      int attempts = 0;
      try {
        if (jobs[i].messages.empty() || jobs[i].messages.back().role != Role::user)
          throw ValidationError("job " + jobs[i].id + ": final message must be user");
        r.output = complete(jobs[i].messages, config, &attempts);
        r.status = JobStatus::ok;
      } catch (const std::exception& e) {
        r.status = JobStatus::failed;
        r.error = e.what();
      }
      r.attempts = std::max(attempts, 1);
      results[i] = std::move(r);
    }
  };

  const std::size_t n_threads = std::min(concurrency_limit, jobs.size());
  std::vector<std::thread> threads;
  threads.reserve(n_threads);
  for (std::size_t t = 0; t < n_threads; ++t) threads.emplace_back(worker);
  for (auto& t : threads) t.join();
  return results;
}

std::string postprocess_translation(const std::string& raw) {
  std::string s = raw;
  // Iterate to a fixpoint so the transform is idempotent.
  for (int pass = 0; pass < 16; ++pass) {
    std::string before = s;
    s = unicode::trim(s);
    // Code fence: ```lang\n ... \n```
    if (s.size() >= 6 && s.compare(0, 3, "```") == 0 &&
        s.compare(s.size() - 3, 3, "```") == 0) {
      auto nl = s.find('\n');
      if (nl != std::string::npos && nl < s.size() - 3) {
        s = s.substr(nl + 1, s.size() - 3 - (nl + 1));
      }
    }
    s = unicode::trim(s);
    // Enclosing matching quotes.
    if (s.size() >= 2 && (s.front() == '"' || s.front() == '\'') && s.back() == s.front())
      s = s.substr(1, s.size() - 2);
    // Newline runs -> single space.
    std::string collapsed;
    std::size_t i = 0;
    while (i < s.size()) {
      if (s[i] == '\n' || s[i] == '\r') {
        while (i < s.size() && (s[i] == '\n' || s[i] == '\r')) ++i;
        if (!collapsed.empty() && i < s.size()) collapsed += ' ';
      } else {
        collapsed += s[i++];
      }
    }
    s = unicode::trim(collapsed);
    if (s == before) break;
  }
  if (s.empty()) throw EmptyOutput();
  return s;
}

}  // namespace termweaver
