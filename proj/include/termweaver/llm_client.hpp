#pragma once

#include <chrono>
#include <optional>
#include <string>
#include <vector>

#include "termweaver/chat.hpp"

namespace termweaver {

// Settings for a chat-completion endpoint (hosted or local; anything that
// speaks the common {model, messages, temperature} / choices[] schema).
// The API key comes only from the TERMWEAVER_API_KEY environment variable.
struct GenerationConfig {
  std::string endpoint_url;  // e.g. http://localhost:8080/v1
  std::string model_name;
  double temperature = 0.1;
  std::optional<int> max_output_tokens;
  std::chrono::milliseconds timeout{30000};
  int max_retries = 3;
  std::chrono::milliseconds backoff_base{500};

  // Throws ValidationError on out-of-range fields.
  void validate() const;
};

struct TranslationJob {
  std::string id;
  std::vector<ChatMessage> messages;
};

enum class JobStatus { ok, failed };

struct JobResult {
  std::string id;
  JobStatus status = JobStatus::failed;
  std::optional<std::string> output;
  int attempts = 0;
  std::optional<std::string> error;
};

// One request; retries on timeout/429/5xx with exponential backoff and
// jitter. Throws AuthError (401/403, no retry), RateLimited, TransportError,
// MalformedResponse. attempts_out, when given, receives the number of
// requests made, on success and on failure alike.
std::string complete(const std::vector<ChatMessage>& messages, const GenerationConfig& config,
                     int* attempts_out = nullptr);

// Runs jobs with at most concurrency_limit requests in flight; results in
// input order; per-job failures are captured, never thrown.
std::vector<JobResult> run_batch(const std::vector<TranslationJob>& jobs,
                                 const GenerationConfig& config,
                                 std::size_t concurrency_limit);

// Enforce the single-line output contract: strip code fences and enclosing
// quotes, collapse newline runs to one space, trim. Idempotent.
// Throws EmptyOutput when nothing remains.
std::string postprocess_translation(const std::string& raw);

}  // namespace termweaver
