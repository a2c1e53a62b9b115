#pragma once

#include <string>
#include <utility>
#include <vector>

#include "termweaver/chat.hpp"
#include "termweaver/corpus.hpp"
#include "termweaver/prompt_template.hpp"

namespace termweaver {

// Ordered (src_term, tgt_term) pairs extracted from one sentence pair.
struct ExtractionResult {
  std::vector<std::pair<std::string, std::string>> pairs;

  bool operator==(const ExtractionResult&) const = default;
};

enum class RejectReason { SrcNotFound, TgtNotFound, WholeSentence, DuplicateKey };

const char* reject_reason_name(RejectReason r);

struct Rejection {
  std::pair<std::string, std::string> pair;
  RejectReason reason;
};

struct ValidationPolicy {
  // Whole-sentence guard: src_term scalar length must not exceed
  // max_fraction of the source sentence's scalar length.
  double max_fraction = 0.5;
};

struct ValidationOutcome {
  ExtractionResult accepted;
  std::vector<Rejection> rejections;
};

// [system, user] messages for one extraction request.
std::vector<ChatMessage> build_extraction_prompt(const SentencePair& pair,
                                                 const PromptTemplate& tmpl);

// Pulls the first balanced {...} mapping out of a model response, ignoring
// surrounding prose and code fences. Accepts single- or double-quoted
// keys/values and trailing commas; later duplicate keys are dropped.
// strict requires the whole (trimmed) response to be the mapping.
// Throws NoMappingFound / MalformedPair.
ExtractionResult parse_extraction_response(const std::string& text, bool strict = false);

ValidationOutcome validate_extraction(const SentencePair& pair,
                                      const ExtractionResult& result,
                                      const ValidationPolicy& policy = {});

// Canonical double-quoted mapping literal, e.g. {"官能評価": "관능 평가"};
// reparses to the same result.
std::string render_mapping_literal(const ExtractionResult& result);

// One chat JSONL record per pair: system + user from the template, assistant
// content the canonical mapping literal of the matching result.
// pairs and results are parallel. Returns records written.
std::size_t emit_aligner_dataset(const std::vector<SentencePair>& pairs,
                                 const std::vector<ExtractionResult>& results,
                                 const PromptTemplate& tmpl, const std::string& path);

}  // namespace termweaver
