#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "termweaver/chat.hpp"
#include "termweaver/corpus.hpp"
#include "termweaver/prompt_template.hpp"
#include "termweaver/term_trie.hpp"

namespace termweaver {

// One chat-format training record plus the entries that produced its
// glossary block.
struct InstructionExample {
  std::vector<ChatMessage> messages;  // system, user, assistant
  std::vector<TermEntry> matched_entries;
};

inline constexpr std::size_t kDefaultEntryCap = 50;

// "{" + display lines joined by ",\n" + "}"; empty input renders "{}".
std::string render_glossary_block(const std::vector<TermEntry>& entries);

// [system, user] messages; the glossary block is rendered from at most
// entry_cap entries (first-occurrence order).
std::vector<ChatMessage> build_translation_prompt(const std::string& src_text,
                                                  const std::vector<TermEntry>& entries,
                                                  const PromptTemplate& tmpl,
                                                  std::size_t entry_cap = kDefaultEntryCap);

// Full training record: prompt from the matched entries plus an assistant
// message holding the target as a single line.
InstructionExample build_instruction_example(const SentencePair& pair, const TermTrie& trie,
                                             const Glossary& glossary,
                                             const PromptTemplate& tmpl,
                                             std::size_t entry_cap = kDefaultEntryCap);

// Sample up to `limit` pairs (seeded), emit chat JSONL. Returns count written.
std::size_t emit_training_jsonl(const std::vector<SentencePair>& pairs, const TermTrie& trie,
                                const Glossary& glossary, const PromptTemplate& tmpl,
                                const std::string& path, std::size_t limit = 1000,
                                std::uint64_t seed = 0,
                                std::size_t entry_cap = kDefaultEntryCap);

// Fine-tuning run settings recorded alongside the dataset (they do not
// change dataset content).
std::string render_run_manifest(std::size_t count, std::size_t limit, std::uint64_t seed,
                                std::size_t entry_cap);

}  // namespace termweaver
