#include "termweaver/reconstruct.hpp"

#include <fstream>

#include "termweaver/errors.hpp"
#include "termweaver/unicode.hpp"

namespace termweaver {

std::string render_glossary_block(const std::vector<TermEntry>& entries) {
  std::string out = "{";
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (i) out += ",\n";
    out += render_display_line(entries[i]);
  }
  return out + "}";
}

std::vector<ChatMessage> build_translation_prompt(const std::string& src_text,
                                                  const std::vector<TermEntry>& entries,
                                                  const PromptTemplate& tmpl,
                                                  std::size_t entry_cap) {
  if (tmpl.system_text.empty())
    throw TemplateError("translation template has empty system text");
  require_slot(tmpl, "glossary");
  require_slot(tmpl, "source");
  std::vector<TermEntry> capped(entries.begin(),
                                entries.begin() + std::min(entries.size(), entry_cap));
  const std::map<std::string, std::string> slots = {
      {"glossary", render_glossary_block(capped)}, {"source", src_text}};
  return {{Role::system, render_slots(tmpl.system_text, slots)},
          {Role::user, render_slots(tmpl.user_text, slots)}};
}

namespace {

// Single-line form: trailing newlines stripped, internal newline runs
// replaced by one space.
std::string to_single_line(const std::string& s) {
  std::u32string in = unicode::decode_utf8(s);
  while (!in.empty() && (in.back() == U'\n' || in.back() == U'\r')) in.pop_back();
  std::u32string out;
  std::size_t i = 0;
  while (i < in.size()) {
    if (in[i] == U'\n' || in[i] == U'\r') {
      while (i < in.size() && (in[i] == U'\n' || in[i] == U'\r')) ++i;
      out += U' ';
    } else {
      out += in[i++];
    }
  }
  return unicode::encode_utf8(out);
}

}  // namespace

InstructionExample build_instruction_example(const SentencePair& pair, const TermTrie& trie,
                                             const Glossary& glossary,
                                             const PromptTemplate& tmpl,
                                             std::size_t entry_cap) {
  InstructionExample ex;
  ex.matched_entries = select_entries(trie, glossary, pair.src);
  ex.messages = build_translation_prompt(pair.src, ex.matched_entries, tmpl, entry_cap);
  ex.messages.push_back({Role::assistant, to_single_line(pair.tgt)});
  return ex;
}

std::size_t emit_training_jsonl(const std::vector<SentencePair>& pairs, const TermTrie& trie,
                                const Glossary& glossary, const PromptTemplate& tmpl,
                                const std::string& path, std::size_t limit,
                                std::uint64_t seed, std::size_t entry_cap) {
  const auto selected = sample_subset(pairs, limit, seed);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path);
  for (const auto& pair : selected) {
    auto ex = build_instruction_example(pair, trie, glossary, tmpl, entry_cap);
    nlohmann::ordered_json record{{"messages", messages_to_json(ex.messages)}};
    out << record.dump() << '\n';
  }
  if (!out) throw IoError("write failed: " + path);
  return selected.size();
}

std::string render_run_manifest(std::size_t count, std::size_t limit, std::uint64_t seed,
                                std::size_t entry_cap) {
  nlohmann::ordered_json manifest{
      {"records", count},     {"limit", limit},
      {"seed", seed},         {"entry_cap", entry_cap},
      {"epochs", 3},          {"temperature", 0.1},
  };
  return manifest.dump(2) + "\n";
}

}  // namespace termweaver
