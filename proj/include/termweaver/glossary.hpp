#pragma once

#include <string>
#include <unordered_map>
#include <vector>

namespace termweaver {

// One source-language term with its ordered candidate translations.
// Terms are stored as raw UTF-8; no normalization is applied unless the
// caller opts in (see Glossary::nfkc_normalized).
struct TermEntry {
  std::string source_term;
  std::vector<std::string> target_alternatives;

  // Validates invariants: non-empty trimmed source, non-empty trimmed
  // alternatives, no duplicate alternatives, no tab/newline scalars.
  // Throws ValidationError.
  static TermEntry make(std::string source, std::vector<std::string> alternatives);

  bool operator==(const TermEntry&) const = default;
};

// Display / prompt format, "端部 : 끝부분 | 단부 | 모서리".
// parse splits on the FIRST " : "; alternative pieces split on "|", trimmed,
// blanks dropped, duplicates dropped (first wins).
// Throws ValidationError with messages naming MissingSeparator / EmptySource /
// EmptyAlternatives.
TermEntry parse_display_line(const std::string& line);
std::string render_display_line(const TermEntry& entry);

enum class GlossaryFormat { tsv, json };

// Insertion-ordered collection of TermEntry with unique source terms.
// Immutable by convention after load/merge; mutating ops return new values.
class Glossary {
 public:
  Glossary() = default;

  // Throws DuplicateSourceError unless merge_duplicates, which unions
  // alternatives in order.
  void add(TermEntry entry, bool merge_duplicates = false);

  const std::vector<TermEntry>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  const TermEntry& at(std::size_t i) const { return entries_.at(i); }
  const TermEntry* find(const std::string& source_term) const;

  bool operator==(const Glossary& other) const { return entries_ == other.entries_; }

 private:
  std::vector<TermEntry> entries_;
  std::unordered_map<std::string, std::size_t> index_;
};

Glossary load_glossary(const std::string& path, GlossaryFormat format,
                       bool merge_duplicates = false);
void save_glossary(const Glossary& g, const std::string& path, GlossaryFormat format);

// Parse from in-memory content (used by load_glossary and tests).
Glossary parse_glossary_tsv(const std::string& content, bool merge_duplicates = false);
Glossary parse_glossary_json(const std::string& content, bool merge_duplicates = false);
std::string serialize_glossary_tsv(const Glossary& g);
std::string serialize_glossary_json(const Glossary& g);

// Entry-order-preserving union: base order first, then new incoming terms;
// shared terms get base alternatives followed by incoming's unseen ones.
Glossary merge(const Glossary& base, const Glossary& incoming);

// NFKC-normalize every term and alternative (opt-in --nfkc path).
Glossary nfkc_normalized(const Glossary& g);

}  // namespace termweaver
