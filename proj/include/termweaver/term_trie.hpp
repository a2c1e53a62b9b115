#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "termweaver/glossary.hpp"

namespace termweaver {

// A term occurrence. Offsets are Unicode scalar indices into the scanned
// text, [start, end) spelling source_term exactly.
struct MatchSpan {
  std::size_t start = 0;
  std::size_t end = 0;
  std::string source_term;
  std::size_t entry_index = 0;

  bool operator==(const MatchSpan&) const = default;
};

// Prefix tree over Unicode scalar values; terminal nodes carry the glossary
// entry index. Immutable after build, safe to share across threads.
class TermTrie {
 public:
  explicit TermTrie(const Glossary& glossary);

  // Leftmost-longest non-overlapping scan: at each position take the deepest
  // terminal reachable, emit it and jump past it, else advance one scalar.
  std::vector<MatchSpan> scan(const std::u32string& text) const;
  std::vector<MatchSpan> scan_utf8(const std::string& text) const;

  bool contains(const std::string& term) const;
  std::size_t node_count() const { return nodes_.size(); }

 private:
  static constexpr std::uint32_t kNoEntry = UINT32_MAX;
  struct Node {
    std::unordered_map<char32_t, std::uint32_t> children;
    std::uint32_t entry = kNoEntry;
  };
  std::vector<Node> nodes_;
};

// Brute-force reference for scan(): at each position test every glossary
// term for prefix match, take the longest. Differential-test oracle; must
// stay independent of TermTrie.
std::vector<MatchSpan> oracle_scan(const Glossary& glossary, const std::u32string& text);
std::vector<MatchSpan> oracle_scan_utf8(const Glossary& glossary, const std::string& text);

// Entries whose terms occur in text, deduplicated, ordered by first occurrence.
std::vector<TermEntry> select_entries(const TermTrie& trie, const Glossary& glossary,
                                      const std::string& text);

}  // namespace termweaver
