#include "termweaver/term_trie.hpp"

#include <unordered_set>

#include "termweaver/unicode.hpp"

namespace termweaver {

TermTrie::TermTrie(const Glossary& glossary) {
  nodes_.emplace_back();  // root
  for (std::size_t idx = 0; idx < glossary.size(); ++idx) {
    const std::u32string term = unicode::decode_utf8(glossary.at(idx).source_term);
    std::uint32_t node = 0;
    for (char32_t c : term) {
      auto it = nodes_[node].children.find(c);
      if (it == nodes_[node].children.end()) {
        std::uint32_t next = static_cast<std::uint32_t>(nodes_.size());
        nodes_[node].children.emplace(c, next);
        nodes_.emplace_back();
        node = next;
      } else {
        node = it->second;
      }
    }
    nodes_[node].entry = static_cast<std::uint32_t>(idx);
  }
}

std::vector<MatchSpan> TermTrie::scan(const std::u32string& text) const {
  std::vector<MatchSpan> out;
  const std::size_t n = text.size();
  std::size_t i = 0;
  while (i < n) {
    std::uint32_t node = 0;
    std::size_t best_end = 0;
    std::uint32_t best_entry = kNoEntry;
    for (std::size_t j = i; j < n; ++j) {
      auto it = nodes_[node].children.find(text[j]);
      if (it == nodes_[node].children.end()) break;
      node = it->second;
      if (nodes_[node].entry != kNoEntry) {
        best_end = j + 1;
        best_entry = nodes_[node].entry;
      }
    }
    if (best_entry != kNoEntry) {
      out.push_back(MatchSpan{i, best_end,
                              unicode::encode_utf8(text.substr(i, best_end - i)),
                              best_entry});
      i = best_end;
    } else {
      ++i;
    }
  }
  return out;
}

std::vector<MatchSpan> TermTrie::scan_utf8(const std::string& text) const {
  return scan(unicode::decode_utf8(text));
}

bool TermTrie::contains(const std::string& term) const {
  std::uint32_t node = 0;
  for (char32_t c : unicode::decode_utf8(term)) {
    auto it = nodes_[node].children.find(c);
    if (it == nodes_[node].children.end()) return false;
    node = it->second;
  }
  return nodes_[node].entry != kNoEntry;
}

std::vector<MatchSpan> oracle_scan(const Glossary& glossary, const std::u32string& text) {
  std::vector<std::u32string> terms;
  terms.reserve(glossary.size());
  for (const auto& e : glossary.entries())
    terms.push_back(unicode::decode_utf8(e.source_term));

  std::vector<MatchSpan> out;
  const std::size_t n = text.size();
  std::size_t i = 0;
  while (i < n) {
    std::size_t best_len = 0;
    std::size_t best_entry = 0;
    for (std::size_t t = 0; t < terms.size(); ++t) {
      const auto& term = terms[t];
      if (term.size() <= best_len || term.size() > n - i) continue;
      if (text.compare(i, term.size(), term) == 0) {
        best_len = term.size();
        best_entry = t;
      }
    }
    if (best_len > 0) {
      out.push_back(MatchSpan{i, i + best_len,
                              glossary.at(best_entry).source_term, best_entry});
      i += best_len;
    } else {
      ++i;
    }
  }
  return out;
}

std::vector<MatchSpan> oracle_scan_utf8(const Glossary& glossary, const std::string& text) {
  return oracle_scan(glossary, unicode::decode_utf8(text));
}

std::vector<TermEntry> select_entries(const TermTrie& trie, const Glossary& glossary,
                                      const std::string& text) {
  std::vector<TermEntry> out;
  std::unordered_set<std::size_t> seen;
  for (const auto& span : trie.scan_utf8(text)) {
    if (seen.insert(span.entry_index).second) out.push_back(glossary.at(span.entry_index));
  }
  return out;
}

}  // namespace termweaver
