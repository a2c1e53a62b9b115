#include "termweaver/term_trie.hpp"

#include <random>

#include "doctest.h"
#include "termweaver/errors.hpp"
#include "termweaver/unicode.hpp"

using namespace termweaver;

namespace {

Glossary make_glossary(const std::vector<std::string>& terms) {
  Glossary g;
  for (const auto& t : terms) g.add(TermEntry::make(t, {"x"}));
  return g;
}

}  // namespace

TEST_CASE("build structure: shared prefixes and terminals") {
  auto g = make_glossary({"絶縁膜", "送信回路"});
  TermTrie trie(g);
  CHECK(trie.contains("絶縁膜"));
  CHECK(trie.contains("送信回路"));
  CHECK_FALSE(trie.contains("送信回"));  // on a path but not terminal
  CHECK_FALSE(trie.contains("膜"));
  // node count <= 1 + total codepoints across terms
  CHECK(trie.node_count() <= 1 + 3 + 4);
}

TEST_CASE("shared-prefix terms put two terminals on one path") {
  auto g = make_glossary({"ab", "abc"});
  TermTrie trie(g);
  CHECK(trie.contains("ab"));
  CHECK(trie.contains("abc"));
  CHECK(trie.node_count() == 4);  // root + a + b + c
}

TEST_CASE("empty glossary scans to nothing") {
  Glossary g;
  TermTrie trie(g);
  CHECK(trie.scan_utf8("任意のテキスト abc").empty());
  CHECK(trie.scan_utf8("").empty());
}

TEST_CASE("scan finds the term at scalar offsets") {
  auto g = make_glossary({"官能評価"});
  TermTrie trie(g);
  auto spans = trie.scan_utf8("それぞれについて官能評価を行った");
  REQUIRE(spans.size() == 1);
  CHECK(spans[0].start == 8);
  CHECK(spans[0].end == 12);
  CHECK(spans[0].source_term == "官能評価");
}

TEST_CASE("leftmost-longest non-overlapping policy") {
  auto g = make_glossary({"ab", "abc", "bc"});
  TermTrie trie(g);
  auto spans = trie.scan_utf8("abcbc");
  REQUIRE(spans.size() == 2);
  CHECK(spans[0].start == 0);
  CHECK(spans[0].end == 3);
  CHECK(spans[0].source_term == "abc");
  CHECK(spans[1].start == 3);
  CHECK(spans[1].end == 5);
  CHECK(spans[1].source_term == "bc");
}

TEST_CASE("single-character term matches repeatedly") {
  auto g = make_glossary({"a"});
  TermTrie trie(g);
  auto spans = trie.scan_utf8("aaa");
  REQUIRE(spans.size() == 3);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(spans[i].start == i);
    CHECK(spans[i].end == i + 1);
  }
}

TEST_CASE("oracle agrees on the named cases") {
  auto g = make_glossary({"ab", "abc", "bc"});
  TermTrie trie(g);
  CHECK(trie.scan_utf8("abcbc") == oracle_scan_utf8(g, "abcbc"));
  auto g2 = make_glossary({"官能評価"});
  TermTrie t2(g2);
  CHECK(t2.scan_utf8("それぞれについて官能評価を行った") ==
        oracle_scan_utf8(g2, "それぞれについて官能評価を行った"));
}

TEST_CASE("differential property: scan == oracle_scan on random inputs") {
  // Small alphabet to force dense matches and overlaps.
  const std::u32string alphabet = U"abc漢字한글";
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<std::size_t> pick(0, alphabet.size() - 1);
  for (int trial = 0; trial < 1000; ++trial) {
    std::uniform_int_distribution<int> n_terms(0, 12);
    std::uniform_int_distribution<int> term_len(1, 5);
    std::uniform_int_distribution<int> text_len(0, 60);

    Glossary g;
    const int nt = n_terms(rng);
    for (int t = 0; t < nt; ++t) {
      std::u32string term;
      const int len = term_len(rng);
      for (int k = 0; k < len; ++k) term += alphabet[pick(rng)];
      try {
        g.add(TermEntry::make(unicode::encode_utf8(term), {"x"}));
      } catch (const DuplicateSourceError&) {
      }
    }
    TermTrie trie(g);

    std::u32string text;
    const int len = text_len(rng);
    for (int k = 0; k < len; ++k) text += alphabet[pick(rng)];

    auto got = trie.scan(text);
    auto want = oracle_scan(g, text);
    REQUIRE(got == want);

    // Span validity, disjointness, ordering.
    std::size_t prev_end = 0;
    for (const auto& s : got) {
      CHECK(s.start >= prev_end);
      CHECK(s.start < s.end);
      CHECK(s.end <= text.size());
      CHECK(unicode::encode_utf8(text.substr(s.start, s.end - s.start)) == s.source_term);
      prev_end = s.end;
    }
  }
}

TEST_CASE("select_entries dedups by first occurrence") {
  Glossary g;
  g.add(TermEntry::make("絶縁膜", {"절연막"}));
  g.add(TermEntry::make("端部", {"끝부분", "단부"}));
  TermTrie trie(g);
  auto entries = select_entries(trie, g, "この絶縁膜と絶縁膜の端部について");
  REQUIRE(entries.size() == 2);
  CHECK(entries[0].source_term == "絶縁膜");
  CHECK(entries[1].source_term == "端部");

  CHECK(select_entries(trie, g, "マッチなし").empty());
}

TEST_CASE("select_entries on a mixed sentence keeps text order") {
  Glossary g;
  g.add(TermEntry::make("技術標準化", {"기술 표준화"}));
  g.add(TermEntry::make("特許権", {"특허권"}));
  TermTrie trie(g);
  auto entries = select_entries(trie, g, "各種の特許権や技術標準化に関する問題が検討された。");
  REQUIRE(entries.size() == 2);
  CHECK(entries[0].source_term == "特許権");
  CHECK(entries[1].source_term == "技術標準化");
}

TEST_CASE("scan is deterministic") {
  auto g = make_glossary({"ab", "ba", "aba"});
  TermTrie trie(g);
  const std::string text = "abababab";
  auto first = trie.scan_utf8(text);
  for (int i = 0; i < 10; ++i) CHECK(trie.scan_utf8(text) == first);
}
